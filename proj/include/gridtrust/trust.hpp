#pragma once

#include <cmath>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/demand.hpp"
#include "gridtrust/security.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::trust {

// Weights of satisfaction, recommendation, and self-defense in the composite
// trust value. Must form a convex combination.
struct TrustWeights {
  double alpha = 1.0 / 3;    // user satisfaction
  double beta = 1.0 / 3;     // recommendation score
  double delta_w = 1.0 / 3;  // self-defense capability

  void check() const {
    if (alpha < 0.0 || beta < 0.0 || delta_w < 0.0 ||
        std::abs(alpha + beta + delta_w - 1.0) > 1e-9) {
      throw GridError(Errc::InvalidWeights, "alpha + beta + delta_w must equal 1");
    }
  }
};

struct RecommendationTally {
  std::uint64_t successes = 0;  // c_s
  std::uint64_t failures = 0;   // c_f
};

struct DecayConfig {
  double lambda = 0.1;  // decay rate per simulation-time unit

  void check() const {
    if (lambda < 0.0) throw GridError(Errc::ValidationFailed, "lambda must be >= 0");
  }
};

// User satisfaction: weighted relative deviation of the verified feedback
// from the promised parameter vector, turned into a score where 1 means the
// delivery matched the request exactly. Parameters the user did not ask for
// (p_dm == 0) are excluded and the weights renormalized over the rest; a
// request expressing no expectation at all scores neutral.
inline double satisfaction(const ParamVector& promised, const ParamVector& delivered,
                           const demand::DemandWeights& w) {
  double included_weight = 0.0;
  for (std::size_t i = 0; i < kQosParamCount; ++i) {
    if (promised[i] > 0.0) included_weight += w.w[i];
  }
  if (included_weight <= 0.0) return 0.5;
  double deviation = 0.0;
  for (std::size_t i = 0; i < kQosParamCount; ++i) {
    if (promised[i] > 0.0) {
      deviation += (w.w[i] / included_weight) * std::abs(promised[i] - delivered[i]) / promised[i];
    }
  }
  return clamp01(1.0 - deviation);
}

// RE = c_s / (c_s + c_f); neutral 0.5 before any recommendation was made.
inline double recommendation_score(const RecommendationTally& tally) {
  std::uint64_t total = tally.successes + tally.failures;
  if (total == 0) return 0.5;
  return static_cast<double>(tally.successes) / static_cast<double>(total);
}

// Composite trust value: alpha*S + beta*RE + delta_w*SD.
inline double combine(double s, double re, double sd, const TrustWeights& w) {
  w.check();
  return w.alpha * s + w.beta * re + w.delta_w * sd;
}

namespace detail {
// Core of the decayed update: T_new = c*T_old + (1-c)*tv with
// c = exp(-lambda*dt) * n/(n+1). c lies in [0,1), so T_new always lands
// between T_old and tv.
inline double decayed_value(double t_old, std::uint64_t n, double dt, double lambda, double tv) {
  double c = std::exp(-lambda * dt) * (static_cast<double>(n) / static_cast<double>(n + 1));
  return c * t_old + (1.0 - c) * tv;
}
}  // namespace detail

// Transaction update: fold the fresh trust value into the record, advance the
// transaction count and the timestamp.
inline TrustRecord decay_update(TrustRecord rec, double tv, SimTime now, const DecayConfig& cfg) {
  if (now < rec.updated_at) {
    throw GridError(Errc::TimeReversal, "update at " + format_real(now) + " precedes record time " +
                                            format_real(rec.updated_at));
  }
  rec.trust = detail::decayed_value(rec.trust, rec.n, now - rec.updated_at, cfg.lambda, tv);
  rec.n += 1;
  rec.updated_at = now;
  return rec;
}

struct EvaluationOutcome {
  double s = 0.0;
  double re = 0.0;
  double sd = 0.0;
  double tv = 0.0;
  bool success = false;
  TrustRecord record;
};

// Full per-transaction evaluation: satisfaction from the request's promised
// vector and the verified feedback, recommendation score from the tally so
// far, self-defense from the provider's domain. The tally is advanced after
// the composite value is formed; a transaction counts as a successful
// recommendation when satisfaction reaches the threshold.
inline EvaluationOutcome evaluate_transaction(const ParamVector& promised,
                                              const ParamVector& verified_feedback,
                                              const demand::DemandWeights& w,
                                              const TrustRecord& record,
                                              RecommendationTally& tally,
                                              security::DefenseScore defense,
                                              const TrustWeights& weights,
                                              const DecayConfig& decay, double success_threshold,
                                              SimTime now) {
  EvaluationOutcome out;
  out.s = satisfaction(promised, verified_feedback, w);
  out.re = recommendation_score(tally);
  out.sd = defense.value;
  out.tv = combine(out.s, out.re, out.sd, weights);
  out.record = decay_update(record, out.tv, now, decay);
  out.success = out.s >= success_threshold;
  if (out.success) {
    tally.successes += 1;
  } else {
    tally.failures += 1;
  }
  return out;
}

struct SweepEntry {
  NodeId node = 0;
  double before = 0.0;
  double after = 0.0;
};

// Monitoring: records untouched for longer than the staleness bound decay
// toward the neutral prior without counting a transaction. Returns the
// re-evaluated records; fresh records are left alone.
inline std::vector<SweepEntry> monitor_sweep(std::vector<TrustRecord>& records, SimTime now,
                                             SimTime staleness, const DecayConfig& cfg) {
  if (staleness <= 0.0) throw GridError(Errc::ValidationFailed, "staleness bound must be > 0");
  std::vector<SweepEntry> touched;
  for (auto& rec : records) {
    if (now - rec.updated_at > staleness) {
      SweepEntry entry{rec.node_id, rec.trust, 0.0};
      rec.trust = detail::decayed_value(rec.trust, rec.n, now - rec.updated_at, cfg.lambda, 0.5);
      rec.updated_at = now;
      entry.after = rec.trust;
      touched.push_back(entry);
    }
  }
  return touched;
}

}  // namespace gridtrust::trust
