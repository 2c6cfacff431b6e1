// Oracle tests for the scoring kernels: frozen expected values derived by
// hand, plus randomized property checks with a seeded generator.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <gridtrust/demand.hpp>
#include <gridtrust/feedback.hpp>
#include <gridtrust/repository.hpp>
#include <gridtrust/rng.hpp>
#include <gridtrust/security.hpp>
#include <gridtrust/trust.hpp>

using namespace gridtrust;
using Catch::Matchers::WithinAbs;

namespace {

TrustRecord provider(NodeId id, const ParamVector& params) {
  TrustRecord rec;
  rec.node_id = id;
  rec.params = params;
  return rec;
}

ParamVector constant(double v) { return {v, v, v, v, v, v}; }

}  // namespace

// ---------------------------------------------------------------------------
// Demand evaluation

TEST_CASE("demand weights are the share of each requested percentage") {
  DemandRequest req;
  req.dp = {100, 50, 50, 0, 0, 0};
  auto w = demand::normalize_demand(req);
  // total 200: 100/200, 50/200, 50/200 are exact binary fractions
  REQUIRE(w.w[0] == 0.5);
  REQUIRE(w.w[1] == 0.25);
  REQUIRE(w.w[2] == 0.25);
  REQUIRE(w.w[3] == 0.0);
  REQUIRE(w.w[4] == 0.0);
  REQUIRE(w.w[5] == 0.0);
}

TEST_CASE("demand percentages outside [0,100] are refused") {
  DemandRequest req;
  req.dp = {100, 50, 50, 0, 0, -1};
  REQUIRE_THROWS_AS(demand::normalize_demand(req), GridError);
  req.dp = {101, 0, 0, 0, 0, 0};
  REQUIRE_THROWS_AS(demand::normalize_demand(req), GridError);
}

TEST_CASE("an all-zero demand vector has no usable weights") {
  DemandRequest req;
  req.dp = {0, 0, 0, 0, 0, 0};
  try {
    demand::normalize_demand(req);
    FAIL("expected a degenerate-demand error");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::DegenerateDemand);
  }
}

TEST_CASE("demand trust is the weighted sum of quality estimates") {
  DemandRequest req;
  req.dp = {100, 50, 50, 0, 0, 0};
  auto w = demand::normalize_demand(req);
  std::vector<TrustRecord> providers{provider(1, {0.8, 0.4, 0.4, 0.9, 0.9, 0.9})};
  auto dtv = demand::demand_trust(w, providers);
  REQUIRE(dtv.size() == 1);
  // 0.5*0.8 + 0.25*0.4 + 0.25*0.4 = 0.6; zero-weight params contribute nothing
  REQUIRE_THAT(dtv[0], WithinAbs(0.6, 1e-12));
}

TEST_CASE("demand trust needs at least one provider") {
  demand::DemandWeights w;
  REQUIRE_THROWS_AS(demand::demand_trust(w, {}), GridError);
}

TEST_CASE("candidate set keeps the p best scores, ties to the smaller id") {
  std::vector<NodeId> ids{1, 2, 3};
  REQUIRE(demand::candidates({0.9, 0.1, 0.5}, ids, 2) == std::vector<NodeId>{1, 3});
  REQUIRE(demand::candidates({0.5, 0.5}, {7, 3}, 1) == std::vector<NodeId>{3});
  // asking for more than exist returns everything, best first
  REQUIRE(demand::candidates({0.1, 0.9}, {1, 2}, 5) == std::vector<NodeId>{2, 1});
}

TEST_CASE("selection probabilities are trust shares") {
  std::vector<TrustRecord> providers{
      provider(1, constant(0.2)), provider(2, constant(0.2)), provider(3, constant(0.4))};
  auto table = demand::selection_table(providers);
  REQUIRE_THAT(table.tv[0], WithinAbs(0.2, 1e-12));
  REQUIRE_THAT(table.tv[2], WithinAbs(0.4, 1e-12));
  REQUIRE_THAT(table.sp[0], WithinAbs(0.25, 1e-12));
  REQUIRE_THAT(table.sp[1], WithinAbs(0.25, 1e-12));
  REQUIRE_THAT(table.sp[2], WithinAbs(0.5, 1e-12));
  REQUIRE_THAT(table.sp_of(3), WithinAbs(0.5, 1e-12));
  REQUIRE(table.sp_of(99) == 0.0);
}

TEST_CASE("a selection table with no signal falls back to uniform") {
  std::vector<TrustRecord> providers{provider(1, constant(0.0)), provider(2, constant(0.0))};
  auto table = demand::selection_table(providers);
  REQUIRE(table.sp[0] == 0.5);
  REQUIRE(table.sp[1] == 0.5);
}

TEST_CASE("roulette draw never picks a zero-probability candidate") {
  std::vector<TrustRecord> providers{
      provider(1, constant(0.2)), provider(2, constant(0.2)), provider(3, constant(0.4)),
      provider(4, constant(0.0))};
  auto table = demand::selection_table(providers);
  REQUIRE(table.sp_of(4) == 0.0);
  Rng rng(99);
  std::vector<NodeId> cands{1, 2, 3, 4};
  for (int i = 0; i < 2000; ++i) {
    REQUIRE(demand::allocate(cands, table, rng) != 4);
  }
}

TEST_CASE("roulette draw on a single candidate returns it") {
  std::vector<TrustRecord> providers{provider(5, constant(0.3))};
  auto table = demand::selection_table(providers);
  Rng rng(1);
  REQUIRE(demand::allocate({5}, table, rng) == 5);
  REQUIRE_THROWS_AS(demand::allocate({}, table, rng), GridError);
}

TEST_CASE("batch evaluation isolates per-request failures") {
  DemandRequest good;
  good.dp = {50, 50, 50, 50, 50, 50};
  DemandRequest bad;
  bad.dp = {0, 0, 0, 0, 0, 0};
  std::vector<TrustRecord> providers{provider(1, constant(0.5))};
  auto rows = demand::batch_evaluate({good, bad, good}, providers);
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[0].ok);
  REQUIRE_FALSE(rows[1].ok);
  REQUIRE(rows[2].ok);
  REQUIRE_THAT(rows[0].dtv[0], WithinAbs(0.5, 1e-12));
}

// ---------------------------------------------------------------------------
// Security scoring

TEST_CASE("security weights normalize and reject bad input") {
  auto w = security::SecurityWeights::normalized({1, 1, 0, 0, 0, 0});
  REQUIRE(w.w[0] == 0.5);
  REQUIRE(w.w[1] == 0.5);
  REQUIRE_THROWS_AS(security::SecurityWeights::normalized({-1, 2, 0, 0, 0, 0}), GridError);
  REQUIRE_THROWS_AS(security::SecurityWeights::normalized({0, 0, 0, 0, 0, 0}), GridError);
}

TEST_CASE("raw security criteria map onto unit-range attributes") {
  RawSecurityCriteria raw;
  raw.audit_data_size = 800;
  raw.signature_file_size = 90;
  raw.signature_update_freq = 25;
  raw.memory_scan_freq = 20;
  raw.firewall_rules = 45;
  raw.tls = true;
  raw.ipsec = false;
  raw.sandbox = true;
  raw.crypto = true;
  auto attrs = security::normalize_attributes(raw);
  REQUIRE_THAT(attrs.sa[0], WithinAbs((800.0 / 1000 + 90.0 / 100 + 25.0 / 30) / 3, 1e-12));
  REQUIRE_THAT(attrs.sa[1], WithinAbs(20.0 / 24, 1e-12));
  REQUIRE_THAT(attrs.sa[2], WithinAbs(45.0 / 50, 1e-12));
  REQUIRE(attrs.sa[3] == 0.5);  // one of TLS/IPsec
  REQUIRE(attrs.sa[4] == 1.0);
  REQUIRE(attrs.sa[5] == 1.0);
}

TEST_CASE("criteria saturate at their reference scale") {
  RawSecurityCriteria raw;
  raw.audit_data_size = 5000;
  raw.signature_file_size = 100;
  raw.signature_update_freq = 30;
  raw.memory_scan_freq = 999;
  raw.firewall_rules = 50;
  auto attrs = security::normalize_attributes(raw);
  REQUIRE(attrs.sa[0] == 1.0);
  REQUIRE(attrs.sa[1] == 1.0);
  REQUIRE(attrs.sa[2] == 1.0);
  REQUIRE(attrs.sa[3] == 0.0);  // neither TLS nor IPsec
}

TEST_CASE("negative raw criteria are refused") {
  RawSecurityCriteria raw;
  raw.audit_data_size = -1;
  try {
    security::normalize_attributes(raw);
    FAIL("expected invalid-criteria");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::InvalidCriteria);
  }
}

TEST_CASE("self-defense is the weighted attribute sum") {
  SecurityAttributes sa;
  sa.sa = {0.8, 0.4, 0.0, 0.0, 0.0, 0.0};
  auto w = security::SecurityWeights::normalized({1, 1, 0, 0, 0, 0});
  REQUIRE_THAT(security::self_defense(sa, w).value, WithinAbs(0.6, 1e-12));

  sa.sa = constant(1.0);
  REQUIRE_THAT(security::self_defense(sa, security::SecurityWeights{}).value,
               WithinAbs(1.0, 1e-12));
}

// ---------------------------------------------------------------------------
// Trust evaluation

TEST_CASE("satisfaction measures weighted relative shortfall") {
  demand::DemandWeights uniform;
  uniform.w = constant(1.0 / 6);
  // every parameter delivered at half the promise: S = 1 - 0.5
  REQUIRE_THAT(trust::satisfaction(constant(0.5), constant(0.25), uniform),
               WithinAbs(0.5, 1e-12));
  // perfect delivery
  REQUIRE_THAT(trust::satisfaction(constant(0.7), constant(0.7), uniform),
               WithinAbs(1.0, 1e-12));
}

TEST_CASE("parameters the request did not ask for are excluded") {
  ParamVector promised{0.8, 0, 0, 0, 0, 0};
  ParamVector delivered{0.6, 0.9, 0.9, 0.9, 0.9, 0.9};
  demand::DemandWeights w;
  w.w = {0.5, 0.1, 0.1, 0.1, 0.1, 0.1};
  // only the first parameter counts, reweighted to 1: S = 1 - 0.2/0.8
  REQUIRE_THAT(trust::satisfaction(promised, delivered, w), WithinAbs(0.75, 1e-12));
}

TEST_CASE("a request promising nothing scores neutral") {
  demand::DemandWeights w;
  w.w = constant(1.0 / 6);
  REQUIRE(trust::satisfaction(constant(0.0), constant(0.9), w) == 0.5);
}

TEST_CASE("satisfaction clamps at zero for wild shortfalls") {
  demand::DemandWeights uniform;
  uniform.w = constant(1.0 / 6);
  REQUIRE(trust::satisfaction(constant(0.1), constant(1.0), uniform) == 0.0);
}

TEST_CASE("recommendation score is the success share, neutral when empty") {
  REQUIRE(trust::recommendation_score({3, 1}) == 0.75);
  REQUIRE(trust::recommendation_score({0, 0}) == 0.5);
  REQUIRE(trust::recommendation_score({5, 0}) == 1.0);
}

TEST_CASE("composite trust value is the weighted blend") {
  trust::TrustWeights defaults;  // 1/3 each
  REQUIRE_THAT(trust::combine(0.9, 0.75, 0.6, defaults), WithinAbs(0.75, 1e-12));
  trust::TrustWeights w{0.5, 0.3, 0.2};
  REQUIRE_THAT(trust::combine(1.0, 0.0, 1.0, w), WithinAbs(0.7, 1e-12));
}

TEST_CASE("blend weights must be non-negative and sum to one") {
  trust::TrustWeights bad{0.5, 0.5, 0.5};
  REQUIRE_THROWS_AS(trust::combine(1, 1, 1, bad), GridError);
  trust::TrustWeights negative{1.2, -0.1, -0.1};
  REQUIRE_THROWS_AS(trust::combine(1, 1, 1, negative), GridError);
}

TEST_CASE("history-weighted update blends old trust with the new value") {
  TrustRecord rec;
  rec.trust = 0.5;
  rec.n = 1;
  rec.updated_at = 10.0;
  trust::DecayConfig cfg;  // lambda 0.1
  // dt = 0: c = 1 * 1/2, T_new = 0.5*0.5 + 0.5*1.0
  auto updated = trust::decay_update(rec, 1.0, 10.0, cfg);
  REQUIRE(updated.trust == 0.75);
  REQUIRE(updated.n == 2);
  REQUIRE(updated.updated_at == 10.0);
}

TEST_CASE("a first evaluation adopts the new value outright") {
  TrustRecord rec;  // n = 0
  rec.trust = 0.123;
  trust::DecayConfig cfg;
  REQUIRE(trust::decay_update(rec, 0.9, 5.0, cfg).trust == 0.9);
}

TEST_CASE("updates cannot run backwards in time") {
  TrustRecord rec;
  rec.updated_at = 10.0;
  try {
    trust::decay_update(rec, 0.5, 9.0, trust::DecayConfig{});
    FAIL("expected time-reversal error");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::TimeReversal);
  }
}

TEST_CASE("long-idle records follow the new value almost entirely") {
  TrustRecord rec;
  rec.trust = 0.1;
  rec.n = 50;
  rec.updated_at = 0.0;
  trust::DecayConfig cfg;
  cfg.lambda = 0.1;
  auto updated = trust::decay_update(rec, 0.9, 300.0, cfg);  // lambda*dt = 30
  REQUIRE_THAT(updated.trust, WithinAbs(0.9, 1e-9));
}

TEST_CASE("full transaction evaluation advances the tally afterwards") {
  TrustRecord rec;  // trust 0.5, n 0
  rec.node_id = 1;
  trust::RecommendationTally tally;
  demand::DemandWeights w;
  w.w = constant(1.0 / 6);
  auto out = trust::evaluate_transaction(constant(0.8), constant(0.8), w, rec, tally,
                                         security::DefenseScore{0.9}, trust::TrustWeights{},
                                         trust::DecayConfig{}, 0.5, 1.0);
  REQUIRE_THAT(out.s, WithinAbs(1.0, 1e-12));
  REQUIRE(out.re == 0.5);  // no prior recommendations at evaluation time
  REQUIRE(out.sd == 0.9);
  REQUIRE(out.success);
  REQUIRE(tally.successes == 1);
  REQUIRE(out.record.n == 1);
  // n was 0: the record adopts the composite value exactly
  REQUIRE(out.record.trust == out.tv);
}

TEST_CASE("monitoring decays only stale records toward the neutral prior") {
  std::vector<TrustRecord> records(2);
  records[0].node_id = 1;
  records[0].trust = 0.9;
  records[0].n = 4;
  records[0].updated_at = 0.0;
  records[1].node_id = 2;
  records[1].trust = 0.9;
  records[1].n = 4;
  records[1].updated_at = 95.0;
  trust::DecayConfig cfg;
  auto touched = trust::monitor_sweep(records, 100.0, 30.0, cfg);
  REQUIRE(touched.size() == 1);
  REQUIRE(touched[0].node == 1);
  REQUIRE(touched[0].before == 0.9);
  REQUIRE(touched[0].after < 0.9);
  REQUIRE(touched[0].after >= 0.5);
  REQUIRE(records[0].updated_at == 100.0);
  REQUIRE(records[0].n == 4);  // no transaction happened
  REQUIRE(records[1].trust == 0.9);
  REQUIRE_THROWS_AS(trust::monitor_sweep(records, 100.0, 0.0, cfg), GridError);
}

// ---------------------------------------------------------------------------
// Feedback verification

TEST_CASE("ratings far from the rolling mean are replaced by it") {
  feedback::ParamHistory history(5);
  history.append(1, constant(0.5));
  history.append(1, constant(0.5));
  feedback::VerificationConfig cfg;  // delta 0.2

  Feedback fb;
  fb.tx_id = 1;
  fb.provider = 1;
  fb.ratings = constant(0.9);
  auto out = feedback::verify(fb, cfg, history);
  REQUIRE(out.verdict == VerdictKind::Rectified);
  for (double r : out.ratings) REQUIRE(r == 0.5);
  REQUIRE(out.original.has_value());
  for (double r : *out.original) REQUIRE(r == 0.9);
}

TEST_CASE("ratings within the threshold pass unchanged") {
  feedback::ParamHistory history(5);
  history.append(1, constant(0.5));
  feedback::VerificationConfig cfg;

  Feedback fb;
  fb.tx_id = 2;
  fb.provider = 1;
  fb.ratings = constant(0.6);
  auto out = feedback::verify(fb, cfg, history);
  REQUIRE(out.verdict == VerdictKind::Verified);
  for (double r : out.ratings) REQUIRE(r == 0.6);
  REQUIRE_FALSE(out.original.has_value());
}

TEST_CASE("the deviation check is two-sided") {
  feedback::ParamHistory history(5);
  history.append(1, constant(0.5));
  feedback::VerificationConfig cfg;

  Feedback fb;
  fb.tx_id = 3;
  fb.provider = 1;
  fb.ratings = constant(0.1);  // far below the mean
  auto out = feedback::verify(fb, cfg, history);
  REQUIRE(out.verdict == VerdictKind::Rectified);
  for (double r : out.ratings) REQUIRE(r == 0.5);
}

TEST_CASE("a deviation exactly at the threshold passes") {
  feedback::ParamHistory history(5);
  history.append(1, constant(0.5));
  feedback::VerificationConfig cfg;
  cfg.delta = constant(0.25);

  Feedback fb;
  fb.tx_id = 4;
  fb.provider = 1;
  fb.ratings = constant(0.75);  // |0.75 - 0.5| == 0.25, all values exact binary
  auto out = feedback::verify(fb, cfg, history);
  REQUIRE(out.verdict == VerdictKind::Verified);
}

TEST_CASE("with no history the neutral prior is the reference") {
  feedback::ParamHistory history(5);
  REQUIRE(history.rolling_mean(7, 0) == 0.5);
  feedback::VerificationConfig cfg;
  Feedback fb;
  fb.tx_id = 5;
  fb.provider = 7;
  fb.ratings = constant(0.95);
  auto out = feedback::verify(fb, cfg, history);
  REQUIRE(out.verdict == VerdictKind::Rectified);
  for (double r : out.ratings) REQUIRE(r == 0.5);
}

TEST_CASE("rolling mean averages the retained window") {
  feedback::ParamHistory history(5);
  history.append(1, constant(0.2));
  history.append(1, constant(0.4));
  history.append(1, constant(0.6));
  REQUIRE_THAT(history.rolling_mean(1, 0), WithinAbs(0.4, 1e-12));
  REQUIRE(history.depth(1, 0) == 3);
}

TEST_CASE("the window evicts the oldest ratings") {
  feedback::ParamHistory history(3);
  for (double v : {0.0, 0.0, 0.9, 0.9, 0.9}) history.append(1, constant(v));
  REQUIRE(history.depth(1, 0) == 3);
  REQUIRE_THAT(history.rolling_mean(1, 0), WithinAbs(0.9, 1e-12));
}

TEST_CASE("the pipeline refuses duplicates and keeps arrival order") {
  feedback::FeedbackPipeline pipe;
  Feedback a;
  a.tx_id = 1;
  Feedback b;
  b.tx_id = 2;
  pipe.collect(a);
  pipe.collect(b);
  Feedback dup;
  dup.tx_id = 1;
  try {
    pipe.collect(dup);
    FAIL("expected duplicate-feedback error");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::DuplicateFeedback);
  }
  REQUIRE(pipe.queue_length() == 2);
  REQUIRE(pipe.next().tx_id == 1);
  REQUIRE(pipe.next().tx_id == 2);
  REQUIRE_FALSE(pipe.pending());
}

TEST_CASE("the pipeline only accepts unverified feedback") {
  feedback::FeedbackPipeline pipe;
  Feedback done;
  done.tx_id = 9;
  done.verdict = VerdictKind::Verified;
  REQUIRE_THROWS_AS(pipe.collect(done), GridError);
}

TEST_CASE("storing verified feedback refreshes the quality estimates") {
  RepositoryHub hub;
  Principal dtm = dtm_principal("alpha");
  TrustRecord rec;
  rec.node_id = 1;
  hub.put_trust(dtm, "alpha", rec, 0.0);

  feedback::ParamHistory history(5);
  Feedback fb;
  fb.tx_id = 1;
  fb.provider = 1;
  fb.ratings = constant(0.8);
  fb.verdict = VerdictKind::Verified;
  feedback::update_repository(hub, "alpha", fb, history, 1.0);

  auto stored = hub.get_trust(dtm, "alpha", 1);
  for (double p : stored.params) REQUIRE_THAT(p, WithinAbs(0.8, 1e-12));
  REQUIRE(history.depth(1, 0) == 1);

  Feedback pending;
  pending.tx_id = 2;
  pending.provider = 1;
  REQUIRE_THROWS_AS(feedback::update_repository(hub, "alpha", pending, history, 2.0), GridError);
}

// ---------------------------------------------------------------------------
// Randomized properties

TEST_CASE("demand weights always form a distribution") {
  Rng rng(12345);
  for (int i = 0; i < 1000; ++i) {
    DemandRequest req;
    for (auto& v : req.dp) v = rng.uniform(0.0, 100.0);
    auto w = demand::normalize_demand(req);
    double sum = 0.0;
    for (double x : w.w) {
      REQUIRE(x >= 0.0);
      sum += x;
    }
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("demand trust stays within the unit interval") {
  Rng rng(2222);
  for (int i = 0; i < 1000; ++i) {
    DemandRequest req;
    for (auto& v : req.dp) v = rng.uniform(0.0, 100.0);
    auto w = demand::normalize_demand(req);
    std::vector<TrustRecord> providers;
    for (int k = 0; k < 3; ++k) {
      ParamVector params;
      for (auto& p : params) p = rng.uniform01();
      providers.push_back(provider(static_cast<NodeId>(k + 1), params));
    }
    for (double v : demand::demand_trust(w, providers)) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("selection probabilities always sum to one") {
  Rng rng(3333);
  for (int i = 0; i < 1000; ++i) {
    std::vector<TrustRecord> providers;
    std::size_t n = 1 + rng.pick_index(6);
    for (std::size_t k = 0; k < n; ++k) {
      ParamVector params;
      for (auto& p : params) p = rng.uniform01();
      providers.push_back(provider(static_cast<NodeId>(k + 1), params));
    }
    auto table = demand::selection_table(providers);
    double sum = 0.0;
    for (double p : table.sp) {
      REQUIRE(p >= 0.0);
      sum += p;
    }
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("satisfaction is always within the unit interval") {
  Rng rng(4444);
  demand::DemandWeights w;
  for (int i = 0; i < 1000; ++i) {
    ParamVector promised, delivered;
    double raw[kQosParamCount], total = 0.0;
    for (std::size_t k = 0; k < kQosParamCount; ++k) {
      promised[k] = rng.uniform01();
      delivered[k] = rng.uniform01();
      raw[k] = rng.uniform01();
      total += raw[k];
    }
    for (std::size_t k = 0; k < kQosParamCount; ++k) w.w[k] = raw[k] / total;
    double s = trust::satisfaction(promised, delivered, w);
    REQUIRE(s >= 0.0);
    REQUIRE(s <= 1.0);
  }
}

TEST_CASE("the composite value never leaves the range of its inputs") {
  Rng rng(5555);
  for (int i = 0; i < 1000; ++i) {
    double a = rng.uniform01();
    double b = rng.uniform(0.0, 1.0 - a);
    trust::TrustWeights w{a, b, 1.0 - a - b};
    double s = rng.uniform01(), re = rng.uniform01(), sd = rng.uniform01();
    double tv = trust::combine(s, re, sd, w);
    REQUIRE(tv >= std::min({s, re, sd}) - 1e-12);
    REQUIRE(tv <= std::max({s, re, sd}) + 1e-12);
  }
}

TEST_CASE("the trust update interpolates between old and new values") {
  Rng rng(6666);
  for (int i = 0; i < 1000; ++i) {
    TrustRecord rec;
    rec.trust = rng.uniform01();
    rec.n = rng.pick_index(100);
    rec.updated_at = rng.uniform(0.0, 50.0);
    double tv = rng.uniform01();
    trust::DecayConfig cfg;
    cfg.lambda = rng.uniform(0.0, 1.0);
    double now = rec.updated_at + rng.uniform(0.0, 100.0);
    auto updated = trust::decay_update(rec, tv, now, cfg);
    REQUIRE(updated.trust >= std::min(rec.trust, tv) - 1e-12);
    REQUIRE(updated.trust <= std::max(rec.trust, tv) + 1e-12);
  }
}

TEST_CASE("repeated evaluations converge toward a constant target") {
  TrustRecord rec;
  rec.trust = 0.05;
  rec.n = 0;
  trust::DecayConfig cfg;
  double target = 0.9;
  double gap = std::abs(rec.trust - target);
  for (int i = 0; i < 40; ++i) {
    rec = trust::decay_update(rec, target, rec.updated_at + 1.0, cfg);
    double next_gap = std::abs(rec.trust - target);
    REQUIRE(next_gap <= gap + 1e-15);
    gap = next_gap;
  }
  REQUIRE(gap < 0.05);
}

TEST_CASE("attribute normalization always lands in the unit interval") {
  Rng rng(7777);
  for (int i = 0; i < 1000; ++i) {
    RawSecurityCriteria raw;
    raw.audit_data_size = rng.uniform(0.0, 3000.0);
    raw.signature_file_size = rng.uniform(0.0, 300.0);
    raw.signature_update_freq = rng.uniform(0.0, 90.0);
    raw.memory_scan_freq = rng.uniform(0.0, 72.0);
    raw.firewall_rules = rng.uniform(0.0, 150.0);
    raw.tls = rng.bernoulli(0.5);
    raw.ipsec = rng.bernoulli(0.5);
    raw.sandbox = rng.bernoulli(0.5);
    raw.crypto = rng.bernoulli(0.5);
    auto attrs = security::normalize_attributes(raw);
    for (double v : attrs.sa) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
    double df = security::self_defense(attrs, security::SecurityWeights{}).value;
    REQUIRE(df >= 0.0);
    REQUIRE(df <= 1.0 + 1e-12);
  }
}

TEST_CASE("verified ratings always end up within the threshold of the mean") {
  Rng rng(8888);
  feedback::ParamHistory history(5);
  feedback::VerificationConfig cfg;
  for (int i = 0; i < 1000; ++i) {
    Feedback fb;
    fb.tx_id = static_cast<TxId>(i + 1);
    fb.provider = static_cast<NodeId>(1 + rng.pick_index(3));
    for (auto& r : fb.ratings) r = rng.uniform01();
    ParamVector means = history.rolling_means(fb.provider);
    auto out = feedback::verify(fb, cfg, history);
    for (std::size_t k = 0; k < kQosParamCount; ++k) {
      REQUIRE(std::abs(out.ratings[k] - means[k]) <= cfg.delta[k] + 1e-12);
    }
    history.append(fb.provider, out.ratings);
  }
}
