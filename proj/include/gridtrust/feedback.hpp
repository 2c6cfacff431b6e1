#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "gridtrust/core.hpp"
#include "gridtrust/repository.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::feedback {

struct VerificationConfig {
  std::size_t window = 5;  // l: number of recent ratings kept per parameter
  // Reasonability threshold per parameter. Loaded from a scalar with optional
  // per-parameter overrides.
  ParamVector delta{0.2, 0.2, 0.2, 0.2, 0.2, 0.2};
  SimTime max_age = 10.0;  // feedback older than this relative to service completion is discarded

  void check() const {
    if (window < 1) throw GridError(Errc::ValidationFailed, "verification window must be >= 1");
    for (double d : delta) {
      if (d <= 0.0) throw GridError(Errc::ValidationFailed, "delta must be > 0");
    }
  }
};

// Per-provider, per-parameter ring buffers of the last `window` verified
// ratings. The rolling mean over an empty buffer is the neutral prior 0.5.
class ParamHistory {
 public:
  explicit ParamHistory(std::size_t window = 5) : window_(window) {}

  double rolling_mean(NodeId provider, std::size_t param) const {
    auto it = buffers_.find(provider);
    if (it == buffers_.end() || it->second[param].empty()) return 0.5;
    const auto& buf = it->second[param];
    double sum = 0.0;
    for (double x : buf) sum += x;
    return sum / static_cast<double>(buf.size());
  }

  ParamVector rolling_means(NodeId provider) const {
    ParamVector out;
    for (std::size_t i = 0; i < kQosParamCount; ++i) out[i] = rolling_mean(provider, i);
    return out;
  }

  void append(NodeId provider, const ParamVector& ratings) {
    auto& bufs = buffers_[provider];
    for (std::size_t i = 0; i < kQosParamCount; ++i) {
      bufs[i].push_back(ratings[i]);
      while (bufs[i].size() > window_) bufs[i].pop_front();
    }
  }

  std::size_t depth(NodeId provider, std::size_t param) const {
    auto it = buffers_.find(provider);
    return it == buffers_.end() ? 0 : it->second[param].size();
  }

  std::size_t window() const { return window_; }

 private:
  std::size_t window_;
  std::map<NodeId, std::array<std::deque<double>, kQosParamCount>> buffers_;
};

// Reasonability check on one feedback. Each parameter is tested independently
// against the rolling mean a of the provider's recent ratings: a rating with
// |f - a| > delta is replaced by a, the original is preserved. The deviation
// test is two-sided; a lowball outlier is as suspect as a highball one.
inline Feedback verify(Feedback fb, const VerificationConfig& cfg, const ParamHistory& history) {
  bool any_rectified = false;
  ParamVector original = fb.ratings;
  for (std::size_t i = 0; i < kQosParamCount; ++i) {
    double a = history.rolling_mean(fb.provider, i);
    if (std::abs(fb.ratings[i] - a) > cfg.delta[i]) {
      fb.ratings[i] = a;
      any_rectified = true;
    }
  }
  if (any_rectified) {
    fb.verdict = VerdictKind::Rectified;
    fb.original = original;
  } else {
    fb.verdict = VerdictKind::Verified;
  }
  return fb;
}

// FIFO collection stage. Feedback is queued in arrival order and drained by
// the event loop; a transaction may be rated at most once.
class FeedbackPipeline {
 public:
  void collect(Feedback fb) {
    if (fb.verdict != VerdictKind::Pending) {
      throw GridError(Errc::ValidationFailed, "collect expects pending feedback");
    }
    if (seen_.count(fb.tx_id) != 0) {
      throw GridError(Errc::DuplicateFeedback, "tx " + std::to_string(fb.tx_id));
    }
    seen_.insert(fb.tx_id);
    queue_.push_back(std::move(fb));
  }

  bool pending() const { return !queue_.empty(); }
  std::size_t queue_length() const { return queue_.size(); }

  Feedback next() {
    Feedback fb = std::move(queue_.front());
    queue_.pop_front();
    return fb;
  }

 private:
  std::deque<Feedback> queue_;
  std::set<TxId> seen_;
};

// Updating level: persist the verified feedback, fold the post-verification
// ratings into the history, and refresh the provider's quality estimates to
// the new rolling means.
inline void update_repository(RepositoryHub& hub, const DomainId& domain, const Feedback& fb,
                              ParamHistory& history, SimTime now) {
  if (fb.verdict == VerdictKind::Pending) {
    throw GridError(Errc::ValidationFailed, "cannot store unverified feedback");
  }
  Principal dtm = dtm_principal(domain);
  hub.put_feedback(dtm, domain, fb, now);
  history.append(fb.provider, fb.ratings);
  TrustRecord rec = hub.get_trust(dtm, domain, fb.provider);
  rec.params = history.rolling_means(fb.provider);
  hub.put_trust(dtm, domain, rec, now);
}

}  // namespace gridtrust::feedback
