#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/trace.hpp"

namespace gridtrust {

struct TrustPoint {
  SimTime time = 0.0;
  double value = 0.0;
  std::uint64_t n = 0;
};

// Per-node trust trajectory: every transaction update and monitoring
// re-evaluation, in time order.
inline std::map<NodeId, std::vector<TrustPoint>> trust_trajectories(
    const std::vector<TraceRow>& rows) {
  std::map<NodeId, std::vector<TrustPoint>> out;
  for (const auto& r : rows) {
    if (r.kind == TraceKind::TrustUpdate || r.kind == TraceKind::Sweep) {
      out[r.node].push_back({r.time, r.t_new, r.n});
    }
  }
  return out;
}

struct ShareWindow {
  SimTime start = 0.0;
  SimTime end = 0.0;
  std::uint64_t total = 0;
  std::map<NodeId, double> share;  // sums to 1 over the window
};

// Allocation share per provider over fixed-width time windows. Windows
// without any allocation are omitted.
inline std::vector<ShareWindow> allocation_shares(const std::vector<TraceRow>& rows,
                                                  double window) {
  if (window <= 0.0) throw GridError(Errc::ValidationFailed, "window must be > 0");
  std::map<std::uint64_t, std::map<NodeId, std::uint64_t>> buckets;
  for (const auto& r : rows) {
    if (r.kind != TraceKind::Allocation) continue;
    buckets[static_cast<std::uint64_t>(r.time / window)][r.node] += 1;
  }
  std::vector<ShareWindow> out;
  for (const auto& [idx, counts] : buckets) {
    ShareWindow w;
    w.start = static_cast<double>(idx) * window;
    w.end = w.start + window;
    for (const auto& [node, c] : counts) w.total += c;
    for (const auto& [node, c] : counts) {
      w.share[node] = static_cast<double>(c) / static_cast<double>(w.total);
    }
    out.push_back(std::move(w));
  }
  return out;
}

struct VerdictCounts {
  std::uint64_t verified = 0;
  std::uint64_t rectified = 0;
  std::uint64_t discarded = 0;
};

inline VerdictCounts verdict_counts(const std::vector<TraceRow>& rows) {
  VerdictCounts out;
  for (const auto& r : rows) {
    if (r.kind == TraceKind::Verdict) {
      if (r.detail.find("verdict=rectified") != std::string::npos) {
        ++out.rectified;
      } else {
        ++out.verified;
      }
    } else if (r.kind == TraceKind::Discard) {
      ++out.discarded;
    }
  }
  return out;
}

// Deterministic plain-text digest of a trace: headline counts, feedback
// verdicts, final trust per node, and allocation shares per window.
inline std::string render_report(const std::vector<TraceRow>& rows, double window = 10.0) {
  std::uint64_t arrivals = 0, allocations = 0, rejected = 0;
  for (const auto& r : rows) {
    if (r.kind == TraceKind::Arrival) ++arrivals;
    if (r.kind == TraceKind::Allocation) ++allocations;
    if (r.kind == TraceKind::Rejected) ++rejected;
  }
  VerdictCounts verdicts = verdict_counts(rows);
  auto trajectories = trust_trajectories(rows);
  auto shares = allocation_shares(rows, window);

  std::ostringstream out;
  out << "requests: " << arrivals << " arrived, " << allocations << " allocated, " << rejected
      << " rejected\n";
  out << "feedback: " << verdicts.verified << " verified, " << verdicts.rectified
      << " rectified, " << verdicts.discarded << " discarded\n";
  out << "trust:\n";
  for (const auto& [node, points] : trajectories) {
    const TrustPoint& last = points.back();
    out << "  node " << node << ": " << format_real(last.value) << " after " << points.size()
        << " updates (n=" << last.n << ")\n";
  }
  out << "allocation shares (window " << format_real(window) << "):\n";
  for (const auto& w : shares) {
    out << "  [" << format_real(w.start) << ", " << format_real(w.end) << "):";
    for (const auto& [node, share] : w.share) {
      out << " " << node << "=" << format_real(share);
    }
    out << " (" << w.total << " allocations)\n";
  }
  return out.str();
}

}  // namespace gridtrust
