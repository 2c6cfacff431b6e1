#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/rng.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::demand {

struct DemandWeights {
  std::array<double, kQosParamCount> w{};
};

// w_i = dp_i / sum(dp). The demand percentages express relative importance,
// so any positive scaling of dp yields the same weights.
inline DemandWeights normalize_demand(const DemandRequest& req) {
  double sum = 0.0;
  for (double dp : req.dp) {
    if (dp < 0.0 || dp > 100.0) {
      throw GridError(Errc::ValidationFailed, "demand percentage outside [0,100]");
    }
    sum += dp;
  }
  if (sum <= 0.0) throw GridError(Errc::DegenerateDemand, "all demand percentages are zero");
  DemandWeights out;
  for (std::size_t i = 0; i < kQosParamCount; ++i) out.w[i] = req.dp[i] / sum;
  return out;
}

// Demand trust value per provider: the request weights projected onto each
// provider's per-parameter quality estimates.
inline std::vector<double> demand_trust(const DemandWeights& w,
                                        const std::vector<TrustRecord>& providers) {
  if (providers.empty()) throw GridError(Errc::NoProviders, "no eligible providers");
  std::vector<double> dtv;
  dtv.reserve(providers.size());
  for (const auto& rec : providers) {
    double v = 0.0;
    for (std::size_t j = 0; j < kQosParamCount; ++j) v += w.w[j] * rec.params[j];
    dtv.push_back(v);
  }
  return dtv;
}

// The p providers with the largest demand trust values, ties broken by the
// smaller node id. Returns everything when fewer than p providers exist.
inline std::vector<NodeId> candidates(const std::vector<double>& dtv,
                                      const std::vector<NodeId>& ids, std::size_t p) {
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dtv[a] != dtv[b]) return dtv[a] > dtv[b];
    return ids[a] < ids[b];
  });
  if (p < order.size()) order.resize(p);
  std::vector<NodeId> out;
  out.reserve(order.size());
  for (std::size_t idx : order) out.push_back(ids[idx]);
  return out;
}

struct RowResult {
  bool ok = false;
  Errc error = Errc::DegenerateDemand;
  DemandWeights weights;
  std::vector<double> dtv;
};

// One DTV row per request; a failing request marks its own row and leaves the
// rest of the batch intact.
inline std::vector<RowResult> batch_evaluate(const std::vector<DemandRequest>& batch,
                                             const std::vector<TrustRecord>& providers) {
  std::vector<RowResult> rows;
  rows.reserve(batch.size());
  for (const auto& req : batch) {
    RowResult row;
    try {
      row.weights = normalize_demand(req);
      row.dtv = demand_trust(row.weights, providers);
      row.ok = true;
    } catch (const GridError& e) {
      row.ok = false;
      row.error = e.code();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct SelectionTable {
  std::vector<NodeId> ids;
  std::vector<double> tv;  // global trust value per provider
  std::vector<double> sp;  // selection probability per provider, sums to 1

  double sp_of(NodeId id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return sp[i];
    }
    return 0.0;
  }
};

// Global selection table: tv_i is the uniformly weighted mean of provider i's
// quality estimates, sp_i the share of tv_i in the total. A degenerate table
// (all tv zero) falls back to a uniform distribution.
inline SelectionTable selection_table(const std::vector<TrustRecord>& providers) {
  if (providers.empty()) throw GridError(Errc::NoProviders, "no providers for selection table");
  SelectionTable table;
  for (const auto& rec : providers) {
    double tv = 0.0;
    for (std::size_t j = 0; j < kQosParamCount; ++j) {
      tv += rec.params[j] / static_cast<double>(kQosParamCount);
    }
    table.ids.push_back(rec.node_id);
    table.tv.push_back(tv);
  }
  double total = std::accumulate(table.tv.begin(), table.tv.end(), 0.0);
  table.sp.resize(table.tv.size());
  if (total <= 0.0) {
    std::fill(table.sp.begin(), table.sp.end(), 1.0 / static_cast<double>(table.tv.size()));
  } else {
    for (std::size_t i = 0; i < table.tv.size(); ++i) table.sp[i] = table.tv[i] / total;
  }
  return table;
}

// Roulette-wheel draw over the candidate set. Selection probabilities are the
// global sp values restricted to the candidates and renormalized; when every
// candidate has zero probability the draw is uniform.
inline NodeId allocate(const std::vector<NodeId>& cands, const SelectionTable& table, Rng& rng) {
  if (cands.empty()) throw GridError(Errc::NoProviders, "empty candidate list");
  std::vector<double> weights;
  weights.reserve(cands.size());
  double total = 0.0;
  for (NodeId id : cands) {
    double sp = table.sp_of(id);
    weights.push_back(sp);
    total += sp;
  }
  if (total <= 0.0) return cands[rng.pick_index(cands.size())];
  double r = rng.uniform01() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    acc += weights[i];
    if (r < acc && weights[i] > 0.0) return cands[i];
  }
  // Accumulated rounding can leave acc marginally below total.
  return cands[last_positive];
}

}  // namespace gridtrust::demand
