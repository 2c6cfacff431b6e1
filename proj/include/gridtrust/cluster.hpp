#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::cluster {

enum class Liveness { Up, Down };

struct ElectionResult {
  NodeId leader = 0;
  std::optional<NodeId> backup;
  std::size_t messages = 0;  // election + announcement tokens passed
};

// Ring election, max-id variant. An election token starting at the first live
// member circulates once collecting the largest id, then a second lap
// announces the winner, so a round costs at most two messages per ring slot.
// The backup is the second-largest live id.
inline ElectionResult ring_elect(const std::vector<NodeId>& ring,
                                 const std::function<bool(NodeId)>& alive) {
  std::vector<NodeId> live;
  for (NodeId n : ring) {
    if (alive(n)) live.push_back(n);
  }
  if (live.empty()) throw GridError(Errc::EmptyRing, "no live members");

  ElectionResult result;
  NodeId token = live.front();
  for (std::size_t i = 1; i < live.size(); ++i) {
    token = std::max(token, live[i]);
    ++result.messages;
  }
  ++result.messages;  // token returns to the initiator
  result.leader = token;
  result.messages += live.size();  // announcement lap

  std::optional<NodeId> second;
  for (NodeId n : live) {
    if (n != result.leader && (!second || n > *second)) second = n;
  }
  result.backup = second;
  return result;
}

struct Membership {
  DomainId domain;
  std::vector<NodeId> ring;  // insertion order of members
  NodeId dtm = 0;
  std::optional<NodeId> dtm_backup;
  bool offline = false;
};

struct Transition {
  SimTime time = 0.0;
  std::string scope;  // domain id, or "grid" for the GRM
  std::string what;   // e.g. "dtm=7 backup=5"
};

// Control plane for every domain ring plus the grid-wide GRM scope. Crashes
// are observed by the heartbeat task, which promotes replacements once a role
// holder has been down for the configured timeout.
class ClusterControl {
 public:
  void add_domain(const DomainId& domain, const std::vector<NodeId>& members, SimTime now,
                  std::vector<Transition>* log = nullptr) {
    Membership m;
    m.domain = domain;
    m.ring = members;
    for (NodeId n : members) {
      liveness_[n] = Liveness::Up;
      node_domain_[n] = domain;
    }
    domains_[domain] = std::move(m);
    elect_domain(domain, now, log);
    elect_grm(now, log);
  }

  bool is_alive(NodeId n) const {
    auto it = liveness_.find(n);
    return it != liveness_.end() && it->second == Liveness::Up;
  }

  void mark_down(NodeId n, SimTime now) {
    liveness_[n] = Liveness::Down;
    down_since_[n] = now;
  }

  // A recovering node rejoins its ring. If its domain had gone offline the
  // recovery triggers a fresh election (and restores grid management when the
  // whole grid had lost its DTMs).
  void mark_up(NodeId n, SimTime now = 0.0, std::vector<Transition>* log = nullptr) {
    liveness_[n] = Liveness::Up;
    down_since_.erase(n);
    auto d = domain_of(n);
    if (d && domains_.at(*d).offline) {
      elect_domain(*d, now, log);
      if (!grm_elected_) elect_grm(now, log);
    }
  }

  const Membership& membership(const DomainId& d) const { return domains_.at(d); }
  bool has_domain(const DomainId& d) const { return domains_.count(d) != 0; }
  NodeId grm() const { return grm_; }
  std::optional<NodeId> grm_backup() const { return grm_backup_; }
  bool grm_available() const { return grm_elected_ && is_alive(grm_); }

  std::optional<DomainId> domain_of(NodeId n) const {
    auto it = node_domain_.find(n);
    if (it == node_domain_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<NodeId> live_members(const DomainId& d) const {
    std::vector<NodeId> out;
    for (NodeId n : domains_.at(d).ring) {
      if (is_alive(n)) out.push_back(n);
    }
    return out;
  }

  // Domains in id order with their current DTM, for propagation fan-out.
  std::vector<std::pair<DomainId, std::optional<NodeId>>> dtm_endpoints() const {
    std::vector<std::pair<DomainId, std::optional<NodeId>>> out;
    for (const auto& [id, m] : domains_) {
      if (m.offline) {
        out.emplace_back(id, std::nullopt);
      } else {
        out.emplace_back(id, is_alive(m.dtm) ? std::optional<NodeId>(m.dtm) : std::nullopt);
      }
    }
    return out;
  }

  // Heartbeat task body: fail over any role holder that has been down for at
  // least `timeout`. Domain scopes are handled before the GRM scope so the
  // grid election always runs over the refreshed DTM set.
  std::vector<Transition> check_failures(SimTime now, double timeout,
                                         std::vector<Transition>* log = nullptr) {
    std::vector<Transition> local;
    std::vector<Transition>* sink = log ? log : &local;
    for (auto& [id, m] : domains_) {
      if (m.offline) continue;
      bool leader_expired = expired(m.dtm, now, timeout);
      bool backup_expired = m.dtm_backup && expired(*m.dtm_backup, now, timeout);
      if (leader_expired || backup_expired) {
        if (live_members(id).empty()) {
          m.offline = true;
          sink->push_back({now, id, "offline"});
        } else {
          elect_domain(id, now, sink);
        }
      }
    }
    bool grm_expired = grm_elected_ && (expired(grm_, now, timeout) || !is_dtm(grm_));
    bool grm_backup_expired =
        grm_backup_ && (expired(*grm_backup_, now, timeout) || !is_dtm(*grm_backup_));
    if (grm_expired || grm_backup_expired) elect_grm(now, sink);
    return local;
  }

  void elect_domain(const DomainId& d, SimTime now, std::vector<Transition>* log) {
    Membership& m = domains_.at(d);
    auto result = ring_elect(m.ring, [&](NodeId n) { return is_alive(n); });
    bool changed = m.dtm != result.leader || m.dtm_backup != result.backup || m.offline;
    m.dtm = result.leader;
    m.dtm_backup = result.backup;
    m.offline = false;
    if (changed && log) {
      std::string what = "dtm=" + std::to_string(m.dtm);
      if (m.dtm_backup) what += " backup=" + std::to_string(*m.dtm_backup);
      log->push_back({now, d, what});
    }
  }

  void elect_grm(SimTime now, std::vector<Transition>* log) {
    std::vector<NodeId> dtms;
    for (const auto& [id, m] : domains_) {
      if (!m.offline && is_alive(m.dtm)) dtms.push_back(m.dtm);
    }
    if (dtms.empty()) {
      grm_elected_ = false;
      if (log) log->push_back({now, "grid", "grm unavailable"});
      return;
    }
    auto result = ring_elect(dtms, [&](NodeId n) { return is_alive(n); });
    bool changed = !grm_elected_ || grm_ != result.leader || grm_backup_ != result.backup;
    grm_ = result.leader;
    grm_backup_ = result.backup;
    grm_elected_ = true;
    if (changed && log) {
      std::string what = "grm=" + std::to_string(grm_);
      if (grm_backup_) what += " backup=" + std::to_string(*grm_backup_);
      log->push_back({now, "grid", what});
    }
  }

 private:
  bool expired(NodeId n, SimTime now, double timeout) const {
    if (is_alive(n)) return false;
    auto it = down_since_.find(n);
    double since = it == down_since_.end() ? 0.0 : it->second;
    return now - since >= timeout;
  }

  bool is_dtm(NodeId n) const {
    auto d = domain_of(n);
    if (!d) return false;
    const Membership& m = domains_.at(*d);
    return !m.offline && m.dtm == n;
  }

  std::map<DomainId, Membership> domains_;
  std::map<NodeId, Liveness> liveness_;
  std::map<NodeId, SimTime> down_since_;
  std::map<NodeId, DomainId> node_domain_;
  NodeId grm_ = 0;
  std::optional<NodeId> grm_backup_;
  bool grm_elected_ = false;
};

enum class Route { DemandPipeline, FeedbackPipeline, SecurityComponent, Terminated };

// The dispatch decision tree for an authenticated request: service requests
// go to demand evaluation, feedback to the feedback pipeline (followed by
// trust evaluation), security requests are served only intra-domain, and
// anything else terminates.
inline Route classify(const Request& req) {
  switch (req.kind) {
    case RequestKind::ServiceRequest:
      return Route::DemandPipeline;
    case RequestKind::Feedback:
      return Route::FeedbackPipeline;
    case RequestKind::Security:
      return req.scope == RequestScope::IntraDomain ? Route::SecurityComponent
                                                    : Route::Terminated;
  }
  return Route::Terminated;
}

}  // namespace gridtrust::cluster
