#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust {

// Repository reference: per-domain for trust/feedback/certificate, global
// (empty domain) for domain-property.
struct RepoRef {
  RepoKind kind = RepoKind::Trust;
  DomainId domain;

  std::string label() const {
    if (kind == RepoKind::DomainProperty) return std::string(repo_kind_name(kind));
    return domain + "/" + std::string(repo_kind_name(kind));
  }
};

// Static capability table. DTM components read and write their own domain's
// repositories; resource nodes get read-only access to their domain's trust
// repository; the GRM reads and writes the global domain-property repository.
// Everything else, including unknown principals, is denied.
inline Decision access_control(const Principal& who, const RepoRef& repo, RepoAction action) {
  switch (who.role) {
    case Principal::Role::DtmComponent:
      if (repo.kind != RepoKind::DomainProperty && who.domain == repo.domain) {
        return Decision::Allow;
      }
      return Decision::Deny;
    case Principal::Role::ResourceNode:
      if (repo.kind == RepoKind::Trust && who.domain == repo.domain &&
          action == RepoAction::Read) {
        return Decision::Allow;
      }
      return Decision::Deny;
    case Principal::Role::Grm:
      return repo.kind == RepoKind::DomainProperty ? Decision::Allow : Decision::Deny;
    case Principal::Role::Client:
    case Principal::Role::External:
      return Decision::Deny;
  }
  return Decision::Deny;
}

using RepoValue = std::variant<TrustRecord, Feedback, Certificate, DomainProfile>;

inline std::string repo_value_text(const RepoValue& v) {
  return std::visit([](const auto& x) { return to_text(x); }, v);
}

// Append-only mutation journal. One line per write with the simulation
// timestamp; replaying the puts in order rebuilds the stores.
class Journal {
 public:
  void append(SimTime t, const RepoRef& repo, std::string_view op, const std::string& key,
              const std::string& value) {
    lines_.push_back(format_real(t) + " " + repo.label() + " " + std::string(op) + " " + key +
                     " " + value);
  }

  const std::vector<std::string>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }

  std::string dump() const {
    std::string out;
    for (const auto& l : lines_) {
      out += l;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

// The four repositories behind one guarded put/get surface. All writes are
// serialized through the simulator event loop; the hub itself only checks
// capabilities and journals mutations.
class RepositoryHub {
 public:
  void put(const Principal& who, const RepoRef& repo, const std::string& key, RepoValue value,
           SimTime now) {
    if (access_control(who, repo, RepoAction::Write) != Decision::Allow) {
      throw GridError(Errc::AccessDenied,
                      who.id + " may not write " + repo.label() + "[" + key + "]");
    }
    journal_.append(now, repo, "put", key, repo_value_text(value));
    stores_[store_key(repo)][key] = std::move(value);
  }

  const RepoValue& get(const Principal& who, const RepoRef& repo, const std::string& key) const {
    if (access_control(who, repo, RepoAction::Read) != Decision::Allow) {
      throw GridError(Errc::AccessDenied,
                      who.id + " may not read " + repo.label() + "[" + key + "]");
    }
    auto store = stores_.find(store_key(repo));
    if (store != stores_.end()) {
      auto it = store->second.find(key);
      if (it != store->second.end()) return it->second;
    }
    throw GridError(Errc::NotFound, repo.label() + "[" + key + "]");
  }

  bool contains(const Principal& who, const RepoRef& repo, const std::string& key) const {
    if (access_control(who, repo, RepoAction::Read) != Decision::Allow) {
      throw GridError(Errc::AccessDenied,
                      who.id + " may not read " + repo.label() + "[" + key + "]");
    }
    auto store = stores_.find(store_key(repo));
    return store != stores_.end() && store->second.count(key) != 0;
  }

  // Typed helpers for the common paths.

  void put_trust(const Principal& who, const DomainId& d, const TrustRecord& r, SimTime now) {
    put(who, {RepoKind::Trust, d}, std::to_string(r.node_id), r, now);
  }
  TrustRecord get_trust(const Principal& who, const DomainId& d, NodeId node) const {
    return std::get<TrustRecord>(get(who, {RepoKind::Trust, d}, std::to_string(node)));
  }
  bool has_trust(const Principal& who, const DomainId& d, NodeId node) const {
    return contains(who, {RepoKind::Trust, d}, std::to_string(node));
  }

  void put_feedback(const Principal& who, const DomainId& d, const Feedback& f, SimTime now) {
    put(who, {RepoKind::Feedback, d}, std::to_string(f.tx_id), f, now);
  }

  void put_certificate(const Principal& who, const DomainId& d, const Certificate& c,
                       SimTime now) {
    put(who, {RepoKind::Certificate, d}, c.subject, c, now);
  }
  bool has_certificate(const Principal& who, const DomainId& d, const PrincipalId& subject) const {
    return contains(who, {RepoKind::Certificate, d}, subject);
  }
  Certificate get_certificate(const Principal& who, const DomainId& d,
                              const PrincipalId& subject) const {
    return std::get<Certificate>(get(who, {RepoKind::Certificate, d}, subject));
  }

  void put_domain_property(const Principal& who, const DomainProfile& p, SimTime now) {
    put(who, {RepoKind::DomainProperty, ""}, p.domain_id, p, now);
  }
  bool has_domain_property(const Principal& who, const DomainId& d) const {
    return contains(who, {RepoKind::DomainProperty, ""}, d);
  }
  DomainProfile get_domain_property(const Principal& who, const DomainId& d) const {
    return std::get<DomainProfile>(get(who, {RepoKind::DomainProperty, ""}, d));
  }

  // All trust records of a domain, in node-id order. Used by the demand and
  // monitoring paths, which run as the domain's DTM.
  std::vector<TrustRecord> trust_records(const Principal& who, const DomainId& d) const {
    if (access_control(who, {RepoKind::Trust, d}, RepoAction::Read) != Decision::Allow) {
      throw GridError(Errc::AccessDenied, who.id + " may not read " + d + "/trust");
    }
    std::vector<TrustRecord> out;
    auto store = stores_.find(store_key({RepoKind::Trust, d}));
    if (store == stores_.end()) return out;
    for (const auto& [key, value] : store->second) out.push_back(std::get<TrustRecord>(value));
    std::sort(out.begin(), out.end(),
              [](const TrustRecord& a, const TrustRecord& b) { return a.node_id < b.node_id; });
    return out;
  }

  std::vector<DomainId> registered_domains() const {
    std::vector<DomainId> out;
    auto store = stores_.find(store_key({RepoKind::DomainProperty, ""}));
    if (store == stores_.end()) return out;
    for (const auto& [key, value] : store->second) out.push_back(key);
    return out;  // std::map iteration is already sorted
  }

  // Canonical dump of every repository, for snapshot-equality checks.
  std::string snapshot() const {
    std::string out;
    for (const auto& [label, store] : stores_) {
      for (const auto& [key, value] : store) {
        out += label + " " + key + " " + repo_value_text(value) + "\n";
      }
    }
    return out;
  }

  const Journal& journal() const { return journal_; }

 private:
  static std::string store_key(const RepoRef& r) { return r.label(); }

  std::map<std::string, std::map<std::string, RepoValue>> stores_;
  Journal journal_;
};

}  // namespace gridtrust
