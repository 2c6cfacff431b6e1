#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gridtrust/core.hpp"

namespace gridtrust {

// ---------------------------------------------------------------------------
// Policies

struct Policy {
  std::string id;
  std::string predicate;  // capability tag, matched by exact equality
};

struct PolicySet {
  std::vector<Policy> policies;

  // Throws on duplicate ids; order of insertion is preserved.
  void add(Policy p) {
    for (const auto& q : policies) {
      if (q.id == p.id) {
        throw GridError(Errc::InvalidProfile, "duplicate policy id '" + p.id + "'");
      }
    }
    policies.push_back(std::move(p));
  }

  bool satisfies(std::string_view predicate) const {
    return std::any_of(policies.begin(), policies.end(),
                       [&](const Policy& p) { return p.predicate == predicate; });
  }

  std::size_t size() const { return policies.size(); }
  bool empty() const { return policies.empty(); }
};

// ---------------------------------------------------------------------------
// Security profile

// Raw evaluation criteria a domain declares; the normalized attribute vector
// is derived from these against the configured reference scales.
struct RawSecurityCriteria {
  double audit_data_size = 0.0;        // traffic audit data size
  double signature_file_size = 0.0;    // antivirus signature file size
  double signature_update_freq = 0.0;  // signature update frequency
  double memory_scan_freq = 0.0;       // memory scan frequency
  double firewall_rules = 0.0;         // number of firewall rules
  bool tls = false;
  bool ipsec = false;
  bool sandbox = false;  // isolated execution sandbox
  bool crypto = false;   // cryptographic functions available
};

struct SecurityAttributes {
  AttrVector sa{};  // each in [0,1]
  RawSecurityCriteria raw;
};

// ---------------------------------------------------------------------------
// Domains and nodes

struct Credential {
  std::string issuer;
  std::string token;
  bool valid = false;
};

struct DomainProfile {
  DomainId domain_id;
  PolicySet policies;
  SecurityAttributes security;
  std::vector<NodeId> node_ids;
  NodeId dtm_id = 0;
  Credential credential;

  void check() const {
    if (node_ids.empty()) {
      throw GridError(Errc::InvalidProfile, "domain '" + domain_id + "' has no nodes");
    }
    if (std::find(node_ids.begin(), node_ids.end(), dtm_id) == node_ids.end()) {
      throw GridError(Errc::InvalidProfile,
                      "dtm_id " + std::to_string(dtm_id) + " is not a member of '" + domain_id + "'");
    }
  }
};

struct TrustRecord {
  NodeId node_id = 0;
  double trust = 0.5;
  std::uint64_t n = 0;  // completed transactions
  ParamVector params{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  SimTime updated_at = 0.0;
};

// ---------------------------------------------------------------------------
// Requests and feedback

enum class RequestKind { ServiceRequest, Feedback, Security };
enum class RequestScope { InterDomain, IntraDomain };

struct DemandRequest {
  std::array<double, kQosParamCount> dp{};  // user percentages, each in [0,100]
  std::string service_type;
  PrincipalId client_id;
};

enum class VerdictKind { Pending, Verified, Rectified };

struct Feedback {
  TxId tx_id = 0;
  NodeId provider = 0;
  ParamVector ratings{};  // f_p, one per QoS parameter, each in [0,1]
  SimTime issued_at = 0.0;
  VerdictKind verdict = VerdictKind::Pending;
  // Pre-rectification ratings, kept when any parameter was replaced.
  std::optional<ParamVector> original;
};

struct Certificate {
  PrincipalId subject;
  std::string issuer;
  std::string token;
  bool valid = false;
};

struct ServicePayload {
  DemandRequest demand;
};

struct FeedbackPayload {
  Feedback feedback;
};

struct RegisterCertificate {
  Certificate cert;
};

struct UpdateSecurityProfile {
  RawSecurityCriteria raw;
};

struct SecurityPayload {
  std::variant<RegisterCertificate, UpdateSecurityProfile> op;
};

using RequestPayload = std::variant<ServicePayload, FeedbackPayload, SecurityPayload>;

// The lower-level request tuple: kind, scope, payload, target node, service type.
struct Request {
  RequestKind kind = RequestKind::ServiceRequest;
  RequestScope scope = RequestScope::IntraDomain;
  RequestPayload payload;
  NodeId target = 0;  // DTM or resource-node number
  std::string service_type;
  PrincipalId requester;

  bool payload_consistent() const {
    switch (kind) {
      case RequestKind::ServiceRequest: return std::holds_alternative<ServicePayload>(payload);
      case RequestKind::Feedback: return std::holds_alternative<FeedbackPayload>(payload);
      case RequestKind::Security: return std::holds_alternative<SecurityPayload>(payload);
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// Access control

enum class RepoKind { Trust, Feedback, DomainProperty, Certificate };
enum class RepoAction { Read, Write };
enum class Decision { Allow, Deny };

inline std::string_view repo_kind_name(RepoKind k) {
  switch (k) {
    case RepoKind::Trust: return "trust";
    case RepoKind::Feedback: return "feedback";
    case RepoKind::DomainProperty: return "domain_property";
    case RepoKind::Certificate: return "certificate";
  }
  return "?";
}

struct Principal {
  enum class Role { DtmComponent, ResourceNode, Grm, Client, External };
  Role role = Role::External;
  DomainId domain;  // home domain; empty for GRM
  PrincipalId id;
};

inline Principal dtm_principal(const DomainId& d) {
  return Principal{Principal::Role::DtmComponent, d, "dtm:" + d};
}
inline Principal grm_principal() { return Principal{Principal::Role::Grm, "", "grm"}; }
inline Principal node_principal(const DomainId& d, NodeId n) {
  return Principal{Principal::Role::ResourceNode, d, "node:" + std::to_string(n)};
}
inline Principal client_principal(const DomainId& d, const std::string& name) {
  return Principal{Principal::Role::Client, d, "client:" + name};
}

// ---------------------------------------------------------------------------
// Canonical value serialization (journal format)

inline std::string to_text(const TrustRecord& r) {
  return "trust=" + format_real(r.trust) + " n=" + std::to_string(r.n) +
         " params=" + format_vector(r.params) + " at=" + format_real(r.updated_at);
}

inline std::string to_text(const Feedback& f) {
  std::string s = "tx=" + std::to_string(f.tx_id) + " provider=" + std::to_string(f.provider) +
                  " ratings=" + format_vector(f.ratings) + " issued=" + format_real(f.issued_at);
  s += " verdict=";
  switch (f.verdict) {
    case VerdictKind::Pending: s += "pending"; break;
    case VerdictKind::Verified: s += "verified"; break;
    case VerdictKind::Rectified: s += "rectified"; break;
  }
  if (f.original) s += " original=" + format_vector(*f.original);
  return s;
}

inline std::string to_text(const Certificate& c) {
  return "subject=" + c.subject + " issuer=" + c.issuer + " token=" + c.token +
         " valid=" + (c.valid ? std::string("1") : std::string("0"));
}

inline std::string to_text(const DomainProfile& p) {
  std::string nodes;
  for (std::size_t i = 0; i < p.node_ids.size(); ++i) {
    if (i != 0) nodes += ';';
    nodes += std::to_string(p.node_ids[i]);
  }
  std::string pols;
  for (std::size_t i = 0; i < p.policies.policies.size(); ++i) {
    if (i != 0) pols += ';';
    pols += p.policies.policies[i].id + ":" + p.policies.policies[i].predicate;
  }
  return "domain=" + p.domain_id + " dtm=" + std::to_string(p.dtm_id) + " nodes=" + nodes +
         " policies=" + pols + " sa=" + format_vector(p.security.sa) +
         " issuer=" + p.credential.issuer;
}

}  // namespace gridtrust
