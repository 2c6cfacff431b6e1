#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gridtrust/core.hpp"
#include "gridtrust/repository.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::upper {

enum class AuthResult { Accepted, Rejected };

// Simulated authentication: the credential must be marked valid and issued by
// a trusted issuer. No cryptography, only the decision surface.
inline AuthResult authenticate_domain(const Credential& cred,
                                      const std::set<std::string>& trusted_issuers) {
  if (cred.token.empty() || cred.issuer.empty()) return AuthResult::Rejected;
  if (!cred.valid) return AuthResult::Rejected;
  return trusted_issuers.count(cred.issuer) != 0 ? AuthResult::Accepted : AuthResult::Rejected;
}

struct JoinVerdict {
  bool authorized = false;
  std::vector<std::string> satisfied;  // ids of the grid policies the domain meets
  std::size_t required_k = 0;          // number of agreed grid policies
  std::size_t l = 0;                   // number satisfied
};

// Minimum satisfaction: a grid policy is met when the new domain declares a
// policy with the same predicate tag; the domain is authorized when it meets
// at least half of the grid's policies. An empty grid policy set imposes no
// requirement.
inline JoinVerdict policy_mapping(const PolicySet& new_domain, const PolicySet& grid) {
  JoinVerdict verdict;
  verdict.required_k = grid.size();
  for (const auto& policy : grid.policies) {
    if (new_domain.satisfies(policy.predicate)) verdict.satisfied.push_back(policy.id);
  }
  verdict.l = verdict.satisfied.size();
  // l >= ceil(k/2), vacuously true at k = 0
  verdict.authorized = 2 * verdict.l >= verdict.required_k;
  return verdict;
}

// Registration and initialization: the profile goes into the global
// domain-property repository under the GRM principal, and every member node
// starts with the neutral trust record. Certificates for the members and the
// domain's DTM component are issued so that later requests can authenticate.
inline void register_domain(RepositoryHub& hub, const DomainProfile& profile, SimTime now) {
  profile.check();
  Principal grm = grm_principal();
  if (hub.has_domain_property(grm, profile.domain_id)) {
    throw GridError(Errc::DuplicateDomain, profile.domain_id);
  }
  hub.put_domain_property(grm, profile, now);

  Principal dtm = dtm_principal(profile.domain_id);
  for (NodeId node : profile.node_ids) {
    TrustRecord rec;
    rec.node_id = node;
    rec.updated_at = now;
    hub.put_trust(dtm, profile.domain_id, rec, now);
    Certificate cert{node_principal(profile.domain_id, node).id, "grm",
                     "tok-" + std::to_string(node), true};
    hub.put_certificate(dtm, profile.domain_id, cert, now);
  }
  Certificate dtm_cert{dtm.id, "grm", "tok-" + profile.domain_id, true};
  hub.put_certificate(dtm, profile.domain_id, dtm_cert, now);
}

struct DtmEndpoint {
  DomainId domain;
  std::optional<NodeId> dtm;  // empty when the domain has no live DTM
};

struct Receipt {
  enum class Status { Delivered, Failed };
  DomainId domain;
  Status status = Status::Failed;
};

using DeliverFn = std::function<bool(const DomainId& recipient, const DomainProfile& profile)>;

// Broadcast of a new domain's properties to the DTM of every other domain.
// Delivery happens at the current simulation instant; a domain without a live
// DTM yields a failed receipt.
inline std::vector<Receipt> propagate(const DomainProfile& profile,
                                      const std::vector<DtmEndpoint>& endpoints,
                                      const DeliverFn& deliver) {
  std::vector<Receipt> receipts;
  for (const auto& ep : endpoints) {
    if (ep.domain == profile.domain_id) continue;
    Receipt r{ep.domain, Receipt::Status::Failed};
    if (ep.dtm && deliver(ep.domain, profile)) r.status = Receipt::Status::Delivered;
    receipts.push_back(r);
  }
  return receipts;
}

struct JoinOutcome {
  bool joined = false;
  std::string refused_stage;  // "authentication", "policy", "registration"
  JoinVerdict verdict;
  std::vector<Receipt> receipts;
};

// The join sequence: authenticate, map policies, register, propagate. Any
// refusal happens before the first repository write, so a refused join leaves
// every repository untouched.
inline JoinOutcome add_domain(RepositoryHub& hub, const DomainProfile& profile,
                              const PolicySet& grid_policies,
                              const std::set<std::string>& trusted_issuers,
                              const std::vector<DtmEndpoint>& endpoints, const DeliverFn& deliver,
                              SimTime now) {
  JoinOutcome outcome;
  if (authenticate_domain(profile.credential, trusted_issuers) != AuthResult::Accepted) {
    outcome.refused_stage = "authentication";
    return outcome;
  }
  outcome.verdict = policy_mapping(profile.policies, grid_policies);
  if (!outcome.verdict.authorized) {
    outcome.refused_stage = "policy";
    return outcome;
  }
  try {
    register_domain(hub, profile, now);
  } catch (const GridError&) {
    outcome.refused_stage = "registration";
    return outcome;
  }
  outcome.receipts = propagate(profile, endpoints, deliver);
  outcome.joined = true;
  return outcome;
}

}  // namespace gridtrust::upper
