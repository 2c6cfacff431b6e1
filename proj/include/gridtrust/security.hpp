#pragma once

#include <set>

#include "gridtrust/core.hpp"
#include "gridtrust/repository.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust::security {

struct SecurityWeights {
  AttrVector w{1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};

  // Weights are normalized at load; any non-negative vector with positive sum
  // is accepted.
  static SecurityWeights normalized(const AttrVector& raw) {
    double sum = 0.0;
    for (double x : raw) {
      if (x < 0.0) throw GridError(Errc::InvalidWeights, "negative security weight");
      sum += x;
    }
    if (sum <= 0.0) throw GridError(Errc::InvalidWeights, "security weights sum to zero");
    SecurityWeights out;
    for (std::size_t i = 0; i < kSecurityAttrCount; ++i) out.w[i] = raw[i] / sum;
    return out;
  }
};

struct DefenseScore {
  double value = 0.0;  // df in [0,1]
};

// Calibration constants for mapping raw criteria onto [0,1]. These are not
// part of the trust algebra; scenarios may override them.
struct ReferenceScales {
  double audit_data_size = 1000.0;     // MB of traffic audit data
  double signature_file_size = 100.0;  // MB of signature database
  double signature_update_freq = 30.0;  // updates per month
  double memory_scan_freq = 24.0;      // scans per day
  double firewall_rules = 50.0;        // rule count
};

namespace detail {
inline double saturating(double raw, double reference, const char* what) {
  if (raw < 0.0) throw GridError(Errc::InvalidCriteria, std::string(what) + " is negative");
  if (reference <= 0.0) throw GridError(Errc::InvalidCriteria, std::string(what) + " reference");
  double v = raw / reference;
  return v > 1.0 ? 1.0 : v;
}
}  // namespace detail

// Maps declared raw criteria onto the six-attribute vector. The three
// intrusion-detection criteria average into Sa_1; counts and frequencies
// saturate at their reference scale; TLS/IPsec scores none/one/both as
// 0/0.5/1; sandbox and key management are plain flags.
inline SecurityAttributes normalize_attributes(const RawSecurityCriteria& raw,
                                               const ReferenceScales& ref = {}) {
  SecurityAttributes out;
  out.raw = raw;
  double audit = detail::saturating(raw.audit_data_size, ref.audit_data_size, "audit_data_size");
  double sig = detail::saturating(raw.signature_file_size, ref.signature_file_size,
                                  "signature_file_size");
  double upd = detail::saturating(raw.signature_update_freq, ref.signature_update_freq,
                                  "signature_update_freq");
  out.sa[0] = (audit + sig + upd) / 3.0;
  out.sa[1] = detail::saturating(raw.memory_scan_freq, ref.memory_scan_freq, "memory_scan_freq");
  out.sa[2] = detail::saturating(raw.firewall_rules, ref.firewall_rules, "firewall_rules");
  out.sa[3] = raw.tls && raw.ipsec ? 1.0 : (raw.tls || raw.ipsec ? 0.5 : 0.0);
  out.sa[4] = raw.sandbox ? 1.0 : 0.0;
  out.sa[5] = raw.crypto ? 1.0 : 0.0;
  return out;
}

// Self-defense capability: df = sum_i w_i * sa_i.
inline DefenseScore self_defense(const SecurityAttributes& sa, const SecurityWeights& w) {
  double df = 0.0;
  for (std::size_t i = 0; i < kSecurityAttrCount; ++i) df += w.w[i] * sa.sa[i];
  return DefenseScore{df};
}

// A request is authorized iff the requester's certificate is on file in this
// domain's certificate repository and marked valid. The lookup runs as the
// domain's own DTM component.
inline Decision authenticate_request(const Request& req, const RepositoryHub& hub,
                                     const DomainId& domain) {
  Principal dtm = dtm_principal(domain);
  if (!hub.has_certificate(dtm, domain, req.requester)) return Decision::Deny;
  return hub.get_certificate(dtm, domain, req.requester).valid ? Decision::Allow
                                                               : Decision::Deny;
}

// DTM registry management: store or overwrite a DTM certificate. The subject
// must be one of the DTM identities known to this domain.
inline void register_dtm_certificate(RepositoryHub& hub, const DomainId& domain,
                                     const Certificate& cert,
                                     const std::set<PrincipalId>& known_dtms, SimTime now) {
  if (known_dtms.count(cert.subject) == 0) {
    throw GridError(Errc::UnknownSubject, cert.subject + " is not a known DTM of " + domain);
  }
  hub.put_certificate(dtm_principal(domain), domain, cert, now);
}

}  // namespace gridtrust::security
