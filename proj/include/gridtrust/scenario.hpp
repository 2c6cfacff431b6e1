#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridtrust/core.hpp"
#include "gridtrust/feedback.hpp"
#include "gridtrust/security.hpp"
#include "gridtrust/trust.hpp"
#include "gridtrust/types.hpp"

namespace gridtrust {

inline constexpr int kScenarioVersion = 1;

struct DriftStep {
  SimTime at = 0.0;
  ParamVector quality{};
};

// True delivered quality of a provider, per QoS parameter, with an optional
// step schedule for quality changing mid-run.
struct BehaviorProfile {
  ParamVector quality{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  std::vector<DriftStep> drift;

  ParamVector quality_at(SimTime t) const {
    ParamVector q = quality;
    for (const auto& step : drift) {
      if (step.at <= t) q = step.quality;
    }
    return q;
  }
};

struct NodeSpec {
  NodeId id = 0;
  BehaviorProfile behavior;
};

struct DomainSpec {
  DomainId id;
  Credential credential;
  std::vector<Policy> policies;
  RawSecurityCriteria security;
  std::vector<NodeSpec> nodes;
  NodeId dtm = 0;
  bool dtm_present = false;

  DomainProfile to_profile(const security::ReferenceScales& scales) const {
    DomainProfile p;
    p.domain_id = id;
    for (const auto& pol : policies) p.policies.add(pol);
    p.security = security::normalize_attributes(security, scales);
    for (const auto& n : nodes) p.node_ids.push_back(n.id);
    p.dtm_id = dtm;
    p.credential = credential;
    return p;
  }
};

struct DemandSpec {
  enum class Kind { Constant, Uniform };
  Kind kind = Kind::Constant;
  std::array<double, kQosParamCount> dp{80, 80, 80, 80, 80, 80};
  double low = 20.0;
  double high = 100.0;
};

struct RaterSpec {
  enum class Kind { Honest, Lowball };
  Kind kind = Kind::Honest;
  double prob = 0.0;  // probability of an all-zero outlier rating
};

struct ClientSpec {
  std::string id;
  DomainId domain;
  DemandSpec demand;
  RaterSpec rater;
  std::string service_type = "compute";
  bool registered = true;  // unregistered clients exercise the denial path
};

struct WorkloadSpec {
  double arrival_rate = 0.0;  // mean arrivals per time unit; 0 disables workload
  std::vector<ClientSpec> clients;
};

struct EventSpec {
  enum class Kind { Crash, Recover, JoinDomain, SecurityUpdate };
  SimTime time = 0.0;
  Kind kind = Kind::Crash;
  NodeId node = 0;                   // crash / recover
  std::optional<DomainSpec> domain;  // join_domain
  DomainId domain_id;                // security_update
  RawSecurityCriteria security;      // security_update
};

struct SimConfig {
  trust::TrustWeights weights;
  trust::DecayConfig decay;
  feedback::VerificationConfig verification;
  std::size_t batch_size = 8;
  double batch_flush = 1.0;
  std::size_t top_p = 3;
  double heartbeat_period = 1.0;
  double heartbeat_timeout = 3.0;
  double sweep_period = 10.0;
  double staleness = 30.0;
  double success_threshold = 0.5;
  double feedback_noise = 0.05;  // eta: rating = clamp(quality + U(-eta, eta))
  double service_time = 0.5;
  double feedback_delay = 0.1;
  security::SecurityWeights security_weights;
  security::ReferenceScales scales;
};

struct Scenario {
  int version = kScenarioVersion;
  std::uint64_t seed = 1;
  SimTime duration = 0.0;
  SimConfig config;
  PolicySet grid_policies;
  std::set<std::string> trusted_issuers;
  std::vector<DomainSpec> domains;
  WorkloadSpec workload;
  std::vector<EventSpec> events;
};

namespace detail {

using nlohmann::json;

class Loader {
 public:
  explicit Loader(std::vector<std::string>& violations) : violations_(violations) {}

  void fail(const std::string& where, const std::string& message) {
    violations_.push_back(where + ": " + message);
  }

  double num(const json& j, const std::string& where, const std::string& key, double fallback,
             bool required = false) {
    if (!j.contains(key)) {
      if (required) fail(where + "." + key, "missing");
      return fallback;
    }
    if (!j.at(key).is_number()) {
      fail(where + "." + key, "expected a number");
      return fallback;
    }
    return j.at(key).get<double>();
  }

  std::string str(const json& j, const std::string& where, const std::string& key,
                  const std::string& fallback, bool required = false) {
    if (!j.contains(key)) {
      if (required) fail(where + "." + key, "missing");
      return fallback;
    }
    if (!j.at(key).is_string()) {
      fail(where + "." + key, "expected a string");
      return fallback;
    }
    return j.at(key).get<std::string>();
  }

  bool boolean(const json& j, const std::string& where, const std::string& key, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) {
      fail(where + "." + key, "expected a boolean");
      return fallback;
    }
    return j.at(key).get<bool>();
  }

  template <std::size_t N>
  std::array<double, N> vec(const json& j, const std::string& where, const std::string& key,
                            const std::array<double, N>& fallback, bool required = false) {
    std::array<double, N> out = fallback;
    if (!j.contains(key)) {
      if (required) fail(where + "." + key, "missing");
      return out;
    }
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != N) {
      fail(where + "." + key, "expected an array of " + std::to_string(N) + " numbers");
      return out;
    }
    for (std::size_t i = 0; i < N; ++i) {
      if (!arr[i].is_number()) {
        fail(where + "." + key + "[" + std::to_string(i) + "]", "expected a number");
        return out;
      }
      out[i] = arr[i].get<double>();
    }
    return out;
  }

  RawSecurityCriteria security(const json& j, const std::string& where) {
    RawSecurityCriteria raw;
    raw.audit_data_size = num(j, where, "audit_data_size", 0.0);
    raw.signature_file_size = num(j, where, "signature_file_size", 0.0);
    raw.signature_update_freq = num(j, where, "signature_update_freq", 0.0);
    raw.memory_scan_freq = num(j, where, "memory_scan_freq", 0.0);
    raw.firewall_rules = num(j, where, "firewall_rules", 0.0);
    raw.tls = boolean(j, where, "tls", false);
    raw.ipsec = boolean(j, where, "ipsec", false);
    raw.sandbox = boolean(j, where, "sandbox", false);
    raw.crypto = boolean(j, where, "crypto", false);
    return raw;
  }

  std::vector<Policy> policies(const json& j, const std::string& where, const std::string& key) {
    std::vector<Policy> out;
    if (!j.contains(key)) return out;
    const json& arr = j.at(key);
    if (!arr.is_array()) {
      fail(where + "." + key, "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string pw = where + "." + key + "[" + std::to_string(i) + "]";
      Policy p;
      p.id = str(arr[i], pw, "id", "", true);
      p.predicate = str(arr[i], pw, "predicate", "", true);
      out.push_back(std::move(p));
    }
    return out;
  }

  DomainSpec domain(const json& j, const std::string& where) {
    DomainSpec d;
    d.id = str(j, where, "id", "", true);
    if (j.contains("credential") && j.at("credential").is_object()) {
      const json& c = j.at("credential");
      d.credential.issuer = str(c, where + ".credential", "issuer", "", true);
      d.credential.token = str(c, where + ".credential", "token", "", true);
      d.credential.valid = boolean(c, where + ".credential", "valid", false);
    } else {
      fail(where + ".credential", "missing");
    }
    d.policies = policies(j, where, "policies");
    if (j.contains("security") && j.at("security").is_object()) {
      d.security = security(j.at("security"), where + ".security");
    } else {
      fail(where + ".security", "missing");
    }
    if (j.contains("nodes") && j.at("nodes").is_array()) {
      const json& arr = j.at("nodes");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string nw = where + ".nodes[" + std::to_string(i) + "]";
        NodeSpec n;
        n.id = static_cast<NodeId>(num(arr[i], nw, "id", 0.0, true));
        n.behavior.quality = vec<kQosParamCount>(arr[i], nw, "quality", n.behavior.quality);
        if (arr[i].contains("drift") && arr[i].at("drift").is_array()) {
          for (std::size_t k = 0; k < arr[i].at("drift").size(); ++k) {
            const json& dj = arr[i].at("drift")[k];
            std::string dw = nw + ".drift[" + std::to_string(k) + "]";
            DriftStep step;
            step.at = num(dj, dw, "at", 0.0, true);
            step.quality = vec<kQosParamCount>(dj, dw, "quality", n.behavior.quality, true);
            n.behavior.drift.push_back(step);
          }
        }
        d.nodes.push_back(std::move(n));
      }
    } else {
      fail(where + ".nodes", "missing");
    }
    if (j.contains("dtm")) {
      d.dtm = static_cast<NodeId>(num(j, where, "dtm", 0.0));
      d.dtm_present = true;
    } else {
      fail(where + ".dtm", "missing");
    }
    return d;
  }

 private:
  std::vector<std::string>& violations_;
};

}  // namespace detail

struct ScenarioLoad {
  Scenario scenario;
  std::vector<std::string> violations;  // structural problems found while loading
};

inline ScenarioLoad load_scenario(const nlohmann::json& j) {
  ScenarioLoad out;
  detail::Loader ld(out.violations);

  if (!j.is_object()) {
    ld.fail("scenario", "top level must be an object");
    return out;
  }
  Scenario& sc = out.scenario;
  sc.version = static_cast<int>(ld.num(j, "scenario", "version", 0.0, true));
  sc.seed = static_cast<std::uint64_t>(ld.num(j, "scenario", "seed", 1.0));
  sc.duration = ld.num(j, "scenario", "duration", 0.0, true);

  if (j.contains("config") && j.at("config").is_object()) {
    const auto& c = j.at("config");
    SimConfig& cfg = sc.config;
    cfg.weights.alpha = ld.num(c, "config", "alpha", cfg.weights.alpha);
    cfg.weights.beta = ld.num(c, "config", "beta", cfg.weights.beta);
    cfg.weights.delta_w = ld.num(c, "config", "delta_w", cfg.weights.delta_w);
    cfg.decay.lambda = ld.num(c, "config", "lambda", cfg.decay.lambda);
    double delta = ld.num(c, "config", "delta", 0.2);
    cfg.verification.delta = {delta, delta, delta, delta, delta, delta};
    cfg.verification.delta =
        ld.vec<kQosParamCount>(c, "config", "delta_per_param", cfg.verification.delta);
    cfg.verification.window = static_cast<std::size_t>(
        ld.num(c, "config", "window", static_cast<double>(cfg.verification.window)));
    cfg.verification.max_age = ld.num(c, "config", "max_feedback_age", cfg.verification.max_age);
    cfg.batch_size = static_cast<std::size_t>(
        ld.num(c, "config", "batch_size", static_cast<double>(cfg.batch_size)));
    cfg.batch_flush = ld.num(c, "config", "batch_flush", cfg.batch_flush);
    cfg.top_p =
        static_cast<std::size_t>(ld.num(c, "config", "top_p", static_cast<double>(cfg.top_p)));
    cfg.heartbeat_period = ld.num(c, "config", "heartbeat_period", cfg.heartbeat_period);
    cfg.heartbeat_timeout = ld.num(c, "config", "heartbeat_timeout", cfg.heartbeat_timeout);
    cfg.sweep_period = ld.num(c, "config", "sweep_period", cfg.sweep_period);
    cfg.staleness = ld.num(c, "config", "staleness", cfg.staleness);
    cfg.success_threshold = ld.num(c, "config", "success_threshold", cfg.success_threshold);
    cfg.feedback_noise = ld.num(c, "config", "feedback_noise", cfg.feedback_noise);
    cfg.service_time = ld.num(c, "config", "service_time", cfg.service_time);
    cfg.feedback_delay = ld.num(c, "config", "feedback_delay", cfg.feedback_delay);
    if (c.contains("security_weights")) {
      AttrVector raw = ld.vec<kSecurityAttrCount>(c, "config", "security_weights",
                                                  sc.config.security_weights.w);
      try {
        cfg.security_weights = security::SecurityWeights::normalized(raw);
      } catch (const GridError& e) {
        ld.fail("config.security_weights", e.what());
      }
    }
    if (c.contains("reference_scales") && c.at("reference_scales").is_object()) {
      const auto& r = c.at("reference_scales");
      cfg.scales.audit_data_size =
          ld.num(r, "config.reference_scales", "audit_data_size", cfg.scales.audit_data_size);
      cfg.scales.signature_file_size = ld.num(r, "config.reference_scales", "signature_file_size",
                                              cfg.scales.signature_file_size);
      cfg.scales.signature_update_freq = ld.num(
          r, "config.reference_scales", "signature_update_freq", cfg.scales.signature_update_freq);
      cfg.scales.memory_scan_freq =
          ld.num(r, "config.reference_scales", "memory_scan_freq", cfg.scales.memory_scan_freq);
      cfg.scales.firewall_rules =
          ld.num(r, "config.reference_scales", "firewall_rules", cfg.scales.firewall_rules);
    }
  }

  for (const auto& p : ld.policies(j, "scenario", "grid_policies")) {
    try {
      sc.grid_policies.add(p);
    } catch (const GridError& e) {
      ld.fail("grid_policies", e.what());
    }
  }

  if (j.contains("trusted_issuers")) {
    if (j.at("trusted_issuers").is_array()) {
      for (const auto& v : j.at("trusted_issuers")) {
        if (v.is_string()) sc.trusted_issuers.insert(v.get<std::string>());
      }
    } else {
      ld.fail("trusted_issuers", "expected an array");
    }
  }

  if (j.contains("domains") && j.at("domains").is_array()) {
    const auto& arr = j.at("domains");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      sc.domains.push_back(ld.domain(arr[i], "domains[" + std::to_string(i) + "]"));
    }
  } else {
    ld.fail("domains", "missing");
  }

  if (j.contains("workload") && j.at("workload").is_object()) {
    const auto& w = j.at("workload");
    sc.workload.arrival_rate = ld.num(w, "workload", "arrival_rate", 0.0);
    if (w.contains("clients") && w.at("clients").is_array()) {
      const auto& arr = w.at("clients");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string cw = "workload.clients[" + std::to_string(i) + "]";
        ClientSpec c;
        c.id = ld.str(arr[i], cw, "id", "", true);
        c.domain = ld.str(arr[i], cw, "domain", "", true);
        c.service_type = ld.str(arr[i], cw, "service_type", c.service_type);
        c.registered = ld.boolean(arr[i], cw, "registered", true);
        if (arr[i].contains("demand") && arr[i].at("demand").is_object()) {
          const auto& dj = arr[i].at("demand");
          std::string kind = ld.str(dj, cw + ".demand", "kind", "constant");
          if (kind == "constant") {
            c.demand.kind = DemandSpec::Kind::Constant;
            c.demand.dp = ld.vec<kQosParamCount>(dj, cw + ".demand", "dp", c.demand.dp, true);
          } else if (kind == "uniform") {
            c.demand.kind = DemandSpec::Kind::Uniform;
            c.demand.low = ld.num(dj, cw + ".demand", "low", c.demand.low);
            c.demand.high = ld.num(dj, cw + ".demand", "high", c.demand.high);
          } else {
            ld.fail(cw + ".demand.kind", "unknown kind '" + kind + "'");
          }
        }
        if (arr[i].contains("rater") && arr[i].at("rater").is_object()) {
          const auto& rj = arr[i].at("rater");
          std::string kind = ld.str(rj, cw + ".rater", "kind", "honest");
          if (kind == "honest") {
            c.rater.kind = RaterSpec::Kind::Honest;
          } else if (kind == "lowball") {
            c.rater.kind = RaterSpec::Kind::Lowball;
            c.rater.prob = ld.num(rj, cw + ".rater", "prob", 0.1);
          } else {
            ld.fail(cw + ".rater.kind", "unknown kind '" + kind + "'");
          }
        }
        sc.workload.clients.push_back(std::move(c));
      }
    }
  }

  if (j.contains("events")) {
    if (!j.at("events").is_array()) {
      ld.fail("events", "expected an array");
    } else {
      const auto& arr = j.at("events");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string ew = "events[" + std::to_string(i) + "]";
        EventSpec ev;
        ev.time = ld.num(arr[i], ew, "time", 0.0, true);
        std::string kind = ld.str(arr[i], ew, "kind", "", true);
        if (kind == "crash") {
          ev.kind = EventSpec::Kind::Crash;
          ev.node = static_cast<NodeId>(ld.num(arr[i], ew, "node", 0.0, true));
        } else if (kind == "recover") {
          ev.kind = EventSpec::Kind::Recover;
          ev.node = static_cast<NodeId>(ld.num(arr[i], ew, "node", 0.0, true));
        } else if (kind == "join_domain") {
          ev.kind = EventSpec::Kind::JoinDomain;
          if (arr[i].contains("domain") && arr[i].at("domain").is_object()) {
            ev.domain = ld.domain(arr[i].at("domain"), ew + ".domain");
          } else {
            ld.fail(ew + ".domain", "missing");
          }
        } else if (kind == "security_update") {
          ev.kind = EventSpec::Kind::SecurityUpdate;
          ev.domain_id = ld.str(arr[i], ew, "domain_id", "", true);
          if (arr[i].contains("security") && arr[i].at("security").is_object()) {
            ev.security = ld.security(arr[i].at("security"), ew + ".security");
          } else {
            ld.fail(ew + ".security", "missing");
          }
        } else if (!kind.empty()) {
          ld.fail(ew + ".kind", "unknown kind '" + kind + "'");
        }
        sc.events.push_back(std::move(ev));
      }
    }
  }

  return out;
}

namespace detail {

inline bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      return false;
    }
  }
  return true;
}

inline void validate_domain_spec(const DomainSpec& d, const std::string& where,
                                 std::vector<std::string>& out) {
  if (!detail::valid_identifier(d.id)) out.push_back(where + ".id: not a valid identifier");
  if (d.credential.issuer.empty()) out.push_back(where + ".credential.issuer: empty");
  if (d.credential.token.empty()) out.push_back(where + ".credential.token: empty");
  if (d.nodes.empty()) out.push_back(where + ".nodes: a domain needs at least one node");
  std::set<NodeId> ids;
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    const auto& n = d.nodes[i];
    if (!ids.insert(n.id).second) {
      out.push_back(where + ".nodes[" + std::to_string(i) + "].id: duplicate node id " +
                    std::to_string(n.id));
    }
    auto check_quality = [&](const ParamVector& q, const std::string& qw) {
      for (double x : q) {
        if (x < 0.0 || x > 1.0) {
          out.push_back(qw + ": quality values must lie in [0,1]");
          break;
        }
      }
    };
    check_quality(n.behavior.quality, where + ".nodes[" + std::to_string(i) + "].quality");
    for (std::size_t k = 0; k < n.behavior.drift.size(); ++k) {
      check_quality(n.behavior.drift[k].quality,
                    where + ".nodes[" + std::to_string(i) + "].drift[" + std::to_string(k) + "]");
    }
  }
  if (d.dtm_present && ids.count(d.dtm) == 0) {
    out.push_back(where + ".dtm: node " + std::to_string(d.dtm) + " is not a member");
  }
  std::set<std::string> policy_ids;
  for (const auto& p : d.policies) {
    if (!policy_ids.insert(p.id).second) {
      out.push_back(where + ".policies: duplicate policy id '" + p.id + "'");
    }
  }
  auto nonneg = [&](double v, const char* name) {
    if (v < 0.0) out.push_back(where + ".security." + name + ": negative");
  };
  nonneg(d.security.audit_data_size, "audit_data_size");
  nonneg(d.security.signature_file_size, "signature_file_size");
  nonneg(d.security.signature_update_freq, "signature_update_freq");
  nonneg(d.security.memory_scan_freq, "memory_scan_freq");
  nonneg(d.security.firewall_rules, "firewall_rules");
}

}  // namespace detail

// Semantic validation over a loaded scenario. Returns every violation found;
// an empty result means the scenario is runnable.
inline std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> out;
  if (sc.version != kScenarioVersion) {
    out.push_back("version: expected " + std::to_string(kScenarioVersion) + ", got " +
                  std::to_string(sc.version));
  }
  if (!(sc.duration > 0.0)) out.push_back("duration: must be > 0");

  const SimConfig& cfg = sc.config;
  if (std::abs(cfg.weights.alpha + cfg.weights.beta + cfg.weights.delta_w - 1.0) > 1e-9) {
    out.push_back("config: alpha + beta + delta_w must equal 1 (trust value weights)");
  }
  if (cfg.weights.alpha < 0 || cfg.weights.beta < 0 || cfg.weights.delta_w < 0) {
    out.push_back("config: trust value weights must be non-negative");
  }
  if (cfg.decay.lambda < 0) out.push_back("config.lambda: must be >= 0");
  if (cfg.verification.window < 1) out.push_back("config.window: must be >= 1");
  for (double dlt : cfg.verification.delta) {
    if (!(dlt > 0)) {
      out.push_back("config.delta: rectification threshold must be > 0");
      break;
    }
  }
  if (!(cfg.verification.max_age > 0)) out.push_back("config.max_feedback_age: must be > 0");
  if (cfg.batch_size < 1) out.push_back("config.batch_size: must be >= 1");
  if (!(cfg.batch_flush > 0)) out.push_back("config.batch_flush: must be > 0");
  if (cfg.top_p < 1) out.push_back("config.top_p: must be >= 1");
  if (!(cfg.heartbeat_period > 0)) out.push_back("config.heartbeat_period: must be > 0");
  if (!(cfg.heartbeat_timeout > 0)) out.push_back("config.heartbeat_timeout: must be > 0");
  if (!(cfg.sweep_period > 0)) out.push_back("config.sweep_period: must be > 0");
  if (!(cfg.staleness > 0)) out.push_back("config.staleness: must be > 0");
  if (cfg.success_threshold < 0 || cfg.success_threshold > 1) {
    out.push_back("config.success_threshold: must lie in [0,1]");
  }
  if (cfg.feedback_noise < 0) out.push_back("config.feedback_noise: must be >= 0");
  if (!(cfg.service_time > 0)) out.push_back("config.service_time: must be > 0");
  if (cfg.feedback_delay < 0) out.push_back("config.feedback_delay: must be >= 0");

  if (sc.domains.empty()) out.push_back("domains: at least one domain is required");
  std::set<DomainId> domain_ids;
  std::set<NodeId> node_ids;
  for (std::size_t i = 0; i < sc.domains.size(); ++i) {
    const auto& d = sc.domains[i];
    std::string where = "domains[" + std::to_string(i) + "]";
    if (!domain_ids.insert(d.id).second) {
      out.push_back(where + ".id: duplicate domain id '" + d.id + "'");
    }
    detail::validate_domain_spec(d, where, out);
    if (!d.dtm_present) out.push_back(where + ".dtm: missing");
    for (const auto& n : d.nodes) {
      if (!node_ids.insert(n.id).second) {
        out.push_back(where + ": node id " + std::to_string(n.id) +
                      " already used by another domain");
      }
    }
  }

  std::set<std::string> client_ids;
  for (std::size_t i = 0; i < sc.workload.clients.size(); ++i) {
    const auto& c = sc.workload.clients[i];
    std::string where = "workload.clients[" + std::to_string(i) + "]";
    if (!detail::valid_identifier(c.id)) out.push_back(where + ".id: not a valid identifier");
    if (!client_ids.insert(c.id).second) {
      out.push_back(where + ".id: duplicate client id '" + c.id + "'");
    }
    if (domain_ids.count(c.domain) == 0) {
      out.push_back(where + ".domain: unknown domain '" + c.domain + "'");
    }
    if (c.demand.kind == DemandSpec::Kind::Constant) {
      double sum = 0.0;
      for (double dp : c.demand.dp) {
        if (dp < 0 || dp > 100) {
          out.push_back(where + ".demand.dp: percentages must lie in [0,100]");
          break;
        }
        sum += dp;
      }
      if (!(sum > 0)) out.push_back(where + ".demand.dp: must not be all zero");
    } else {
      if (c.demand.low < 0 || c.demand.high > 100 || c.demand.low > c.demand.high) {
        out.push_back(where + ".demand: need 0 <= low <= high <= 100");
      }
      if (!(c.demand.high > 0)) out.push_back(where + ".demand.high: must be > 0");
    }
    if (c.rater.prob < 0 || c.rater.prob > 1) {
      out.push_back(where + ".rater.prob: must lie in [0,1]");
    }
  }
  if (sc.workload.arrival_rate < 0) out.push_back("workload.arrival_rate: must be >= 0");
  if (sc.workload.arrival_rate > 0 && sc.workload.clients.empty()) {
    out.push_back("workload.clients: arrival_rate > 0 needs at least one client");
  }

  for (std::size_t i = 0; i < sc.events.size(); ++i) {
    const auto& ev = sc.events[i];
    std::string where = "events[" + std::to_string(i) + "]";
    if (ev.time < 0 || ev.time > sc.duration) {
      out.push_back(where + ".time: outside [0, duration]");
    }
    switch (ev.kind) {
      case EventSpec::Kind::Crash:
      case EventSpec::Kind::Recover: {
        bool known = node_ids.count(ev.node) != 0;
        for (const auto& e2 : sc.events) {
          if (e2.domain) {
            for (const auto& n : e2.domain->nodes) {
              if (n.id == ev.node) known = true;
            }
          }
        }
        if (!known) {
          out.push_back(where + ".node: unknown node " + std::to_string(ev.node));
        }
        break;
      }
      case EventSpec::Kind::JoinDomain:
        if (ev.domain) {
          detail::validate_domain_spec(*ev.domain, where + ".domain", out);
          for (const auto& n : ev.domain->nodes) {
            if (node_ids.count(n.id) != 0) {
              out.push_back(where + ".domain: node id " + std::to_string(n.id) +
                            " already used by an initial domain");
            }
          }
        } else {
          out.push_back(where + ".domain: missing");
        }
        break;
      case EventSpec::Kind::SecurityUpdate:
        if (domain_ids.count(ev.domain_id) == 0) {
          out.push_back(where + ".domain_id: unknown domain '" + ev.domain_id + "'");
        }
        break;
    }
  }

  return out;
}

inline ScenarioLoad load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError(Errc::IoError, "cannot open scenario file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GridError(Errc::ParseError, path + ": " + e.what());
  }
  ScenarioLoad load = load_scenario(j);
  // Semantic checks can re-flag a field the loader already reported (missing
  // keys fall back to defaults); keep one line per distinct violation.
  std::set<std::string> seen(load.violations.begin(), load.violations.end());
  for (auto& v : validate(load.scenario)) {
    if (seen.insert(v).second) load.violations.push_back(std::move(v));
  }
  return load;
}

}  // namespace gridtrust
