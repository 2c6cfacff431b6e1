#pragma once

#include <map>
#include <queue>
#include <string>
#include <vector>

#include "gridtrust/cluster.hpp"
#include "gridtrust/core.hpp"
#include "gridtrust/demand.hpp"
#include "gridtrust/feedback.hpp"
#include "gridtrust/repository.hpp"
#include "gridtrust/rng.hpp"
#include "gridtrust/scenario.hpp"
#include "gridtrust/security.hpp"
#include "gridtrust/trace.hpp"
#include "gridtrust/trust.hpp"
#include "gridtrust/types.hpp"
#include "gridtrust/upper_level.hpp"

namespace gridtrust {

enum class EventKind {
  Arrival,
  FeedbackIssue,
  BatchFlush,
  Heartbeat,
  SweepTick,
  Crash,
  Recover,
  JoinDomain,
  SecurityUpdate,
};

struct Event {
  SimTime time = 0.0;
  std::uint64_t seq = 0;  // insertion order, breaks time ties deterministically
  EventKind kind = EventKind::Heartbeat;
  std::size_t index = 0;  // arrival index or scenario event index
  TxId tx = 0;
  NodeId node = 0;
  DomainId domain;
  std::uint64_t epoch = 0;  // batch epoch guard for flush timers
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

// A pre-generated service arrival: who asks when, and with which demand.
struct PlannedArrival {
  SimTime time = 0.0;
  std::size_t client = 0;
  std::array<double, kQosParamCount> dp{};
};

// Draws the whole workload up front from the seeded stream: exponential
// inter-arrival times, a uniformly chosen client, and the client's demand
// vector. Run-time draws (allocation, rating noise) continue the same stream.
inline std::vector<PlannedArrival> generate_workload(const Scenario& sc, Rng& rng) {
  std::vector<PlannedArrival> plan;
  if (sc.workload.arrival_rate <= 0.0 || sc.workload.clients.empty()) return plan;
  SimTime t = 0.0;
  for (;;) {
    t += rng.exponential(sc.workload.arrival_rate);
    if (t > sc.duration) break;
    PlannedArrival a;
    a.time = t;
    a.client = rng.pick_index(sc.workload.clients.size());
    const ClientSpec& c = sc.workload.clients[a.client];
    if (c.demand.kind == DemandSpec::Kind::Constant) {
      a.dp = c.demand.dp;
    } else {
      for (auto& v : a.dp) v = rng.uniform(c.demand.low, c.demand.high);
    }
    plan.push_back(a);
  }
  return plan;
}

struct Transaction {
  TxId id = 0;
  std::size_t client = 0;
  NodeId provider = 0;
  DomainId domain;
  ParamVector promised{};  // demand percentages scaled to [0,1]
  demand::DemandWeights weights;
  SimTime allocated_at = 0.0;
  SimTime completed_at = 0.0;
  ParamVector delivered{};
  bool feedback_done = false;
};

// Per-domain state owned by the DTM role (not by the node holding it), so a
// failover hands the whole thing to the newly elected DTM.
struct DomainRuntime {
  feedback::ParamHistory history;
  feedback::FeedbackPipeline pipeline;
  std::uint64_t batch_epoch = 0;
  std::map<NodeId, trust::RecommendationTally> tallies;
  double defense = 0.0;
  std::map<NodeId, BehaviorProfile> behavior;
  std::vector<Feedback> processed;  // flush order, rectification originals kept

  DomainRuntime() : history(5) {}
  explicit DomainRuntime(std::size_t window) : history(window) {}
};

struct RunSummary {
  Counters counters;
  std::uint64_t pending_feedback = 0;
  std::uint64_t open_transactions = 0;
  std::vector<std::string> conservation_errors;
};

class Platform {
 public:
  explicit Platform(Scenario sc) : sc_(std::move(sc)), rng_(sc_.seed) {}

  void run() {
    if (ran_) throw GridError(Errc::ValidationFailed, "platform already ran");
    ran_ = true;
    setup();
    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.time;
      handle(ev);
    }
  }

  const Scenario& scenario() const { return sc_; }
  const MetricsTrace& trace() const { return trace_; }
  const RepositoryHub& hub() const { return hub_; }
  const cluster::ClusterControl& control() const { return cluster_; }
  const std::map<TxId, Transaction>& transactions() const { return txs_; }
  const std::vector<Feedback>& processed_feedback(const DomainId& d) const {
    return domains_.at(d).processed;
  }

  RunSummary summary() const {
    RunSummary s;
    s.counters = trace_.counters();
    for (const auto& [id, rt] : domains_) s.pending_feedback += rt.pipeline.queue_length();
    for (const auto& [id, tx] : txs_) {
      if (!tx.feedback_done) ++s.open_transactions;
    }
    const Counters& c = s.counters;
    auto expect = [&](bool ok, const std::string& what) {
      if (!ok) s.conservation_errors.push_back(what);
    };
    expect(c.arrivals == c.allocations + c.rejected,
           "arrivals != allocations + rejected");
    expect(c.feedback_scheduled == c.feedback_received + c.feedback_discarded,
           "scheduled feedback != received + discarded");
    expect(c.feedback_received ==
               c.feedback_verified + c.feedback_rectified + s.pending_feedback,
           "received feedback != verified + rectified + pending");
    expect(c.trust_updates == c.feedback_verified + c.feedback_rectified,
           "trust updates != processed feedback");
    return s;
  }

 private:
  void schedule(Event ev) {
    if (ev.time > sc_.duration) return;
    ev.seq = next_seq_++;
    queue_.push(ev);
  }

  void setup() {
    arrivals_ = generate_workload(sc_, rng_);

    for (const auto& ds : sc_.domains) {
      DomainProfile profile = ds.to_profile(sc_.config.scales);
      upper::register_domain(hub_, profile, 0.0);
      std::vector<cluster::Transition> log;
      cluster_.add_domain(ds.id, profile.node_ids, 0.0, &log);
      record_transitions(log);
      install_runtime(ds, profile);
      trace_.log(0.0, "registered domain " + ds.id);
    }
    for (const auto& c : sc_.workload.clients) {
      if (!c.registered) continue;
      Certificate cert{client_principal(c.domain, c.id).id, "grm", "tok-client-" + c.id, true};
      hub_.put_certificate(dtm_principal(c.domain), c.domain, cert, 0.0);
    }

    for (std::size_t i = 0; i < arrivals_.size(); ++i) {
      Event ev;
      ev.time = arrivals_[i].time;
      ev.kind = EventKind::Arrival;
      ev.index = i;
      schedule(ev);
    }
    for (std::uint64_t k = 1; static_cast<double>(k) * sc_.config.heartbeat_period <= sc_.duration;
         ++k) {
      Event ev;
      ev.time = static_cast<double>(k) * sc_.config.heartbeat_period;
      ev.kind = EventKind::Heartbeat;
      schedule(ev);
    }
    for (std::uint64_t k = 1; static_cast<double>(k) * sc_.config.sweep_period <= sc_.duration;
         ++k) {
      Event ev;
      ev.time = static_cast<double>(k) * sc_.config.sweep_period;
      ev.kind = EventKind::SweepTick;
      schedule(ev);
    }
    for (std::size_t i = 0; i < sc_.events.size(); ++i) {
      const EventSpec& es = sc_.events[i];
      Event ev;
      ev.time = es.time;
      ev.index = i;
      switch (es.kind) {
        case EventSpec::Kind::Crash: ev.kind = EventKind::Crash; ev.node = es.node; break;
        case EventSpec::Kind::Recover: ev.kind = EventKind::Recover; ev.node = es.node; break;
        case EventSpec::Kind::JoinDomain: ev.kind = EventKind::JoinDomain; break;
        case EventSpec::Kind::SecurityUpdate: ev.kind = EventKind::SecurityUpdate; break;
      }
      schedule(ev);
    }
  }

  void install_runtime(const DomainSpec& ds, const DomainProfile& profile) {
    DomainRuntime rt(sc_.config.verification.window);
    rt.defense = security::self_defense(profile.security, sc_.config.security_weights).value;
    for (const auto& n : ds.nodes) rt.behavior[n.id] = n.behavior;
    domains_.emplace(ds.id, std::move(rt));
  }

  void record_transitions(const std::vector<cluster::Transition>& log) {
    for (const auto& t : log) {
      trace_.event(t.time, TraceKind::Membership, 0, "scope=" + t.scope + " " + t.what);
      trace_.log(t.time, "membership " + t.scope + ": " + t.what);
      ++trace_.counters().elections;
    }
  }

  void handle(const Event& ev) {
    switch (ev.kind) {
      case EventKind::Arrival: on_arrival(arrivals_[ev.index]); break;
      case EventKind::FeedbackIssue: on_feedback_issue(ev.tx); break;
      case EventKind::BatchFlush: on_flush_timer(ev.domain, ev.epoch); break;
      case EventKind::Heartbeat: on_heartbeat(); break;
      case EventKind::SweepTick: on_sweep(); break;
      case EventKind::Crash: on_crash(ev.node); break;
      case EventKind::Recover: on_recover(ev.node); break;
      case EventKind::JoinDomain: on_join(sc_.events[ev.index]); break;
      case EventKind::SecurityUpdate: on_security_update(sc_.events[ev.index]); break;
    }
  }

  // Routing preamble shared by every lower-level request: a live DTM must
  // exist, the requester must authenticate, then the dispatch tree applies.
  enum class Gate { NoDtm, Denied, Routed };
  std::pair<Gate, cluster::Route> route(const Request& req, const DomainId& domain) {
    const cluster::Membership& m = cluster_.membership(domain);
    if (m.offline || !cluster_.is_alive(m.dtm)) return {Gate::NoDtm, cluster::Route::Terminated};
    if (security::authenticate_request(req, hub_, domain) != Decision::Allow) {
      ++trace_.counters().denied_requests;
      return {Gate::Denied, cluster::Route::Terminated};
    }
    return {Gate::Routed, cluster::classify(req)};
  }

  static const char* reason_of(const GridError& e) {
    switch (e.code()) {
      case Errc::DegenerateDemand: return "degenerate_demand";
      case Errc::NoProviders: return "no_providers";
      case Errc::ValidationFailed: return "invalid_demand";
      default: return "error";
    }
  }

  void on_arrival(const PlannedArrival& a) {
    const ClientSpec& c = sc_.workload.clients[a.client];
    ++trace_.counters().arrivals;
    trace_.event(now_, TraceKind::Arrival, 0, "client=" + c.id + " domain=" + c.domain);

    DemandRequest dem;
    dem.dp = a.dp;
    dem.service_type = c.service_type;
    dem.client_id = client_principal(c.domain, c.id).id;
    Request req;
    req.kind = RequestKind::ServiceRequest;
    req.scope = RequestScope::IntraDomain;
    req.payload = ServicePayload{dem};
    req.service_type = c.service_type;
    req.requester = dem.client_id;

    auto [gate, dest] = route(req, c.domain);
    if (gate != Gate::Routed || dest != cluster::Route::DemandPipeline) {
      ++trace_.counters().rejected;
      trace_.event(now_, TraceKind::Rejected, 0,
                   "client=" + c.id + " reason=" + (gate == Gate::NoDtm ? "no_dtm" : "denied"));
      return;
    }
    try {
      allocate_service(dem, a.client, c.domain);
    } catch (const GridError& e) {
      ++trace_.counters().rejected;
      trace_.event(now_, TraceKind::Rejected, 0,
                   "client=" + c.id + " reason=" + std::string(reason_of(e)));
    }
  }

  void allocate_service(const DemandRequest& dem, std::size_t client, const DomainId& domain) {
    demand::DemandWeights w = demand::normalize_demand(dem);
    std::vector<TrustRecord> providers;
    for (const auto& rec : hub_.trust_records(dtm_principal(domain), domain)) {
      if (cluster_.is_alive(rec.node_id)) providers.push_back(rec);
    }
    std::vector<double> dtv = demand::demand_trust(w, providers);
    std::vector<NodeId> ids;
    for (const auto& rec : providers) ids.push_back(rec.node_id);
    std::vector<NodeId> cands = demand::candidates(dtv, ids, sc_.config.top_p);
    demand::SelectionTable table = demand::selection_table(providers);
    for (double v : dtv) {
      if (v < -1e-12 || v > 1.0 + 1e-12) {
        throw GridError(Errc::ValidationFailed, "demand trust value escaped [0,1]");
      }
    }
    double sp_total = 0.0;
    for (double p : table.sp) {
      if (p < 0.0 || p > 1.0 + 1e-12) {
        throw GridError(Errc::ValidationFailed, "selection probability escaped [0,1]");
      }
      sp_total += p;
    }
    if (std::abs(sp_total - 1.0) > 1e-12) {
      throw GridError(Errc::ValidationFailed, "selection probabilities do not sum to 1");
    }
    NodeId provider = demand::allocate(cands, table, rng_);

    Transaction tx;
    tx.id = next_tx_++;
    tx.client = client;
    tx.provider = provider;
    tx.domain = domain;
    for (std::size_t i = 0; i < kQosParamCount; ++i) tx.promised[i] = dem.dp[i] / 100.0;
    tx.weights = w;
    tx.allocated_at = now_;
    tx.completed_at = now_ + sc_.config.service_time;
    txs_[tx.id] = tx;

    std::string cand_list, sp_slice;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i) {
        cand_list += ';';
        sp_slice += ';';
      }
      cand_list += std::to_string(cands[i]);
      sp_slice += format_real(table.sp_of(cands[i]));
    }
    ++trace_.counters().allocations;
    trace_.event(now_, TraceKind::Allocation, provider,
                 "tx=" + std::to_string(tx.id) + " client=" + sc_.workload.clients[client].id +
                     " cands=" + cand_list + " sp=" + sp_slice);

    SimTime issue_at = tx.completed_at + sc_.config.feedback_delay;
    if (issue_at <= sc_.duration) {
      Event ev;
      ev.time = issue_at;
      ev.kind = EventKind::FeedbackIssue;
      ev.tx = tx.id;
      schedule(ev);
      ++trace_.counters().feedback_scheduled;
    }
  }

  void on_feedback_issue(TxId id) {
    auto tx_it = txs_.find(id);
    if (tx_it == txs_.end()) {
      // Identification check: feedback for a transaction nobody allocated.
      ++trace_.counters().feedback_discarded;
      trace_.event(now_, TraceKind::Discard, 0,
                   "tx=" + std::to_string(id) + " reason=unknown_tx");
      return;
    }
    Transaction& tx = tx_it->second;
    const ClientSpec& c = sc_.workload.clients[tx.client];
    DomainRuntime& rt = domains_.at(tx.domain);

    ParamVector delivered{};
    if (cluster_.is_alive(tx.provider)) {
      delivered = rt.behavior.at(tx.provider).quality_at(tx.completed_at);
    }
    tx.delivered = delivered;

    ParamVector ratings{};
    bool outlier = c.rater.kind == RaterSpec::Kind::Lowball && rng_.bernoulli(c.rater.prob);
    if (!outlier) {
      double eta = sc_.config.feedback_noise;
      for (std::size_t i = 0; i < kQosParamCount; ++i) {
        ratings[i] = clamp01(delivered[i] + rng_.uniform(-eta, eta));
      }
    }

    Feedback fb;
    fb.tx_id = id;
    fb.provider = tx.provider;
    fb.ratings = ratings;
    fb.issued_at = now_;

    Request req;
    req.kind = RequestKind::Feedback;
    req.scope = RequestScope::IntraDomain;
    req.payload = FeedbackPayload{fb};
    req.requester = client_principal(c.domain, c.id).id;

    auto discard = [&](const char* reason) {
      ++trace_.counters().feedback_discarded;
      trace_.event(now_, TraceKind::Discard, tx.provider,
                   "tx=" + std::to_string(id) + " reason=" + std::string(reason));
    };

    auto [gate, dest] = route(req, tx.domain);
    if (gate == Gate::NoDtm) return discard("no_dtm");
    if (gate == Gate::Denied || dest != cluster::Route::FeedbackPipeline) return discard("denied");

    // Legitimacy: only the client that was served may rate the transaction.
    // Time check: a report older than the freshness bound is never collected.
    if (req.requester != client_principal(c.domain, c.id).id) return discard("wrong_issuer");
    if (fb.issued_at - tx.completed_at > sc_.config.verification.max_age) return discard("stale");

    try {
      rt.pipeline.collect(fb);
    } catch (const GridError&) {
      return discard("duplicate");
    }
    ++trace_.counters().feedback_received;

    if (rt.pipeline.queue_length() >= sc_.config.batch_size) {
      flush_batch(tx.domain);
    } else if (rt.pipeline.queue_length() == 1) {
      Event ev;
      ev.time = now_ + sc_.config.batch_flush;
      ev.kind = EventKind::BatchFlush;
      ev.domain = tx.domain;
      ev.epoch = rt.batch_epoch;
      schedule(ev);
    }
  }

  void on_flush_timer(const DomainId& domain, std::uint64_t epoch) {
    DomainRuntime& rt = domains_.at(domain);
    if (epoch != rt.batch_epoch || !rt.pipeline.pending()) return;
    flush_batch(domain);
  }

  void flush_batch(const DomainId& domain) {
    DomainRuntime& rt = domains_.at(domain);
    const cluster::Membership& m = cluster_.membership(domain);
    if (m.offline || !cluster_.is_alive(m.dtm)) {
      // No live DTM right now; the buffered batch survives until one exists.
      Event ev;
      ev.time = now_ + sc_.config.batch_flush;
      ev.kind = EventKind::BatchFlush;
      ev.domain = domain;
      ev.epoch = rt.batch_epoch;
      schedule(ev);
      return;
    }
    ++rt.batch_epoch;
    Principal dtm = dtm_principal(domain);
    std::size_t drained = 0;
    while (rt.pipeline.pending()) {
      Feedback fb = rt.pipeline.next();
      Feedback verified = feedback::verify(fb, sc_.config.verification, rt.history);
      if (verified.verdict == VerdictKind::Rectified) {
        ++trace_.counters().feedback_rectified;
        for (std::size_t i = 0; i < kQosParamCount; ++i) {
          if ((*verified.original)[i] != verified.ratings[i]) {
            trace_.rectification(
                {verified.tx_id, verified.provider, i, (*verified.original)[i],
                 verified.ratings[i]});
          }
        }
      } else {
        ++trace_.counters().feedback_verified;
      }
      trace_.event(now_, TraceKind::Verdict, verified.provider,
                   "tx=" + std::to_string(verified.tx_id) + " verdict=" +
                       (verified.verdict == VerdictKind::Rectified ? "rectified" : "verified"));

      feedback::update_repository(hub_, domain, verified, rt.history, now_);
      rt.processed.push_back(verified);

      Transaction& tx = txs_.at(verified.tx_id);
      TrustRecord rec = hub_.get_trust(dtm, domain, verified.provider);
      trust::RecommendationTally& tally = rt.tallies[verified.provider];
      double t_old = rec.trust;
      double dt = now_ - rec.updated_at;
      trust::EvaluationOutcome out = trust::evaluate_transaction(
          tx.promised, verified.ratings, tx.weights, rec, tally,
          security::DefenseScore{rt.defense}, sc_.config.weights, sc_.config.decay,
          sc_.config.success_threshold, now_);
      if (out.record.trust < -1e-12 || out.record.trust > 1.0 + 1e-12) {
        throw GridError(Errc::ValidationFailed, "trust value escaped [0,1]");
      }
      hub_.put_trust(dtm, domain, out.record, now_);
      ++trace_.counters().trust_updates;
      trace_.trust_update(now_, verified.provider, out.s, out.re, out.sd, out.tv,
                          out.record.trust, out.record.n, false,
                          "t_old=" + format_real(t_old) + " dt=" + format_real(dt));
      tx.feedback_done = true;
      ++drained;
    }
    trace_.log(now_, domain + ": flushed batch of " + std::to_string(drained));
  }

  void on_heartbeat() {
    std::vector<cluster::Transition> log;
    cluster_.check_failures(now_, sc_.config.heartbeat_timeout, &log);
    record_transitions(log);
  }

  void on_sweep() {
    for (auto& [id, rt] : domains_) {
      const cluster::Membership& m = cluster_.membership(id);
      if (m.offline || !cluster_.is_alive(m.dtm)) continue;
      Principal dtm = dtm_principal(id);
      std::vector<TrustRecord> records = hub_.trust_records(dtm, id);
      std::map<NodeId, SimTime> last_touch;
      for (const auto& rec : records) last_touch[rec.node_id] = rec.updated_at;
      std::vector<trust::SweepEntry> touched =
          trust::monitor_sweep(records, now_, sc_.config.staleness, sc_.config.decay);
      if (touched.empty()) continue;
      std::map<NodeId, const TrustRecord*> by_id;
      for (const auto& rec : records) by_id[rec.node_id] = &rec;
      for (const auto& entry : touched) {
        const TrustRecord& rec = *by_id.at(entry.node);
        hub_.put_trust(dtm, id, rec, now_);
        ++trace_.counters().sweep_updates;
        trace_.trust_update(now_, entry.node, 0.0, 0.0, 0.0, 0.5, entry.after, rec.n, true,
                            "t_old=" + format_real(entry.before) + " dt=" +
                                format_real(now_ - last_touch.at(entry.node)));
      }
      trace_.log(now_, id + ": monitoring re-evaluated " + std::to_string(touched.size()) +
                           " stale records");
    }
  }

  void on_crash(NodeId n) {
    cluster_.mark_down(n, now_);
    trace_.event(now_, TraceKind::Membership, n, "node=" + std::to_string(n) + " status=down");
    trace_.log(now_, "node " + std::to_string(n) + " crashed");
  }

  void on_recover(NodeId n) {
    std::vector<cluster::Transition> log;
    cluster_.mark_up(n, now_, &log);
    trace_.event(now_, TraceKind::Membership, n, "node=" + std::to_string(n) + " status=up");
    trace_.log(now_, "node " + std::to_string(n) + " recovered");
    record_transitions(log);
  }

  void on_join(const EventSpec& es) {
    const DomainSpec& ds = *es.domain;
    auto refuse = [&](const std::string& stage) {
      trace_.event(now_, TraceKind::Join, 0, "domain=" + ds.id + " result=refused stage=" + stage);
      trace_.log(now_, "join of " + ds.id + " refused (" + stage + ")");
    };
    if (!cluster_.grm_available()) return refuse("grm_unavailable");

    DomainProfile profile;
    try {
      profile = ds.to_profile(sc_.config.scales);
    } catch (const GridError&) {
      return refuse("invalid_profile");
    }

    std::vector<upper::DtmEndpoint> endpoints;
    for (const auto& [dom, dtm] : cluster_.dtm_endpoints()) {
      endpoints.push_back(upper::DtmEndpoint{dom, dtm});
    }
    upper::JoinOutcome outcome = upper::add_domain(
        hub_, profile, sc_.grid_policies, sc_.trusted_issuers, endpoints,
        [](const DomainId&, const DomainProfile&) { return true; }, now_);
    if (!outcome.joined) return refuse(outcome.refused_stage);

    std::vector<cluster::Transition> log;
    cluster_.add_domain(ds.id, profile.node_ids, now_, &log);
    record_transitions(log);
    install_runtime(ds, profile);

    trace_.event(now_, TraceKind::Join, 0,
                 "domain=" + ds.id + " result=joined receipts=" +
                     std::to_string(outcome.receipts.size()));
    for (const auto& r : outcome.receipts) {
      trace_.event(now_, TraceKind::Receipt, 0,
                   "domain=" + r.domain + " status=" +
                       (r.status == upper::Receipt::Status::Delivered ? "delivered" : "failed"));
    }
    trace_.log(now_, "domain " + ds.id + " joined; " +
                         std::to_string(outcome.receipts.size()) + " propagation receipts");
  }

  void on_security_update(const EventSpec& es) {
    Request req;
    req.kind = RequestKind::Security;
    req.scope = RequestScope::IntraDomain;
    req.payload = SecurityPayload{UpdateSecurityProfile{es.security}};
    req.requester = dtm_principal(es.domain_id).id;

    auto dropped = [&](const char* reason) {
      trace_.event(now_, TraceKind::SecurityUpdate, 0,
                   "domain=" + es.domain_id + " result=dropped reason=" + std::string(reason));
    };
    auto [gate, dest] = route(req, es.domain_id);
    if (gate == Gate::NoDtm) return dropped("no_dtm");
    if (gate == Gate::Denied || dest != cluster::Route::SecurityComponent) {
      return dropped("denied");
    }
    try {
      SecurityAttributes attrs = security::normalize_attributes(es.security, sc_.config.scales);
      DomainProfile profile = hub_.get_domain_property(grm_principal(), es.domain_id);
      profile.security = attrs;
      hub_.put_domain_property(grm_principal(), profile, now_);
      DomainRuntime& rt = domains_.at(es.domain_id);
      rt.defense = security::self_defense(attrs, sc_.config.security_weights).value;
      trace_.event(now_, TraceKind::SecurityUpdate, 0,
                   "domain=" + es.domain_id + " df=" + format_real(rt.defense));
      trace_.log(now_, es.domain_id + ": security profile updated, defense " +
                           format_real(rt.defense));
    } catch (const GridError&) {
      dropped("invalid_criteria");
    }
  }

  Scenario sc_;
  Rng rng_;
  RepositoryHub hub_;
  cluster::ClusterControl cluster_;
  MetricsTrace trace_;
  std::map<DomainId, DomainRuntime> domains_;
  std::map<TxId, Transaction> txs_;
  TxId next_tx_ = 1;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_seq_ = 0;
  std::vector<PlannedArrival> arrivals_;
  SimTime now_ = 0.0;
  bool ran_ = false;
};

}  // namespace gridtrust
