// Ring election, failover control plane, dispatch tree, and request
// authentication.

#include <catch2/catch_amalgamated.hpp>

#include <gridtrust/cluster.hpp>
#include <gridtrust/security.hpp>

using namespace gridtrust;

TEST_CASE("ring election picks the largest live id and a backup") {
  auto all = [](NodeId) { return true; };
  auto result = cluster::ring_elect({3, 7, 5}, all);
  REQUIRE(result.leader == 7);
  REQUIRE(result.backup == 5);
  REQUIRE(result.messages == 6);  // two laps over three live members
}

TEST_CASE("a downed leader is skipped by the next election") {
  auto result = cluster::ring_elect({3, 7, 5}, [](NodeId n) { return n != 7; });
  REQUIRE(result.leader == 5);
  REQUIRE(result.backup == 3);
  REQUIRE(result.messages == 4);
}

TEST_CASE("an election over a dead ring fails loudly") {
  try {
    cluster::ring_elect({1, 2}, [](NodeId) { return false; });
    FAIL("expected empty-ring error");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::EmptyRing);
  }
}

TEST_CASE("a single survivor leads with no backup") {
  auto result = cluster::ring_elect({4}, [](NodeId) { return true; });
  REQUIRE(result.leader == 4);
  REQUIRE_FALSE(result.backup.has_value());
  REQUIRE(result.messages == 2);
}

TEST_CASE("adding domains elects their manager and the grid manager") {
  cluster::ClusterControl control;
  control.add_domain("alpha", {1, 2, 3}, 0.0);
  REQUIRE(control.membership("alpha").dtm == 3);
  REQUIRE(control.membership("alpha").dtm_backup == 2);
  REQUIRE(control.grm() == 3);

  control.add_domain("beta", {10, 11, 12}, 0.0);
  REQUIRE(control.membership("beta").dtm == 12);
  // the grid manager is elected among the domain managers
  REQUIRE(control.grm() == 12);
  REQUIRE(control.grm_backup() == 3);
  REQUIRE(control.grm_available());
  REQUIRE(control.has_domain("beta"));
  REQUIRE_FALSE(control.has_domain("gamma"));
  REQUIRE(control.domain_of(11) == DomainId("beta"));
  REQUIRE_FALSE(control.domain_of(99).has_value());
}

TEST_CASE("failover promotes the backup after the timeout") {
  cluster::ClusterControl control;
  control.add_domain("alpha", {1, 2, 3}, 0.0);
  control.add_domain("beta", {10, 11, 12}, 0.0);

  control.mark_down(12, 50.0);
  REQUIRE_FALSE(control.grm_available());  // the holder is down, not yet replaced

  // before the timeout nothing changes
  auto early = control.check_failures(52.9, 3.0);
  REQUIRE(early.empty());
  REQUIRE(control.membership("beta").dtm == 12);

  std::vector<cluster::Transition> log;
  control.check_failures(53.0, 3.0, &log);
  REQUIRE(control.membership("beta").dtm == 11);
  REQUIRE(control.membership("beta").dtm_backup == 10);
  REQUIRE(control.grm() == 11);
  REQUIRE(control.grm_available());
  REQUIRE(log.size() == 2);
  REQUIRE(log[0].scope == "beta");
  REQUIRE(log[0].what == "dtm=11 backup=10");
  REQUIRE(log[1].scope == "grid");
  REQUIRE(log[1].what == "grm=11 backup=3");
}

TEST_CASE("a domain with no live members goes offline") {
  cluster::ClusterControl control;
  control.add_domain("alpha", {1, 2, 3}, 0.0);
  control.add_domain("gamma", {20}, 0.0);
  REQUIRE(control.grm() == 20);

  control.mark_down(20, 10.0);
  std::vector<cluster::Transition> log;
  control.check_failures(13.0, 3.0, &log);
  REQUIRE(control.membership("gamma").offline);
  REQUIRE(log.size() == 2);
  REQUIRE(log[0].scope == "gamma");
  REQUIRE(log[0].what == "offline");
  REQUIRE(log[1].what == "grm=3");  // single remaining manager, no backup

  auto endpoints = control.dtm_endpoints();
  REQUIRE(endpoints.size() == 2);
  REQUIRE(endpoints[0].first == "alpha");
  REQUIRE(endpoints[0].second == 3);
  REQUIRE(endpoints[1].first == "gamma");
  REQUIRE_FALSE(endpoints[1].second.has_value());

  SECTION("a recovering member brings the domain back") {
    std::vector<cluster::Transition> recovery;
    control.mark_up(20, 20.0, &recovery);
    REQUIRE_FALSE(control.membership("gamma").offline);
    REQUIRE(control.membership("gamma").dtm == 20);
    REQUIRE(recovery.size() == 1);
    REQUIRE(recovery[0].what == "dtm=20");
    // grid management stays with the incumbent until it fails
    REQUIRE(control.grm() == 3);
  }
}

TEST_CASE("grid management disappears and returns with the last domain") {
  cluster::ClusterControl control;
  control.add_domain("alpha", {1}, 0.0);
  REQUIRE(control.grm_available());

  control.mark_down(1, 0.0);
  std::vector<cluster::Transition> log;
  control.check_failures(3.0, 3.0, &log);
  REQUIRE(control.membership("alpha").offline);
  REQUIRE_FALSE(control.grm_available());
  REQUIRE(log.back().scope == "grid");
  REQUIRE(log.back().what == "grm unavailable");

  std::vector<cluster::Transition> recovery;
  control.mark_up(1, 5.0, &recovery);
  REQUIRE(control.grm_available());
  REQUIRE(control.grm() == 1);
  REQUIRE(recovery.size() == 2);  // domain election, then grid election
  REQUIRE(recovery[1].what == "grm=1");
}

TEST_CASE("live member listing reflects liveness") {
  cluster::ClusterControl control;
  control.add_domain("alpha", {1, 2, 3}, 0.0);
  control.mark_down(2, 1.0);
  REQUIRE(control.live_members("alpha") == std::vector<NodeId>{1, 3});
  REQUIRE_FALSE(control.is_alive(2));
  control.mark_up(2);
  REQUIRE(control.is_alive(2));
  REQUIRE(control.live_members("alpha") == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("requests route by kind and scope") {
  Request req;
  req.kind = RequestKind::ServiceRequest;
  req.scope = RequestScope::InterDomain;
  REQUIRE(cluster::classify(req) == cluster::Route::DemandPipeline);

  req.kind = RequestKind::Feedback;
  REQUIRE(cluster::classify(req) == cluster::Route::FeedbackPipeline);

  req.kind = RequestKind::Security;
  req.scope = RequestScope::IntraDomain;
  REQUIRE(cluster::classify(req) == cluster::Route::SecurityComponent);

  req.scope = RequestScope::InterDomain;  // security handling never crosses domains
  REQUIRE(cluster::classify(req) == cluster::Route::Terminated);
}

TEST_CASE("request authentication checks the certificate on file") {
  RepositoryHub hub;
  Principal dtm = dtm_principal("alpha");
  hub.put_certificate(dtm, "alpha", {"client:c1", "grm", "tok-c1", true}, 0.0);
  hub.put_certificate(dtm, "alpha", {"client:c2", "grm", "tok-c2", false}, 0.0);

  Request req;
  req.requester = "client:c1";
  REQUIRE(security::authenticate_request(req, hub, "alpha") == Decision::Allow);
  req.requester = "client:c2";  // revoked
  REQUIRE(security::authenticate_request(req, hub, "alpha") == Decision::Deny);
  req.requester = "client:unknown";
  REQUIRE(security::authenticate_request(req, hub, "alpha") == Decision::Deny);
}

TEST_CASE("manager certificates can only name known manager identities") {
  RepositoryHub hub;
  std::set<PrincipalId> known{"dtm:alpha"};
  security::register_dtm_certificate(hub, "alpha", {"dtm:alpha", "grm", "tok", true}, known, 1.0);
  REQUIRE(hub.has_certificate(dtm_principal("alpha"), "alpha", "dtm:alpha"));
  try {
    security::register_dtm_certificate(hub, "alpha", {"dtm:evil", "grm", "tok", true}, known, 2.0);
    FAIL("expected unknown-subject error");
  } catch (const GridError& e) {
    REQUIRE(e.code() == Errc::UnknownSubject);
  }
}
