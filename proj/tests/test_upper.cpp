// Domain admission: authentication, policy mapping, registration, and
// propagation of new-domain properties.

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <gridtrust/upper_level.hpp>

using namespace gridtrust;

namespace {

DomainProfile sample_profile(const std::string& id, std::vector<NodeId> nodes, NodeId dtm) {
  DomainProfile p;
  p.domain_id = id;
  p.node_ids = std::move(nodes);
  p.dtm_id = dtm;
  p.credential = {"rootCA", "cred-" + id, true};
  return p;
}

PolicySet grid_policies(std::initializer_list<std::string> predicates) {
  PolicySet set;
  int i = 0;
  for (const auto& pred : predicates) set.add({"g" + std::to_string(++i), pred});
  return set;
}

}  // namespace

TEST_CASE("authentication needs a valid credential from a trusted issuer") {
  std::set<std::string> issuers{"rootCA"};
  REQUIRE(upper::authenticate_domain({"rootCA", "tok", true}, issuers) ==
          upper::AuthResult::Accepted);
  REQUIRE(upper::authenticate_domain({"shadow", "tok", true}, issuers) ==
          upper::AuthResult::Rejected);
  REQUIRE(upper::authenticate_domain({"rootCA", "tok", false}, issuers) ==
          upper::AuthResult::Rejected);
  REQUIRE(upper::authenticate_domain({"rootCA", "", true}, issuers) ==
          upper::AuthResult::Rejected);
  REQUIRE(upper::authenticate_domain({"", "tok", true}, issuers) == upper::AuthResult::Rejected);
}

TEST_CASE("admission requires satisfying at least half the grid policies") {
  PolicySet grid = grid_policies({"a", "b", "c", "d", "e"});  // k = 5

  PolicySet two;
  two.add({"x1", "a"});
  two.add({"x2", "b"});
  auto verdict = upper::policy_mapping(two, grid);
  REQUIRE(verdict.required_k == 5);
  REQUIRE(verdict.l == 2);
  REQUIRE_FALSE(verdict.authorized);  // 2*2 < 5

  PolicySet three = two;
  three.add({"x3", "c"});
  REQUIRE(upper::policy_mapping(three, grid).authorized);  // 2*3 >= 5
  REQUIRE(upper::policy_mapping(three, grid).satisfied ==
          std::vector<std::string>{"g1", "g2", "g3"});
}

TEST_CASE("half of an even policy count is enough") {
  PolicySet grid = grid_policies({"a", "b", "c", "d"});  // k = 4
  PolicySet two;
  two.add({"x1", "a"});
  two.add({"x2", "d"});
  REQUIRE(upper::policy_mapping(two, grid).authorized);  // 2*2 >= 4
}

TEST_CASE("an empty grid policy set admits anyone") {
  PolicySet none;
  REQUIRE(upper::policy_mapping(none, PolicySet{}).authorized);
}

TEST_CASE("exhaustive admission gate for small policy counts") {
  for (std::size_t k = 0; k <= 8; ++k) {
    PolicySet grid;
    for (std::size_t i = 0; i < k; ++i) grid.add({"g" + std::to_string(i), "p" + std::to_string(i)});
    for (std::size_t l = 0; l <= k; ++l) {
      PolicySet domain;
      for (std::size_t i = 0; i < l; ++i) {
        domain.add({"d" + std::to_string(i), "p" + std::to_string(i)});
      }
      auto verdict = upper::policy_mapping(domain, grid);
      bool expected = l >= (k + 1) / 2;  // l >= ceil(k/2)
      REQUIRE(verdict.authorized == expected);
      REQUIRE(verdict.l == l);
    }
  }
}

TEST_CASE("registration seeds neutral trust and certificates for every member") {
  RepositoryHub hub;
  auto profile = sample_profile("alpha", {1, 2, 3}, 3);
  upper::register_domain(hub, profile, 5.0);

  REQUIRE(hub.has_domain_property(grm_principal(), "alpha"));
  Principal dtm = dtm_principal("alpha");
  for (NodeId node : {1u, 2u, 3u}) {
    auto rec = hub.get_trust(dtm, "alpha", node);
    REQUIRE(rec.trust == 0.5);
    REQUIRE(rec.n == 0);
    REQUIRE(rec.updated_at == 5.0);
    REQUIRE(hub.has_certificate(dtm, "alpha", "node:" + std::to_string(node)));
  }
  auto cert = hub.get_certificate(dtm, "alpha", "dtm:alpha");
  REQUIRE(cert.issuer == "grm");
  REQUIRE(cert.valid);

  REQUIRE_THROWS_AS(upper::register_domain(hub, profile, 6.0), GridError);
}

TEST_CASE("registration validates the profile first") {
  RepositoryHub hub;
  DomainProfile bad;
  bad.domain_id = "empty";
  REQUIRE_THROWS_AS(upper::register_domain(hub, bad, 0.0), GridError);
  REQUIRE_FALSE(hub.has_domain_property(grm_principal(), "empty"));
}

TEST_CASE("propagation reaches every other domain with a live manager") {
  auto profile = sample_profile("delta", {40}, 40);
  std::vector<upper::DtmEndpoint> endpoints{
      {"alpha", 3}, {"beta", 12}, {"gamma", std::nullopt}, {"delta", 40}};
  std::vector<DomainId> delivered;
  auto receipts = upper::propagate(profile, endpoints, [&](const DomainId& d, const DomainProfile&) {
    delivered.push_back(d);
    return true;
  });

  // the joining domain itself is skipped
  REQUIRE(receipts.size() == 3);
  REQUIRE(receipts[0].domain == "alpha");
  REQUIRE(receipts[0].status == upper::Receipt::Status::Delivered);
  REQUIRE(receipts[1].status == upper::Receipt::Status::Delivered);
  REQUIRE(receipts[2].domain == "gamma");
  REQUIRE(receipts[2].status == upper::Receipt::Status::Failed);
  REQUIRE(delivered == std::vector<DomainId>{"alpha", "beta"});
}

TEST_CASE("a failing delivery shows up as a failed receipt") {
  auto profile = sample_profile("delta", {40}, 40);
  std::vector<upper::DtmEndpoint> endpoints{{"alpha", 3}};
  auto receipts =
      upper::propagate(profile, endpoints, [](const DomainId&, const DomainProfile&) { return false; });
  REQUIRE(receipts.size() == 1);
  REQUIRE(receipts[0].status == upper::Receipt::Status::Failed);
}

TEST_CASE("the full join sequence stops at the first failing stage") {
  std::set<std::string> issuers{"rootCA"};
  PolicySet grid = grid_policies({"a", "b"});
  std::vector<upper::DtmEndpoint> endpoints{{"alpha", 3}};
  auto deliver = [](const DomainId&, const DomainProfile&) { return true; };

  SECTION("untrusted issuer is refused before any write") {
    RepositoryHub hub;
    std::string before = hub.snapshot();
    auto profile = sample_profile("mallory", {90}, 90);
    profile.credential.issuer = "shadow-ca";
    auto outcome = upper::add_domain(hub, profile, grid, issuers, endpoints, deliver, 1.0);
    REQUIRE_FALSE(outcome.joined);
    REQUIRE(outcome.refused_stage == "authentication");
    REQUIRE(hub.snapshot() == before);
    REQUIRE(hub.journal().size() == 0);
  }

  SECTION("insufficient policy overlap is refused before any write") {
    RepositoryHub hub;
    auto profile = sample_profile("laxcorp", {91}, 91);
    // no declared policies: l = 0 < ceil(2/2)
    auto outcome = upper::add_domain(hub, profile, grid, issuers, endpoints, deliver, 1.0);
    REQUIRE_FALSE(outcome.joined);
    REQUIRE(outcome.refused_stage == "policy");
    REQUIRE(hub.journal().size() == 0);
  }

  SECTION("duplicate registration is refused") {
    RepositoryHub hub;
    auto profile = sample_profile("delta", {40}, 40);
    profile.policies.add({"p1", "a"});
    upper::register_domain(hub, profile, 0.0);
    auto outcome = upper::add_domain(hub, profile, grid, issuers, endpoints, deliver, 1.0);
    REQUIRE_FALSE(outcome.joined);
    REQUIRE(outcome.refused_stage == "registration");
  }

  SECTION("a clean join registers and propagates") {
    RepositoryHub hub;
    auto profile = sample_profile("delta", {40, 41}, 41);
    profile.policies.add({"p1", "a"});
    auto outcome = upper::add_domain(hub, profile, grid, issuers, endpoints, deliver, 1.0);
    REQUIRE(outcome.joined);
    REQUIRE(outcome.refused_stage.empty());
    REQUIRE(outcome.verdict.l == 1);
    REQUIRE(outcome.receipts.size() == 1);
    REQUIRE(outcome.receipts[0].status == upper::Receipt::Status::Delivered);
    REQUIRE(hub.has_domain_property(grm_principal(), "delta"));
    REQUIRE(hub.get_trust(dtm_principal("delta"), "delta", 40).trust == 0.5);
  }
}
