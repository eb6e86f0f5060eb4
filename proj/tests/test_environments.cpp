#include <doctest.h>

#include <cmath>

#include "decx/dec.hpp"
#include "decx/divergences.hpp"
#include "decx/environments.hpp"
#include "decx/error.hpp"
#include "fixtures.hpp"

using namespace decx;

TEST_SUITE("environments") {

TEST_CASE("bandit hard family") {
  const auto fam = build_bandit_hard(2, 0.1);
  CHECK(fam.cls.size() == 3);
  REQUIRE(fam.certificate.has_value());
  CHECK(fam.certificate->n == 2);
  CHECK(fam.certificate->beta == doctest::Approx(0.03));
  CHECK(check_certificate(fam.cls, *fam.certificate).ok);
  CHECK(fam.cls[2].mean_reward(1) == doctest::Approx(0.6));
  CHECK_THROWS_AS(build_bandit_hard(2, 0.5), ValidationError);
  CHECK_THROWS_AS(build_bandit_hard(1, 0.1), ValidationError);

  // A corrupted witness is caught.
  FamilyCertificate bad = *fam.certificate;
  bad.beta = 0.01;
  CHECK_FALSE(check_certificate(fam.cls, bad).ok);
  bad = *fam.certificate;
  bad.v[0][1] = 1.0;
  CHECK(check_certificate(fam.cls, bad).v_sum_violation > 0.0);
}

TEST_CASE("bandit grid") {
  const auto fam = build_bandit_grid(2, 2);
  CHECK(fam.cls.size() == 9);
  for (const auto& m : fam.cls.models())
    for (std::size_t a = 0; a < 2; ++a) {
      const double x = m.mean_reward(a);
      CHECK((x == 0.0 || x == 0.5 || x == 1.0));
    }
  CHECK_THROWS_AS(build_bandit_grid(6, 9), ValidationError);
}

TEST_CASE("linear") {
  const ModelClass a = build_linear({{0.0}, {1.0}}, {{0.2}, {0.8}});
  CHECK(a.size() == 2);
  CHECK(a[0].mean_reward(0) == 0.0);
  CHECK(a[0].mean_reward(1) == doctest::Approx(0.2));
  CHECK(a[1].mean_reward(1) == doctest::Approx(0.8));
  const ModelClass b = build_linear({{1.0, 0.0}, {0.0, 1.0}}, {{0.1, 0.7}, {0.4, 0.3}, {0.9, 0.5}});
  for (std::size_t i = 0; i < 3; ++i) CHECK(b[i].mean_reward(0) + b[i].mean_reward(1) > 0.0);
  CHECK(b[2].mean_reward(0) == doctest::Approx(0.9));
  CHECK(b[2].mean_reward(1) == doctest::Approx(0.5));
  std::vector<std::vector<double>> grid;
  for (double x : {0.0, 0.5, 1.0})
    for (double y : {0.0, 0.5, 1.0}) grid.push_back({x, y});
  const ModelClass basis = build_linear({{1.0, 0.0}, {0.0, 1.0}}, grid);
  for (double g : {1.0, 4.0, 16.0}) CHECK(dec_value_sup(basis, g).value <= 2.0 / (4 * g) + 1e-6);
  CHECK_THROWS_AS(build_linear({{1.0, 1.0}}, {{0.7, 0.7}}), ValidationError);
  CHECK_THROWS_AS(build_linear({{1.0, 1.0}}, {{0.7}}), ValidationError);
}

TEST_CASE("mdp hard family") {
  MdpShape shape{3, 2, 2, 2};
  CHECK(shape.effective_depth() == 2);
  const auto fam = build_mdp_hard(shape, 0.3);
  CHECK(fam.cls.num_decisions() == 4);
  CHECK(fam.cls.size() == 5);
  REQUIRE(fam.certificate.has_value());
  CHECK(fam.certificate->n == 5);
  CHECK(fam.certificate->alpha == doctest::Approx(0.15));
  CHECK(check_certificate(fam.cls, *fam.certificate).ok);

  // Trajectory marginals are identical table slices.
  const OutcomeSpace& s = fam.cls.space();
  for (std::size_t pi = 0; pi < 4; ++pi)
    for (std::size_t o = 0; o < s.num_observations(); ++o) {
      const double ref = fam.cls[0].prob(pi, s.index(0, o)) + fam.cls[0].prob(pi, s.index(1, o));
      for (const auto& m : fam.cls.models())
        CHECK(m.prob(pi, s.index(0, o)) + m.prob(pi, s.index(1, o)) == ref);
    }

  // Small gap: every model is close to the reference and dec is small.
  const auto tiny = build_mdp_hard(shape, 1e-6);
  CHECK(dec_value(tiny.cls, 1.0, tiny.cls[0]).value <= 1e-6);
  CHECK_THROWS_AS(build_mdp_hard(MdpShape{1, 2, 2, 2}, 0.1), ValidationError);
}

TEST_CASE("dec dominates the family bound") {
  for (std::size_t a : {2, 3}) {
    const auto fam = build_bandit_hard(a, 0.2);
    const auto& c = *fam.certificate;
    for (double g : {0.5, 1.0, 4.0})
      CHECK(dec_value(fam.cls, g, fam.cls[c.reference]).value >=
            hard_family_bound(c.alpha, c.beta, c.delta, c.n, g) - 1e-6);
  }
  const auto mdp = build_mdp_hard(MdpShape{3, 2, 2, 2}, 0.3);
  const auto& c = *mdp.certificate;
  for (double g : {0.5, 1.0, 4.0})
    CHECK(dec_value(mdp.cls, g, mdp.cls[c.reference]).value >= hard_family_bound(c.alpha, c.beta, c.delta, c.n, g) - 1e-6);
}

TEST_CASE("adversaries") {
  const auto fam = build_bandit_hard(2, 0.1);
  const std::vector<double> p{0.3, 0.7};
  const Adversary point = Adversary::stochastic_mixture({0.0, 1.0, 0.0});
  const Adversary seq = Adversary::oblivious(std::vector<std::size_t>(20, 1));
  for (std::size_t t = 1; t <= 20; ++t) CHECK(point.choose(fam.cls, t, p, 9) == seq.choose(fam.cls, t, p, 9));

  const ModelClass single({fixtures::bernoulli({0.1, 0.8})});
  const Adversary adaptive = Adversary::adaptive_best_response();
  const Adversary one = Adversary::stochastic_mixture({1.0});
  for (std::size_t t = 1; t <= 5; ++t) CHECK(adaptive.choose(single, t, p, 1) == one.choose(single, t, p, 1));

  // Adaptive: arm 2 is played more, so the model rewarding arm 1 wins; ties go low.
  CHECK(adaptive.choose(fam.cls, 1, p, 0) == 1);
  CHECK(adaptive.choose(fam.cls, 1, std::vector<double>{0.5, 0.5}, 0) == 1);

  CHECK_THROWS_AS(seq.check(fam.cls, 21), ValidationError);
  CHECK_THROWS_AS(Adversary::oblivious({5}).check(fam.cls, 1), ValidationError);
  const Adversary u = make_adversary(fam.cls, nlohmann::json::parse(R"({"kind":"stochastic_mixture","weights":"uniform"})"));
  CHECK(u.weights().size() == 3);
  CHECK(make_adversary(fam.cls, nlohmann::json::parse(R"({"kind":"adaptive_best_response"})")).kind() ==
        AdversaryKind::kAdaptiveBestResponse);
  CHECK_THROWS_AS(make_adversary(fam.cls, nlohmann::json::parse(R"({"kind":"sneaky"})")), ValidationError);

  // Mixture draws follow the weights.
  std::vector<int> counts(3, 0);
  for (std::size_t t = 1; t <= 6000; ++t) ++counts[u.choose(fam.cls, t, p, 3)];
  for (int c : counts) CHECK(c / 6000.0 == doctest::Approx(1.0 / 3).epsilon(0.08));
}

}  // TEST_SUITE
