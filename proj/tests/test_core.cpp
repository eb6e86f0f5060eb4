#include <doctest.h>

#include <cstdint>
#include <numeric>

#include "decx/core.hpp"
#include "decx/error.hpp"
#include "fixtures.hpp"

using namespace decx;
using fixtures::bernoulli;
using fixtures::coin;

TEST_SUITE("core") {

TEST_CASE("outcome space indexing") {
  OutcomeSpace s({0.0, 0.5, 1.0}, {"a", "b"});
  CHECK(s.size() == 6);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t o = 0; o < 2; ++o) {
      const std::size_t z = s.index(r, o);
      CHECK(s.reward_index(z) == r);
      CHECK(s.observation_index(z) == o);
    }
  CHECK(s.reward(s.index(1, 1)) == 0.5);
  CHECK(s.observation(s.index(2, 0)) == "a");
  CHECK(s.resolution() == doctest::Approx(0.5));
}

TEST_CASE("outcome space validation") {
  CHECK_THROWS_AS(OutcomeSpace({}, {"-"}), ValidationError);
  CHECK_THROWS_AS(OutcomeSpace({0.0, 1.2}, {"-"}), ValidationError);
  CHECK_THROWS_AS(OutcomeSpace({0.5, 0.5}, {"-"}), ValidationError);
  CHECK_THROWS_AS(OutcomeSpace({0.5}, {}), ValidationError);
}

TEST_CASE("finite distribution ingestion") {
  auto d = FiniteDistribution::from_weights({0.5, 0.5 + 1e-7, -1e-8});
  CHECK(d[2] == 0.0);
  CHECK(d[0] + d[1] + d[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(FiniteDistribution::from_weights({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution::from_weights({1.1, -0.1}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution::from_weights({}), ValidationError);
  CHECK(FiniteDistribution::point_mass(3, 2).vector() == std::vector<double>{0, 0, 1});
}

TEST_CASE("make_model examples") {
  SUBCASE("single decision") {
    const Model m = make_model(coin(), {{0.5, 0.5}}, "x");
    CHECK(m.mean_reward(0) == doctest::Approx(0.5));
    CHECK(m.opt_decision() == 0);
  }
  SUBCASE("argmax") { CHECK(bernoulli({0.5, 0.6}).opt_decision() == 1); }
  SUBCASE("tie goes to lowest index") { CHECK(bernoulli({0.5, 0.5}).opt_decision() == 0); }
  SUBCASE("errors") {
    CHECK_THROWS_AS(make_model(coin(), {{0.5, 0.5, 0.0}}, "x"), ValidationError);
    CHECK_THROWS_AS(make_model(coin(), {{0.5, 0.6}}, "x"), ValidationError);
    CHECK_THROWS_AS(make_model(coin(), {}, "x"), ValidationError);
  }
}

TEST_CASE("optimal_decision") {
  CHECK(optimal_decision(bernoulli({0.1, 0.9})) == std::pair<std::size_t, double>{1, 0.9});
  CHECK(optimal_decision(bernoulli({0.5, 0.5, 0.5})).first == 0);
  CounterRng rng(7, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> means(5);
    for (auto& x : means) x = std::floor(rng.uniform() * 4) / 4;  // ties are common
    const Model m = bernoulli(means);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 5; ++i)
      if (m.mean_reward(i) > m.mean_reward(best)) best = i;
    CHECK(m.opt_decision() == best);
  }
}

TEST_CASE("optimal decision invariant under consistent relabeling of Z") {
  OutcomeSpace s({0.0, 0.5, 1.0}, {"a", "b"});
  CounterRng rng(3, 3);
  std::vector<std::vector<double>> rows;
  for (int d = 0; d < 3; ++d) rows.push_back(fixtures::random_simplex(rng, 6));
  const Model m = make_model(s, rows, "m");
  // Swap observation labels: rewards travel with their outcomes.
  OutcomeSpace s2({0.0, 0.5, 1.0}, {"b", "a"});
  std::vector<std::vector<double>> rows2 = rows;
  for (auto& r : rows2)
    for (std::size_t ri = 0; ri < 3; ++ri) std::swap(r[s.index(ri, 0)], r[s.index(ri, 1)]);
  const Model m2 = make_model(s2, rows2, "m2");
  CHECK(m.opt_decision() == m2.opt_decision());
  for (std::size_t d = 0; d < 3; ++d) CHECK(m.mean_reward(d) == doctest::Approx(m2.mean_reward(d)));
}

TEST_CASE("model class validation") {
  CHECK_THROWS_AS(ModelClass({}), ValidationError);
  CHECK_THROWS_AS(ModelClass({bernoulli({0.5}), bernoulli({0.5, 0.5})}), ValidationError);
  const Model other = make_model(OutcomeSpace({0.0, 1.0}, {"x"}), {{0.5, 0.5}}, "o");
  CHECK_THROWS_AS(ModelClass({bernoulli({0.5}), other}), ValidationError);
  const ModelClass cls({bernoulli({0.5}, "a"), bernoulli({0.2}, "b")});
  CHECK(cls.find("b") == 1);
  CHECK_THROWS_AS(cls.find("zz"), ValidationError);
}

TEST_CASE("collapse_mixture") {
  SUBCASE("point mass returns a copy") {
    const ModelClass cls({bernoulli({0.2, 0.7}), bernoulli({0.9, 0.1})});
    const Model m = collapse_mixture(cls, {FiniteDistribution::point_mass(2, 1)});
    for (std::size_t d = 0; d < 2; ++d)
      for (std::size_t z = 0; z < 2; ++z) CHECK(m.prob(d, z) == cls[1].prob(d, z));
  }
  SUBCASE("linearity of means") {
    const ModelClass cls({bernoulli({0.4, 0.4}), bernoulli({0.6, 0.6})});
    const Model m = collapse_mixture(cls, {FiniteDistribution::uniform(2)});
    CHECK(m.mean_reward(0) == doctest::Approx(0.5));
    CHECK(m.mean_reward(1) == doctest::Approx(0.5));
  }
  SUBCASE("matches exact rational recomputation") {
    // Entries are k/10 and weights w/10, so each mixed entry is an integer / 100.
    const std::vector<std::vector<std::vector<int>>> tenths = {
        {{1, 9}, {3, 7}}, {{5, 5}, {2, 8}}, {{10, 0}, {4, 6}}};
    const std::vector<int> w = {2, 3, 5};
    std::vector<Model> ms;
    for (const auto& t : tenths) {
      std::vector<std::vector<double>> rows;
      for (const auto& r : t) rows.push_back({r[0] / 10.0, r[1] / 10.0});
      ms.push_back(make_model(coin(), rows, "r"));
    }
    const ModelClass cls(std::move(ms));
    const Model m = collapse_mixture(cls, {FiniteDistribution::from_weights({0.2, 0.3, 0.5})});
    for (std::size_t d = 0; d < 2; ++d) {
      for (std::size_t z = 0; z < 2; ++z) {
        std::int64_t num = 0;
        for (std::size_t i = 0; i < 3; ++i) num += w[i] * tenths[i][d][z];
        CHECK(m.prob(d, z) == doctest::Approx(static_cast<double>(num) / 100.0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("random mixtures: means average, rows valid") {
    CounterRng rng(11, 2);
    for (int trial = 0; trial < 30; ++trial) {
      const ModelClass cls = fixtures::random_class(rng, 3, 4, 3, 2);
      const auto nu = fixtures::random_simplex(rng, 4);
      const Model m = collapse_mixture(cls, {FiniteDistribution::normalized(nu)});
      for (std::size_t d = 0; d < 3; ++d) {
        double avg = 0.0;
        for (std::size_t i = 0; i < 4; ++i) avg += nu[i] * cls[i].mean_reward(d);
        CHECK(std::abs(m.mean_reward(d) - avg) <= 1e-12);
        double s = 0.0;
        for (std::size_t z = 0; z < m.num_outcomes(); ++z) {
          CHECK(m.prob(d, z) >= 0.0);
          s += m.prob(d, z);
        }
        CHECK(std::abs(s - 1.0) <= 1e-9);
      }
    }
  }
  SUBCASE("index mismatch") {
    const ModelClass cls({bernoulli({0.2}), bernoulli({0.9})});
    CHECK_THROWS_AS(collapse_mixture(cls, {FiniteDistribution::uniform(3)}), ValidationError);
  }
}

TEST_CASE("prior") {
  const Prior p = Prior::uniform(2, 3);
  CHECK(p(1, 2) == doctest::Approx(1.0 / 6));
  CHECK(Prior::point_mass(2, 3, 1, 0)(1, 0) == 1.0);
  CHECK_THROWS_AS(Prior(2, 2, {0.5, 0.5, 0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(Prior(2, 2, {0.5, 0.5}), ValidationError);
}

TEST_CASE("json round trip") {
  const ModelClass cls({bernoulli({0.2, 0.7}, "a"), bernoulli({0.9, 0.1}, "b")});
  const ModelClass back = parse_model_class(to_json(cls));
  REQUIRE(back.size() == 2);
  CHECK(back[1].label() == "b");
  CHECK(back[0].prob(1, 1) == doctest::Approx(0.7));
  CHECK_THROWS_AS(parse_model_class(nlohmann::json::parse(R"({"rewards":[0,1]})")), ValidationError);
  CHECK_THROWS_AS(parse_model_class(nlohmann::json::parse(
                      R"({"rewards":[0,1],"decisions":2,"models":[{"rows":[[0.5,0.5]]}]})")),
                  ValidationError);
}

}  // TEST_SUITE
