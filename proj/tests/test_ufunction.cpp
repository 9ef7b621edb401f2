#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "ugf/error.hpp"
#include "ugf/ufunction.hpp"

namespace ugf {
namespace {

using test::naive_compose;
using test::random_ufunction;

UFunction uf(std::initializer_list<Term> terms) { return make_ufunction(std::vector<Term>(terms)); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ugf::Error";
  return ErrorCode::InvalidSpec;
}

TEST(MakeUFunction, SortsTwoStateTransformer) {
  const UFunction u = uf({{5000, 0.97}, {0, 0.03}});
  ASSERT_EQ(u.size(), 2u);
  EXPECT_EQ(u[0].value, 0.0);
  EXPECT_DOUBLE_EQ(u[0].probability, 0.03);
  EXPECT_EQ(u[1].value, 5000.0);
}

TEST(MakeUFunction, MergesExactDuplicates) {
  const UFunction u = uf({{1, 0.5}, {1, 0.5}});
  ASSERT_EQ(u.size(), 1u);
  EXPECT_EQ(u[0].value, 1.0);
  EXPECT_DOUBLE_EQ(u[0].probability, 1.0);
}

TEST(MakeUFunction, RenormalizesSmallMassError) {
  const double third = (1.0 - 6e-7) / 3.0;
  const UFunction u = uf({{2, third}, {3, third}, {4, third}});
  ASSERT_EQ(u.size(), 3u);
  for (const auto& t : u) EXPECT_NEAR(t.probability, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(u.mass(), 1.0, 1e-15);
  // A thousandth off is beyond the construction tolerance.
  EXPECT_EQ(code_of([] { uf({{2, 0.333}, {3, 0.333}, {4, 0.333}}); }), ErrorCode::MassNotNormalized);
}

TEST(MakeUFunction, RejectsBadInput) {
  EXPECT_EQ(code_of([] { uf({{1, -0.1}, {2, 1.1}}); }), ErrorCode::NegativeProbability);
  EXPECT_EQ(code_of([] { uf({{1, 0.5}, {2, 0.4}}); }), ErrorCode::MassNotNormalized);
  EXPECT_EQ(code_of([] { make_ufunction(std::vector<Term>{}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { uf({{NAN, 1.0}}); }), ErrorCode::InvalidSpec);
}

TEST(Compose, EvAggregationSixPairs) {
  const UFunction op = uf({{-5, 0.13}, {0, 0.83}, {5, 0.04}});
  const UFunction mech = uf({{0, 0.01}, {25, 0.99}});
  const UFunction u = compose(op, mech, kTimes);
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0].value, -125.0);
  EXPECT_NEAR(u[0].probability, 0.1287, 1e-12);
  EXPECT_EQ(u[1].value, 0.0);
  EXPECT_NEAR(u[1].probability, 0.8317, 1e-12);
  EXPECT_EQ(u[2].value, 125.0);
  EXPECT_NEAR(u[2].probability, 0.0396, 1e-12);
}

TEST(Compose, FivefoldPlusGivesBinomial) {
  const UFunction g = uf({{1000, 0.96}, {0, 0.04}});
  std::vector<UFunction> five(5, g);
  const UFunction u = compose_all(five, kPlus);
  ASSERT_EQ(u.size(), 6u);
  EXPECT_NEAR(u[0].probability, std::pow(0.04, 5), 1e-20);
  EXPECT_NEAR(u[5].probability, std::pow(0.96, 5), 1e-14);
  EXPECT_EQ(u[5].value, 5000.0);
}

TEST(Compose, TimesIdentity) {
  const UFunction u = uf({{-3, 0.2}, {1.5, 0.3}, {8, 0.5}});
  EXPECT_EQ(compose(u, UFunction::degenerate(1.0), kTimes), u);
}

TEST(CollectLikeTerms, Examples) {
  const UFunction exact({{100.0, 0.5}, {100.0, 0.5}});
  EXPECT_EQ(collect_like_terms(exact, 0.0), UFunction::degenerate(100.0));

  const UFunction near({{100.0, 0.5}, {100.0000001, 0.5}});
  const UFunction merged = collect_like_terms(near, 1e-6);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_NEAR(merged[0].value, 100.00000005, 1e-12);

  const UFunction apart({{1, 0.3}, {2, 0.7}});
  EXPECT_EQ(collect_like_terms(apart, 0.5), apart);
}

TEST(Psi, Examples) {
  const UFunction t = uf({{0, 0.03}, {5000, 0.97}});
  EXPECT_DOUBLE_EQ(psi_availability(t, 1000, false), 0.97);
  const UFunction zero = UFunction::degenerate(0.0);
  EXPECT_EQ(psi_availability(zero, 0, false), 1.0);
  EXPECT_EQ(psi_availability(zero, 0, true), 0.0);
  EXPECT_DOUBLE_EQ(psi_availability(uf({{-5, 0.3}, {5, 0.7}}), 0, false), 0.7);
}

TEST(Shortfall, Examples) {
  auto s = shortfall(UFunction::degenerate(100), UFunction::degenerate(200), true);
  EXPECT_EQ(s.loss_probability, 1.0);
  EXPECT_EQ(s.expected_unserved_kw, 100.0);
  s = shortfall(UFunction::degenerate(200), UFunction::degenerate(100), true);
  EXPECT_EQ(s.loss_probability, 0.0);
  EXPECT_EQ(s.expected_unserved_kw, 0.0);
  s = shortfall(uf({{0, 0.5}, {300, 0.5}}), UFunction::degenerate(100), true);
  EXPECT_DOUBLE_EQ(s.loss_probability, 0.5);
  EXPECT_DOUBLE_EQ(s.expected_unserved_kw, 50.0);
}

TEST(Shortfall, TieHandling) {
  const auto g = UFunction::degenerate(100);
  EXPECT_EQ(shortfall(g, g, true).loss_probability, 0.0);
  EXPECT_EQ(shortfall(g, g, false).loss_probability, 1.0);
  EXPECT_EQ(shortfall(g, g, false).expected_unserved_kw, 0.0);
}

TEST(Gridded, OnGridMatchesCompose) {
  const UFunction a = uf({{0, 0.2}, {1, 0.3}, {4, 0.5}});
  const UFunction b = uf({{-2, 0.6}, {3, 0.4}});
  EXPECT_LE(test::max_term_gap(gridded_compose_plus(a, b, 1.0), compose(a, b, kPlus)), 1e-12);
}

TEST(Gridded, QuantizesTiesToEven) {
  EXPECT_EQ(quantize(UFunction::degenerate(0.4), 1.0), UFunction::degenerate(0.0));
  EXPECT_EQ(quantize(UFunction::degenerate(2.5), 1.0), UFunction::degenerate(2.0));
  EXPECT_EQ(quantize(UFunction::degenerate(3.5), 1.0), UFunction::degenerate(4.0));
  EXPECT_EQ(code_of([] { quantize(UFunction::degenerate(1.0), 0.0); }), ErrorCode::StepNotPositive);
}

TEST(Gridded, FiftyTermRandomInputs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Term> ta, tb;
    const auto pa = test::random_simplex(rng, 50);
    const auto pb = test::random_simplex(rng, 50);
    for (int i = 0; i < 50; ++i) {
      ta.push_back({0.5 * std::uniform_int_distribution<int>(-400, 400)(rng), pa[i]});
      tb.push_back({0.5 * std::uniform_int_distribution<int>(-400, 400)(rng), pb[i]});
    }
    const UFunction a = make_ufunction(ta), b = make_ufunction(tb);
    const UFunction fast = gridded_compose_plus(a, b, 0.5);
    const auto slow = naive_compose(a, b, kPlus);
    ASSERT_EQ(fast.size(), slow.size());
    std::size_t i = 0;
    for (const auto& [v, p] : slow) {
      EXPECT_EQ(fast[i].value, v);
      EXPECT_NEAR(fast[i].probability, p, 1e-9);
      ++i;
    }
  }
}

TEST(ComposeProperties, BruteForceEquivalence) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const UFunction a = random_ufunction(rng, 8), b = random_ufunction(rng, 8);
    for (StructureFunction phi : {kPlus, kTimes}) {
      const UFunction u = compose(a, b, phi);
      const auto ref = naive_compose(a, b, phi);
      ASSERT_EQ(u.size(), ref.size());
      std::size_t i = 0;
      for (const auto& [v, p] : ref) {
        EXPECT_EQ(u[i].value, v);
        EXPECT_NEAR(u[i].probability, p, 1e-12);
        ++i;
      }
    }
  }
}

TEST(ComposeProperties, ShortfallMatchesDifferenceDistribution) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const UFunction g = random_ufunction(rng, 6, 10.0, 0, 30);
    const UFunction l = random_ufunction(rng, 6, 10.0, 0, 30);
    const UFunction neg_l = compose(l, UFunction::degenerate(-1.0), kTimes);
    const UFunction margin = compose(g, neg_l, kPlus);
    const auto s = shortfall(g, l, true);
    EXPECT_NEAR(s.loss_probability, 1.0 - psi_availability(margin, 0.0, false), 1e-12);
    EXPECT_GE(s.expected_unserved_kw, 0.0);
    EXPECT_EQ(s.expected_unserved_kw == 0.0, s.loss_probability == 0.0);
  }
}

TEST(UFunctionValue, DegenerateAndStats) {
  const UFunction u = uf({{-1, 0.25}, {3, 0.75}});
  EXPECT_DOUBLE_EQ(u.mean(), 2.0);
  EXPECT_EQ(u.min_value(), -1.0);
  EXPECT_EQ(u.max_value(), 3.0);
  EXPECT_EQ(UFunction::degenerate(7.0).size(), 1u);
}

}  // namespace
}  // namespace ugf
