#include <gtest/gtest.h>

#include "support/support.hpp"
#include "urysohn/error.hpp"
#include "urysohn/metric.hpp"
#include "urysohn/random.hpp"

namespace urysohn {
namespace {

using testing::is_metric;
using testing::preserves_distances;

FiniteMetricSpace space(std::vector<std::string> points, const std::vector<std::vector<std::int64_t>>& d) {
  std::vector<std::vector<Rational>> dist;
  for (const auto& row : d) {
    dist.emplace_back();
    for (const auto v : row) dist.back().emplace_back(v);
  }
  return FiniteMetricSpace(std::move(points), std::move(dist));
}

TEST(VerifyMetric, TwoPoints) { EXPECT_FALSE(verify_metric(space({"p", "q"}, {{0, 1}, {1, 0}})).has_value()); }

TEST(VerifyMetric, TriangleViolationWitness) {
  const auto v = verify_metric(space({"p", "q", "r"}, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, MetricViolation::Axiom::triangle);
  EXPECT_EQ(v->witness, (std::vector<std::string>{"p", "r", "q"}));
}

TEST(VerifyMetric, OtherAxioms) {
  EXPECT_EQ(verify_metric(space({"p", "q"}, {{0, 1}, {2, 0}}))->axiom, MetricViolation::Axiom::symmetry);
  EXPECT_EQ(verify_metric(space({"p", "q"}, {{0, 0}, {0, 0}}))->axiom, MetricViolation::Axiom::positivity);
  EXPECT_EQ(verify_metric(space({"p", "q"}, {{1, 1}, {1, 0}}))->axiom, MetricViolation::Axiom::zero_diagonal);
}

TEST(VerifyMetric, AgreesWithOracleOnPerturbedSpaces) {
  Rng rng(61);
  for (int i = 0; i < 100; ++i) {
    auto s = random_metric_space(static_cast<std::size_t>(rng.between(2, 6)), rng);
    EXPECT_FALSE(verify_metric(s).has_value());
    auto dist = s.dist();
    const auto x = rng.below(s.size());
    const auto y = rng.below(s.size());
    dist[x][y] += Rational(rng.between(-3, 3), 2);
    const FiniteMetricSpace t(s.points(), dist);
    EXPECT_EQ(!verify_metric(t).has_value(), is_metric(t));
  }
}

TEST(FreeAmalgamMetric, SingleBasePointForcesTheSum) {
  const auto base = space({"z"}, {{0}});
  const IsometricEmbedding p1(base, space({"z", "x"}, {{0, 1}, {1, 0}}), {0});
  const IsometricEmbedding p2(base, space({"z", "y"}, {{0, 2}, {2, 0}}), {0});
  const auto a = free_amalgam_metric(base, {p1, p2});
  EXPECT_EQ(a.result.d(a.result.index_of("x@1"), a.result.index_of("y@2")), Rational(3));
  EXPECT_FALSE(verify_metric(a.result).has_value());
}

TEST(FreeAmalgamMetric, SinglePartIsThatPart) {
  Rng rng(62);
  const auto inst = testing::random_metric_amalgam_instance(rng, 3, 1, 6);
  const auto a = free_amalgam_metric(inst.base, {inst.parts[0]});
  ASSERT_EQ(a.result.size(), inst.parts[0].target.size());
  EXPECT_TRUE(preserves_distances(inst.parts[0].target, a.result, a.embeddings[0]));
}

TEST(FreeAmalgamMetric, RejectsEmptyBaseAndForeignParts) {
  EXPECT_THROW(free_amalgam_metric(FiniteMetricSpace(), {IsometricEmbedding()}), Error);
  const auto base = space({"z"}, {{0}});
  EXPECT_THROW(free_amalgam_metric(base, {}), Error);
  const auto other = space({"w"}, {{0}});
  EXPECT_THROW(free_amalgam_metric(base, {IsometricEmbedding(other, other, {0})}), Error);
}

TEST(FreeAmalgamMetric, RandomThreePartAmalgamsAreMetricAndPreserveParts) {
  Rng rng(63);
  for (int t = 0; t < 40; ++t) {
    auto inst = testing::random_metric_amalgam_instance(rng, 2, 3, 6);
    while (inst.parts.size() < 3) inst.parts.push_back(inst.parts.back());
    const auto a = free_amalgam_metric(inst.base, inst.parts);
    ASSERT_TRUE(is_metric(a.result));
    for (std::size_t i = 0; i < inst.parts.size(); ++i) {
      EXPECT_TRUE(preserves_distances(inst.parts[i].target, a.result, a.embeddings[i]));
      for (std::size_t x = 0; x < inst.base.size(); ++x) {
        EXPECT_EQ(a.embeddings[i][inst.parts[i].map[x]], a.base_map[x]);
      }
    }
    // Cross-part distances against the min-over-base formula.
    for (std::size_t i = 0; i < inst.parts.size(); ++i) {
      for (std::size_t j = i + 1; j < inst.parts.size(); ++j) {
        const auto& pi = inst.parts[i];
        const auto& pj = inst.parts[j];
        for (std::size_t x = inst.base.size(); x < pi.target.size(); ++x) {
          for (std::size_t y = inst.base.size(); y < pj.target.size(); ++y) {
            Rational best = pi.target.d(x, pi.map[0]) + pj.target.d(pj.map[0], y);
            for (std::size_t z = 1; z < inst.base.size(); ++z) {
              best = min(best, pi.target.d(x, pi.map[z]) + pj.target.d(pj.map[z], y));
            }
            EXPECT_EQ(a.result.d(a.embeddings[i][x], a.embeddings[j][y]), best);
          }
        }
      }
    }
  }
}

TEST(OnePointExtension, BoundaryCase) {
  const auto s = space({"p", "q"}, {{0, 2}, {2, 0}});
  const auto e = one_point_extension(s, "r", std::map<std::string, Rational>{{"p", 1}, {"q", 1}});
  EXPECT_FALSE(verify_metric(e).has_value());
  EXPECT_EQ(e.d(2, 1), Rational(1));
}

TEST(OnePointExtension, KatetovViolationNamesThePair) {
  const auto s = space({"p", "q"}, {{0, 2}, {2, 0}});
  try {
    one_point_extension(s, "r", std::map<std::string, Rational>{{"p", 1}, {"q", 4}});
    ADD_FAILURE() << "accepted 4 > 1 + 2";
  } catch (const KatetovError& e) {
    EXPECT_EQ(e.first(), "p");
    EXPECT_EQ(e.second(), "q");
  }
  EXPECT_THROW(one_point_extension(s, "p", std::vector<Rational>{1, 1}), Error);
  EXPECT_THROW(one_point_extension(s, "r", std::vector<Rational>{0, 2}), KatetovError);
}

TEST(OnePointExtension, RandomKatetovFunctionsGiveMetrics) {
  Rng rng(64);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_metric_space(5, rng);
    EXPECT_TRUE(is_metric(one_point_extension(s, "new", random_katetov(s, rng))));
  }
}

TEST(OrbitClosureExtension, SwapGrowsTwoPoints) {
  const auto c = space({"c1", "c2"}, {{0, 1}, {1, 0}});
  const Isometry k(c, Permutation({1, 0}));
  const auto ext = orbit_closure_extension(k, "a", {Rational(1), Rational(2)});
  EXPECT_EQ(ext.orbit_size, 2u);
  const auto& d = ext.extended.space;
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d.d(d.index_of("a"), d.index_of("a~1")), Rational(3));
  EXPECT_EQ(ext.extended.perm, Permutation({1, 0, 3, 2}));
  EXPECT_TRUE(is_metric(d));
  EXPECT_TRUE(preserves_distances(d, d, ext.extended.perm.image()));
}

TEST(OrbitClosureExtension, IdentityIsOnePointExtension) {
  Rng rng(65);
  const auto s = random_metric_space(4, rng);
  const auto r = random_katetov(s, rng);
  const auto ext = orbit_closure_extension(Isometry::identity(s), "n", r);
  EXPECT_EQ(ext.orbit_size, 1u);
  EXPECT_EQ(ext.extended.space, one_point_extension(s, "n", r));
  EXPECT_TRUE(ext.extended.perm.is_identity());
}

TEST(OrbitClosureExtension, InvariantProfileCollapsesToAFixedPoint) {
  const auto c = space({"c1", "c2", "c3"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  const Isometry k(c, Permutation({1, 2, 0}));
  const auto ext = orbit_closure_extension(k, "a", {Rational(1), Rational(1), Rational(1)});
  EXPECT_EQ(ext.orbit_size, 1u);
  EXPECT_EQ(ext.extended.perm(3), 3u);
  EXPECT_TRUE(is_metric(ext.extended.space));
}

TEST(OrbitClosureExtension, RandomExtensionsAreIsometriesExtendingK) {
  Rng rng(66);
  for (int i = 0; i < 60; ++i) {
    const auto k = random_isometry(7, rng);
    const auto ext = orbit_closure_extension(k, "new", random_katetov(k.space, rng));
    const auto& kp = ext.extended;
    ASSERT_TRUE(is_metric(kp.space));
    EXPECT_TRUE(preserves_distances(kp.space, kp.space, kp.perm.image()));
    EXPECT_TRUE(compose(kp.perm, kp.perm.inverse()).is_identity());
    for (std::size_t c = 0; c < k.space.size(); ++c) EXPECT_EQ(kp.perm(c), k.perm(c));
    EXPECT_EQ(permutation_order(k.perm) % ext.orbit_size, 0u);
  }
}

TEST(Isometry, RejectsDistanceChangingMaps) {
  const auto s = space({"p", "q", "r"}, {{0, 1, 2}, {1, 0, 2}, {2, 2, 0}});
  EXPECT_NO_THROW(Isometry(s, Permutation({1, 0, 2})));
  EXPECT_THROW(Isometry(s, Permutation({2, 1, 0})), Error);
  EXPECT_THROW(IsometricEmbedding(s, s, {0, 0, 1}), Error);
  EXPECT_THROW(PartialIsometry(s, {0, 1}, {0, 2}), Error);
  EXPECT_NO_THROW(PartialIsometry(s, {0, 1}, {1, 0}));
}

}  // namespace
}  // namespace urysohn
