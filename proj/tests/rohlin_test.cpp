#include <gtest/gtest.h>

#include <functional>

#include "support/support.hpp"
#include "urysohn/error.hpp"
#include "urysohn/graph.hpp"
#include "urysohn/rohlin.hpp"

namespace urysohn {
namespace {

using testing::is_metric;
using testing::naive_order;
using testing::naive_power;

FiniteMetricSpace line(std::vector<std::string> labels, const std::vector<std::int64_t>& positions) {
  std::vector<std::vector<Rational>> d(labels.size(), std::vector<Rational>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) d[i][j] = Rational(std::abs(positions[i] - positions[j]));
  }
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

/// A = {a} and f(a) at distance `gap`.
CarriedMap single_point(std::int64_t gap) {
  CarriedMap m;
  m.carrier = line({"a", "fa"}, {0, gap});
  m.domain = {0};
  m.image = {1};
  return m;
}

TEST(DeltaSeparate, OnePointIdentity) {
  const auto s = delta_separate(line({"a"}, {0}), {0}, {0}, Rational(1));
  EXPECT_EQ(s.carrier.size(), 2u);
  EXPECT_EQ(s.carrier.label(s.image[0]), "a*");
  EXPECT_EQ(s.d_f(0, 0), Rational(1));
  EXPECT_EQ(s.carrier.d(s.image[0], s.h_image[0]), Rational(1));
  EXPECT_EQ(separation(s), Rational(1));
}

TEST(DeltaSeparate, SwapOfTwoPoints) {
  const auto s = delta_separate(line({"p", "q"}, {0, 2}), {0, 1}, {1, 0}, Rational(1));
  EXPECT_TRUE(is_metric(s.carrier));
  EXPECT_EQ(s.d_f(0, 0), Rational(3));
  EXPECT_EQ(s.carrier.d(s.image[0], s.h_image[0]), Rational(1));
  EXPECT_TRUE(isometric_on_domain(s));
}

TEST(DeltaSeparate, SeparationAtLeastDelta) {
  Rng rng(81);
  for (int i = 0; i < 60; ++i) {
    const auto k = random_isometry(6, rng);
    std::vector<std::size_t> domain(k.space.size()), h;
    for (std::size_t a = 0; a < domain.size(); ++a) domain[a] = a;
    for (const auto a : domain) h.push_back(k.perm(a));
    const Rational delta(rng.between(1, 12), rng.between(1, 6));
    const auto s = delta_separate(k.space, domain, h, delta);
    ASSERT_TRUE(is_metric(s.carrier));
    for (std::size_t a = 0; a < s.size(); ++a) {
      EXPECT_LE(s.carrier.d(s.image[a], s.h_image[a]), delta);
      for (std::size_t b = 0; b < s.size(); ++b) EXPECT_GE(s.d_f(a, b), delta);
    }
  }
  EXPECT_THROW(delta_separate(line({"a"}, {0}), {0}, {0}, Rational(0)), Error);
}

TEST(PathLength, SameLevelAndOutAndBack) {
  Rng rng(82);
  const auto inst = testing::random_suspension_instance(rng, 5, 12);
  const SuspensionContext ctx{inst.map, inst.s};
  for (std::size_t a = 0; a < ctx.map.size(); ++a) {
    for (std::size_t b = 0; b < ctx.map.size(); ++b) {
      EXPECT_EQ(path_length(ctx, {{a, 1}, {b, 1}}), ctx.map.d(a, b));
    }
    EXPECT_EQ(path_length(ctx, {{a, 0}, {a, 1}, {a, 0}}), Rational(2) * ctx.map.d_f(a, a));
  }
  EXPECT_THROW(path_length(ctx, {{0, 0}, {0, 2}}), Error);
  EXPECT_THROW(path_length(ctx, {{0, 0}}), Error);
}

TEST(PathLength, ConcatenationAndReversal) {
  Rng rng(83);
  for (int i = 0; i < 100; ++i) {
    const auto inst = testing::random_suspension_instance(rng, 5, 10);
    const SuspensionContext ctx{inst.map, inst.s};
    auto p = testing::random_path(rng, ctx, static_cast<std::size_t>(rng.between(2, 7)));
    // q starts where p ends.
    Path q{p.back()};
    auto tail = testing::random_path(rng, ctx, static_cast<std::size_t>(rng.between(2, 7)));
    for (std::size_t j = 1; j < tail.size(); ++j) {
      const int move = circular_move(ctx, tail[j - 1].x, tail[j].x);
      const std::size_t x = move == 1 ? ctx.succ(q.back().x) : move == -1 ? ctx.pred(q.back().x) : q.back().x;
      q.push_back({tail[j].a, x});
    }
    Path pq = p;
    pq.insert(pq.end(), q.begin() + 1, q.end());
    EXPECT_EQ(path_length(ctx, pq), path_length(ctx, p) + path_length(ctx, q));
    const Path reversed(p.rbegin(), p.rend());
    EXPECT_EQ(path_length(ctx, reversed), path_length(ctx, p));
  }
}

TEST(PathReduce, CaseThree) {
  Rng rng(84);
  for (int i = 0; i < 30; ++i) {
    const auto inst = testing::random_suspension_instance(rng, 5, 10);
    const SuspensionContext ctx{inst.map, inst.s};
    const std::size_t a = rng.below(ctx.map.size()), b = rng.below(ctx.map.size()), c = rng.below(ctx.map.size());
    const Path p{{a, 0}, {b, 1}, {c, 1}};
    std::vector<int> cases;
    const auto q = path_reduce(ctx, p, &cases);
    EXPECT_EQ(q, (Path{{a, 0}, {c, 1}}));
    EXPECT_EQ(cases, std::vector<int>{3});
    EXPECT_LE(path_length(ctx, q), path_length(ctx, p));
  }
}

TEST(PathReduce, PositivePathUnchanged) {
  const SuspensionContext ctx{single_point(1), 5};
  const Path p{{0, 3}, {0, 4}, {0, 0}, {0, 1}};
  ASSERT_TRUE(is_positive(ctx, p));
  std::vector<int> cases;
  EXPECT_EQ(path_reduce(ctx, p, &cases), p);
  EXPECT_TRUE(cases.empty());
}

TEST(PathReduce, RandomPathsShrinkButStayAboveD) {
  Rng rng(85);
  for (int i = 0; i < 60; ++i) {
    const auto inst = testing::random_suspension_instance(rng, 4, 9);
    const SuspensionContext ctx{inst.map, inst.s};
    const auto d = all_pairs_shortest_paths(step_graph(ctx));
    const std::size_t k = ctx.map.size();
    for (int j = 0; j < 10; ++j) {
      const auto p = testing::random_path(rng, ctx, 7);
      const auto q = path_reduce(ctx, p);
      EXPECT_TRUE(is_positive(ctx, q) || is_negative(ctx, q));
      EXPECT_EQ(q.front(), p.front());
      EXPECT_EQ(q.back(), p.back());
      EXPECT_LE(path_length(ctx, q), path_length(ctx, p));
      EXPECT_GE(path_length(ctx, q), *d[p.front().x * k + p.front().a][p.back().x * k + p.back().a]);
    }
  }
}

TEST(PathLength, PositivePathsGrowWithLength) {
  Rng rng(86);
  for (int i = 0; i < 10; ++i) {
    const auto inst = testing::random_suspension_instance(rng, 3, 8);
    const SuspensionContext ctx{inst.map, inst.s};
    const Rational delta = separation(ctx.map);
    const std::size_t k = ctx.map.size();
    // All positive paths of 2..5 points starting at level 0.
    Path p;
    std::function<void()> extend = [&] {
      if (p.size() >= 2) { EXPECT_GE(path_length(ctx, p), delta * Rational(static_cast<std::int64_t>(p.size()) - 2)); }
      if (p.size() == 5) return;
      for (std::size_t a = 0; a < k; ++a) {
        p.push_back({a, ctx.succ(p.back().x)});
        extend();
        p.pop_back();
      }
    };
    for (std::size_t a = 0; a < k; ++a) {
      p = {{a, 0}};
      extend();
    }
  }
}

TEST(CircularSuspension, FourCycle) {
  const auto susp = circular_suspension(single_point(1), 4);
  const auto& s = susp.space;
  ASSERT_EQ(s.size(), 4u);
  for (std::size_t x = 0; x < 4; ++x) {
    EXPECT_EQ(s.d(x, (x + 1) % 4), Rational(1));
    EXPECT_EQ(s.d(x, (x + 2) % 4), Rational(2));
  }
  EXPECT_EQ(s.label(susp.point(0, 2)), "a•2");
  EXPECT_EQ(susp.shift.perm, Permutation({1, 2, 3, 0}));
  EXPECT_EQ(naive_order(susp.shift.perm), 4u);
  const auto oracle = testing::enumerate_simple_paths(step_graph(susp.context));
  for (std::size_t u = 0; u < 4; ++u) {
    for (std::size_t v = 0; v < 4; ++v) EXPECT_EQ(s.d(u, v), *oracle[u][v]);
  }
}

TEST(CircularSuspension, PreconditionsRefused) {
  EXPECT_THROW(circular_suspension(single_point(1), 2), Error);
  CarriedMap wide = single_point(1);
  wide.carrier = line({"a", "fa", "b", "fb"}, {0, 1, 10, 11});
  wide.domain = {0, 2};
  wide.image = {1, 3};
  // δ = 1, Δ = 11: needs s ≥ 13.
  EXPECT_THROW(circular_suspension(wide, 12), Error);
  EXPECT_NO_THROW(circular_suspension(wide, 13));
  CarriedMap zero = single_point(0);
  zero.carrier = line({"a"}, {0});
  zero.image = {0};
  EXPECT_THROW(circular_suspension(zero, 5), Error);
}

TEST(CircularSuspension, MatchesOracleOnRandomInstances) {
  Rng rng(87);
  for (int i = 0; i < 40; ++i) {
    const auto inst = testing::random_suspension_instance(rng, 4, 10);
    const auto susp = circular_suspension(inst.map, inst.s);
    const auto graph = step_graph(susp.context);
    // Exhaustive enumeration is exponential; only small graphs get it.
    const auto oracle = graph.size() <= 9 ? testing::enumerate_simple_paths(graph) : all_pairs_shortest_paths(graph);
    const auto& s = susp.space;
    const std::size_t k = inst.map.size();
    for (std::size_t u = 0; u < s.size(); ++u) {
      for (std::size_t v = 0; v < s.size(); ++v) EXPECT_EQ(s.d(u, v), *oracle[u][v]);
    }
    ASSERT_TRUE(is_metric(s));
    for (std::size_t x = 0; x < inst.s; ++x) {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          EXPECT_EQ(s.d(susp.point(a, x), susp.point(b, x)), inst.map.d(a, b));
          EXPECT_EQ(s.d(susp.point(a, x), susp.point(b, (x + 1) % inst.s)), inst.map.d_f(a, b));
        }
      }
    }
    EXPECT_TRUE(testing::preserves_distances(s, s, susp.shift.perm.image()));
    EXPECT_TRUE(naive_power(susp.shift.perm, static_cast<std::int64_t>(inst.s)).is_identity());
    EXPECT_EQ(inst.s % naive_order(susp.shift.perm), 0u);
  }
}

TEST(PeriodSet, Parse) {
  const auto evens = PeriodSet::parse("2,4,6,…");
  EXPECT_TRUE(evens.is_progression());
  EXPECT_EQ(evens.start(), 2u);
  EXPECT_EQ(evens.step(), 2u);
  EXPECT_EQ(evens.least_at_least(5), 6u);
  EXPECT_EQ(PeriodSet::parse("3, ...").least_at_least(7), 9u);
  const auto list = PeriodSet::parse("9,4,6");
  EXPECT_FALSE(list.is_progression());
  EXPECT_EQ(list.min(), 4u);
  EXPECT_EQ(list.least_at_least(7), 9u);
  EXPECT_FALSE(list.least_at_least(10).has_value());
  EXPECT_TRUE(list.contains(6));
  for (const char* bad : {"", "0", "a", "2,3,5,...", "4,2,...", "1,,2"}) {
    try {
      PeriodSet::parse(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::parse) << bad;
    }
  }
}

TEST(RohlinApproximation, SinglePointEvenPeriods) {
  const auto space = line({"a", "ha"}, {0, 1});
  const auto r = rohlin_approximation(space, {0}, {1}, Rational(4), PeriodSet::parse("2,4,6,…"));
  EXPECT_EQ(r.separated.delta, Rational(3));
  EXPECT_EQ(r.s, 4u);
  EXPECT_TRUE(naive_power(r.g().perm, 4).is_identity());
  EXPECT_EQ(r.g().perm(r.domain_in_suspension[0]), r.image_in_suspension[0]);
  EXPECT_LT(r.separated.carrier.d(r.separated.image[0], r.separated.h_image[0]), Rational(4));
}

TEST(RohlinApproximation, EmptyDomain) {
  const auto r = rohlin_approximation(line({"p"}, {0}), {}, {}, Rational(1), PeriodSet::parse("5,7"));
  EXPECT_EQ(r.s, 5u);
  EXPECT_EQ(r.g().perm.size(), 0u);
}

TEST(RohlinApproximation, NoAdmissiblePeriod) {
  const auto space = line({"a", "ha"}, {0, 1});
  // δ = 3 and Δ = 4 need s ≥ 3.
  EXPECT_EQ(rohlin_approximation(space, {0}, {1}, Rational(4), PeriodSet::parse("3")).s, 3u);
  EXPECT_THROW(rohlin_approximation(space, {0}, {1}, Rational(4), PeriodSet::parse("2")), Error);
  EXPECT_THROW(rohlin_approximation(space, {0}, {1}, Rational(0), PeriodSet::parse("4")), Error);
}

TEST(RohlinApproximation, RandomRunsSatisfyGuarantees) {
  Rng rng(88);
  for (int i = 0; i < 25; ++i) {
    const auto k = random_isometry(5, rng);
    std::vector<std::size_t> domain, h;
    for (std::size_t a = 0; a < k.space.size(); ++a) {
      if (rng.coin() || domain.empty()) {
        domain.push_back(a);
        h.push_back(k.perm(a));
      }
    }
    const Rational eps = k.space.diameter() * Rational(rng.between(1, 4), 2);
    const auto r = rohlin_approximation(k.space, domain, h, eps, PeriodSet::multiples_of(2));
    const auto& sep = r.separated;
    for (std::size_t a = 0; a < sep.size(); ++a) {
      EXPECT_LT(sep.carrier.d(sep.image[a], sep.h_image[a]), eps);
      for (std::size_t b = 0; b < sep.size(); ++b) EXPECT_GT(sep.d_f(a, b), eps / Rational(2));
      EXPECT_EQ(r.g().perm(r.domain_in_suspension[a]), r.image_in_suspension[a]);
    }
    EXPECT_EQ(r.s % 2, 0u);
    EXPECT_TRUE(naive_power(r.g().perm, static_cast<std::int64_t>(r.s)).is_identity());
    // s is the least even period meeting δ′(s−2) ≥ Δ.
    EXPECT_GE(separation(sep) * Rational(static_cast<std::int64_t>(r.s) - 2), spread(sep));
    if (r.s > 4) { EXPECT_LT(separation(sep) * Rational(static_cast<std::int64_t>(r.s) - 4), spread(sep)); }
  }
}

}  // namespace
}  // namespace urysohn
