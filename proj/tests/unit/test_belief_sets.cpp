#include <gtest/gtest.h>

#include <cmath>

#include "ifbs/belief_sets.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/model.hpp"

using namespace ifbs;

namespace {

// Binomial coefficient by the multiplicative formula.
std::size_t choose(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(SimplexGrid, Counts) {
  EXPECT_EQ(build_simplex_grid(3, 0.2).size(), 21u);
  EXPECT_EQ(build_simplex_grid(3, 0.1).size(), 66u);
  EXPECT_EQ(build_simplex_grid(3, 0.05).size(), 231u);
  for (std::size_t ns = 1; ns <= 5; ++ns) {
    for (std::size_t k = 1; k <= 6; ++k) {
      EXPECT_EQ(build_simplex_grid(ns, k).size(), choose(k + ns - 1, ns - 1)) << ns << " " << k;
    }
  }
}

TEST(SimplexGrid, TwoStatesHalfSpacing) {
  const auto g = build_simplex_grid(2, 0.5);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], Belief::vertex(2, 0));
  EXPECT_EQ(g[1], Belief({0.5, 0.5}));
  EXPECT_EQ(g[2], Belief::vertex(2, 1));
}

TEST(SimplexGrid, NonDivisorSpacingThrows) {
  EXPECT_THROW(build_simplex_grid(3, 0.3), BeliefError);
  EXPECT_THROW(spacing_divisions(0.0), BeliefError);
  EXPECT_EQ(spacing_divisions(0.05), 20u);
}

TEST(SimplexGrid, ContainsVerticesOnLattice) {
  const auto g = build_simplex_grid(4, std::size_t{5});
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_NE(std::find(g.begin(), g.end(), Belief::vertex(4, s)), g.end());
  }
  for (const Belief& b : g) {
    for (double x : b.vector()) EXPECT_NEAR(x * 5, std::round(x * 5), 1e-12);
  }
}

TEST(BlurSet, MarsCountsBeforeDedup) {
  const GridworldConfig g = mars_layout();
  const auto raw = build_local_blur_set(g, false);
  EXPECT_EQ(raw.size(), 864u);
  const BeliefSets sets = build_prior_set(raw, build_gridworld(g));
  EXPECT_EQ(sets.num_prior_images(), 3456u);
}

TEST(BlurSet, InteriorVariants) {
  GridworldConfig g;
  g.width = 7;
  g.height = 7;
  g.start = {0, 0};
  g.goals = {{6, 6}};
  const auto raw = build_local_blur_set(g, false);
  const std::size_t s = g.state_of({3, 3});
  const Belief& v2 = raw[6 * s + 1];
  EXPECT_DOUBLE_EQ(v2[s], 0.5);
  EXPECT_DOUBLE_EQ(v2[g.state_of({2, 2})], 0.0625);
  EXPECT_DOUBLE_EQ(v2[g.state_of({1, 1})], 0.0);
  const Belief& v4 = raw[6 * s + 3];
  EXPECT_DOUBLE_EQ(v4[s], 0.5);
  EXPECT_DOUBLE_EQ(v4[g.state_of({2, 3})], 0.5 / 16);
  EXPECT_DOUBLE_EQ(v4[g.state_of({1, 5})], 0.5 / 32);
  const Belief& v6 = raw[6 * s + 5];
  EXPECT_DOUBLE_EQ(v6[s], 0.2);
  EXPECT_DOUBLE_EQ(v6[g.state_of({4, 4})], 0.8 / 16);
  EXPECT_EQ(raw[6 * s], Belief::vertex(g.num_states(), s));
}

TEST(BlurSet, CornerFoldsMass) {
  const GridworldConfig g = mars_small_layout();
  const auto raw = build_local_blur_set(g, false);
  const Belief& corner = raw[1];  // 3x3 blur of cell (0,0), centre 0.5
  // Oracle: neighbours (-1,-1),(-1,0),(-1,1),(0,-1),(1,-1) clamp onto (0,0),(0,0),(0,1),(0,0),(1,0).
  EXPECT_NEAR(corner[g.state_of({0, 0})], 0.5 + 3 * 0.0625, 1e-15);
  EXPECT_NEAR(corner[g.state_of({0, 1})], 2 * 0.0625, 1e-15);
  EXPECT_NEAR(corner[g.state_of({1, 0})], 2 * 0.0625, 1e-15);
  EXPECT_NEAR(corner[g.state_of({1, 1})], 0.0625, 1e-15);
}

TEST(PriorSet, ThreeStateCounts) {
  const PerceptionMDP m = build_three_state();
  const BeliefSets sets = build_prior_set(build_simplex_grid(3, 0.2), m);
  EXPECT_EQ(sets.num_posteriors(), 21u);
  EXPECT_EQ(sets.num_prior_images(), 63u);
  EXPECT_LE(sets.num_priors(), 63u);
  EXPECT_TRUE(sets.check_invariants(m).empty());
  for (std::size_t mi = 0; mi < 21; ++mi) {
    for (std::size_t a = 0; a < 3; ++a) {
      const Belief p = predict(sets.posterior(mi), a, m);
      EXPECT_LE(max_norm_distance(p.probs(), sets.prior(sets.prior_index(mi, a)).probs()), 1e-12);
    }
  }
  for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(sets.posterior(sets.vertex_index(s)), Belief::vertex(3, s));
}

TEST(PriorSet, IdentityDynamicsGivePosteriorsBack) {
  const PerceptionMDP ident(3, 1, {1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}, 0.5, 1);
  const BeliefSets sets = build_prior_set(build_simplex_grid(3, 0.5), ident);
  EXPECT_EQ(sets.priors(), sets.posteriors());
}

TEST(PriorSet, MissingVertexNamed) {
  std::vector<Belief> post = build_simplex_grid(3, 0.5);
  post.erase(std::remove(post.begin(), post.end(), Belief::vertex(3, 1)), post.end());
  try {
    build_prior_set(post, build_three_state());
    FAIL() << "expected BeliefError";
  } catch (const BeliefError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(PriorSet, ExtraPriorsAppendedAndDeduplicated) {
  const PerceptionMDP m = build_three_state();
  const std::vector<Belief> extra{Belief::vertex(3, 0), Belief({0.3, 0.3, 0.4})};
  const BeliefSets plain = build_prior_set(build_simplex_grid(3, 0.2), m);
  const BeliefSets sets = build_prior_set(build_simplex_grid(3, 0.2), m, extra);
  ASSERT_EQ(sets.extra_prior_indices().size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_LE(max_norm_distance(sets.prior(sets.extra_prior_indices()[k]).probs(), extra[k].probs()), 1e-10);
  }
  EXPECT_GE(sets.num_priors(), plain.num_priors());
  EXPECT_LE(sets.num_priors(), plain.num_priors() + 2);
  EXPECT_TRUE(sets.check_invariants(m).empty());
}

TEST(Dedup, KeepFirstWithinTolerance) {
  const std::vector<Belief> bs{Belief({0.5, 0.5}), Belief({1.0, 0.0}), Belief::normalized({0.5 + 1e-12, 0.5}),
                               Belief({0.0, 1.0}), Belief({1.0, 0.0})};
  std::vector<std::size_t> kept;
  const auto map = dedup_beliefs(bs, kDedupTol, &kept);
  EXPECT_EQ(map, (std::vector<std::size_t>{0, 1, 0, 3, 1}));
  EXPECT_EQ(kept, (std::vector<std::size_t>{0, 1, 3}));
}

TEST(Project, Examples) {
  const auto grid = build_simplex_grid(3, 0.2);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(project_nearest(grid[i], grid), i);
  const Belief b({0.6, 0.4, 0.0});
  const std::size_t j = project_nearest(b, grid);
  EXPECT_DOUBLE_EQ(grid[j][2], 0.0);
  EXPECT_LE(max_norm_distance(b.probs(), grid[j].probs()), 0.1 + 1e-12);
  // Exhaustive scan oracle: the best feasible distance equals the returned one.
  double best = 2.0;
  for (const Belief& g : grid) {
    if (support_within(g, b)) best = std::min(best, max_norm_distance(b.probs(), g.probs()));
  }
  EXPECT_DOUBLE_EQ(max_norm_distance(b.probs(), grid[j].probs()), best);
  for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(grid[project_nearest(Belief::vertex(3, s), grid)], Belief::vertex(3, s));
}

TEST(Density, SingleStateIsZero) {
  const std::vector<Belief> one{Belief::vertex(1, 0)};
  EXPECT_DOUBLE_EQ(estimate_density(one, 10, 1).value, 0.0);
}

TEST(Density, TwoStateVerticesOnly) {
  // Worst point (0.5, 0.5) can only project onto a vertex: distance exactly 0.5.
  const std::vector<Belief> v{Belief::vertex(2, 0), Belief::vertex(2, 1)};
  const DensityEstimate d = estimate_density(v, 1000, 3);
  EXPECT_NEAR(d.value, 0.5, 1e-12);
  EXPECT_TRUE(d.lower_bound);
  EXPECT_GT(d.num_probes, 1000u);
}

TEST(Density, TwoStateHalfGrid) {
  const DensityEstimate d = estimate_density(build_simplex_grid(2, 0.5), 2000, 9);
  EXPECT_LE(d.value, 0.25 + 1e-12);
  EXPECT_GT(d.value, 0.2);
}

TEST(Dirichlet, MeanIsUniform) {
  RandomStream rng(123, 0);
  std::vector<double> mean(3, 0.0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Belief b = sample_dirichlet(3, rng);
    for (std::size_t s = 0; s < 3; ++s) mean[s] += b[s] / n;
  }
  for (double x : mean) EXPECT_NEAR(x, 1.0 / 3.0, 0.01);
}
