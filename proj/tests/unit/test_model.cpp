#include <gtest/gtest.h>

#include <cmath>

#include "ifbs/gridworld.hpp"
#include "ifbs/model.hpp"

using namespace ifbs;

namespace {

PerceptionMDP identity_model(std::size_t ns, double gamma = 0.9, double beta = 1.0) {
  std::vector<double> t(ns * ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) t[s * ns + s] = 1.0;
  return PerceptionMDP(ns, 1, t, std::vector<double>(ns, 0.0), gamma, beta);
}

}  // namespace

TEST(ThreeState, MatchesPublishedMatrices) {
  const PerceptionMDP m = build_three_state();
  EXPECT_TRUE(validate_model(m).empty());
  EXPECT_EQ(m.num_states(), 3u);
  EXPECT_EQ(m.num_actions(), 3u);
  EXPECT_DOUBLE_EQ(m.gamma(), 0.95);
  EXPECT_DOUBLE_EQ(m.beta(), 5.0);

  EXPECT_DOUBLE_EQ(m.transition(0, 0, 0), 0.1);
  EXPECT_DOUBLE_EQ(m.transition(0, 0, 1), 0.9);
  EXPECT_DOUBLE_EQ(m.transition(0, 0, 2), 0.0);
  EXPECT_DOUBLE_EQ(m.transition(2, 0, 0), 0.998);
  EXPECT_DOUBLE_EQ(m.transition(2, 0, 1), 0.001);
  EXPECT_DOUBLE_EQ(m.transition(2, 0, 2), 0.001);
  EXPECT_DOUBLE_EQ(m.transition(1, 1, 0), 0.9);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_DOUBLE_EQ(m.cost(2, a), 1.0);
    EXPECT_DOUBLE_EQ(m.cost(0, a), 0.0);
    EXPECT_DOUBLE_EQ(m.cost(1, a), 0.0);
  }
}

TEST(ThreeState, GammaBetaOverridable) {
  const PerceptionMDP m = build_three_state(0.5, 0.0);
  EXPECT_DOUBLE_EQ(m.gamma(), 0.5);
  EXPECT_DOUBLE_EQ(m.beta(), 0.0);
  EXPECT_DOUBLE_EQ(m.with_beta(20.0).beta(), 20.0);
  EXPECT_DOUBLE_EQ(m.with_gamma(0.1).gamma(), 0.1);
  EXPECT_EQ(m.with_beta(20.0).transition_tensor(), m.transition_tensor());
}

TEST(ValidateModel, ReportsRowSumWithIndices) {
  std::vector<double> t = build_three_state().transition_tensor();
  t[(1 * 3 + 2) * 3 + 0] -= 0.1;  // (a=1, s=2) sums to 0.9
  const PerceptionMDP bad(3, 3, t, build_three_state().cost_matrix(), 0.95, 5.0);
  const auto issues = validate_model(bad);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("a=1"), std::string::npos) << issues[0];
  EXPECT_NE(issues[0].find("s=2"), std::string::npos) << issues[0];
  EXPECT_THROW(require_valid(bad), ModelError);
}

TEST(ValidateModel, DiscountMustBeBelowOne) {
  const auto issues = validate_model(build_three_state().with_gamma(1.0));
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_NE(issues[0].find("gamma"), std::string::npos);
}

TEST(ValidateModel, NegativeCostAndBeta) {
  std::vector<double> c = build_three_state().cost_matrix();
  c[0] = -1.0;
  const PerceptionMDP bad(3, 3, build_three_state().transition_tensor(), c, 0.95, -1.0);
  EXPECT_EQ(validate_model(bad).size(), 2u);
}

TEST(ValidateModel, ShapeMismatch) {
  EXPECT_THROW(PerceptionMDP(2, 1, {1.0, 0.0, 0.0}, {0.0, 0.0}, 0.5, 0.0), ModelError);
  const PerceptionMDP empty(0, 0, {}, {}, 0.5, 0.0);
  EXPECT_FALSE(validate_model(empty).empty());
}

TEST(ValidateModel, EntriesOutsideUnitInterval) {
  const PerceptionMDP bad(2, 1, {1.5, -0.5, 0.0, 1.0}, {0.0, 0.0}, 0.5, 0.0);
  EXPECT_FALSE(validate_model(bad).empty());
}

TEST(ValidateModel, IdentityIsValid) { EXPECT_TRUE(validate_model(identity_model(4)).empty()); }

class GridworldTest : public ::testing::Test {
 protected:
  GridworldConfig open_grid() {
    GridworldConfig g;
    g.width = 5;
    g.height = 4;
    g.start = {3, 0};
    g.goals = {{0, 4}};
    g.rocks = {{1, 2}};
    return g;
  }
};

TEST_F(GridworldTest, InteriorSlipSplit) {
  const GridworldConfig g = open_grid();
  const PerceptionMDP m = build_gridworld(g);
  const std::size_t s = g.state_of({2, 2});
  const auto right = static_cast<std::size_t>(Move::kRight);
  EXPECT_NEAR(m.transition(right, s, g.state_of({2, 3})), 0.95, 1e-15);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 1) continue;
      EXPECT_NEAR(m.transition(right, s, g.state_of({2 + dr, 2 + dc})), 0.05 / 8, 1e-15)
          << dr << "," << dc;
    }
  }
}

TEST_F(GridworldTest, MoveDirections) {
  const GridworldConfig g = open_grid();
  const PerceptionMDP m = build_gridworld(g, 0.95, 0.0);
  const std::size_t s = g.state_of({2, 1});
  EXPECT_NEAR(m.transition(static_cast<std::size_t>(Move::kLeft), s, g.state_of({2, 0})), 0.95, 1e-15);
  EXPECT_NEAR(m.transition(static_cast<std::size_t>(Move::kUp), s, g.state_of({1, 1})), 0.95, 1e-15);
  EXPECT_NEAR(m.transition(static_cast<std::size_t>(Move::kDown), s, g.state_of({3, 1})), 0.95, 1e-15);
}

TEST_F(GridworldTest, AbsorbingCellsAndCosts) {
  const GridworldConfig g = open_grid();
  const PerceptionMDP m = build_gridworld(g);
  for (Cell c : {g.goals[0], g.rocks[0]}) {
    const std::size_t s = g.state_of(c);
    for (std::size_t a = 0; a < kNumMoves; ++a) EXPECT_DOUBLE_EQ(m.transition(a, s, s), 1.0);
  }
  for (std::size_t a = 0; a < kNumMoves; ++a) {
    EXPECT_DOUBLE_EQ(m.cost(g.state_of(g.goals[0]), a), 0.0);
    EXPECT_DOUBLE_EQ(m.cost(g.state_of(g.rocks[0]), a), 1.0);
    EXPECT_DOUBLE_EQ(m.cost(g.state_of({3, 3}), a), 1.0);
  }
}

TEST_F(GridworldTest, CornerMassFoldsOntoGrid) {
  const GridworldConfig g = open_grid();
  const PerceptionMDP m = build_gridworld(g);
  // Oracle: enumerate the 3x3 neighbourhood of the top-left corner, clamp, sum.
  const std::size_t s = g.state_of({0, 0});
  const auto up = static_cast<std::size_t>(Move::kUp);
  std::vector<double> expected(g.num_states(), 0.0);
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      const double p = (dr == -1 && dc == 0) ? 0.95 : 0.05 / 8;
      const Cell t{std::max(0, dr), std::max(0, dc)};
      expected[g.state_of(t)] += p;
    }
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < g.num_states(); ++t) {
    EXPECT_NEAR(m.transition(up, s, t), expected[t], 1e-15);
    sum += m.transition(up, s, t);
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(m.transition(up, s, s), 0.95 + 3 * 0.05 / 8, 1e-15);
}

TEST_F(GridworldTest, EveryRowStochastic) {
  for (const GridworldConfig& g : {open_grid(), mars_layout(), mars_small_layout()}) {
    const PerceptionMDP m = build_gridworld(g);
    EXPECT_TRUE(validate_model(m).empty());
  }
}

TEST_F(GridworldTest, InvalidConfigsRejected) {
  GridworldConfig g = open_grid();
  g.rocks.push_back(g.goals[0]);
  EXPECT_FALSE(validate_gridworld(g).empty());
  EXPECT_THROW(build_gridworld(g), ModelError);

  g = open_grid();
  g.start = g.rocks[0];
  EXPECT_FALSE(validate_gridworld(g).empty());

  g = open_grid();
  g.slip_mass = 1.0;
  EXPECT_FALSE(validate_gridworld(g).empty());

  g = open_grid();
  g.goals.push_back({7, 7});
  EXPECT_FALSE(validate_gridworld(g).empty());
}

TEST(MarsLayout, Dimensions) {
  const GridworldConfig big = mars_layout();
  EXPECT_EQ(big.num_states(), 144u);
  EXPECT_TRUE(validate_gridworld(big).empty());
  const GridworldConfig small = mars_small_layout();
  EXPECT_EQ(small.num_states(), 64u);
  EXPECT_TRUE(validate_gridworld(small).empty());
  EXPECT_FALSE(small.rocks.empty());
  EXPECT_FALSE(small.goals.empty());
}

TEST(Cells, RowMajorIndexing) {
  GridworldConfig g;
  g.width = 7;
  g.height = 3;
  EXPECT_EQ(g.state_of({2, 5}), 19u);
  EXPECT_EQ(g.cell_of(19), (Cell{2, 5}));
  EXPECT_EQ(g.clamp({-3, 9}), (Cell{0, 6}));
}
