#include "ifbs/gridworld.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ifbs {

Cell GridworldConfig::clamp(Cell c) const {
  return {std::clamp(c.row, 0, height - 1), std::clamp(c.col, 0, width - 1)};
}

bool GridworldConfig::is_goal(Cell c) const {
  return std::find(goals.begin(), goals.end(), c) != goals.end();
}

bool GridworldConfig::is_rock(Cell c) const {
  return std::find(rocks.begin(), rocks.end(), c) != rocks.end();
}

std::vector<std::string> validate_gridworld(const GridworldConfig& config) {
  std::vector<std::string> issues;
  if (config.width <= 0 || config.height <= 0) {
    issues.emplace_back("grid dimensions must be positive");
    return issues;
  }
  auto describe = [](Cell c) {
    std::ostringstream os;
    os << "(" << c.row << "," << c.col << ")";
    return os.str();
  };
  if (!config.contains(config.start)) issues.push_back("start cell " + describe(config.start) + " is outside the grid");
  for (const Cell& g : config.goals) {
    if (!config.contains(g)) issues.push_back("goal cell " + describe(g) + " is outside the grid");
  }
  std::set<Cell> rocks;
  for (const Cell& r : config.rocks) {
    if (!config.contains(r)) issues.push_back("rock cell " + describe(r) + " is outside the grid");
    rocks.insert(r);
  }
  for (const Cell& g : config.goals) {
    if (rocks.count(g)) issues.push_back("cell " + describe(g) + " is both goal and rock");
  }
  if (rocks.count(config.start)) issues.push_back("start cell " + describe(config.start) + " is a rock");
  if (!(config.slip_mass >= 0.0 && config.slip_mass < 1.0)) {
    issues.emplace_back("slip_mass must lie in [0, 1)");
  }
  if (!(config.step_cost >= 0.0)) issues.emplace_back("step_cost must be >= 0");
  return issues;
}

PerceptionMDP build_gridworld(const GridworldConfig& config, double gamma, double beta) {
  if (auto issues = validate_gridworld(config); !issues.empty()) {
    std::string msg = "invalid gridworld:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw ModelError(msg);
  }

  const std::size_t ns = config.num_states();
  std::vector<double> t(kNumMoves * ns * ns, 0.0);
  std::vector<double> c(ns * kNumMoves, 0.0);
  constexpr int kDr[kNumMoves] = {0, 0, -1, 1};
  constexpr int kDc[kNumMoves] = {-1, 1, 0, 0};
  const double slip_each = config.slip_mass / 8.0;

  for (std::size_t s = 0; s < ns; ++s) {
    const Cell here = config.cell_of(s);
    const bool goal = config.is_goal(here);
    const bool absorbing = goal || config.is_rock(here);
    for (std::size_t a = 0; a < kNumMoves; ++a) {
      double* row = t.data() + (a * ns + s) * ns;
      c[s * kNumMoves + a] = goal ? 0.0 : config.step_cost;
      if (absorbing) {
        row[s] = 1.0;
        continue;
      }
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const bool intended = dr == kDr[a] && dc == kDc[a];
          const Cell target = config.clamp({here.row + dr, here.col + dc});
          row[config.state_of(target)] += intended ? 1.0 - config.slip_mass : slip_each;
        }
      }
    }
  }
  return PerceptionMDP(ns, kNumMoves, std::move(t), std::move(c), gamma, beta);
}

namespace {

std::vector<Cell> block(int row0, int row1, int col0, int col1) {
  std::vector<Cell> cells;
  for (int r = row0; r <= row1; ++r) {
    for (int col = col0; col <= col1; ++col) cells.push_back({r, col});
  }
  return cells;
}

}  // namespace

GridworldConfig mars_layout() {
  GridworldConfig g;
  g.width = 12;
  g.height = 12;
  g.start = {9, 1};
  g.goals = block(8, 9, 10, 11);
  g.rocks = block(3, 8, 4, 7);
  return g;
}

GridworldConfig mars_small_layout() {
  GridworldConfig g;
  g.width = 8;
  g.height = 8;
  g.start = {6, 0};
  g.goals = block(5, 6, 7, 7);
  g.rocks = block(2, 5, 3, 4);
  return g;
}

}  // namespace ifbs
