#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "ifbs/model.hpp"

namespace ifbs {

struct Cell {
  int row = 0;
  int col = 0;
  auto operator<=>(const Cell&) const = default;
};

/// Rover-style grid. States are indexed row-major, state = row * width + col,
/// with row 0 at the top. Goal and rock cells are absorbing.
struct GridworldConfig {
  int width = 0;
  int height = 0;
  Cell start;
  std::vector<Cell> goals;
  std::vector<Cell> rocks;
  double slip_mass = 0.05;
  double step_cost = 1.0;

  std::size_t num_states() const { return static_cast<std::size_t>(width * height); }
  std::size_t state_of(Cell c) const { return static_cast<std::size_t>(c.row * width + c.col); }
  Cell cell_of(std::size_t state) const {
    return {static_cast<int>(state) / width, static_cast<int>(state) % width};
  }
  bool contains(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }
  /// Nearest in-bounds cell (clamps row and column independently).
  Cell clamp(Cell c) const;
  bool is_goal(Cell c) const;
  bool is_rock(Cell c) const;
};

enum class Move : std::size_t { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };
inline constexpr std::size_t kNumMoves = 4;

/// Empty iff the configuration is usable.
std::vector<std::string> validate_gridworld(const GridworldConfig& config);

/// Intended move keeps 1 - slip_mass; the remaining mass is split evenly over
/// the other eight cells of the 3x3 neighbourhood (including staying put).
/// Targets outside the grid are clamped to the nearest in-bounds cell and
/// merged. Throws ModelError on an invalid configuration.
PerceptionMDP build_gridworld(const GridworldConfig& config, double gamma = 0.95,
                              double beta = 0.0);

/// 12x12 rover layout: start on the left, goal on the right, a rock block in
/// the middle with a short corridor below it and a longer detour above.
GridworldConfig mars_layout();

/// 8x8 reduced version of mars_layout() with the same topology.
GridworldConfig mars_small_layout();

}  // namespace ifbs
