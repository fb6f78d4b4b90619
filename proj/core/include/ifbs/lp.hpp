#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ifbs/belief.hpp"

namespace ifbs {

/// One prior-belief backup as a linear program over observation probabilities:
///
///   min  sum_m F_m alpha_m
///   s.t. sum_m alpha_m bhat_m[rows] = b[rows],  alpha >= 0,
///
/// with F_m = beta D(bhat_m || b) + Vhat(bhat_m) and columns restricted to the
/// posteriors whose support lies inside supp(b). All other alpha are zero.
struct LPInstance {
  std::size_t prior_index = 0;
  std::size_t num_posteriors = 0;
  std::vector<std::size_t> rows;        // supp(b), increasing
  std::vector<std::size_t> admissible;  // posterior indices, increasing
  Eigen::VectorXd divergence;           // D(bhat_m || b) per admissible column
  Eigen::VectorXd cost;                 // F per admissible column
  Eigen::MatrixXd constraints;          // |rows| x |admissible|
  Eigen::VectorXd rhs;                  // b[rows], strictly positive
  /// Admissible column holding the unit vector of each row, or -1.
  std::vector<Eigen::Index> vertex_column;
};

enum class LPStatus { kOptimal, kInfeasible, kIterationLimit };

const char* to_string(LPStatus status);

struct LPSolution {
  std::vector<double> alpha;  // length num_posteriors
  double objective = 0.0;
  LPStatus status = LPStatus::kInfeasible;
  std::size_t pivots = 0;
};

/// Optimal basis carried between solves of instances that share constraints
/// and differ only in cost. Positions index LPInstance::admissible.
struct LPWarmStart {
  std::vector<Eigen::Index> basis;
  Eigen::MatrixXd inverse;
  std::size_t pivots_since_refactor = 0;
};

struct LPOptions {
  std::size_t max_pivots = 100000;
  std::size_t refactor_interval = 64;
};

std::vector<std::size_t> admissible_posteriors(const Belief& b, std::span<const Belief> posteriors,
                                               double tol = kSupportTol);

/// Builds the instance for prior `b`. Throws BeliefError if no posterior is
/// admissible, which cannot happen when every vertex is present.
LPInstance assemble_lp(const Belief& b, std::span<const Belief> posteriors,
                       std::span<const double> posterior_values, double beta,
                       std::size_t prior_index = 0);

/// Recomputes F for new posterior values without touching the constraints.
void update_lp_costs(LPInstance& instance, std::span<const double> posterior_values, double beta);

/// Revised primal simplex with Bland's rule. Starts from `warm` when it holds
/// a feasible basis for this instance, otherwise from the vertex basis
/// alpha_{e_s} = b(s), so no phase 1 is needed. On return `warm` holds the
/// final basis.
LPSolution solve_lp(const LPInstance& instance, LPWarmStart* warm = nullptr,
                    const LPOptions& options = {});

struct FeasibilityCertificate {
  bool feasible = false;
  std::vector<double> alpha;  // alpha_{vertex(s)} = b(s)
  double residual = 0.0;      // max-norm of sum_m alpha_m bhat_m - b
  std::string diagnostics;
};

/// Explicit vertex decomposition of b over the posteriors.
FeasibilityCertificate verify_feasibility(const Belief& b, std::span<const Belief> posteriors);

}  // namespace ifbs
