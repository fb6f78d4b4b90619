#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifbs/belief_sets.hpp"
#include "ifbs/model.hpp"
#include "ifbs/solver.hpp"

namespace ifbs {

/// Classical value iteration on the fully observed MDP,
/// V(s) = min_a [C(s,a) + gamma sum_{s'} T(s'|a,s) V(s')], to tol in sup-norm.
std::vector<double> mdp_oracle_values(const PerceptionMDP& model, double tol = 1e-10);

struct OracleComparison {
  std::vector<double> oracle;        // per state
  std::vector<double> vertex_values; // Vhat at the vertex posteriors
  double max_abs_diff = 0.0;
};

/// Compares Vhat at every vertex posterior against mdp_oracle_values.
OracleComparison compare_with_mdp_oracle(const PerceptionMDP& model, const BeliefSets& sets,
                                         const SolveResult& result);

struct ContractionCheck {
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max of r_{k+1} - gamma r_k
};

/// Checks r_{k+1} <= gamma r_k + slack over a residual trace.
ContractionCheck check_contraction(std::span<const double> residuals, double gamma,
                                   double slack = 1e-9);

struct EntropyBoundReport {
  std::size_t num_states = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_ratio = 0.0;  // max |H(p)-H(q)| / (eps |log eps| |S|) over pairs with eps > 0
  bool passed() const { return failures == 0; }
};

/// Left and right side of |H(p) - H(q)| <= eps |log eps| |S| with
/// eps = ||p - q||_inf, which must not exceed 1/2.
std::pair<double, double> entropy_bound_sides(const Belief& p, const Belief& q);

/// Random pairs: p uniform on the simplex, q drawn the same way and pulled
/// towards p so that ||p - q||_inf <= 1/2.
EntropyBoundReport check_entropy_perturbation(std::size_t num_states, std::size_t trials,
                                              std::uint64_t seed);

struct MonotonicityRow {
  double spacing = 0.0;
  bool prior = true;  // false: posterior
  std::size_t index = 0;
  std::vector<double> belief;
  double value = 0.0;
};

struct MonotonicityReport {
  std::vector<double> spacings;
  std::vector<std::size_t> num_posteriors;
  std::vector<std::size_t> num_priors;
  std::vector<double> mean_prior_value;
  std::vector<MonotonicityRow> rows;
  std::size_t comparisons = 0;
  double max_violation = 0.0;  // max over shared beliefs of V_fine - V_coarse
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Solves on simplex grids of increasing resolution and checks that values do
/// not increase on beliefs shared between grids. Throws std::invalid_argument
/// unless each grid's resolution divides the next.
MonotonicityReport refinement_monotonicity(const PerceptionMDP& model,
                                           std::span<const double> spacings,
                                           const SolveOptions& options = {},
                                           double tolerance = 1e-8);

struct BoundReport {
  double eps_hat = 0.0;
  double delta_hat = 0.0;
  double log_support_term = 0.0;  // max over priors of sum_{s in supp b} |log b(s)|
  double cost_term = 0.0;         // sum_{s,a} |C(s,a)|
  double epsilon = 0.0;
  double limsup_bound = 0.0;      // epsilon / (1 - gamma)
  std::size_t num_probes = 0;
  std::string caveats;
};

/// Evaluates the per-step operator gap
///   eps = gamma dhat + ehat beta |log ehat| |S| + ehat (beta L + sum |C|)
/// and the asymptotic bound eps / (1 - gamma). ehat comes from
/// estimate_density (a lower bound) and dhat is a proxy from the computed
/// values, so the report is a diagnostic rather than a certificate.
BoundReport approximation_bound(const PerceptionMDP& model, const BeliefSets& sets,
                                const SolveResult& result, std::size_t samples,
                                std::uint64_t seed);

}  // namespace ifbs
