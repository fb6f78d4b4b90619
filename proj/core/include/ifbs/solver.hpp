#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ifbs/belief_sets.hpp"
#include "ifbs/lp.hpp"
#include "ifbs/model.hpp"

namespace ifbs {

class SolveError : public std::runtime_error {
 public:
  SolveError(std::size_t prior_index, const std::string& what)
      : std::runtime_error(what), prior_index_(prior_index) {}
  std::size_t prior_index() const { return prior_index_; }

 private:
  std::size_t prior_index_;
};

/// Nonzero observation probabilities of one prior, by posterior index.
struct SparseAlpha {
  std::vector<std::size_t> index;
  std::vector<double> weight;

  double at(std::size_t m) const;
  static SparseAlpha from_dense(std::span<const double> alpha);
};

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  std::size_t jobs = 0;  // 0 = hardware concurrency
  /// Initial prior values; empty means all zeros.
  std::vector<double> init_prior_values;
  LPOptions lp;
};

struct SolveResult {
  std::vector<double> prior_values;      // V over B
  std::vector<double> posterior_values;  // Vhat over B-hat, consistent with prior_values
  std::vector<SparseAlpha> alpha;        // per prior
  std::vector<std::size_t> best_action;  // per posterior
  std::vector<double> residuals;         // sup-norm change of V per sweep
  std::size_t iterations = 0;
  bool converged = false;

  /// A-posteriori distance of prior_values to the fixed point,
  /// residual * gamma / (1 - gamma).
  double error_bound(double gamma) const;
};

struct PosteriorBackup {
  double value = 0.0;
  std::size_t action = 0;
};

/// Vhat(bhat_m) = min_a [C_a . bhat_m + gamma V(b^{m,a})], lowest action on ties.
PosteriorBackup posterior_backup(std::size_t m, std::span<const double> prior_values,
                                 const PerceptionMDP& model, const BeliefSets& sets);

struct PriorBackup {
  double value = 0.0;
  SparseAlpha alpha;
};

/// Solves the backup LP of one prior from scratch.
PriorBackup prior_backup(std::size_t prior_index, std::span<const double> posterior_values,
                         double beta, const BeliefSets& sets);

/// Max absolute componentwise difference; throws std::invalid_argument on a
/// length mismatch.
double bellman_residual(std::span<const double> previous, std::span<const double> next);

/// The belief-set Bellman operator: one posterior phase then one prior phase.
/// LP structure is assembled once; each prior keeps its optimal basis between
/// applications, since only the objective changes.
class BackupOperator {
 public:
  BackupOperator(const PerceptionMDP& model, const BeliefSets& sets, std::size_t jobs = 0,
                 LPOptions lp_options = {});

  void posterior_phase(std::span<const double> prior_values, std::vector<double>& posterior_values,
                       std::vector<std::size_t>& actions) const;

  /// Throws SolveError naming the prior whose LP fails.
  void prior_phase(std::span<const double> posterior_values, std::vector<double>& prior_values,
                   std::vector<SparseAlpha>* alpha);

  /// (T V) over the priors.
  std::vector<double> apply(std::span<const double> prior_values);

  const LPInstance& instance(std::size_t prior_index) const { return instances_[prior_index]; }
  std::size_t total_pivots() const;

 private:
  const PerceptionMDP* model_;
  const BeliefSets* sets_;
  std::size_t jobs_;
  LPOptions lp_options_;
  std::vector<double> stage_cost_;  // (m, a) -> C_a . bhat_m
  std::vector<LPInstance> instances_;
  std::vector<LPWarmStart> warm_;
  std::vector<std::size_t> pivots_;
};

/// Iterates V <- T V from the initial values until the sup-norm change is at
/// most tol or max_iter sweeps have run. The returned posterior values and
/// actions are recomputed from the final prior values.
SolveResult value_iteration(const PerceptionMDP& model, const BeliefSets& sets,
                            const SolveOptions& options = {});

}  // namespace ifbs
