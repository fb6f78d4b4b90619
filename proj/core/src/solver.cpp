#include "ifbs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ifbs/parallel.hpp"

namespace ifbs {

double SparseAlpha::at(std::size_t m) const {
  auto it = std::lower_bound(index.begin(), index.end(), m);
  return it != index.end() && *it == m ? weight[static_cast<std::size_t>(it - index.begin())] : 0.0;
}

SparseAlpha SparseAlpha::from_dense(std::span<const double> alpha) {
  SparseAlpha out;
  for (std::size_t m = 0; m < alpha.size(); ++m) {
    if (alpha[m] > 0.0) {
      out.index.push_back(m);
      out.weight.push_back(alpha[m]);
    }
  }
  return out;
}

double SolveResult::error_bound(double gamma) const {
  if (residuals.empty()) return 0.0;
  return residuals.back() * gamma / (1.0 - gamma);
}

PosteriorBackup posterior_backup(std::size_t m, std::span<const double> prior_values,
                                 const PerceptionMDP& model, const BeliefSets& sets) {
  const Belief& post = sets.posterior(m);
  PosteriorBackup best;
  for (std::size_t a = 0; a < model.num_actions(); ++a) {
    double q = 0.0;
    for (std::size_t s = 0; s < model.num_states(); ++s) q += model.cost(s, a) * post[s];
    q += model.gamma() * prior_values[sets.prior_index(m, a)];
    if (a == 0 || q < best.value) {
      best.value = q;
      best.action = a;
    }
  }
  return best;
}

PriorBackup prior_backup(std::size_t prior_index, std::span<const double> posterior_values,
                         double beta, const BeliefSets& sets) {
  const LPInstance lp = assemble_lp(sets.prior(prior_index), sets.posteriors(), posterior_values,
                                    beta, prior_index);
  const LPSolution sol = solve_lp(lp);
  if (sol.status != LPStatus::kOptimal) {
    throw SolveError(prior_index, "backup LP for prior " + std::to_string(prior_index) +
                                      " ended with status " + to_string(sol.status));
  }
  return {sol.objective, SparseAlpha::from_dense(sol.alpha)};
}

double bellman_residual(std::span<const double> previous, std::span<const double> next) {
  if (previous.size() != next.size()) {
    throw std::invalid_argument("bellman_residual: length mismatch");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < previous.size(); ++i) r = std::max(r, std::abs(next[i] - previous[i]));
  return r;
}

BackupOperator::BackupOperator(const PerceptionMDP& model, const BeliefSets& sets, std::size_t jobs,
                               LPOptions lp_options)
    : model_(&model), sets_(&sets), jobs_(jobs), lp_options_(lp_options) {
  require_valid(model);
  if (sets.num_states() != model.num_states() || sets.num_actions() != model.num_actions()) {
    throw std::invalid_argument("belief sets were built for a different model");
  }
  const std::size_t M = sets.num_posteriors();
  const std::size_t na = model.num_actions();
  stage_cost_.resize(M * na);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t a = 0; a < na; ++a) {
      double q = 0.0;
      for (std::size_t s = 0; s < model.num_states(); ++s) q += model.cost(s, a) * sets.posterior(m)[s];
      stage_cost_[m * na + a] = q;
    }
  }
  const std::vector<double> zeros(M, 0.0);
  instances_.resize(sets.num_priors());
  warm_.resize(sets.num_priors());
  pivots_.assign(sets.num_priors(), 0);
  parallel_for(sets.num_priors(), jobs_, [&](std::size_t i) {
    instances_[i] = assemble_lp(sets.prior(i), sets.posteriors(), zeros, model.beta(), i);
  });
}

void BackupOperator::posterior_phase(std::span<const double> prior_values,
                                     std::vector<double>& posterior_values,
                                     std::vector<std::size_t>& actions) const {
  const std::size_t M = sets_->num_posteriors();
  const std::size_t na = model_->num_actions();
  const double gamma = model_->gamma();
  posterior_values.resize(M);
  actions.resize(M);
  parallel_for(M, jobs_, [&](std::size_t m) {
    double best = 0.0;
    std::size_t best_a = 0;
    for (std::size_t a = 0; a < na; ++a) {
      const double q = stage_cost_[m * na + a] + gamma * prior_values[sets_->prior_index(m, a)];
      if (a == 0 || q < best) {
        best = q;
        best_a = a;
      }
    }
    posterior_values[m] = best;
    actions[m] = best_a;
  });
}

void BackupOperator::prior_phase(std::span<const double> posterior_values,
                                 std::vector<double>& prior_values, std::vector<SparseAlpha>* alpha) {
  const std::size_t n = instances_.size();
  prior_values.resize(n);
  if (alpha) alpha->resize(n);
  const double beta = model_->beta();
  parallel_for(n, jobs_, [&](std::size_t i) {
    update_lp_costs(instances_[i], posterior_values, beta);
    const LPSolution sol = solve_lp(instances_[i], &warm_[i], lp_options_);
    if (sol.status != LPStatus::kOptimal) {
      throw SolveError(i, "backup LP for prior " + std::to_string(i) + " ended with status " +
                              to_string(sol.status));
    }
    pivots_[i] += sol.pivots;
    prior_values[i] = sol.objective;
    if (alpha) (*alpha)[i] = SparseAlpha::from_dense(sol.alpha);
  });
}

std::vector<double> BackupOperator::apply(std::span<const double> prior_values) {
  std::vector<double> post;
  std::vector<std::size_t> actions;
  std::vector<double> next;
  posterior_phase(prior_values, post, actions);
  prior_phase(post, next, nullptr);
  return next;
}

std::size_t BackupOperator::total_pivots() const {
  return std::accumulate(pivots_.begin(), pivots_.end(), std::size_t{0});
}

SolveResult value_iteration(const PerceptionMDP& model, const BeliefSets& sets,
                            const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  BackupOperator op(model, sets, options.jobs, options.lp);

  SolveResult result;
  std::vector<double> values = options.init_prior_values;
  if (values.empty()) values.assign(sets.num_priors(), 0.0);
  if (values.size() != sets.num_priors()) {
    throw std::invalid_argument("initial value vector has the wrong length");
  }

  std::vector<double> next;
  for (std::size_t k = 0; k < options.max_iter; ++k) {
    op.posterior_phase(values, result.posterior_values, result.best_action);
    op.prior_phase(result.posterior_values, next, &result.alpha);
    const double r = bellman_residual(values, next);
    result.residuals.push_back(r);
    values.swap(next);
    ++result.iterations;
    if (r <= options.tol) {
      result.converged = true;
      break;
    }
  }
  op.posterior_phase(values, result.posterior_values, result.best_action);
  result.prior_values = std::move(values);
  return result;
}

}  // namespace ifbs
