#include "ifbs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ifbs {

namespace {

void check_alpha(const SparseAlpha& alpha, const BeliefSets& sets) {
  if (alpha.index.size() != alpha.weight.size()) throw PolicyError("malformed sparse alpha");
  double sum = 0.0;
  for (std::size_t k = 0; k < alpha.index.size(); ++k) {
    if (alpha.index[k] >= sets.num_posteriors()) throw PolicyError("alpha index out of range");
    if (!(alpha.weight[k] >= 0.0)) throw PolicyError("alpha has a negative entry");
    sum += alpha.weight[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "alpha sums to " << sum << ", expected 1";
    throw PolicyError(os.str());
  }
}

}  // namespace

Eigen::MatrixXd reconstruct_kernel(std::size_t prior_index, const SparseAlpha& alpha,
                                   const BeliefSets& sets) {
  check_alpha(alpha, sets);
  const Belief& b = sets.prior(prior_index);
  const std::size_t ns = sets.num_states();
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ns),
                                                 static_cast<Eigen::Index>(sets.num_posteriors()));
  for (std::size_t s = 0; s < ns; ++s) {
    const auto row = static_cast<Eigen::Index>(s);
    if (!(b[s] > kSupportTol)) {
      kernel(row, static_cast<Eigen::Index>(sets.vertex_index(s))) = 1.0;
      continue;
    }
    for (std::size_t k = 0; k < alpha.index.size(); ++k) {
      const std::size_t m = alpha.index[k];
      // Rounding can push an entry a few ulps past 1.
      kernel(row, static_cast<Eigen::Index>(m)) = std::min(1.0, alpha.weight[k] * sets.posterior(m)[s] / b[s]);
    }
  }
  return kernel;
}

double stage_information(std::size_t prior_index, const SparseAlpha& alpha, const BeliefSets& sets) {
  const Belief& b = sets.prior(prior_index);
  double info = 0.0;
  for (std::size_t k = 0; k < alpha.index.size(); ++k) {
    info += alpha.weight[k] * kl_divergence(sets.posterior(alpha.index[k]), b);
  }
  return info;
}

double kernel_information(const Belief& prior, const Eigen::MatrixXd& kernel) {
  const Eigen::Index ns = kernel.rows();
  const Eigen::Index nz = kernel.cols();
  Eigen::VectorXd b(ns);
  for (Eigen::Index s = 0; s < ns; ++s) b[s] = prior[static_cast<std::size_t>(s)];
  const Eigen::VectorXd marginal = kernel.transpose() * b;
  double info = 0.0;
  for (Eigen::Index s = 0; s < ns; ++s) {
    if (b[s] == 0.0) continue;
    for (Eigen::Index z = 0; z < nz; ++z) {
      const double p = kernel(s, z);
      if (p <= 0.0) continue;
      info += p * b[s] * std::log(p / marginal[z]);
    }
  }
  return info;
}

PerceptionActionPolicy::PerceptionActionPolicy(const BeliefSets& sets, std::vector<SparseAlpha> alpha,
                                               std::vector<std::size_t> actions)
    : sets_(&sets), alpha_(std::move(alpha)), actions_(std::move(actions)) {
  if (alpha_.size() != sets.num_priors()) throw PolicyError("one alpha vector per prior is required");
  if (actions_.size() != sets.num_posteriors()) {
    throw PolicyError("one action per posterior is required");
  }
  for (std::size_t a : actions_) {
    if (a >= sets.num_actions()) throw PolicyError("action index out of range");
  }
  stage_info_.reserve(alpha_.size());
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    check_alpha(alpha_[i], sets);
    stage_info_.push_back(ifbs::stage_information(i, alpha_[i], sets));
  }
}

PerceptionActionPolicy PerceptionActionPolicy::from_result(const BeliefSets& sets,
                                                           const SolveResult& result) {
  return PerceptionActionPolicy(sets, result.alpha, result.best_action);
}

Eigen::MatrixXd PerceptionActionPolicy::kernel(std::size_t prior_index) const {
  return reconstruct_kernel(prior_index, alpha_[prior_index], *sets_);
}

std::vector<std::pair<std::size_t, double>> PerceptionActionPolicy::kernel_row(
    std::size_t prior_index, std::size_t state) const {
  const Belief& b = sets_->prior(prior_index);
  if (!(b[state] > kSupportTol)) return {{sets_->vertex_index(state), 1.0}};
  const SparseAlpha& al = alpha_[prior_index];
  std::vector<std::pair<std::size_t, double>> row;
  double sum = 0.0;
  for (std::size_t k = 0; k < al.index.size(); ++k) {
    const double p = al.weight[k] * sets_->posterior(al.index[k])[state] / b[state];
    if (p > 0.0) {
      row.emplace_back(al.index[k], p);
      sum += p;
    }
  }
  for (auto& [m, p] : row) p /= sum;
  return row;
}

}  // namespace ifbs
