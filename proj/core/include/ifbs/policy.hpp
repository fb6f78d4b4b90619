#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ifbs/belief_sets.hpp"
#include "ifbs/solver.hpp"

namespace ifbs {

class PolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Perception kernel P(m | s, b) for one prior, |S| x M. Supported rows follow
/// P(m|s,b) = alpha_m bhat_m(s) / b(s); a row for a state outside supp(b) puts
/// all mass on the vertex posterior of that state. Throws PolicyError when
/// alpha does not sum to one within 1e-9.
Eigen::MatrixXd reconstruct_kernel(std::size_t prior_index, const SparseAlpha& alpha,
                                   const BeliefSets& sets);

/// sum_m alpha_m D(bhat_m || b), in nats.
double stage_information(std::size_t prior_index, const SparseAlpha& alpha, const BeliefSets& sets);

/// Mutual information between state and observation evaluated directly from a
/// kernel: sum_{s,m} P(m|s) b(s) log(P(m|s) / sum_{s'} P(m|s') b(s')).
double kernel_information(const Belief& prior, const Eigen::MatrixXd& kernel);

/// Joint perception/action strategy on a belief set. Kernels are expanded on
/// demand from the per-prior alpha vectors.
class PerceptionActionPolicy {
 public:
  PerceptionActionPolicy(const BeliefSets& sets, std::vector<SparseAlpha> alpha,
                         std::vector<std::size_t> actions);
  static PerceptionActionPolicy from_result(const BeliefSets& sets, const SolveResult& result);

  const BeliefSets& sets() const { return *sets_; }
  const SparseAlpha& alpha(std::size_t prior_index) const { return alpha_[prior_index]; }
  std::size_t action_of(std::size_t posterior_index) const { return actions_[posterior_index]; }
  const std::vector<std::size_t>& actions() const { return actions_; }

  Eigen::MatrixXd kernel(std::size_t prior_index) const;
  /// Nonzero entries of kernel row `state`, normalised to sum to one.
  std::vector<std::pair<std::size_t, double>> kernel_row(std::size_t prior_index,
                                                         std::size_t state) const;
  /// Cached per prior at construction.
  double stage_information(std::size_t prior_index) const { return stage_info_[prior_index]; }

 private:
  const BeliefSets* sets_;
  std::vector<SparseAlpha> alpha_;
  std::vector<std::size_t> actions_;
  std::vector<double> stage_info_;
};

inline std::size_t action_of(std::size_t posterior_index, const PerceptionActionPolicy& policy) {
  return policy.action_of(posterior_index);
}

}  // namespace ifbs
