#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ifbs/model.hpp"
#include "ifbs/policy.hpp"
#include "ifbs/solver.hpp"

namespace ifbs {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepRecord {
  std::size_t state = 0;        // true state at this step
  std::size_t prior = 0;        // prior index held before observing
  std::size_t observation = 0;  // observation symbol, identical to the posterior index
  std::size_t posterior = 0;
  std::size_t action = 0;
  double cost = 0.0;            // C(state, action)
  double information = 0.0;     // stage information of the prior, nats
};

struct RolloutTrace {
  std::vector<StepRecord> steps;
  std::vector<std::size_t> states;  // true state at t = 0..horizon
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::size_t horizon = 0;
};

/// Closed-loop run of the policy against the true dynamics. The observation is
/// drawn from the kernel row of the true state; the agent itself only tracks
/// indices. Randomness comes from Philox substream `trial` of `seed`.
RolloutTrace rollout(const PerceptionMDP& model, const PerceptionActionPolicy& policy,
                     std::size_t initial_prior, std::size_t initial_state, std::size_t horizon,
                     std::uint64_t seed, std::uint64_t trial = 0);

struct InvarianceReport {
  std::size_t steps_checked = 0;
  std::size_t violations = 0;
  double max_bayes_error = 0.0;  // max-norm of Bayes(prior, column m) - bhat_m
};

/// Re-derives each step's posterior by Bayes rule from the prior and the
/// kernel column of the observation, and checks the prior chain.
InvarianceReport check_invariance(const RolloutTrace& trace, const PerceptionActionPolicy& policy);

struct ResidenceHistogram {
  std::vector<std::vector<double>> fractions;  // [t][state], t = 0..horizon
  std::size_t trials = 0;
};

struct CostSummary {
  double mean_environment = 0.0;  // sum_t gamma^t C(s_t, a_t)
  double se_environment = 0.0;
  double mean_information = 0.0;  // sum_t gamma^t I_t, nats
  double se_information = 0.0;
  double mean_total = 0.0;        // environment + beta * information
  double se_total = 0.0;
  std::size_t trials = 0;
  std::size_t horizon = 0;
};

struct BatchResult {
  ResidenceHistogram residence;
  CostSummary costs;
};

/// Initial true state of trial `trial`, drawn from `prior` on a substream
/// disjoint from the rollout substreams.
std::size_t sample_initial_state(const Belief& prior, std::uint64_t seed, std::uint64_t trial);

/// Independent trials; trial k starts from sample_initial_state(b0, seed, k)
/// and runs rollout(..., seed, k). Aggregation runs in trial order.
BatchResult batch_rollouts(const PerceptionMDP& model, const PerceptionActionPolicy& policy,
                           std::size_t initial_prior, std::size_t horizon, std::size_t trials,
                           std::uint64_t seed, std::size_t jobs = 0);

struct PlanComparison {
  double planned = 0.0;        // V(b0)
  double empirical = 0.0;      // mean discounted total
  double standard_error = 0.0;
  double difference = 0.0;     // |planned - empirical|
  double tail_bound = 0.0;     // gamma^T max|V|
  /// difference <= k * standard_error + tail_bound
  bool consistent(double k) const { return difference <= k * standard_error + tail_bound; }
};

PlanComparison empirical_vs_planned(std::size_t prior_index, const SolveResult& result,
                                    const BatchResult& batch, double gamma);

}  // namespace ifbs
