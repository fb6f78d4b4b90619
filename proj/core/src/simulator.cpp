#include "ifbs/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "ifbs/parallel.hpp"
#include "ifbs/rng.hpp"

namespace ifbs {

namespace {

template <typename Weights>
std::size_t sample_index(RandomStream& rng, const Weights& weights) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

double mean_and_se(const std::vector<double>& xs, double& se) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  se = xs.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return mean;
}

}  // namespace

RolloutTrace rollout(const PerceptionMDP& model, const PerceptionActionPolicy& policy,
                     std::size_t initial_prior, std::size_t initial_state, std::size_t horizon,
                     std::uint64_t seed, std::uint64_t trial) {
  const BeliefSets& sets = policy.sets();
  if (initial_prior >= sets.num_priors()) throw SimulationError("initial prior index out of range");
  if (initial_state >= model.num_states()) throw SimulationError("initial state out of range");
  if (!(sets.prior(initial_prior)[initial_state] > kSupportTol)) {
    throw SimulationError("initial state lies outside the support of the initial prior");
  }

  RolloutTrace trace;
  trace.seed = seed;
  trace.trial = trial;
  trace.horizon = horizon;
  trace.steps.reserve(horizon);
  trace.states.reserve(horizon + 1);

  RandomStream rng(seed, trial);
  std::size_t state = initial_state;
  std::size_t prior = initial_prior;
  trace.states.push_back(state);
  for (std::size_t t = 0; t < horizon; ++t) {
    StepRecord step;
    step.state = state;
    step.prior = prior;

    const auto row = policy.kernel_row(prior, state);
    double u = rng.uniform();
    std::size_t m = row.back().first;
    for (const auto& [obs, p] : row) {
      if (u < p) {
        m = obs;
        break;
      }
      u -= p;
    }
    if (policy.alpha(prior).at(m) <= 0.0) {
      throw SimulationError("sampled an observation with zero probability at prior " +
                            std::to_string(prior));
    }
    step.observation = m;
    step.posterior = m;
    step.action = policy.action_of(m);
    step.cost = model.cost(state, step.action);
    step.information = policy.stage_information(prior);

    state = sample_index(rng, model.transition_row(step.action, state));
    prior = sets.prior_index(m, step.action);
    trace.steps.push_back(step);
    trace.states.push_back(state);
  }
  return trace;
}

InvarianceReport check_invariance(const RolloutTrace& trace, const PerceptionActionPolicy& policy) {
  const BeliefSets& sets = policy.sets();
  InvarianceReport report;
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const StepRecord& step = trace.steps[t];
    ++report.steps_checked;
    bool ok = step.prior < sets.num_priors() && step.posterior < sets.num_posteriors() &&
              step.observation == step.posterior;
    if (ok) {
      const Eigen::MatrixXd kernel = policy.kernel(step.prior);
      std::vector<double> likelihood(sets.num_states());
      for (std::size_t s = 0; s < likelihood.size(); ++s) {
        likelihood[s] = std::clamp(kernel(static_cast<Eigen::Index>(s),
                                          static_cast<Eigen::Index>(step.observation)),
                                   0.0, 1.0);
      }
      const BayesResult bayes = bayes_update(sets.prior(step.prior), likelihood);
      const double err = max_norm_distance(bayes.posterior.probs(), sets.posterior(step.posterior).probs());
      report.max_bayes_error = std::max(report.max_bayes_error, err);
      ok = err <= 1e-9;
    }
    if (ok && t + 1 < trace.steps.size()) {
      ok = trace.steps[t + 1].prior == sets.prior_index(step.posterior, step.action);
    }
    if (!ok) ++report.violations;
  }
  return report;
}

std::size_t sample_initial_state(const Belief& prior, std::uint64_t seed, std::uint64_t trial) {
  // Substream ids from 2^63 up never collide with the per-trial rollout streams.
  constexpr std::uint64_t kInitStream = std::uint64_t{1} << 63;
  RandomStream init(seed, kInitStream + trial);
  return sample_index(init, prior.probs());
}

BatchResult batch_rollouts(const PerceptionMDP& model, const PerceptionActionPolicy& policy,
                           std::size_t initial_prior, std::size_t horizon, std::size_t trials,
                           std::uint64_t seed, std::size_t jobs) {
  if (trials == 0) throw SimulationError("at least one trial is required");
  const BeliefSets& sets = policy.sets();
  if (initial_prior >= sets.num_priors()) throw SimulationError("initial prior index out of range");
  const Belief& b0 = sets.prior(initial_prior);
  const double gamma = model.gamma();

  std::vector<double> env(trials), info(trials), total(trials);
  std::vector<std::vector<std::size_t>> paths(trials);
  parallel_for(trials, jobs, [&](std::size_t k) {
    const std::size_t s0 = sample_initial_state(b0, seed, k);
    const RolloutTrace trace = rollout(model, policy, initial_prior, s0, horizon, seed, k);
    double discount = 1.0, e = 0.0, i = 0.0;
    for (const StepRecord& step : trace.steps) {
      e += discount * step.cost;
      i += discount * step.information;
      discount *= gamma;
    }
    env[k] = e;
    info[k] = i;
    total[k] = e + model.beta() * i;
    paths[k] = trace.states;
  });

  BatchResult out;
  out.residence.trials = trials;
  out.residence.fractions.assign(horizon + 1, std::vector<double>(model.num_states(), 0.0));
  for (std::size_t k = 0; k < trials; ++k) {
    for (std::size_t t = 0; t <= horizon; ++t) out.residence.fractions[t][paths[k][t]] += 1.0;
  }
  for (auto& slice : out.residence.fractions) {
    for (double& f : slice) f /= static_cast<double>(trials);
  }
  CostSummary& c = out.costs;
  c.trials = trials;
  c.horizon = horizon;
  c.mean_environment = mean_and_se(env, c.se_environment);
  c.mean_information = mean_and_se(info, c.se_information);
  c.mean_total = mean_and_se(total, c.se_total);
  return out;
}

PlanComparison empirical_vs_planned(std::size_t prior_index, const SolveResult& result,
                                    const BatchResult& batch, double gamma) {
  PlanComparison cmp;
  cmp.planned = result.prior_values.at(prior_index);
  cmp.empirical = batch.costs.mean_total;
  cmp.standard_error = batch.costs.se_total;
  cmp.difference = std::abs(cmp.planned - cmp.empirical);
  double vmax = 0.0;
  for (double v : result.prior_values) vmax = std::max(vmax, std::abs(v));
  cmp.tail_bound = std::pow(gamma, static_cast<double>(batch.costs.horizon)) * vmax;
  return cmp;
}

}  // namespace ifbs
