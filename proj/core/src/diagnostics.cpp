#include "ifbs/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ifbs/rng.hpp"

namespace ifbs {

std::vector<double> mdp_oracle_values(const PerceptionMDP& model, double tol) {
  require_valid(model);
  const std::size_t ns = model.num_states();
  std::vector<double> v(ns, 0.0), next(ns, 0.0);
  for (;;) {
    double change = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      double best = 0.0;
      for (std::size_t a = 0; a < model.num_actions(); ++a) {
        double q = model.cost(s, a);
        const auto row = model.transition_row(a, s);
        for (std::size_t t = 0; t < ns; ++t) q += model.gamma() * row[t] * v[t];
        if (a == 0 || q < best) best = q;
      }
      next[s] = best;
      change = std::max(change, std::abs(best - v[s]));
    }
    v.swap(next);
    // Stop once the a-posteriori bound on the distance to the fixed point is met.
    if (change * model.gamma() <= tol * (1.0 - model.gamma())) break;
  }
  return v;
}

OracleComparison compare_with_mdp_oracle(const PerceptionMDP& model, const BeliefSets& sets,
                                         const SolveResult& result) {
  OracleComparison cmp;
  cmp.oracle = mdp_oracle_values(model);
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    const double v = result.posterior_values.at(sets.vertex_index(s));
    cmp.vertex_values.push_back(v);
    cmp.max_abs_diff = std::max(cmp.max_abs_diff, std::abs(v - cmp.oracle[s]));
  }
  return cmp;
}

ContractionCheck check_contraction(std::span<const double> residuals, double gamma, double slack) {
  ContractionCheck check;
  for (std::size_t k = 1; k < residuals.size(); ++k) {
    const double excess = residuals[k] - gamma * residuals[k - 1];
    check.worst_excess = k == 1 ? excess : std::max(check.worst_excess, excess);
    if (excess > slack) ++check.violations;
  }
  return check;
}

std::pair<double, double> entropy_bound_sides(const Belief& p, const Belief& q) {
  const double eps = max_norm_distance(p.probs(), q.probs());
  if (eps > 0.5) throw std::invalid_argument("entropy bound requires ||p - q||_inf <= 1/2");
  const double lhs = std::abs(entropy(p) - entropy(q));
  const double rhs = eps > 0.0 ? eps * std::abs(std::log(eps)) * static_cast<double>(p.size()) : 0.0;
  return {lhs, rhs};
}

EntropyBoundReport check_entropy_perturbation(std::size_t num_states, std::size_t trials,
                                              std::uint64_t seed) {
  EntropyBoundReport report;
  report.num_states = num_states;
  report.trials = trials;
  RandomStream rng(seed, num_states);
  for (std::size_t t = 0; t < trials; ++t) {
    const Belief p = sample_dirichlet(num_states, rng);
    Belief q = sample_dirichlet(num_states, rng);
    const double eps = max_norm_distance(p.probs(), q.probs());
    // Random shrink so small distances are exercised as well as the 1/2 cap.
    const double scale = std::min(1.0, 0.5 / eps) * rng.uniform_open0();
    std::vector<double> mixed(num_states);
    for (std::size_t s = 0; s < num_states; ++s) mixed[s] = p[s] + scale * (q[s] - p[s]);
    q = Belief::normalized(std::move(mixed));
    if (max_norm_distance(p.probs(), q.probs()) > 0.5) continue;

    const auto [lhs, rhs] = entropy_bound_sides(p, q);
    if (rhs > 0.0) report.max_ratio = std::max(report.max_ratio, lhs / rhs);
    if (lhs > rhs + 1e-12) ++report.failures;
  }
  return report;
}

namespace {

// Index of a belief within `pool` matching `b` to kDedupTol, or pool.size().
std::size_t find_belief(const Belief& b, const std::vector<Belief>& pool) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (max_norm_distance(b.probs(), pool[i].probs()) <= kDedupTol) return i;
  }
  return pool.size();
}

}  // namespace

MonotonicityReport refinement_monotonicity(const PerceptionMDP& model,
                                           std::span<const double> spacings,
                                           const SolveOptions& options, double tolerance) {
  if (spacings.empty()) throw std::invalid_argument("at least one spacing is required");
  std::vector<std::size_t> divisions;
  for (double sp : spacings) divisions.push_back(spacing_divisions(sp));
  for (std::size_t i = 1; i < divisions.size(); ++i) {
    if (divisions[i] % divisions[i - 1] != 0) {
      std::ostringstream os;
      os << "spacing " << spacings[i] << " is not nested in " << spacings[i - 1];
      throw std::invalid_argument(os.str());
    }
  }

  MonotonicityReport report;
  report.spacings.assign(spacings.begin(), spacings.end());
  std::vector<BeliefSets> sets;
  std::vector<SolveResult> results;
  for (std::size_t i = 0; i < divisions.size(); ++i) {
    sets.push_back(build_prior_set(build_simplex_grid(model.num_states(), divisions[i]), model));
    results.push_back(value_iteration(model, sets.back(), options));
    const BeliefSets& bs = sets.back();
    const SolveResult& r = results.back();
    if (!r.converged) {
      report.failures.push_back("solve at spacing " + std::to_string(spacings[i]) +
                                " did not converge");
    }
    report.num_posteriors.push_back(bs.num_posteriors());
    report.num_priors.push_back(bs.num_priors());
    report.mean_prior_value.push_back(
        std::accumulate(r.prior_values.begin(), r.prior_values.end(), 0.0) /
        static_cast<double>(r.prior_values.size()));
    for (std::size_t k = 0; k < bs.num_priors(); ++k) {
      report.rows.push_back({spacings[i], true, k, bs.prior(k).vector(), r.prior_values[k]});
    }
    for (std::size_t k = 0; k < bs.num_posteriors(); ++k) {
      report.rows.push_back({spacings[i], false, k, bs.posterior(k).vector(), r.posterior_values[k]});
    }
  }

  auto compare = [&](std::size_t coarse, std::size_t fine, bool prior) {
    const auto& from = prior ? sets[coarse].priors() : sets[coarse].posteriors();
    const auto& to = prior ? sets[fine].priors() : sets[fine].posteriors();
    const auto& v_from = prior ? results[coarse].prior_values : results[coarse].posterior_values;
    const auto& v_to = prior ? results[fine].prior_values : results[fine].posterior_values;
    for (std::size_t k = 0; k < from.size(); ++k) {
      const std::size_t j = find_belief(from[k], to);
      if (j == to.size()) {
        if (!prior) {
          report.failures.push_back("posterior " + std::to_string(k) + " at spacing " +
                                    std::to_string(spacings[coarse]) + " missing from the finer grid");
        }
        continue;
      }
      ++report.comparisons;
      const double excess = v_to[j] - v_from[k];
      report.max_violation = std::max(report.max_violation, excess);
      if (excess > tolerance) {
        std::ostringstream os;
        os.precision(12);
        os << (prior ? "prior " : "posterior ") << k << " value rises from " << v_from[k] << " to "
           << v_to[j] << " refining spacing " << spacings[coarse] << " -> " << spacings[fine];
        report.failures.push_back(os.str());
      }
    }
  };
  for (std::size_t i = 0; i + 1 < divisions.size(); ++i) {
    for (std::size_t j = i + 1; j < divisions.size(); ++j) {
      compare(i, j, true);
      compare(i, j, false);
    }
  }
  return report;
}

BoundReport approximation_bound(const PerceptionMDP& model, const BeliefSets& sets,
                                const SolveResult& result, std::size_t samples,
                                std::uint64_t seed) {
  BoundReport rep;
  const DensityEstimate density = estimate_density(sets.posteriors(), samples, seed);
  rep.eps_hat = density.value;
  rep.num_probes = density.num_probes;
  const double ns = static_cast<double>(model.num_states());

  const double radius = rep.eps_hat * ns;
  const auto& v = result.prior_values;
  if (radius >= 1.0) {
    // Every pair of beliefs is within max-norm distance 1.
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    rep.delta_hat = *hi - *lo;
  } else {
    for (std::size_t i = 0; i < sets.num_priors(); ++i) {
      for (std::size_t j = i + 1; j < sets.num_priors(); ++j) {
        if (std::abs(v[i] - v[j]) <= rep.delta_hat) continue;
        if (max_norm_distance(sets.prior(i).probs(), sets.prior(j).probs()) <= radius) {
          rep.delta_hat = std::abs(v[i] - v[j]);
        }
      }
    }
  }

  for (const Belief& b : sets.priors()) {
    double term = 0.0;
    for (std::size_t s : support(b)) term += std::abs(std::log(b[s]));
    rep.log_support_term = std::max(rep.log_support_term, term);
  }
  for (std::size_t s = 0; s < model.num_states(); ++s) {
    for (std::size_t a = 0; a < model.num_actions(); ++a) rep.cost_term += std::abs(model.cost(s, a));
  }

  const double e = rep.eps_hat;
  const double entropy_term = e > 0.0 ? e * std::abs(std::log(e)) * ns : 0.0;
  rep.epsilon = model.gamma() * rep.delta_hat + model.beta() * entropy_term +
                e * (model.beta() * rep.log_support_term + rep.cost_term);
  rep.limsup_bound = rep.epsilon / (1.0 - model.gamma());
  rep.caveats =
      "density estimated from " + std::to_string(rep.num_probes) +
      " probes is a lower bound on the supremum over the simplex; regularity is a proxy from "
      "the computed prior values, not from the exact value function, which is not computable; "
      "the log-support term is maximised over all priors";
  return rep;
}

}  // namespace ifbs
