// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bfs_enumeration.hpp"
#include "ifbs/belief_sets.hpp"
#include "ifbs/diagnostics.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/lp.hpp"
#include "ifbs/model.hpp"
#include "ifbs/policy.hpp"
#include "ifbs/rng.hpp"
#include "ifbs/simulator.hpp"
#include "ifbs/solver.hpp"

using namespace ifbs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  if (!o.pass) ++failures;
  std::printf("%s [%2d] %-28s %8.3fs  %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), t, o.detail.c_str());
  std::fflush(stdout);
}

// Every solve in this run goes through here so the contraction check sees all of them.
std::size_t solves_violating = 0;
std::size_t solves_checked = 0;

SolveResult solve(const PerceptionMDP& model, const BeliefSets& sets) {
  SolveOptions opt;
  opt.tol = 1e-8;
  SolveResult r = value_iteration(model, sets, opt);
  if (check_contraction(r.residuals, model.gamma(), 1e-9).violations > 0) ++solves_violating;
  ++solves_checked;
  return r;
}

BeliefSets grid_sets(const PerceptionMDP& model, double spacing, bool with_uniform) {
  std::vector<Belief> extra;
  if (with_uniform) extra.push_back(Belief::uniform(model.num_states()));
  return build_prior_set(build_simplex_grid(model.num_states(), spacing), model, extra);
}

struct RoverRun {
  double env = 0.0, info = 0.0, rock_final = 0.0, rock_mean = 0.0;
};

RoverRun run_rover(const GridworldConfig& g, double beta) {
  const PerceptionMDP model = build_gridworld(g, 0.95, beta);
  const std::vector<Belief> start{Belief::vertex(model.num_states(), g.state_of(g.start))};
  const BeliefSets sets = build_prior_set(build_local_blur_set(g), model, start);
  const SolveResult r = solve(model, sets);
  if (!r.converged) throw std::runtime_error("rover solve did not converge");
  const PerceptionActionPolicy policy = PerceptionActionPolicy::from_result(sets, r);
  const BatchResult b = batch_rollouts(model, policy, sets.extra_prior_indices().at(0), 100, 1000, 1, 0);
  RoverRun out;
  out.env = b.costs.mean_environment;
  out.info = b.costs.mean_information;
  for (const Cell& c : g.rocks) out.rock_final += b.residence.fractions.back()[g.state_of(c)];
  for (const auto& slice : b.residence.fractions) {
    for (const Cell& c : g.rocks) out.rock_mean += slice[g.state_of(c)];
  }
  out.rock_mean /= static_cast<double>(b.residence.fractions.size());
  return out;
}

}  // namespace

int main() {
  const PerceptionMDP three = build_three_state(0.95, 5.0);
  std::cout << "ifbs acceptance run\n";

  report(1, "belief set counts", [&] {
    auto t0 = Clock::now();
    const BeliefSets small = grid_sets(three, 0.2, false);
    const double t_small = seconds_since(t0);
    t0 = Clock::now();
    const GridworldConfig mars = mars_layout();
    const BeliefSets big = build_prior_set(build_local_blur_set(mars), build_gridworld(mars, 0.95, 20.0));
    const double t_big = seconds_since(t0);
    std::ostringstream os;
    os << "3-state " << small.num_posteriors() << "/" << small.num_prior_images() << " in " << t_small
       << "s, 12x12 " << big.num_posteriors() << "/" << big.num_prior_images() << " in " << t_big << "s";
    const bool ok = small.num_posteriors() == 21 && small.num_prior_images() == 63 && t_small < 1.0 &&
                    big.num_posteriors() == 864 && big.num_prior_images() == 3456 && t_big < 30.0;
    return Outcome{ok, os.str()};
  });

  report(2, "LP feasibility", [&] {
    const auto t0 = Clock::now();
    const BeliefSets sets = grid_sets(three, 0.2, false);
    const std::vector<double> values(sets.num_posteriors(), 0.0);
    RandomStream rng(2024, 0);
    std::size_t bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Belief b = sample_dirichlet(3, rng);
      const FeasibilityCertificate cert = verify_feasibility(b, sets.posteriors());
      worst = std::max(worst, cert.residual);
      const LPSolution sol = solve_lp(assemble_lp(b, sets.posteriors(), values, three.beta()));
      if (!cert.feasible || cert.residual >= 1e-12 || sol.status != LPStatus::kOptimal) ++bad;
    }
    const double t = seconds_since(t0);
    std::ostringstream os;
    os << "1000 priors, " << bad << " failures, worst residual " << worst;
    return Outcome{bad == 0 && t < 5.0, os.str()};
  });

  report(3, "LP vs enumeration", [&] {
    const auto t0 = Clock::now();
    const BeliefSets sets = grid_sets(three, 0.2, true);
    const SolveResult r = solve(three, sets);
    double worst = 0.0;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < sets.num_priors(); ++i) {
      const LPInstance lp = assemble_lp(sets.prior(i), sets.posteriors(), r.posterior_values, three.beta(), i);
      const LPSolution sol = solve_lp(lp);
      const auto ref = testing::enumerate_basic_solutions(lp.constraints, lp.rhs, lp.cost);
      if (sol.status != LPStatus::kOptimal || !ref.feasible) {
        ++bad;
        continue;
      }
      worst = std::max(worst, std::abs(sol.objective - ref.objective));
    }
    const double t = seconds_since(t0);
    std::ostringstream os;
    os << sets.num_priors() << " priors, max objective gap " << worst;
    return Outcome{bad == 0 && worst <= 1e-8 && t < 30.0, os.str()};
  });

  SolveResult fine;
  BeliefSets fine_sets;
  report(4, "contraction, 0.05 grid", [&] {
    const auto t0 = Clock::now();
    fine_sets = grid_sets(three, 0.05, true);
    fine = solve(three, fine_sets);
    const double t = seconds_since(t0);
    const ContractionCheck c = check_contraction(fine.residuals, three.gamma(), 1e-9);
    std::ostringstream os;
    os << fine.iterations << " sweeps, final residual " << fine.residuals.back() << ", violations "
       << c.violations;
    return Outcome{fine.converged && c.violations == 0 && t < 60.0, os.str()};
  });

  report(5, "beta=0 oracle", [&] {
    const PerceptionMDP m0 = build_three_state(0.95, 0.0);
    const BeliefSets sets = grid_sets(m0, 0.2, true);
    const OracleComparison cmp = compare_with_mdp_oracle(m0, sets, solve(m0, sets));
    std::ostringstream os;
    os << "max |Vhat(vertex) - V_mdp| = " << cmp.max_abs_diff;
    return Outcome{cmp.max_abs_diff <= 1e-6, os.str()};
  });

  report(6, "refinement monotonicity", [&] {
    const std::vector<double> spacings{0.2, 0.1, 0.05};
    const MonotonicityReport m = refinement_monotonicity(three, spacings, {}, 1e-8);
    std::ostringstream os;
    os << m.comparisons << " shared comparisons, max increase " << m.max_violation;
    for (std::size_t i = 0; i < m.spacings.size(); ++i) {
      std::printf("       spacing %-5g posteriors %5zu priors %6zu mean V %.6f\n", m.spacings[i],
                  m.num_posteriors[i], m.num_priors[i], m.mean_prior_value[i]);
    }
    bool trend = true;
    for (std::size_t i = 1; i < m.mean_prior_value.size(); ++i) {
      trend = trend && m.mean_prior_value[i] <= m.mean_prior_value[i - 1];
    }
    return Outcome{m.passed() && trend, os.str()};
  });

  report(7, "information identity", [&] {
    double worst = 0.0;
    std::size_t checked = 0;
    for (double spacing : {0.2, 0.05}) {
      const BeliefSets& sets = spacing == 0.05 ? fine_sets : grid_sets(three, spacing, true);
      const SolveResult r = spacing == 0.05 ? fine : solve(three, sets);
      for (std::size_t i = 0; i < sets.num_priors(); ++i) {
        const double decomposed = stage_information(i, r.alpha[i], sets);
        const double direct = kernel_information(sets.prior(i), reconstruct_kernel(i, r.alpha[i], sets));
        worst = std::max(worst, std::abs(decomposed - direct));
        ++checked;
      }
    }
    std::ostringstream os;
    os << checked << " priors, max gap " << worst;
    return Outcome{checked > 0 && worst <= 1e-9, os.str()};
  });

  report(8, "belief set invariance", [&] {
    const PerceptionActionPolicy policy = PerceptionActionPolicy::from_result(fine_sets, fine);
    const std::size_t b0 = fine_sets.extra_prior_indices().at(0);
    const std::size_t s0 = sample_initial_state(fine_sets.prior(b0), 8, 0);
    const RolloutTrace tr = rollout(three, policy, b0, s0, 10000, 8, 0);
    const InvarianceReport inv = check_invariance(tr, policy);
    std::ostringstream os;
    os << inv.steps_checked << " steps, " << inv.violations << " violations, max Bayes error "
       << inv.max_bayes_error;
    return Outcome{inv.steps_checked == 10000 && inv.violations == 0, os.str()};
  });

  report(9, "entropy bound", [&] {
    std::size_t fails = 0;
    std::ostringstream os;
    for (std::size_t n : {2, 3, 5, 10}) {
      const EntropyBoundReport r = check_entropy_perturbation(n, 1000, 9);
      fails += r.failures;
      os << "|S|=" << n << " max ratio " << r.max_ratio << "; ";
    }
    os << fails << " failures";
    return Outcome{fails == 0, os.str()};
  });

  report(10, "rover beta 0 vs 20 (8x8)", [&] {
    const auto t0 = Clock::now();
    const GridworldConfig g = mars_small_layout();
    const RoverRun r0 = run_rover(g, 0.0);
    const RoverRun r20 = run_rover(g, 20.0);
    const double t = seconds_since(t0);
    std::printf("       beta  0: env %.4f info %.4f rock absorbed %.3f mean rock residence %.4f\n", r0.env,
                r0.info, r0.rock_final, r0.rock_mean);
    std::printf("       beta 20: env %.4f info %.4f rock absorbed %.3f mean rock residence %.4f\n", r20.env,
                r20.info, r20.rock_final, r20.rock_mean);
    constexpr double kMargin = 0.01;
    const bool ok = r0.env < r20.env && r20.info < r0.info && r20.rock_mean < r0.rock_mean + kMargin &&
                    r20.rock_final < 0.02 && t < 900.0;
    std::ostringstream os;
    os << "env " << r0.env << " < " << r20.env << ", info " << r20.info << " < " << r0.info
       << ", rock absorbed " << r20.rock_final;
    return Outcome{ok, os.str()};
  });

  report(11, "plan vs execution", [&] {
    const PerceptionActionPolicy policy = PerceptionActionPolicy::from_result(fine_sets, fine);
    const std::size_t b0 = fine_sets.extra_prior_indices().at(0);
    const BatchResult batch = batch_rollouts(three, policy, b0, 400, 10000, 11, 0);
    const PlanComparison cmp = empirical_vs_planned(b0, fine, batch, three.gamma());
    std::ostringstream os;
    os << "V(b0) " << cmp.planned << ", empirical " << cmp.empirical << " +- " << cmp.standard_error
       << ", tail " << cmp.tail_bound;
    return Outcome{cmp.consistent(4.0), os.str()};
  });

  std::printf("contraction held on %zu of %zu solves\n", solves_checked - solves_violating, solves_checked);
  if (solves_violating > 0) ++failures;
  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
