#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "ifbs/belief_sets.hpp"
#include "ifbs/diagnostics.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/io.hpp"
#include "ifbs/model.hpp"
#include "ifbs/policy.hpp"
#include "ifbs/simulator.hpp"
#include "ifbs/solver.hpp"

namespace ifbs::cli {

namespace {

namespace fs = std::filesystem;
using io::json;

constexpr const char* kVersion = "0.1.0";
constexpr double kMaxGridBeliefs = 200000.0;

/// Bad user input; maps to kBadInput.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelArgs {
  std::string builtin;
  std::string model_path;
  double gamma = 0.0;
  double beta = 0.0;
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* beta_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--builtin", builtin, "Bundled model")
        ->check(CLI::IsMember({"three-state", "mars", "mars-small"}));
    app->add_option("--model", model_path, "Model JSON, or gridworld config JSON (has \"width\")");
    gamma_opt = app->add_option("--gamma", gamma, "Override the discount factor");
    beta_opt = app->add_option("--beta", beta, "Override the information weight (cost per nat)");
  }
};

struct LoadedModel {
  std::string source;
  PerceptionMDP model;
  std::optional<GridworldConfig> grid;
};

LoadedModel load_model(const ModelArgs& a) {
  if (a.builtin.empty() == a.model_path.empty()) {
    throw InputError("exactly one of --builtin and --model is required");
  }
  LoadedModel lm;
  const bool has_gamma = a.gamma_opt->count() > 0;
  const bool has_beta = a.beta_opt->count() > 0;
  if (!a.builtin.empty()) {
    lm.source = "builtin:" + a.builtin;
    if (a.builtin == "three-state") {
      lm.model = build_three_state(has_gamma ? a.gamma : 0.95, has_beta ? a.beta : 5.0);
      return lm;
    }
    lm.grid = a.builtin == "mars" ? mars_layout() : mars_small_layout();
  } else {
    lm.source = a.model_path;
    json j;
    try {
      j = io::read_json_file(a.model_path);
    } catch (const io::ParseError& e) {
      throw InputError(e.what());
    }
    try {
      if (j.is_object() && j.contains("width")) {
        lm.grid = io::gridworld_from_json(j);
      } else {
        lm.model = io::model_from_json(j);
      }
    } catch (const std::exception& e) {
      throw InputError(a.model_path + ": " + e.what());
    }
    if (!lm.grid) {
      if (has_gamma) lm.model = lm.model.with_gamma(a.gamma);
      if (has_beta) lm.model = lm.model.with_beta(a.beta);
      return lm;
    }
  }
  if (auto issues = validate_gridworld(*lm.grid); !issues.empty()) {
    throw InputError("invalid gridworld: " + issues.front());
  }
  lm.model = build_gridworld(*lm.grid, has_gamma ? a.gamma : 0.95, has_beta ? a.beta : 0.0);
  return lm;
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse number \"" + item + "\"");
    }
  }
  return out;
}

struct BeliefArgs {
  double spacing = 0.0;
  std::string initial;
  CLI::Option* spacing_opt = nullptr;

  void attach(CLI::App* app) {
    spacing_opt = app->add_option(
        "--spacing", spacing,
        "Uniform simplex grid spacing 1/k (default 0.2; gridworlds default to the six-blur scheme)");
    app->add_option("--initial", initial,
                    "Initial belief: start | uniform | vertex:K | comma-separated probabilities");
  }
};

struct BeliefChoice {
  std::string scheme;  // "grid" or "blur"
  double spacing = 0.0;
  std::vector<Belief> posteriors;
  std::vector<Belief> initial;
  std::string initial_label;
};

double grid_size(std::size_t ns, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i + 1 <= ns; ++i) r = r * static_cast<double>(k + i) / static_cast<double>(i);
  return r;
}

BeliefChoice choose_beliefs(const BeliefArgs& a, const LoadedModel& lm) {
  BeliefChoice c;
  const std::size_t ns = lm.model.num_states();
  try {
    if (lm.grid && !a.spacing_opt->count()) {
      c.scheme = "blur";
      c.posteriors = build_local_blur_set(*lm.grid);
    } else {
      c.scheme = "grid";
      c.spacing = a.spacing_opt->count() ? a.spacing : 0.2;
      const std::size_t k = spacing_divisions(c.spacing);
      if (grid_size(ns, k) > kMaxGridBeliefs) {
        throw InputError("a simplex grid with spacing " + std::to_string(c.spacing) + " over " +
                         std::to_string(ns) + " states is too large");
      }
      c.posteriors = build_simplex_grid(ns, k);
    }

    c.initial_label = a.initial.empty() ? (lm.grid ? "start" : "uniform") : a.initial;
    if (c.initial_label == "start") {
      if (!lm.grid) throw InputError("--initial start needs a gridworld");
      c.initial.push_back(Belief::vertex(ns, lm.grid->state_of(lm.grid->start)));
    } else if (c.initial_label == "uniform") {
      c.initial.push_back(Belief::uniform(ns));
    } else if (c.initial_label.rfind("vertex:", 0) == 0) {
      c.initial.push_back(Belief::vertex(ns, std::stoul(c.initial_label.substr(7))));
    } else {
      std::vector<double> p = parse_vector(c.initial_label);
      if (p.size() != ns) throw InputError("--initial needs " + std::to_string(ns) + " probabilities");
      c.initial.emplace_back(std::move(p));
    }
  } catch (const BeliefError& e) {
    throw InputError(e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad --initial: ") + e.what());
  }
  return c;
}

void require_model(const PerceptionMDP& model) {
  if (auto issues = validate_model(model); !issues.empty()) {
    std::string msg = "invalid model:";
    for (const auto& i : issues) msg += "\n  " + i;
    throw InputError(msg);
  }
}

json argv_json(const std::vector<std::string>& args) { return json(args); }

json base_manifest(const std::string& command, const std::vector<std::string>& args) {
  return {{"command", command}, {"argv", argv_json(args)}, {"version", kVersion}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Everything a solve writes that later commands need.
struct LoadedResult {
  json manifest;
  PerceptionMDP model;
  std::optional<GridworldConfig> grid;
  BeliefSets sets;
  SolveResult result;
  std::size_t initial_prior = 0;
};

void load_result(const fs::path& dir, LoadedResult& r) {
  try {
    r.manifest = io::read_json_file(dir / "manifest.json");
    if (r.manifest.value("command", "") != "solve") {
      throw InputError((dir / "manifest.json").string() + " does not describe a solve");
    }
    r.model = io::model_from_json(io::read_json_file(dir / "model.json"));
    if (fs::exists(dir / "grid.json")) r.grid = io::gridworld_from_json(io::read_json_file(dir / "grid.json"));
    std::vector<Belief> posteriors = io::beliefs_from_json(io::read_json_file(dir / "posteriors.json"));
    std::vector<Belief> initial = io::beliefs_from_json(r.manifest.at("initial_beliefs"));
    r.sets = build_prior_set(std::move(posteriors), r.model, initial);
    r.initial_prior = r.sets.extra_prior_indices().at(0);
    r.result.prior_values = io::read_values_csv(dir / "values_prior.csv");
    r.result.posterior_values = io::read_values_csv(dir / "values_posterior.csv");
    r.result.best_action = io::read_actions_csv(dir / "actions.csv");
    r.result.alpha = io::read_alpha_csv(dir / "alpha.csv", r.sets.num_priors());
    r.result.converged = r.manifest.value("converged", false);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError("cannot load result from " + dir.string() + ": " + e.what());
  }
  if (r.result.prior_values.size() != r.sets.num_priors() ||
      r.result.posterior_values.size() != r.sets.num_posteriors() ||
      r.result.best_action.size() != r.sets.num_posteriors()) {
    throw InputError("result tables in " + dir.string() + " do not match the rebuilt belief sets");
  }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  json j;
  try {
    j = io::read_json_file(path);
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kBadInput;
  }
  std::vector<std::string> issues;
  try {
    if (j.is_object() && j.contains("width")) {
      const GridworldConfig g = io::gridworld_from_json(j);
      issues = validate_gridworld(g);
      if (issues.empty()) issues = validate_model(build_gridworld(g));
    } else {
      issues = validate_model(io::model_from_json(j));
    }
  } catch (const std::exception& e) {
    err << "parse error: " << e.what() << '\n';
    return kBadInput;
  }
  if (issues.empty()) {
    out << path << ": valid\n";
    return kOk;
  }
  out << path << ": " << issues.size() << " violation(s)\n";
  for (const auto& i : issues) out << "  " << i << '\n';
  return kCheckFailed;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  ModelArgs model;
  BeliefArgs beliefs;
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  std::size_t jobs = 0;
  std::string out = "ifbs-out/solve";
  bool dump_lp = false;
};

int cmd_solve(const SolveArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const LoadedModel lm = load_model(a.model);
  require_model(lm.model);
  const BeliefChoice bc = choose_beliefs(a.beliefs, lm);
  const BeliefSets sets = build_prior_set(bc.posteriors, lm.model, bc.initial);
  const std::size_t b0 = sets.extra_prior_indices().at(0);
  out << "model " << lm.source << ": |S|=" << lm.model.num_states() << " |A|=" << lm.model.num_actions()
      << " gamma=" << lm.model.gamma() << " beta=" << lm.model.beta() << '\n';
  out << "posteriors " << sets.num_posteriors() << ", prior images " << sets.num_prior_images()
      << ", distinct priors " << sets.num_priors() << '\n';

  SolveOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  opts.jobs = a.jobs;
  const SolveResult r = value_iteration(lm.model, sets, opts);
  const ContractionCheck cc = check_contraction(r.residuals, lm.model.gamma());

  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::write_json_file(dir / "model.json", io::model_to_json(lm.model));
  if (lm.grid) io::write_json_file(dir / "grid.json", io::gridworld_to_json(*lm.grid));
  io::write_json_file(dir / "posteriors.json", io::beliefs_to_json(sets.posteriors()));
  io::write_values_csv(dir / "values_prior.csv", r.prior_values);
  io::write_values_csv(dir / "values_posterior.csv", r.posterior_values);
  io::write_actions_csv(dir / "actions.csv", r.best_action);
  io::write_alpha_csv(dir / "alpha.csv", r.alpha);

  json report = io::solve_summary_to_json(r, lm.model.gamma());
  report["num_prior_images"] = sets.num_prior_images();
  report["initial_prior"] = b0;
  report["initial_value"] = r.prior_values[b0];
  report["contraction_violations"] = cc.violations;
  report["contraction_worst_excess"] = cc.worst_excess;
  io::write_json_file(dir / "report.json", report);

  if (a.dump_lp) {
    json lps = json::array();
    for (std::size_t i = 0; i < sets.num_priors(); ++i) {
      lps.push_back(io::lp_instance_to_json(
          assemble_lp(sets.prior(i), sets.posteriors(), r.posterior_values, lm.model.beta(), i)));
    }
    io::write_json_file(dir / "lp.json", lps);
  }

  json manifest = base_manifest("solve", args);
  manifest["model_source"] = lm.source;
  manifest["belief_set"] = {{"scheme", bc.scheme}, {"spacing", bc.spacing}};
  manifest["initial"] = bc.initial_label;
  manifest["initial_beliefs"] = io::beliefs_to_json(bc.initial);
  manifest["gamma"] = lm.model.gamma();
  manifest["beta"] = lm.model.beta();
  manifest["tol"] = a.tol;
  manifest["max_iter"] = a.max_iter;
  manifest["jobs"] = a.jobs;
  manifest["out"] = a.out;
  manifest["converged"] = r.converged;
  io::write_json_file(dir / "manifest.json", manifest);

  out << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations << " sweeps, residual "
      << (r.residuals.empty() ? 0.0 : r.residuals.back()) << ", V(b0) = " << r.prior_values[b0] << " ("
      << seconds_since(t0) << " s)\n";
  out << "wrote " << dir.string() << '\n';
  if (cc.violations > 0) {
    out << "contraction check failed on " << cc.violations << " sweep(s)\n";
    return kCheckFailed;
  }
  return r.converged ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string result;
  std::size_t trials = 1000;
  std::size_t horizon = 100;
  std::uint64_t seed = 0;
  std::string slices = "1,5,10,20,40";
  std::size_t jobs = 0;
  std::size_t trace = 0;
  std::string out;
};

std::vector<std::size_t> parse_slices(const std::string& text, std::size_t horizon) {
  std::vector<std::size_t> out;
  if (text == "all") return out;
  for (double v : parse_vector(text)) {
    if (v < 0 || v != std::floor(v)) throw InputError("time slices must be nonnegative integers");
    if (static_cast<std::size_t>(v) <= horizon) out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) out.push_back(horizon);
  return out;
}

json absorption_json(const GridworldConfig& g, const ResidenceHistogram& h) {
  const auto& last = h.fractions.back();
  double rocks = 0.0, goals = 0.0;
  for (const Cell& c : g.rocks) rocks += last[g.state_of(c)];
  for (const Cell& c : g.goals) goals += last[g.state_of(c)];
  return {{"rock_fraction", rocks}, {"goal_fraction", goals}};
}

int cmd_simulate(const SimulateArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  LoadedResult lr;
  load_result(a.result, lr);
  if (!lr.result.converged) out << "warning: the stored solve did not converge\n";
  const std::vector<std::size_t> slices = parse_slices(a.slices, a.horizon);
  const PerceptionActionPolicy policy(lr.sets, lr.result.alpha, lr.result.best_action);

  const BatchResult batch =
      batch_rollouts(lr.model, policy, lr.initial_prior, a.horizon, a.trials, a.seed, a.jobs);
  const PlanComparison cmp = empirical_vs_planned(lr.initial_prior, lr.result, batch, lr.model.gamma());

  const fs::path dir = a.out.empty() ? fs::path(a.result) / "simulation" : fs::path(a.out);
  fs::create_directories(dir);
  io::write_residence_csv(dir / "residence.csv", batch.residence, slices);

  json report = {{"costs", io::cost_summary_to_json(batch.costs)},
                 {"plan",
                  {{"planned", cmp.planned},
                   {"empirical", cmp.empirical},
                   {"standard_error", cmp.standard_error},
                   {"difference", cmp.difference},
                   {"tail_bound", cmp.tail_bound},
                   {"consistent_4se", cmp.consistent(4.0)}}}};
  if (lr.grid) report["final_residence"] = absorption_json(*lr.grid, batch.residence);

  if (a.trace > 0) {
    std::ofstream trace(dir / "trace.jsonl");
    const Belief& b0 = lr.sets.prior(lr.initial_prior);
    for (std::size_t k = 0; k < std::min(a.trace, a.trials); ++k) {
      const std::size_t s0 = sample_initial_state(b0, a.seed, k);
      const RolloutTrace tr = rollout(lr.model, policy, lr.initial_prior, s0, a.horizon, a.seed, k);
      for (std::size_t t = 0; t < tr.steps.size(); ++t) trace << io::trace_step_to_json(tr, t).dump() << '\n';
    }
  }
  io::write_json_file(dir / "report.json", report);

  json manifest = base_manifest("simulate", args);
  manifest["result"] = a.result;
  manifest["seed"] = a.seed;
  manifest["trials"] = a.trials;
  manifest["horizon"] = a.horizon;
  manifest["slices"] = slices;
  manifest["jobs"] = a.jobs;
  manifest["out"] = dir.string();
  io::write_json_file(dir / "manifest.json", manifest);

  out << a.trials << " trials x " << a.horizon << " steps: environment " << batch.costs.mean_environment
      << " (se " << batch.costs.se_environment << "), information " << batch.costs.mean_information
      << " nats (se " << batch.costs.se_information << "), total " << batch.costs.mean_total << " vs planned "
      << cmp.planned << " (" << seconds_since(t0) << " s)\n";
  out << "wrote " << dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseArgs {
  std::string check;
  ModelArgs model;
  BeliefArgs beliefs;
  std::vector<double> spacings{0.2, 0.1, 0.05};
  std::vector<std::size_t> states{2, 3, 5, 10};
  std::size_t trials = 1000;
  std::size_t samples = 10000;
  std::size_t steps = 10000;
  std::uint64_t seed = 0;
  std::string result;
  double tol = 1e-8;
  std::size_t max_iter = 10000;
  std::size_t jobs = 0;
  std::string out;
};

SolveOptions diag_solve_options(const DiagnoseArgs& a) {
  SolveOptions o;
  o.tol = a.tol;
  o.max_iter = a.max_iter;
  o.jobs = a.jobs;
  return o;
}

int finish_diagnose(const DiagnoseArgs& a, const std::vector<std::string>& args, json report, bool passed,
                    std::ostream& out, const std::function<void(const fs::path&)>& extra = {}) {
  const fs::path dir = a.out.empty() ? fs::path("ifbs-out") / a.check : fs::path(a.out);
  fs::create_directories(dir);
  report["check"] = a.check;
  report["passed"] = passed;
  io::write_json_file(dir / "report.json", report);
  if (extra) extra(dir);
  json manifest = base_manifest("diagnose", args);
  manifest["check"] = a.check;
  manifest["seed"] = a.seed;
  manifest["out"] = dir.string();
  io::write_json_file(dir / "manifest.json", manifest);
  out << a.check << ": " << (passed ? "pass" : "FAIL") << " (report in " << dir.string() << ")\n";
  return passed ? kOk : kCheckFailed;
}

int cmd_diagnose(const DiagnoseArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  if (a.check == "entropy-bound") {
    json reports = json::array();
    bool passed = true;
    for (std::size_t ns : a.states) {
      if (ns < 1) throw InputError("--states entries must be positive");
      const EntropyBoundReport r = check_entropy_perturbation(ns, a.trials, a.seed);
      out << "  |S|=" << ns << ": " << r.failures << " failure(s), max ratio " << r.max_ratio << '\n';
      passed = passed && r.passed();
      reports.push_back(io::entropy_report_to_json(r));
    }
    return finish_diagnose(a, args, {{"reports", reports}}, passed, out);
  }

  if (a.check == "monotonicity") {
    const LoadedModel lm = load_model(a.model);
    require_model(lm.model);
    MonotonicityReport r;
    try {
      r = refinement_monotonicity(lm.model, a.spacings, diag_solve_options(a));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    } catch (const BeliefError& e) {
      throw InputError(e.what());
    }
    for (std::size_t i = 0; i < r.spacings.size(); ++i) {
      out << "  spacing " << r.spacings[i] << ": M=" << r.num_posteriors[i] << " mean V=" << r.mean_prior_value[i]
          << '\n';
    }
    for (const auto& f : r.failures) out << "  " << f << '\n';
    return finish_diagnose(a, args, io::monotonicity_to_json(r), r.passed(), out, [&](const fs::path& dir) {
      io::write_monotonicity_csv(dir / "monotonicity.csv", r);
    });
  }

  if (a.check == "beta-zero-oracle") {
    LoadedModel lm = load_model(a.model);
    lm.model = lm.model.with_beta(0.0);
    require_model(lm.model);
    const BeliefChoice bc = choose_beliefs(a.beliefs, lm);
    const BeliefSets sets = build_prior_set(bc.posteriors, lm.model);
    SolveOptions o = diag_solve_options(a);
    o.tol = std::min(o.tol, 1e-10);
    const SolveResult r = value_iteration(lm.model, sets, o);
    const OracleComparison cmp = compare_with_mdp_oracle(lm.model, sets, r);
    const bool passed = r.converged && cmp.max_abs_diff <= 1e-6;
    out << "  max |Vhat(vertex) - V_mdp| = " << cmp.max_abs_diff << '\n';
    return finish_diagnose(a, args,
                           {{"oracle", cmp.oracle},
                            {"vertex_values", cmp.vertex_values},
                            {"max_abs_diff", cmp.max_abs_diff},
                            {"tolerance", 1e-6},
                            {"converged", r.converged}},
                           passed, out);
  }

  if (a.check == "bound") {
    LoadedResult lr;
    if (!a.result.empty()) {
      load_result(a.result, lr);
    } else {
      const LoadedModel lm = load_model(a.model);
      require_model(lm.model);
      lr.model = lm.model;
      lr.sets = build_prior_set(choose_beliefs(a.beliefs, lm).posteriors, lm.model);
      lr.result = value_iteration(lr.model, lr.sets, diag_solve_options(a));
    }
    const BoundReport b = approximation_bound(lr.model, lr.sets, lr.result, a.samples, a.seed);
    out << "  eps_hat " << b.eps_hat << ", delta_hat " << b.delta_hat << ", epsilon " << b.epsilon
        << ", limsup bound " << b.limsup_bound << '\n';
    // Informational: the bound is reported, not asserted.
    return finish_diagnose(a, args, io::bound_report_to_json(b), true, out);
  }

  if (a.check == "invariance") {
    if (a.result.empty()) throw InputError("invariance needs --result");
    LoadedResult lr;
    load_result(a.result, lr);
    const PerceptionActionPolicy policy(lr.sets, lr.result.alpha, lr.result.best_action);
    const std::size_t horizon = 100;
    std::size_t checked = 0, violations = 0;
    double worst = 0.0;
    const Belief& b0 = lr.sets.prior(lr.initial_prior);
    for (std::uint64_t k = 0; checked < a.steps; ++k) {
      const std::size_t s0 = sample_initial_state(b0, a.seed, k);
      const RolloutTrace tr = rollout(lr.model, policy, lr.initial_prior, s0, horizon, a.seed, k);
      const InvarianceReport rep = check_invariance(tr, policy);
      checked += rep.steps_checked;
      violations += rep.violations;
      worst = std::max(worst, rep.max_bayes_error);
    }
    out << "  " << checked << " steps, " << violations << " violation(s), max Bayes error " << worst << '\n';
    return finish_diagnose(a, args,
                           {{"steps_checked", checked}, {"violations", violations}, {"max_bayes_error", worst}},
                           violations == 0, out);
  }
  throw InputError("unknown check " + a.check);
}

// ---------------------------------------------------------------- replay

int cmd_replay(const std::string& manifest_path, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  json m;
  try {
    m = io::read_json_file(manifest_path);
  } catch (const io::ParseError& e) {
    err << e.what() << '\n';
    return kBadInput;
  }
  if (!m.contains("argv") || !m["argv"].is_array()) {
    err << manifest_path << " has no argv record\n";
    return kBadInput;
  }
  std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
  if (!out_dir.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--out") {
        args[i + 1] = out_dir;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(out_dir);
    }
  }
  return run(args, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint perception and action synthesis on invariant finite belief sets"};
  app.name("ifbs");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a model or gridworld file");
  validate->add_option("--model", validate_path, "Model or gridworld JSON")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Run value iteration on a belief set");
  solve_args.model.attach(solve);
  solve_args.beliefs.attach(solve);
  solve->add_option("--tol", solve_args.tol, "Stop when the sup-norm change is at most this")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iter", solve_args.max_iter, "Sweep limit");
  solve->add_option("--jobs", solve_args.jobs, "Worker threads, 0 = all cores");
  solve->add_option("--out", solve_args.out, "Output directory");
  solve->add_flag("--dump-lp", solve_args.dump_lp, "Write every backup LP at the final values to lp.json");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo rollouts of a solved policy");
  simulate->add_option("--result", sim_args.result, "Directory written by solve")->required();
  simulate->add_option("--trials", sim_args.trials, "Independent trials")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", sim_args.horizon, "Steps per trial");
  simulate->add_option("--seed", sim_args.seed, "Random seed");
  simulate->add_option("--slices", sim_args.slices, "Residence time slices, comma separated, or 'all'");
  simulate->add_option("--jobs", sim_args.jobs, "Worker threads, 0 = all cores");
  simulate->add_option("--trace", sim_args.trace, "Write step records of the first N trials to trace.jsonl");
  simulate->add_option("--out", sim_args.out, "Output directory (default RESULT/simulation)");

  DiagnoseArgs diag_args;
  auto* diagnose = app.add_subcommand("diagnose", "Run a named property check");
  diagnose->add_option("check", diag_args.check, "Check to run")
      ->required()
      ->check(CLI::IsMember({"monotonicity", "entropy-bound", "beta-zero-oracle", "bound", "invariance"}));
  diag_args.model.attach(diagnose);
  diag_args.beliefs.attach(diagnose);
  diagnose->add_option("--spacings", diag_args.spacings, "Nested grid spacings, coarse to fine")->delimiter(',');
  diagnose->add_option("--states", diag_args.states, "State counts for entropy-bound")->delimiter(',');
  diagnose->add_option("--trials", diag_args.trials, "Random pairs per state count");
  diagnose->add_option("--samples", diag_args.samples, "Density probes for bound");
  diagnose->add_option("--steps", diag_args.steps, "Simulated steps for invariance");
  diagnose->add_option("--seed", diag_args.seed, "Random seed");
  diagnose->add_option("--result", diag_args.result, "Directory written by solve (bound, invariance)");
  diagnose->add_option("--tol", diag_args.tol, "Solve tolerance")->check(CLI::PositiveNumber);
  diagnose->add_option("--max-iter", diag_args.max_iter, "Sweep limit");
  diagnose->add_option("--jobs", diag_args.jobs, "Worker threads, 0 = all cores");
  diagnose->add_option("--out", diag_args.out, "Output directory (default ifbs-out/CHECK)");

  std::string replay_path, replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", replay_path, "manifest.json")->required();
  replay->add_option("--out", replay_out, "Write to this directory instead");

  std::vector<std::string> argv_store{"ifbs"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_path, out, err);
    if (solve->parsed()) return cmd_solve(solve_args, args, out);
    if (simulate->parsed()) return cmd_simulate(sim_args, args, out);
    if (diagnose->parsed()) return cmd_diagnose(diag_args, args, out);
    if (replay->parsed()) return cmd_replay(replay_path, replay_out, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SolveError& e) {
    err << "solver error at prior " << e.prior_index() << ": " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kBadInput;
}

}  // namespace ifbs::cli
