#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifbs/belief_sets.hpp"
#include "ifbs/diagnostics.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/lp.hpp"
#include "ifbs/model.hpp"
#include "ifbs/policy.hpp"
#include "ifbs/simulator.hpp"
#include "ifbs/solver.hpp"

namespace ifbs::io {

/// Malformed or schema-violating input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using nlohmann::json;

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

// {"num_states", "num_actions", "transition": [a][s][s'], "cost": [s][a], "gamma", "beta"}
json model_to_json(const PerceptionMDP& model);
PerceptionMDP model_from_json(const json& j);

// {"width", "height", "start": [row, col], "goals": [[row, col], ...], "rocks": [...],
//  "slip_mass", "step_cost"}
json gridworld_to_json(const GridworldConfig& config);
GridworldConfig gridworld_from_json(const json& j);

/// Array of probability vectors, one row per belief.
json beliefs_to_json(const std::vector<Belief>& beliefs);
std::vector<Belief> beliefs_from_json(const json& j);

json lp_instance_to_json(const LPInstance& lp);

json solve_summary_to_json(const SolveResult& result, double gamma);
json policy_to_json(const PerceptionActionPolicy& policy, bool dense_kernels = false);
json bound_report_to_json(const BoundReport& report);
json monotonicity_to_json(const MonotonicityReport& report);
json entropy_report_to_json(const EntropyBoundReport& report);
json cost_summary_to_json(const CostSummary& costs);
json trace_step_to_json(const RolloutTrace& trace, std::size_t t);

/// Shortest text that round-trips the double.
std::string format_double(double x);

void write_values_csv(const std::filesystem::path& path, const std::vector<double>& values);
std::vector<double> read_values_csv(const std::filesystem::path& path);
void write_actions_csv(const std::filesystem::path& path, const std::vector<std::size_t>& actions);
std::vector<std::size_t> read_actions_csv(const std::filesystem::path& path);
/// Triplets (prior, posterior, alpha) for every nonzero alpha.
void write_alpha_csv(const std::filesystem::path& path, const std::vector<SparseAlpha>& alpha);
std::vector<SparseAlpha> read_alpha_csv(const std::filesystem::path& path, std::size_t num_priors);
/// Rows (time, state, fraction); `times` empty means every time step.
void write_residence_csv(const std::filesystem::path& path, const ResidenceHistogram& hist,
                         const std::vector<std::size_t>& times);
/// Rows (spacing, kind, belief id, value).
void write_monotonicity_csv(const std::filesystem::path& path, const MonotonicityReport& report);

}  // namespace ifbs::io
