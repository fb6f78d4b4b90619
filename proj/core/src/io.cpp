#include "ifbs/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ifbs::io {

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

Cell cell_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("cells are [row, col] pairs");
  return {j[0].get<int>(), j[1].get<int>()};
}

json cells_to_json(const std::vector<Cell>& cells) {
  json arr = json::array();
  for (const Cell& c : cells) arr.push_back({c.row, c.col});
  return arr;
}

std::vector<Cell> cells_from_json(const json& j, const char* key) {
  std::vector<Cell> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ParseError(std::string("field \"") + key + "\" must be an array");
  for (const auto& c : j.at(key)) out.push_back(cell_from_json(c));
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(std::move(fields));
  }
  return rows;
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& path) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("bad number \"" + text + "\" in " + path.string());
  }
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

json model_to_json(const PerceptionMDP& model) {
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  json t = json::array();
  for (std::size_t a = 0; a < na; ++a) {
    json rows = json::array();
    for (std::size_t s = 0; s < ns; ++s) {
      auto row = model.transition_row(a, s);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    t.push_back(std::move(rows));
  }
  json c = json::array();
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> row(na);
    for (std::size_t a = 0; a < na; ++a) row[a] = model.cost(s, a);
    c.push_back(std::move(row));
  }
  return {{"num_states", ns}, {"num_actions", na}, {"transition", t},
          {"cost", c},        {"gamma", model.gamma()}, {"beta", model.beta()}};
}

PerceptionMDP model_from_json(const json& j) {
  const auto ns = get_field<std::size_t>(j, "num_states");
  const auto na = get_field<std::size_t>(j, "num_actions");
  const auto t = get_field<std::vector<std::vector<std::vector<double>>>>(j, "transition");
  const auto c = get_field<std::vector<std::vector<double>>>(j, "cost");
  if (t.size() != na) throw ParseError("transition must have num_actions matrices");
  std::vector<double> flat_t;
  flat_t.reserve(na * ns * ns);
  for (std::size_t a = 0; a < na; ++a) {
    if (t[a].size() != ns) throw ParseError("transition matrix " + std::to_string(a) + " must have num_states rows");
    for (std::size_t s = 0; s < ns; ++s) {
      if (t[a][s].size() != ns) {
        throw ParseError("transition row (a=" + std::to_string(a) + ", s=" + std::to_string(s) +
                         ") must have num_states entries");
      }
      flat_t.insert(flat_t.end(), t[a][s].begin(), t[a][s].end());
    }
  }
  if (c.size() != ns) throw ParseError("cost must have num_states rows");
  std::vector<double> flat_c;
  flat_c.reserve(ns * na);
  for (std::size_t s = 0; s < ns; ++s) {
    if (c[s].size() != na) throw ParseError("cost row " + std::to_string(s) + " must have num_actions entries");
    flat_c.insert(flat_c.end(), c[s].begin(), c[s].end());
  }
  return PerceptionMDP(ns, na, std::move(flat_t), std::move(flat_c), get_field<double>(j, "gamma"),
                       get_field<double>(j, "beta"));
}

json gridworld_to_json(const GridworldConfig& g) {
  return {{"width", g.width},
          {"height", g.height},
          {"start", {g.start.row, g.start.col}},
          {"goals", cells_to_json(g.goals)},
          {"rocks", cells_to_json(g.rocks)},
          {"slip_mass", g.slip_mass},
          {"step_cost", g.step_cost}};
}

GridworldConfig gridworld_from_json(const json& j) {
  GridworldConfig g;
  g.width = get_field<int>(j, "width");
  g.height = get_field<int>(j, "height");
  if (!j.contains("start")) throw ParseError("missing field \"start\"");
  g.start = cell_from_json(j.at("start"));
  g.goals = cells_from_json(j, "goals");
  g.rocks = cells_from_json(j, "rocks");
  if (j.contains("slip_mass")) g.slip_mass = get_field<double>(j, "slip_mass");
  if (j.contains("step_cost")) g.step_cost = get_field<double>(j, "step_cost");
  return g;
}

json beliefs_to_json(const std::vector<Belief>& beliefs) {
  json arr = json::array();
  for (const Belief& b : beliefs) arr.push_back(b.vector());
  return arr;
}

std::vector<Belief> beliefs_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("belief set must be an array of probability vectors");
  std::vector<Belief> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.emplace_back(j[i].get<std::vector<double>>());
    } catch (const std::exception& e) {
      throw ParseError("belief " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

json lp_instance_to_json(const LPInstance& lp) {
  json a = json::array();
  for (Eigen::Index r = 0; r < lp.constraints.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(lp.constraints.cols()));
    for (Eigen::Index c = 0; c < lp.constraints.cols(); ++c) row[static_cast<std::size_t>(c)] = lp.constraints(r, c);
    a.push_back(std::move(row));
  }
  return {{"prior_index", lp.prior_index},
          {"rows", lp.rows},
          {"admissible", lp.admissible},
          {"cost", std::vector<double>(lp.cost.begin(), lp.cost.end())},
          {"divergence", std::vector<double>(lp.divergence.begin(), lp.divergence.end())},
          {"constraints", a},
          {"rhs", std::vector<double>(lp.rhs.begin(), lp.rhs.end())}};
}

json solve_summary_to_json(const SolveResult& r, double gamma) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"final_residual", r.residuals.empty() ? 0.0 : r.residuals.back()},
          {"error_bound", r.error_bound(gamma)},
          {"num_priors", r.prior_values.size()},
          {"num_posteriors", r.posterior_values.size()},
          {"residuals", r.residuals}};
}

json policy_to_json(const PerceptionActionPolicy& policy, bool dense_kernels) {
  const BeliefSets& sets = policy.sets();
  json priors = json::array();
  for (std::size_t i = 0; i < sets.num_priors(); ++i) {
    const SparseAlpha& al = policy.alpha(i);
    json entry = {{"prior", i}, {"posterior", al.index}, {"alpha", al.weight},
                  {"information", policy.stage_information(i)}};
    if (dense_kernels) {
      const Eigen::MatrixXd k = policy.kernel(i);
      json rows = json::array();
      for (Eigen::Index s = 0; s < k.rows(); ++s) {
        std::vector<double> row(static_cast<std::size_t>(k.cols()));
        for (Eigen::Index m = 0; m < k.cols(); ++m) row[static_cast<std::size_t>(m)] = k(s, m);
        rows.push_back(std::move(row));
      }
      entry["kernel"] = std::move(rows);
    }
    priors.push_back(std::move(entry));
  }
  return {{"priors", priors}, {"actions", policy.actions()}};
}

json bound_report_to_json(const BoundReport& r) {
  return {{"eps_hat", r.eps_hat},
          {"delta_hat", r.delta_hat},
          {"log_support_term", r.log_support_term},
          {"cost_term", r.cost_term},
          {"epsilon", r.epsilon},
          {"limsup_bound", r.limsup_bound},
          {"num_probes", r.num_probes},
          {"caveats", r.caveats}};
}

json monotonicity_to_json(const MonotonicityReport& r) {
  return {{"spacings", r.spacings},
          {"num_posteriors", r.num_posteriors},
          {"num_priors", r.num_priors},
          {"mean_prior_value", r.mean_prior_value},
          {"comparisons", r.comparisons},
          {"max_violation", r.max_violation},
          {"failures", r.failures},
          {"passed", r.passed()}};
}

json entropy_report_to_json(const EntropyBoundReport& r) {
  return {{"num_states", r.num_states},
          {"trials", r.trials},
          {"failures", r.failures},
          {"max_ratio", r.max_ratio},
          {"passed", r.passed()}};
}

json cost_summary_to_json(const CostSummary& c) {
  return {{"trials", c.trials},
          {"horizon", c.horizon},
          {"mean_environment", c.mean_environment},
          {"se_environment", c.se_environment},
          {"mean_information", c.mean_information},
          {"se_information", c.se_information},
          {"mean_total", c.mean_total},
          {"se_total", c.se_total}};
}

json trace_step_to_json(const RolloutTrace& trace, std::size_t t) {
  const StepRecord& s = trace.steps.at(t);
  return {{"trial", trace.trial}, {"t", t},
          {"state", s.state},     {"prior", s.prior},
          {"observation", s.observation}, {"posterior", s.posterior},
          {"action", s.action},   {"cost", s.cost},
          {"information", s.information}};
}

void write_values_csv(const std::filesystem::path& path, const std::vector<double>& values) {
  auto out = open_out(path);
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

std::vector<double> read_values_csv(const std::filesystem::path& path) {
  std::vector<double> out;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 2) throw ParseError("expected index,value rows in " + path.string());
    if (parse_number<std::size_t>(row[0], path) != out.size()) {
      throw ParseError("indices out of order in " + path.string());
    }
    out.push_back(parse_number<double>(row[1], path));
  }
  return out;
}

void write_actions_csv(const std::filesystem::path& path, const std::vector<std::size_t>& actions) {
  auto out = open_out(path);
  out << "posterior,action\n";
  for (std::size_t i = 0; i < actions.size(); ++i) out << i << ',' << actions[i] << '\n';
}

std::vector<std::size_t> read_actions_csv(const std::filesystem::path& path) {
  std::vector<std::size_t> out;
  for (const auto& row : read_csv(path)) {
    if (row.size() != 2) throw ParseError("expected posterior,action rows in " + path.string());
    if (parse_number<std::size_t>(row[0], path) != out.size()) {
      throw ParseError("indices out of order in " + path.string());
    }
    out.push_back(parse_number<std::size_t>(row[1], path));
  }
  return out;
}

void write_alpha_csv(const std::filesystem::path& path, const std::vector<SparseAlpha>& alpha) {
  auto out = open_out(path);
  out << "prior,posterior,alpha\n";
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (std::size_t k = 0; k < alpha[i].index.size(); ++k) {
      out << i << ',' << alpha[i].index[k] << ',' << format_double(alpha[i].weight[k]) << '\n';
    }
  }
}

std::vector<SparseAlpha> read_alpha_csv(const std::filesystem::path& path, std::size_t num_priors) {
  std::vector<SparseAlpha> out(num_priors);
  for (const auto& row : read_csv(path)) {
    if (row.size() != 3) throw ParseError("expected prior,posterior,alpha rows in " + path.string());
    const auto i = parse_number<std::size_t>(row[0], path);
    if (i >= num_priors) throw ParseError("prior index out of range in " + path.string());
    const auto m = parse_number<std::size_t>(row[1], path);
    if (!out[i].index.empty() && out[i].index.back() >= m) {
      throw ParseError("posterior indices out of order in " + path.string());
    }
    out[i].index.push_back(m);
    out[i].weight.push_back(parse_number<double>(row[2], path));
  }
  return out;
}

void write_residence_csv(const std::filesystem::path& path, const ResidenceHistogram& hist,
                         const std::vector<std::size_t>& times) {
  auto out = open_out(path);
  out << "time,state,fraction\n";
  auto emit = [&](std::size_t t) {
    for (std::size_t s = 0; s < hist.fractions[t].size(); ++s) {
      out << t << ',' << s << ',' << format_double(hist.fractions[t][s]) << '\n';
    }
  };
  if (times.empty()) {
    for (std::size_t t = 0; t < hist.fractions.size(); ++t) emit(t);
  } else {
    for (std::size_t t : times) {
      if (t < hist.fractions.size()) emit(t);
    }
  }
}

void write_monotonicity_csv(const std::filesystem::path& path, const MonotonicityReport& report) {
  auto out = open_out(path);
  out << "spacing,kind,belief,value\n";
  for (const auto& row : report.rows) {
    out << format_double(row.spacing) << ',' << (row.prior ? "prior" : "posterior") << ','
        << row.index << ',' << format_double(row.value) << '\n';
  }
}

}  // namespace ifbs::io
