#include "ifbs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ifbs {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

bool refactor(const LPInstance& lp, const std::vector<Eigen::Index>& basis,
              Eigen::MatrixXd& inverse) {
  const Eigen::Index m = static_cast<Eigen::Index>(lp.rows.size());
  Eigen::MatrixXd b(m, m);
  for (Eigen::Index i = 0; i < m; ++i) b.col(i) = lp.constraints.col(basis[i]);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
  if (!lu.isInvertible()) return false;
  inverse = lu.inverse();
  return true;
}

}  // namespace

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

std::vector<std::size_t> admissible_posteriors(const Belief& b, std::span<const Belief> posteriors,
                                               double tol) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < posteriors.size(); ++m) {
    if (support_within(posteriors[m], b, tol)) out.push_back(m);
  }
  return out;
}

LPInstance assemble_lp(const Belief& b, std::span<const Belief> posteriors,
                       std::span<const double> posterior_values, double beta,
                       std::size_t prior_index) {
  LPInstance lp;
  lp.prior_index = prior_index;
  lp.num_posteriors = posteriors.size();
  lp.rows = support(b);
  lp.admissible = admissible_posteriors(b, posteriors);
  if (lp.admissible.empty()) {
    throw BeliefError("prior " + std::to_string(prior_index) + " has no admissible posterior");
  }
  const auto nr = static_cast<Eigen::Index>(lp.rows.size());
  const auto nc = static_cast<Eigen::Index>(lp.admissible.size());
  lp.rhs.resize(nr);
  for (Eigen::Index r = 0; r < nr; ++r) lp.rhs[r] = b[lp.rows[r]];
  lp.constraints.resize(nr, nc);
  lp.divergence.resize(nc);
  lp.vertex_column.assign(lp.rows.size(), -1);
  for (Eigen::Index j = 0; j < nc; ++j) {
    const Belief& post = posteriors[lp.admissible[j]];
    for (Eigen::Index r = 0; r < nr; ++r) lp.constraints(r, j) = post[lp.rows[r]];
    lp.divergence[j] = kl_divergence(post, b);
    for (Eigen::Index r = 0; r < nr; ++r) {
      if (post[lp.rows[r]] == 1.0 && lp.vertex_column[r] < 0) lp.vertex_column[r] = j;
    }
  }
  update_lp_costs(lp, posterior_values, beta);
  return lp;
}

void update_lp_costs(LPInstance& lp, std::span<const double> posterior_values, double beta) {
  if (posterior_values.size() != lp.num_posteriors) {
    throw BeliefError("posterior value vector has the wrong length");
  }
  lp.cost.resize(static_cast<Eigen::Index>(lp.admissible.size()));
  for (Eigen::Index j = 0; j < lp.cost.size(); ++j) {
    lp.cost[j] = beta * lp.divergence[j] + posterior_values[lp.admissible[j]];
  }
}

LPSolution solve_lp(const LPInstance& lp, LPWarmStart* warm, const LPOptions& options) {
  const auto m = static_cast<Eigen::Index>(lp.rows.size());
  const auto n = static_cast<Eigen::Index>(lp.admissible.size());
  LPSolution sol;
  sol.alpha.assign(lp.num_posteriors, 0.0);

  LPWarmStart local;
  LPWarmStart& state = warm ? *warm : local;
  Eigen::VectorXd x_basic;

  bool have_basis = false;
  if (static_cast<Eigen::Index>(state.basis.size()) == m && state.inverse.rows() == m &&
      state.inverse.cols() == m &&
      std::all_of(state.basis.begin(), state.basis.end(),
                  [n](Eigen::Index j) { return j >= 0 && j < n; })) {
    x_basic = state.inverse * lp.rhs;
    have_basis = x_basic.minCoeff() >= -kFeasTol;
  }
  if (!have_basis) {
    state.basis.assign(lp.vertex_column.begin(), lp.vertex_column.end());
    if (std::any_of(state.basis.begin(), state.basis.end(), [](Eigen::Index j) { return j < 0; })) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
    state.inverse = Eigen::MatrixXd::Identity(m, m);
    state.pivots_since_refactor = 0;
    x_basic = lp.rhs;
  }

  std::vector<char> is_basic(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j : state.basis) is_basic[static_cast<std::size_t>(j)] = 1;

  const double cost_scale = 1.0 + lp.cost.cwiseAbs().maxCoeff();
  const double opt_tol = 1e-11 * cost_scale;
  Eigen::VectorXd cost_basic(m);
  Eigen::VectorXd dual(m);
  Eigen::VectorXd direction(m);

  for (;;) {
    if (sol.pivots >= options.max_pivots) {
      sol.status = LPStatus::kIterationLimit;
      break;
    }
    for (Eigen::Index i = 0; i < m; ++i) cost_basic[i] = lp.cost[state.basis[i]];
    dual.noalias() = state.inverse.transpose() * cost_basic;

    // Bland: lowest-index improving column enters.
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (is_basic[static_cast<std::size_t>(j)]) continue;
      const double reduced = lp.cost[j] - lp.constraints.col(j).dot(dual);
      if (reduced < -opt_tol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) {
      sol.status = LPStatus::kOptimal;
      break;
    }

    direction.noalias() = state.inverse * lp.constraints.col(entering);
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (direction[i] <= kPivotTol) continue;
      const double ratio = std::max(x_basic[i], 0.0) / direction[i];
      if (leave < 0 || ratio < best_ratio - 1e-15) {
        leave = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-15 && state.basis[i] < state.basis[leave]) {
        leave = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leave < 0) {
      // Unbounded cannot occur: columns sum to one, so sum(alpha) = 1.
      sol.status = LPStatus::kInfeasible;
      return sol;
    }

    const double pivot = direction[leave];
    state.inverse.row(leave) /= pivot;
    x_basic[leave] /= pivot;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i == leave || direction[i] == 0.0) continue;
      state.inverse.row(i) -= direction[i] * state.inverse.row(leave);
      x_basic[i] -= direction[i] * x_basic[leave];
    }
    is_basic[static_cast<std::size_t>(state.basis[leave])] = 0;
    is_basic[static_cast<std::size_t>(entering)] = 1;
    state.basis[leave] = entering;
    ++sol.pivots;

    if (++state.pivots_since_refactor >= options.refactor_interval) {
      if (refactor(lp, state.basis, state.inverse)) {
        x_basic.noalias() = state.inverse * lp.rhs;
        state.pivots_since_refactor = 0;
      }
    }
  }

  auto scatter = [&]() {
    std::fill(sol.alpha.begin(), sol.alpha.end(), 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      // Degenerate basics carry roundoff; such an observation could never be
      // conditioned on, so it is dropped.
      const double v = x_basic[i] <= kSupportTol ? 0.0 : x_basic[i];
      sol.alpha[lp.admissible[state.basis[i]]] = v;
    }
  };
  auto residual = [&]() {
    Eigen::VectorXd r = -lp.rhs;
    for (Eigen::Index i = 0; i < m; ++i) {
      r += lp.constraints.col(state.basis[i]) * sol.alpha[lp.admissible[state.basis[i]]];
    }
    return r.cwiseAbs().maxCoeff();
  };

  scatter();
  if (residual() > 1e-11 && refactor(lp, state.basis, state.inverse)) {
    x_basic.noalias() = state.inverse * lp.rhs;
    state.pivots_since_refactor = 0;
    scatter();
  }
  sol.objective = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    sol.objective += lp.cost[state.basis[i]] * sol.alpha[lp.admissible[state.basis[i]]];
  }
  return sol;
}

FeasibilityCertificate verify_feasibility(const Belief& b, std::span<const Belief> posteriors) {
  FeasibilityCertificate cert;
  const std::size_t ns = b.size();
  cert.alpha.assign(posteriors.size(), 0.0);
  std::vector<double> mix(ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    if (b[s] == 0.0) continue;
    std::size_t vertex = posteriors.size();
    for (std::size_t m = 0; m < posteriors.size(); ++m) {
      if (posteriors[m].size() == ns && posteriors[m][s] == 1.0) {
        vertex = m;
        break;
      }
    }
    if (vertex == posteriors.size()) {
      cert.diagnostics = "no vertex posterior for state " + std::to_string(s);
      return cert;
    }
    cert.alpha[vertex] += b[s];
    for (std::size_t t = 0; t < ns; ++t) mix[t] += b[s] * posteriors[vertex][t];
  }
  cert.residual = max_norm_distance(mix, b.probs());
  cert.feasible = cert.residual < 1e-12;
  if (!cert.feasible) {
    std::ostringstream os;
    os << "vertex decomposition residual " << cert.residual;
    cert.diagnostics = os.str();
  }
  return cert;
}

}  // namespace ifbs
