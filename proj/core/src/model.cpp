#include "ifbs/model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace ifbs {

namespace {
constexpr double kRowSumTol = 1e-12;
}

PerceptionMDP::PerceptionMDP(std::size_t num_states, std::size_t num_actions,
                             std::vector<double> transition, std::vector<double> cost,
                             double gamma, double beta)
    : num_states_(num_states),
      num_actions_(num_actions),
      transition_(std::move(transition)),
      cost_(std::move(cost)),
      gamma_(gamma),
      beta_(beta) {
  if (transition_.size() != num_actions_ * num_states_ * num_states_) {
    throw ModelError("transition tensor has " + std::to_string(transition_.size()) +
                     " entries, expected |A|*|S|*|S| = " +
                     std::to_string(num_actions_ * num_states_ * num_states_));
  }
  if (cost_.size() != num_states_ * num_actions_) {
    throw ModelError("cost matrix has " + std::to_string(cost_.size()) +
                     " entries, expected |S|*|A| = " +
                     std::to_string(num_states_ * num_actions_));
  }
}

PerceptionMDP PerceptionMDP::with_gamma(double gamma) const {
  PerceptionMDP copy = *this;
  copy.gamma_ = gamma;
  return copy;
}

PerceptionMDP PerceptionMDP::with_beta(double beta) const {
  PerceptionMDP copy = *this;
  copy.beta_ = beta;
  return copy;
}

std::vector<std::string> validate_model(const PerceptionMDP& model) {
  std::vector<std::string> issues;
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();
  if (ns == 0) issues.emplace_back("num_states must be positive");
  if (na == 0) issues.emplace_back("num_actions must be positive");

  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t s = 0; s < ns; ++s) {
      double sum = 0.0;
      bool out_of_range = false;
      for (double p : model.transition_row(a, s)) {
        if (!(p >= 0.0 && p <= 1.0)) out_of_range = true;
        sum += p;
      }
      if (out_of_range) {
        std::ostringstream os;
        os << "transition row (a=" << a << ", s=" << s << ") has entries outside [0,1]";
        issues.push_back(os.str());
      }
      if (!(std::abs(sum - 1.0) <= kRowSumTol)) {
        std::ostringstream os;
        os.precision(17);
        os << "transition row (a=" << a << ", s=" << s << ") sums to " << sum;
        issues.push_back(os.str());
      }
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      const double c = model.cost(s, a);
      if (!(c >= 0.0) || !std::isfinite(c)) {
        std::ostringstream os;
        os << "cost (s=" << s << ", a=" << a << ") = " << c << " is not a finite nonnegative value";
        issues.push_back(os.str());
      }
    }
  }
  if (!(model.gamma() >= 0.0 && model.gamma() < 1.0)) {
    std::ostringstream os;
    os << "discount gamma = " << model.gamma() << " must lie in [0, 1)";
    issues.push_back(os.str());
  }
  if (!(model.beta() >= 0.0) || !std::isfinite(model.beta())) {
    std::ostringstream os;
    os << "information weight beta = " << model.beta() << " must be finite and >= 0";
    issues.push_back(os.str());
  }
  return issues;
}

void require_valid(const PerceptionMDP& model) {
  auto issues = validate_model(model);
  if (issues.empty()) return;
  std::string msg = "invalid model:";
  for (const auto& i : issues) msg += "\n  " + i;
  throw ModelError(msg);
}

PerceptionMDP build_three_state(double gamma, double beta) {
  // T[a][s][s'], rows are the current state.
  std::vector<double> t = {
      // a1
      0.1, 0.9, 0.0,
      0.0, 0.1, 0.9,
      0.5, 0.5, 0.0,
      // a2
      0.1, 0.0, 0.9,
      0.9, 0.1, 0.0,
      0.5, 0.5, 0.0,
      // a3
      0.998, 0.001, 0.001,
      0.001, 0.998, 0.001,
      0.001, 0.001, 0.998,
  };
  std::vector<double> c = {
      0.0, 0.0, 0.0,
      0.0, 0.0, 0.0,
      1.0, 1.0, 1.0,
  };
  return PerceptionMDP(3, 3, std::move(t), std::move(c), gamma, beta);
}

}  // namespace ifbs
