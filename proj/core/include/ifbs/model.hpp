#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ifbs {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite MDP with a synthesizable perception channel.
///
/// The transition tensor is stored as T[a][s][s'] (row s is the distribution
/// of the successor under action a), and costs as C[s][a]. Beta weights the
/// stage-wise mutual information (cost units per nat) against the
/// environmental cost.
///
/// Construction only checks tensor shapes (throwing ModelError) so that bad
/// values can be reported by validate_model(); every solver entry point checks
/// validity.
class PerceptionMDP {
 public:
  PerceptionMDP() = default;
  PerceptionMDP(std::size_t num_states, std::size_t num_actions,
                std::vector<double> transition, std::vector<double> cost,
                double gamma, double beta);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double gamma() const { return gamma_; }
  double beta() const { return beta_; }

  double transition(std::size_t action, std::size_t from, std::size_t to) const {
    return transition_[(action * num_states_ + from) * num_states_ + to];
  }
  std::span<const double> transition_row(std::size_t action, std::size_t from) const {
    return {transition_.data() + (action * num_states_ + from) * num_states_, num_states_};
  }
  double cost(std::size_t state, std::size_t action) const {
    return cost_[state * num_actions_ + action];
  }

  const std::vector<double>& transition_tensor() const { return transition_; }
  const std::vector<double>& cost_matrix() const { return cost_; }

  PerceptionMDP with_gamma(double gamma) const;
  PerceptionMDP with_beta(double beta) const;

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> transition_;
  std::vector<double> cost_;
  double gamma_ = 0.0;
  double beta_ = 0.0;
};

/// Returns one human-readable line per violated invariant; empty iff valid.
std::vector<std::string> validate_model(const PerceptionMDP& model);

/// Throws ModelError listing every violation when the model is invalid.
void require_valid(const PerceptionMDP& model);

/// Three-state benchmark: three actions, two cycling actions and a near-stay
/// action, with unit cost for any action taken in the third state.
PerceptionMDP build_three_state(double gamma = 0.95, double beta = 5.0);

}  // namespace ifbs
