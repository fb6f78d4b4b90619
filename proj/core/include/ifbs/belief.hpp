#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ifbs/model.hpp"

namespace ifbs {

/// Mass below this is treated as outside the support.
inline constexpr double kSupportTol = 1e-12;
/// Beliefs closer than this in max-norm are considered the same belief.
inline constexpr double kDedupTol = 1e-10;

class BeliefError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability vector over the states of a model.
class Belief {
 public:
  Belief() = default;
  /// Throws BeliefError unless entries are >= 0 and sum to 1 within 1e-12.
  explicit Belief(std::vector<double> probs);

  static Belief vertex(std::size_t num_states, std::size_t state);
  static Belief uniform(std::size_t num_states);
  /// Rescales a nonnegative vector with positive mass; no sum check.
  static Belief normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t s) const { return probs_[s]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& vector() const { return probs_; }

  bool operator==(const Belief&) const = default;

 private:
  struct Unchecked {};
  Belief(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

/// b'(s) = sum_{s'} T(s | a, s') bhat(s').
Belief predict(const Belief& posterior, std::size_t action, const PerceptionMDP& model);

struct BayesResult {
  Belief posterior;
  double alpha = 0.0;  // probability of the observation under the prior
};

/// posterior(s) = likelihood(s) b(s) / alpha with alpha = sum_s likelihood(s) b(s).
/// Throws BeliefError when alpha <= kSupportTol.
BayesResult bayes_update(const Belief& prior, std::span<const double> likelihood);

std::vector<std::size_t> support(const Belief& b, double tol = kSupportTol);

/// True iff every state carrying mass in `inner` also carries mass in `outer`.
bool support_within(const Belief& inner, const Belief& outer, double tol = kSupportTol);

/// D(p || q) in nats over the support of q. Throws BeliefError if p has mass
/// outside that support.
double kl_divergence(const Belief& p, const Belief& q, double tol = kSupportTol);

/// Shannon entropy in nats.
double entropy(const Belief& p);

double max_norm_distance(std::span<const double> a, std::span<const double> b);

}  // namespace ifbs
