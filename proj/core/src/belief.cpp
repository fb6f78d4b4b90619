#include "ifbs/belief.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace ifbs {

namespace {
constexpr double kSumTol = 1e-12;
}

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw BeliefError("belief must have at least one state");
  double sum = 0.0;
  for (std::size_t s = 0; s < probs_.size(); ++s) {
    if (!(probs_[s] >= 0.0)) {
      throw BeliefError("belief entry " + std::to_string(s) + " is negative or NaN");
    }
    sum += probs_[s];
  }
  if (!(std::abs(sum - 1.0) <= kSumTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "belief sums to " << sum;
    throw BeliefError(os.str());
  }
}

Belief Belief::vertex(std::size_t num_states, std::size_t state) {
  if (state >= num_states) throw BeliefError("vertex state index out of range");
  std::vector<double> p(num_states, 0.0);
  p[state] = 1.0;
  return Belief(std::move(p), Unchecked{});
}

Belief Belief::uniform(std::size_t num_states) {
  if (num_states == 0) throw BeliefError("belief must have at least one state");
  return Belief(std::vector<double>(num_states, 1.0 / static_cast<double>(num_states)),
                Unchecked{});
}

Belief Belief::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw BeliefError("weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw BeliefError("weights have no mass");
  for (double& w : weights) w /= sum;
  return Belief(std::move(weights), Unchecked{});
}

Belief predict(const Belief& posterior, std::size_t action, const PerceptionMDP& model) {
  if (action >= model.num_actions()) {
    throw BeliefError("action index " + std::to_string(action) + " out of range");
  }
  if (posterior.size() != model.num_states()) throw BeliefError("belief dimension mismatch");
  const std::size_t ns = model.num_states();
  std::vector<double> next(ns, 0.0);
  for (std::size_t from = 0; from < ns; ++from) {
    const double w = posterior[from];
    if (w == 0.0) continue;
    auto row = model.transition_row(action, from);
    for (std::size_t to = 0; to < ns; ++to) next[to] += w * row[to];
  }
  return Belief::normalized(std::move(next));
}

BayesResult bayes_update(const Belief& prior, std::span<const double> likelihood) {
  if (likelihood.size() != prior.size()) throw BeliefError("likelihood dimension mismatch");
  double alpha = 0.0;
  for (std::size_t s = 0; s < prior.size(); ++s) {
    if (!(likelihood[s] >= 0.0 && likelihood[s] <= 1.0)) {
      throw BeliefError("likelihood entry " + std::to_string(s) + " outside [0,1]");
    }
    alpha += likelihood[s] * prior[s];
  }
  if (!(alpha > kSupportTol)) throw BeliefError("observation has zero probability under the prior");
  std::vector<double> post(prior.size());
  for (std::size_t s = 0; s < prior.size(); ++s) post[s] = likelihood[s] * prior[s] / alpha;
  return {Belief::normalized(std::move(post)), alpha};
}

std::vector<std::size_t> support(const Belief& b, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < b.size(); ++s) {
    if (b[s] > tol) out.push_back(s);
  }
  return out;
}

bool support_within(const Belief& inner, const Belief& outer, double tol) {
  for (std::size_t s = 0; s < inner.size(); ++s) {
    if (inner[s] > tol && !(outer[s] > tol)) return false;
  }
  return true;
}

double kl_divergence(const Belief& p, const Belief& q, double tol) {
  if (p.size() != q.size()) throw BeliefError("belief dimension mismatch");
  double d = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (!(q[s] > tol)) {
      if (p[s] > tol) {
        throw BeliefError("divergence undefined: state " + std::to_string(s) +
                          " outside the support of the reference belief");
      }
      continue;
    }
    if (p[s] > 0.0) d += p[s] * std::log(p[s] / q[s]);
  }
  return d < 0.0 ? 0.0 : d;
}

double entropy(const Belief& p) {
  double h = 0.0;
  for (double x : p.probs()) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

double max_norm_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace ifbs
