#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifbs/belief.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/model.hpp"
#include "ifbs/rng.hpp"

namespace ifbs {

/// Invariant finite belief set: posteriors B-hat (observation alphabet), the
/// prior images B obtained by predicting every posterior under every action,
/// and the (posterior, action) -> prior map closing the loop.
///
/// Extra priors (e.g. a known initial belief) may be appended after the
/// images; they are entry points only and never reached by the map.
class BeliefSets {
 public:
  BeliefSets() = default;

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_posteriors() const { return posteriors_.size(); }
  std::size_t num_priors() const { return priors_.size(); }
  /// M * |A|, the number of prior images before deduplication.
  std::size_t num_prior_images() const { return prior_map_.size(); }

  const std::vector<Belief>& posteriors() const { return posteriors_; }
  const std::vector<Belief>& priors() const { return priors_; }
  const Belief& posterior(std::size_t m) const { return posteriors_[m]; }
  const Belief& prior(std::size_t i) const { return priors_[i]; }

  std::size_t prior_index(std::size_t m, std::size_t action) const {
    return prior_map_[m * num_actions_ + action];
  }
  std::size_t vertex_index(std::size_t state) const { return vertex_index_[state]; }
  /// Prior indices of the extra priors, in the order they were supplied.
  const std::vector<std::size_t>& extra_prior_indices() const { return extra_priors_; }

  /// Returns one line per violated invariant (vertex presence, predict
  /// consistency, deduplication).
  std::vector<std::string> check_invariants(const PerceptionMDP& model) const;

  friend BeliefSets build_prior_set(std::vector<Belief> posteriors, const PerceptionMDP& model,
                                    std::span<const Belief> extra_priors);

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<Belief> posteriors_;
  std::vector<Belief> priors_;
  std::vector<std::size_t> prior_map_;
  std::vector<std::size_t> vertex_index_;
  std::vector<std::size_t> extra_priors_;
};

/// Maps every belief to the index of its first occurrence among beliefs within
/// `tol` in max-norm. `kept` receives the first-occurrence indices in order.
std::vector<std::size_t> dedup_beliefs(std::span<const Belief> beliefs, double tol,
                                       std::vector<std::size_t>* kept);

/// All beliefs whose coordinates are multiples of 1/divisions.
std::vector<Belief> build_simplex_grid(std::size_t num_states, std::size_t divisions);
/// Same, from a spacing; throws BeliefError unless 1/spacing is an integer.
std::vector<Belief> build_simplex_grid(std::size_t num_states, double spacing);
/// Integer k with k * spacing == 1, or throws BeliefError.
std::size_t spacing_divisions(double spacing);

/// Six posteriors per cell: the vertex, two 3x3 blurs (centre 0.5, 0.75) and
/// three 5x5 two-ring blurs (centre 0.5, 0.35, 0.2; rings split the rest in
/// halves). Off-grid mass goes to the nearest in-bounds cell.
std::vector<Belief> build_local_blur_set(const GridworldConfig& grid, bool deduplicate = true);

/// Throws BeliefError naming the first missing vertex when `posteriors` do not
/// contain every simplex vertex.
BeliefSets build_prior_set(std::vector<Belief> posteriors, const PerceptionMDP& model,
                           std::span<const Belief> extra_priors = {});

/// Nearest posterior in max-norm among those whose support lies within
/// support(b); ties go to the lowest index.
std::size_t project_nearest(const Belief& b, std::span<const Belief> posteriors);

struct DensityEstimate {
  double value = 0.0;           // max ||b - project_nearest(b)|| over probes
  std::size_t num_probes = 0;   // random samples plus deterministic probes
  /// The estimate is a lower bound on the supremum over the simplex.
  bool lower_bound = true;
};

/// Probes uniform Dirichlet samples; for |S| <= 4 it also probes pairwise
/// midpoints of the posteriors and the simplex barycentre.
DensityEstimate estimate_density(std::span<const Belief> posteriors, std::size_t num_samples,
                                 std::uint64_t seed);

/// Uniform sample from the simplex (Dirichlet with unit concentration).
Belief sample_dirichlet(std::size_t num_states, RandomStream& rng);

}  // namespace ifbs
