#include "ifbs/belief_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ifbs {

namespace {

// Positive weights summing to one; |w.(x - y)| <= ||x - y||_inf, so two
// beliefs within tol always have keys within tol.
std::vector<double> projection_weights(std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0);
    w[i] = 0.5 + frac;
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

void compositions(std::size_t num_states, std::size_t remaining, std::vector<std::size_t>& parts,
                  std::size_t divisions, std::vector<Belief>& out) {
  const std::size_t pos = parts.size();
  if (pos + 1 == num_states) {
    parts.push_back(remaining);
    std::vector<double> p(num_states);
    for (std::size_t s = 0; s < num_states; ++s) {
      p[s] = static_cast<double>(parts[s]) / static_cast<double>(divisions);
    }
    out.push_back(Belief::normalized(std::move(p)));
    parts.pop_back();
    return;
  }
  // Descending first coordinate puts e_1 first.
  for (std::size_t k = remaining + 1; k-- > 0;) {
    parts.push_back(k);
    compositions(num_states, remaining - k, parts, divisions, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<std::size_t> dedup_beliefs(std::span<const Belief> beliefs, double tol,
                                       std::vector<std::size_t>* kept) {
  const std::size_t n = beliefs.size();
  std::vector<std::size_t> rep(n);
  if (kept) kept->clear();
  if (n == 0) return rep;

  const auto w = projection_weights(beliefs.front().size());
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) {
    key[i] = std::inner_product(w.begin(), w.end(), beliefs[i].probs().begin(), 0.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  std::vector<std::size_t> pos(n);
  for (std::size_t r = 0; r < n; ++r) pos[order[r]] = r;

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = i;
    auto consider = [&](std::size_t j) {
      if (j < best && max_norm_distance(beliefs[i].probs(), beliefs[j].probs()) <= tol) best = j;
    };
    for (std::size_t r = pos[i]; r-- > 0 && key[i] - key[order[r]] <= tol;) consider(order[r]);
    for (std::size_t r = pos[i] + 1; r < n && key[order[r]] - key[i] <= tol; ++r) consider(order[r]);
    rep[i] = best == i ? i : rep[best];
    if (rep[i] == i && kept) kept->push_back(i);
  }
  return rep;
}

std::size_t spacing_divisions(double spacing) {
  if (!(spacing > 0.0 && spacing <= 1.0)) throw BeliefError("spacing must lie in (0, 1]");
  const double k = std::round(1.0 / spacing);
  if (std::abs(k * spacing - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "spacing " << spacing << " does not divide 1";
    throw BeliefError(os.str());
  }
  return static_cast<std::size_t>(k);
}

std::vector<Belief> build_simplex_grid(std::size_t num_states, std::size_t divisions) {
  if (num_states == 0) throw BeliefError("simplex grid needs at least one state");
  if (divisions == 0) throw BeliefError("simplex grid needs at least one division");
  std::vector<Belief> out;
  std::vector<std::size_t> parts;
  compositions(num_states, divisions, parts, divisions, out);
  return out;
}

std::vector<Belief> build_simplex_grid(std::size_t num_states, double spacing) {
  return build_simplex_grid(num_states, spacing_divisions(spacing));
}

std::vector<Belief> build_local_blur_set(const GridworldConfig& grid, bool deduplicate) {
  if (auto issues = validate_gridworld(grid); !issues.empty()) {
    throw BeliefError("invalid gridworld: " + issues.front());
  }
  const std::size_t ns = grid.num_states();
  std::vector<Belief> out;
  out.reserve(6 * ns);

  auto blur = [&](Cell centre, double centre_mass, int radius) {
    std::vector<double> p(ns, 0.0);
    const double rest = 1.0 - centre_mass;
    for (int dr = -radius; dr <= radius; ++dr) {
      for (int dc = -radius; dc <= radius; ++dc) {
        const int ring = std::max(std::abs(dr), std::abs(dc));
        double mass = centre_mass;
        if (ring == 1) mass = radius == 1 ? rest / 8.0 : rest / 16.0;
        if (ring == 2) mass = rest / 32.0;
        const Cell target = grid.clamp({centre.row + dr, centre.col + dc});
        p[grid.state_of(target)] += mass;
      }
    }
    return Belief::normalized(std::move(p));
  };

  for (std::size_t s = 0; s < ns; ++s) {
    const Cell c = grid.cell_of(s);
    out.push_back(Belief::vertex(ns, s));
    out.push_back(blur(c, 0.5, 1));
    out.push_back(blur(c, 0.75, 1));
    out.push_back(blur(c, 0.5, 2));
    out.push_back(blur(c, 0.35, 2));
    out.push_back(blur(c, 0.20, 2));
  }
  if (!deduplicate) return out;

  std::vector<std::size_t> kept;
  dedup_beliefs(out, kDedupTol, &kept);
  std::vector<Belief> unique;
  unique.reserve(kept.size());
  for (std::size_t i : kept) unique.push_back(out[i]);
  return unique;
}

BeliefSets build_prior_set(std::vector<Belief> posteriors, const PerceptionMDP& model,
                           std::span<const Belief> extra_priors) {
  require_valid(model);
  const std::size_t ns = model.num_states();
  const std::size_t na = model.num_actions();

  BeliefSets sets;
  sets.num_states_ = ns;
  sets.num_actions_ = na;
  for (const Belief& b : posteriors) {
    if (b.size() != ns) throw BeliefError("posterior dimension does not match the model");
  }
  sets.vertex_index_.assign(ns, posteriors.size());
  for (std::size_t m = 0; m < posteriors.size(); ++m) {
    const auto supp = support(posteriors[m]);
    if (supp.size() == 1 && sets.vertex_index_[supp[0]] == posteriors.size()) {
      sets.vertex_index_[supp[0]] = m;
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (sets.vertex_index_[s] == posteriors.size()) {
      throw BeliefError("posterior set is missing the simplex vertex e_" + std::to_string(s) +
                        "; every vertex is required for feasibility");
    }
  }

  std::vector<Belief> images;
  images.reserve(posteriors.size() * na + extra_priors.size());
  for (const Belief& post : posteriors) {
    for (std::size_t a = 0; a < na; ++a) images.push_back(predict(post, a, model));
  }
  const std::size_t num_images = images.size();
  for (const Belief& b : extra_priors) {
    if (b.size() != ns) throw BeliefError("extra prior dimension does not match the model");
    images.push_back(b);
  }

  std::vector<std::size_t> kept;
  const auto rep = dedup_beliefs(images, kDedupTol, &kept);
  std::vector<std::size_t> slot(images.size(), 0);
  for (std::size_t k = 0; k < kept.size(); ++k) slot[kept[k]] = k;

  sets.priors_.reserve(kept.size());
  for (std::size_t i : kept) sets.priors_.push_back(images[i]);
  sets.prior_map_.resize(num_images);
  for (std::size_t i = 0; i < num_images; ++i) sets.prior_map_[i] = slot[rep[i]];
  for (std::size_t i = num_images; i < images.size(); ++i) {
    sets.extra_priors_.push_back(slot[rep[i]]);
  }
  sets.posteriors_ = std::move(posteriors);
  return sets;
}

std::vector<std::string> BeliefSets::check_invariants(const PerceptionMDP& model) const {
  std::vector<std::string> issues;
  for (std::size_t s = 0; s < num_states_; ++s) {
    const std::size_t m = vertex_index_[s];
    if (m >= posteriors_.size() || posteriors_[m] != Belief::vertex(num_states_, s)) {
      issues.push_back("vertex e_" + std::to_string(s) + " missing from posteriors");
    }
  }
  for (std::size_t m = 0; m < posteriors_.size(); ++m) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      const Belief expect = predict(posteriors_[m], a, model);
      const double d = max_norm_distance(priors_[prior_index(m, a)].probs(), expect.probs());
      if (d > kDedupTol) {
        std::ostringstream os;
        os << "prior for (m=" << m << ", a=" << a << ") is " << d << " away from its prediction";
        issues.push_back(os.str());
      }
    }
  }
  std::vector<std::size_t> kept;
  dedup_beliefs(priors_, kDedupTol, &kept);
  if (kept.size() != priors_.size()) {
    issues.push_back(std::to_string(priors_.size() - kept.size()) + " stored priors are duplicates");
  }
  return issues;
}

std::size_t project_nearest(const Belief& b, std::span<const Belief> posteriors) {
  std::size_t best = posteriors.size();
  double best_d = 0.0;
  for (std::size_t m = 0; m < posteriors.size(); ++m) {
    if (!support_within(posteriors[m], b)) continue;
    const double d = max_norm_distance(b.probs(), posteriors[m].probs());
    if (best == posteriors.size() || d < best_d) {
      best = m;
      best_d = d;
    }
  }
  if (best == posteriors.size()) {
    throw BeliefError("no posterior has support within the belief; vertices are missing");
  }
  return best;
}

Belief sample_dirichlet(std::size_t num_states, RandomStream& rng) {
  std::vector<double> g(num_states);
  for (double& x : g) x = rng.exponential();
  return Belief::normalized(std::move(g));
}

DensityEstimate estimate_density(std::span<const Belief> posteriors, std::size_t num_samples,
                                 std::uint64_t seed) {
  DensityEstimate est;
  if (posteriors.empty()) throw BeliefError("empty posterior set");
  const std::size_t ns = posteriors.front().size();
  auto probe = [&](const Belief& b) {
    const std::size_t m = project_nearest(b, posteriors);
    est.value = std::max(est.value, max_norm_distance(b.probs(), posteriors[m].probs()));
    ++est.num_probes;
  };

  RandomStream rng(seed, 0);
  for (std::size_t i = 0; i < num_samples; ++i) probe(sample_dirichlet(ns, rng));

  constexpr std::size_t kMaxPairwise = 2000;
  if (ns <= 4) {
    probe(Belief::uniform(ns));
    if (posteriors.size() <= kMaxPairwise) {
      for (std::size_t i = 0; i < posteriors.size(); ++i) {
        for (std::size_t j = i + 1; j < posteriors.size(); ++j) {
          std::vector<double> mid(ns);
          for (std::size_t s = 0; s < ns; ++s) mid[s] = 0.5 * (posteriors[i][s] + posteriors[j][s]);
          probe(Belief::normalized(std::move(mid)));
        }
      }
    }
  }
  return est;
}

}  // namespace ifbs
