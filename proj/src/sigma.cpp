#include "germflow/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "germflow/errors.hpp"
#include "germflow/weights.hpp"

namespace germflow {

SigmaSet::SigmaSet(std::size_t n, std::vector<std::vector<int>> free_sets)
    : n_(n), free_sets_(std::move(free_sets)) {
  if (free_sets_.empty()) free_sets_.push_back({});
  for (auto& s : free_sets_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int i : s)
      if (i < 0 || static_cast<std::size_t>(i) >= n_)
        throw DimensionError("sigma index " + std::to_string(i + 1) + " out of range");
  }
  std::sort(free_sets_.begin(), free_sets_.end());
  free_sets_.erase(std::unique(free_sets_.begin(), free_sets_.end()), free_sets_.end());
}

SigmaSet SigmaSet::origin(std::size_t n) { return SigmaSet(n, {{}}); }

std::vector<bool> SigmaSet::normal_mask(std::size_t s) const {
  std::vector<bool> mask(n_, true);
  for (int i : free_sets_.at(s)) mask[i] = false;
  return mask;
}

std::vector<int> SigmaSet::normal_coordinates(std::size_t s) const {
  std::vector<int> out;
  const auto mask = normal_mask(s);
  for (std::size_t i = 0; i < n_; ++i)
    if (mask[i]) out.push_back(static_cast<int>(i));
  return out;
}

bool SigmaSet::contains(std::span<const double> x, double tol) const {
  if (x.size() < n_) throw DimensionError("sigma: point too short");
  for (std::size_t s = 0; s < free_sets_.size(); ++s) {
    const auto mask = normal_mask(s);
    bool inside = true;
    for (std::size_t i = 0; i < n_ && inside; ++i)
      if (mask[i] && std::abs(x[i]) > tol) inside = false;
    if (inside) return true;
  }
  return false;
}

double weighted_distance_to_subspace(std::span<const double> x, const SigmaSet& sigma,
                                     std::size_t s, const WeightSystem& weights) {
  if (x.size() < sigma.n()) throw DimensionError("distance: point too short");
  return rho_masked(weights, x.first(sigma.n()), sigma.normal_mask(s));
}

double weighted_distance(std::span<const double> x, const SigmaSet& sigma,
                         const WeightSystem& weights) {
  if (sigma.distance_oracle()) return sigma.distance_oracle()(x.first(sigma.n()));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sigma.subspaces().size(); ++s)
    best = std::min(best, weighted_distance_to_subspace(x, sigma, s, weights));
  return best;
}

}  // namespace germflow
