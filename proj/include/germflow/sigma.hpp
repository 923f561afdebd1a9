#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace germflow {

class WeightSystem;

// Finite union of coordinate subspaces of R^n, each given by its free indices
// (0-based). An empty free set is the origin.
class SigmaSet {
 public:
  using DistanceOracle = std::function<double(std::span<const double>)>;

  SigmaSet() = default;
  SigmaSet(std::size_t n, std::vector<std::vector<int>> free_sets);
  static SigmaSet origin(std::size_t n);

  std::size_t n() const { return n_; }
  const std::vector<std::vector<int>>& subspaces() const { return free_sets_; }
  std::vector<bool> normal_mask(std::size_t s) const;
  std::vector<int> normal_coordinates(std::size_t s) const;

  bool contains(std::span<const double> x, double tol = 0.0) const;

  // Optional user-supplied distance; the bundled analyses never install one.
  void set_distance_oracle(DistanceOracle oracle) { oracle_ = std::move(oracle); }
  const DistanceOracle& distance_oracle() const { return oracle_; }

  bool operator==(const SigmaSet& other) const {
    return n_ == other.n_ && free_sets_ == other.free_sets_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<int>> free_sets_;
  DistanceOracle oracle_;
};

// min over subspaces S of (sum_{j not in S} x_j^(2 q_j))^(1/(2q)); x holds the
// first n coordinates of a point, q comes from the full weight system.
double weighted_distance(std::span<const double> x, const SigmaSet& sigma,
                         const WeightSystem& weights);

double weighted_distance_to_subspace(std::span<const double> x, const SigmaSet& sigma,
                                     std::size_t s, const WeightSystem& weights);

}  // namespace germflow
