#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "germflow/polynomial.hpp"

namespace germflow {

class SigmaSet;
class WeightSystem;

// Polynomial map germ (R^n x R^l, 0) -> (R^p, 0). Variables are ordered
// x_1..x_n, lambda_1..lambda_l.
class MapGerm {
 public:
  MapGerm() = default;
  MapGerm(std::size_t n, std::size_t l, std::vector<Polynomial> components);
  static MapGerm zero(std::size_t n, std::size_t l, std::size_t p);

  std::size_t n() const { return n_; }
  std::size_t l() const { return l_; }
  std::size_t p() const { return components_.size(); }
  std::size_t num_vars() const { return n_ + l_; }
  const std::vector<Polynomial>& components() const { return components_; }
  const Polynomial& component(std::size_t i) const { return components_[i]; }
  const Polynomial& partial_x(std::size_t i, std::size_t j) const { return partials_[i * n_ + j]; }
  bool is_zero() const;
  int degree() const;

  Eigen::VectorXd evaluate(std::span<const double> u) const;
  Eigen::MatrixXd jacobian_x(std::span<const double> u) const;
  // Euclidean norm of the per-component term magnitudes.
  double magnitude(std::span<const double> u) const;
  // Per-entry term magnitudes of the x-Jacobian.
  Eigen::MatrixXd jacobian_x_magnitude(std::span<const double> u) const;

  bool same_shape(const MapGerm& other) const;
  MapGerm operator+(const MapGerm& other) const;
  MapGerm operator-(const MapGerm& other) const;
  MapGerm operator*(double s) const;

  bool operator==(const MapGerm& other) const;

 private:
  void check_point(std::span<const double> u) const;

  std::size_t n_ = 0;
  std::size_t l_ = 0;
  std::vector<Polynomial> components_;
  std::vector<Polynomial> partials_;
};

// Taylor polynomial of order k at base_point, in offset variables h = u - a.
struct Jet {
  Eigen::VectorXd base_point;
  int degree = 0;
  std::vector<Polynomial> components;

  Eigen::VectorXd evaluate(std::span<const double> u) const;
};

Jet jet_at(const MapGerm& germ, std::span<const double> base_point, int k);

struct JetComparison {
  bool agree = true;
  double worst_residual = 0.0;
  std::optional<Eigen::VectorXd> witness;
  std::size_t points_checked = 0;
  // True when the tensor grid alone is unisolvent for the jet coefficients,
  // which makes agreement a proof rather than evidence.
  bool exhaustive = false;
};

// Compares the k-jets of f and g at base points of Sigma x R^l. Each subspace
// is probed on a tensor grid with max(k, deg(f - g)) + 1 nodes per free axis
// (origin first) plus `samples` random points.
JetComparison jets_agree_on_sigma(const MapGerm& f, const MapGerm& g, int k,
                                  const SigmaSet& sigma, std::size_t samples,
                                  std::uint64_t seed = 42, double tol = 1e-12);

inline constexpr long kInfiniteOrder = std::numeric_limits<long>::max();

// Weighted order of a polynomial along subspace s: the minimum over terms of
// sum_{j normal} a_j w_j. kInfiniteOrder for the zero polynomial.
long weighted_order(const Polynomial& p, const SigmaSet& sigma, std::size_t s,
                    const WeightSystem& weights);

struct ComponentOrder {
  std::size_t component = 0;
  std::size_t subspace = 0;
  long value_order = kInfiniteOrder;
  long derivative_order = kInfiniteOrder;
  bool value_pass = true;
  bool derivative_pass = true;
};

struct PerturbationOrderReport {
  int d = 0;
  int max_weight = 0;
  long value_threshold = 0;       // orders must exceed d + |w|
  long derivative_threshold = 0;  // orders must exceed d
  std::vector<ComponentOrder> entries;
  bool value_pass = true;
  bool derivative_pass = true;

  bool passes() const { return value_pass && derivative_pass; }
  long min_value_order() const;
  long min_derivative_order() const;
  std::string summary() const;
};

PerturbationOrderReport perturbation_order(const MapGerm& pert, const SigmaSet& sigma,
                                           const WeightSystem& weights, int d);

}  // namespace germflow
