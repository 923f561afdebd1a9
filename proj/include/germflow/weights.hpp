#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace germflow {

class Polynomial;

// Positive integer weights on (x, lambda). q is the product of all weights and
// q_i = q / w_i, so u_i^(2 q_i) is weighted-homogeneous of degree 2q.
class WeightSystem {
 public:
  WeightSystem() = default;
  explicit WeightSystem(std::vector<int> weights);
  static WeightSystem unit(std::size_t dim);

  std::size_t size() const { return weights_.size(); }
  int weight(std::size_t i) const { return weights_[i]; }
  const std::vector<int>& weights() const { return weights_; }
  long long q() const { return q_; }
  long long q_i(std::size_t i) const { return q_ / weights_[i]; }
  int max_weight() const;
  int min_weight() const;
  bool is_unit() const;

  // (t^w1 u_1, ..., t^wm u_m).
  Eigen::VectorXd dilate(std::span<const double> u, double t) const;

  bool operator==(const WeightSystem& other) const { return weights_ == other.weights_; }

 private:
  std::vector<int> weights_;
  long long q_ = 1;
};

// Weighted norm (sum u_i^(2 q_i))^(1/(2q)), evaluated as a 2q-norm of
// |u_i|^(1/w_i) so large exponents cannot overflow.
double rho(const WeightSystem& weights, std::span<const double> u);

// Same norm restricted to the coordinates flagged in mask, with q taken from
// the full system.
double rho_masked(const WeightSystem& weights, std::span<const double> u,
                  const std::vector<bool>& mask);

// |d rho / d u_i| * rho^(w_i - 1); bounded by 1/w_i.
double grad_rho_scaled(const WeightSystem& weights, std::span<const double> u, std::size_t i);

// Coefficients of the gradient of g in the frame rho^(w_j) d/dx_j, j < n.
Eigen::VectorXd weighted_gradient_x(const Polynomial& g, const WeightSystem& weights,
                                    std::size_t n, std::span<const double> u);

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace germflow
