#include "germflow/weights.hpp"

#include <algorithm>
#include <cmath>

#include "germflow/errors.hpp"
#include "germflow/polynomial.hpp"

namespace germflow {

WeightSystem::WeightSystem(std::vector<int> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw DimensionError("weight system is empty");
  q_ = 1;
  for (int w : weights_) {
    if (w < 1) throw DimensionError("weights must be positive integers");
    if (q_ > (1LL << 50) / w) throw DimensionError("weight product overflows");
    q_ *= w;
  }
}

WeightSystem WeightSystem::unit(std::size_t dim) { return WeightSystem(std::vector<int>(dim, 1)); }

int WeightSystem::max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }
int WeightSystem::min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

bool WeightSystem::is_unit() const {
  return std::all_of(weights_.begin(), weights_.end(), [](int w) { return w == 1; });
}

Eigen::VectorXd WeightSystem::dilate(std::span<const double> u, double t) const {
  if (u.size() != weights_.size()) throw DimensionError("dilation dimension mismatch");
  Eigen::VectorXd out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(t, weights_[i]) * u[i];
  return out;
}

namespace {

// (sum_i s_i^(2q))^(1/(2q)) with s_i = |u_i|^(1/w_i), over the masked coordinates.
double gauge(const WeightSystem& weights, std::span<const double> u, const std::vector<bool>* mask) {
  if (u.size() > weights.size()) throw DimensionError("point longer than weight system");
  bool unit = true;
  for (std::size_t i = 0; i < u.size(); ++i)
    if ((!mask || (*mask)[i]) && weights.weight(i) != 1) unit = false;
  if (unit && weights.q() == 1) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!mask || (*mask)[i]) sum += u[i] * u[i];
    return std::sqrt(sum);
  }
  double smax = 0.0;
  std::vector<double> s(u.size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const double a = std::abs(u[i]);
    s[i] = weights.weight(i) == 1 ? a : std::pow(a, 1.0 / weights.weight(i));
    smax = std::max(smax, s[i]);
  }
  if (smax == 0.0) return 0.0;
  const double two_q = 2.0 * static_cast<double>(weights.q());
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if ((mask && !(*mask)[i]) || s[i] == 0.0) continue;
    sum += std::exp(two_q * std::log(s[i] / smax));
  }
  return smax * std::pow(sum, 1.0 / two_q);
}

}  // namespace

double rho(const WeightSystem& weights, std::span<const double> u) {
  if (u.size() != weights.size()) throw DimensionError("rho: point dimension mismatch");
  return gauge(weights, u, nullptr);
}

double rho_masked(const WeightSystem& weights, std::span<const double> u,
                  const std::vector<bool>& mask) {
  if (mask.size() < u.size()) throw DimensionError("rho: mask too short");
  return gauge(weights, u, &mask);
}

double grad_rho_scaled(const WeightSystem& weights, std::span<const double> u, std::size_t i) {
  const double r = rho(weights, u);
  if (r == 0.0) return 0.0;
  const int w = weights.weight(i);
  const double s = std::pow(std::abs(u[i]), 1.0 / w);
  if (s == 0.0) return 0.0;
  const double two_q = 2.0 * static_cast<double>(weights.q());
  return std::exp((two_q - w) * std::log(s / r)) / w;
}

Eigen::VectorXd weighted_gradient_x(const Polynomial& g, const WeightSystem& weights,
                                    std::size_t n, std::span<const double> u) {
  if (n > weights.size()) throw DimensionError("weighted gradient: n exceeds weight count");
  const double r = rho(weights, u);
  Eigen::VectorXd out(n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] = std::pow(r, weights.weight(j)) * g.derivative(j).evaluate(u);
  return out;
}

}  // namespace germflow
