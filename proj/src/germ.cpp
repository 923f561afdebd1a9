#include "germflow/germ.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "germflow/errors.hpp"
#include "germflow/random.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"

namespace germflow {

MapGerm::MapGerm(std::size_t n, std::size_t l, std::vector<Polynomial> components)
    : n_(n), l_(l), components_(std::move(components)) {
  if (n_ == 0) throw DimensionError("germ needs at least one state variable");
  if (components_.empty()) throw DimensionError("germ needs at least one component");
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].num_vars() != n_ + l_)
      throw DimensionError("component " + std::to_string(i + 1) + " has wrong arity");
    if (components_[i].constant_term() != 0.0)
      throw DimensionError("component " + std::to_string(i + 1) + " does not vanish at the origin");
  }
  partials_.reserve(components_.size() * n_);
  for (const auto& c : components_)
    for (std::size_t j = 0; j < n_; ++j) partials_.push_back(c.derivative(j));
}

MapGerm MapGerm::zero(std::size_t n, std::size_t l, std::size_t p) {
  return MapGerm(n, l, std::vector<Polynomial>(p, Polynomial(n + l)));
}

bool MapGerm::is_zero() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Polynomial& c) { return c.is_zero(); });
}

int MapGerm::degree() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

void MapGerm::check_point(std::span<const double> u) const {
  if (u.size() != n_ + l_)
    throw DimensionError("point has " + std::to_string(u.size()) + " coordinates, germ expects " +
                         std::to_string(n_ + l_));
}

Eigen::VectorXd MapGerm::evaluate(std::span<const double> u) const {
  check_point(u);
  Eigen::VectorXd out(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i].evaluate(u);
  return out;
}

Eigen::MatrixXd MapGerm::jacobian_x(std::span<const double> u) const {
  check_point(u);
  Eigen::MatrixXd out(components_.size(), n_);
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (std::size_t j = 0; j < n_; ++j) out(i, j) = partials_[i * n_ + j].evaluate(u);
  return out;
}

double MapGerm::magnitude(std::span<const double> u) const {
  check_point(u);
  double sum = 0.0;
  for (const auto& c : components_) {
    const double m = c.magnitude(u);
    sum += m * m;
  }
  return std::sqrt(sum);
}

Eigen::MatrixXd MapGerm::jacobian_x_magnitude(std::span<const double> u) const {
  check_point(u);
  Eigen::MatrixXd out(components_.size(), n_);
  for (std::size_t i = 0; i < components_.size(); ++i)
    for (std::size_t j = 0; j < n_; ++j) out(i, j) = partials_[i * n_ + j].magnitude(u);
  return out;
}

bool MapGerm::same_shape(const MapGerm& other) const {
  return n_ == other.n_ && l_ == other.l_ && p() == other.p();
}

MapGerm MapGerm::operator+(const MapGerm& other) const {
  if (!same_shape(other)) throw DimensionError("germ shapes differ");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < p(); ++i) out.push_back(components_[i] + other.components_[i]);
  return MapGerm(n_, l_, std::move(out));
}

MapGerm MapGerm::operator-(const MapGerm& other) const { return *this + other * -1.0; }

MapGerm MapGerm::operator*(double s) const {
  std::vector<Polynomial> out;
  for (const auto& c : components_) out.push_back(c * s);
  return MapGerm(n_, l_, std::move(out));
}

bool MapGerm::operator==(const MapGerm& other) const {
  return same_shape(other) && components_ == other.components_;
}

Eigen::VectorXd Jet::evaluate(std::span<const double> u) const {
  if (u.size() != static_cast<std::size_t>(base_point.size()))
    throw DimensionError("jet evaluation dimension mismatch");
  std::vector<double> h(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) h[i] = u[i] - base_point[i];
  Eigen::VectorXd out(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) out[i] = components[i].evaluate(h);
  return out;
}

Jet jet_at(const MapGerm& germ, std::span<const double> base_point, int k) {
  if (k < 0) throw DimensionError("jet order must be nonnegative");
  if (base_point.size() != germ.num_vars()) throw DimensionError("jet base point dimension mismatch");
  Jet jet;
  jet.base_point = Eigen::Map<const Eigen::VectorXd>(base_point.data(), base_point.size());
  jet.degree = k;
  for (const auto& c : germ.components()) jet.components.push_back(c.shifted(base_point).truncated(k));
  return jet;
}

namespace {

// Distinct nodes in [-1, 1], origin first.
std::vector<double> grid_nodes(std::size_t count) {
  std::vector<double> nodes{0.0};
  const double step = 1.0 / static_cast<double>(count);
  for (std::size_t j = 1; nodes.size() < count; ++j) {
    nodes.push_back(step * j);
    if (nodes.size() < count) nodes.push_back(-step * j);
  }
  return nodes;
}

constexpr std::size_t kMaxGridPoints = 200000;

}  // namespace

JetComparison jets_agree_on_sigma(const MapGerm& f, const MapGerm& g, int k, const SigmaSet& sigma,
                                  std::size_t samples, std::uint64_t seed, double tol) {
  if (!f.same_shape(g)) throw DimensionError("jets_agree_on_sigma: germ shapes differ");
  if (sigma.n() != f.n()) throw DimensionError("jets_agree_on_sigma: sigma dimension mismatch");
  const MapGerm diff = f - g;
  const std::size_t nodes_per_axis = static_cast<std::size_t>(std::max(k, diff.degree())) + 1;
  const auto nodes = grid_nodes(nodes_per_axis);

  JetComparison result;
  result.exhaustive = true;
  auto probe = [&](const Eigen::VectorXd& a) {
    ++result.points_checked;
    double residual = 0.0;
    for (const auto& c : diff.components())
      residual = std::max(residual, c.shifted(as_span(a)).truncated(k).max_abs_coefficient());
    if (residual > result.worst_residual) {
      result.worst_residual = residual;
      if (residual > tol) result.witness = a;
    }
    if (residual > tol) result.agree = false;
  };

  for (std::size_t s = 0; s < sigma.subspaces().size(); ++s) {
    std::vector<std::size_t> free_axes;
    for (int i : sigma.subspaces()[s]) free_axes.push_back(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < f.l(); ++j) free_axes.push_back(f.n() + j);
    const std::size_t m = free_axes.size();

    double total = 1.0;
    for (std::size_t i = 0; i < m; ++i) total *= static_cast<double>(nodes_per_axis);
    if (total <= static_cast<double>(kMaxGridPoints)) {
      std::vector<std::size_t> idx(m, 0);
      for (std::size_t count = 0; count < static_cast<std::size_t>(total); ++count) {
        Eigen::VectorXd a = Eigen::VectorXd::Zero(f.num_vars());
        for (std::size_t i = 0; i < m; ++i) a[free_axes[i]] = nodes[idx[i]];
        probe(a);
        for (std::size_t i = 0; i < m; ++i) {
          if (++idx[i] < nodes_per_axis) break;
          idx[i] = 0;
        }
      }
    } else {
      result.exhaustive = false;
    }

    for (std::size_t i = 0; i < samples; ++i) {
      CounterRng rng(seed, s * 1'000'003ULL + i);
      Eigen::VectorXd a = Eigen::VectorXd::Zero(f.num_vars());
      for (std::size_t axis : free_axes) a[axis] = rng.uniform(-1.0, 1.0);
      probe(a);
    }
  }
  return result;
}

long weighted_order(const Polynomial& p, const SigmaSet& sigma, std::size_t s,
                    const WeightSystem& weights) {
  if (p.is_zero()) return kInfiniteOrder;
  const auto normal = sigma.normal_coordinates(s);
  long best = kInfiniteOrder;
  for (const auto& t : p.terms()) {
    long order = 0;
    for (int j : normal) order += static_cast<long>(t.exponents[j]) * weights.weight(j);
    best = std::min(best, order);
  }
  return best;
}

long PerturbationOrderReport::min_value_order() const {
  long best = kInfiniteOrder;
  for (const auto& e : entries) best = std::min(best, e.value_order);
  return best;
}

long PerturbationOrderReport::min_derivative_order() const {
  long best = kInfiniteOrder;
  for (const auto& e : entries) best = std::min(best, e.derivative_order);
  return best;
}

namespace {
std::string order_text(long v) { return v == kInfiniteOrder ? "inf" : std::to_string(v); }
}  // namespace

std::string PerturbationOrderReport::summary() const {
  std::ostringstream os;
  if (!value_pass)
    os << "perturbation order " << order_text(min_value_order()) << " ≤ " << value_threshold;
  if (!derivative_pass) {
    if (!value_pass) os << "; ";
    os << "derivative order " << order_text(min_derivative_order()) << " ≤ "
       << derivative_threshold;
  }
  if (passes())
    os << "perturbation order " << order_text(min_value_order()) << " > " << value_threshold
       << ", derivative order " << order_text(min_derivative_order()) << " > "
       << derivative_threshold;
  return os.str();
}

PerturbationOrderReport perturbation_order(const MapGerm& pert, const SigmaSet& sigma,
                                           const WeightSystem& weights, int d) {
  if (weights.size() != pert.num_vars())
    throw DimensionError("perturbation_order: weight count does not match germ");
  if (sigma.n() != pert.n()) throw DimensionError("perturbation_order: sigma dimension mismatch");
  PerturbationOrderReport report;
  report.d = d;
  report.max_weight = weights.max_weight();
  report.value_threshold = static_cast<long>(d) + report.max_weight;
  report.derivative_threshold = d;
  for (std::size_t i = 0; i < pert.p(); ++i) {
    for (std::size_t s = 0; s < sigma.subspaces().size(); ++s) {
      ComponentOrder entry;
      entry.component = i;
      entry.subspace = s;
      entry.value_order = weighted_order(pert.component(i), sigma, s, weights);
      for (std::size_t j = 0; j < pert.n(); ++j)
        entry.derivative_order =
            std::min(entry.derivative_order, weighted_order(pert.partial_x(i, j), sigma, s, weights));
      entry.value_pass = entry.value_order > report.value_threshold;
      entry.derivative_pass = entry.derivative_order > report.derivative_threshold;
      report.value_pass = report.value_pass && entry.value_pass;
      report.derivative_pass = report.derivative_pass && entry.derivative_pass;
      report.entries.push_back(entry);
    }
  }
  return report;
}

}  // namespace germflow
