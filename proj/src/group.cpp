#include "germflow/group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "germflow/errors.hpp"
#include "germflow/germ.hpp"
#include "germflow/random.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"

namespace germflow {

namespace {

constexpr double kOrthogonalityTol = 1e-12;
constexpr double kMatchTol = 1e-9;
constexpr double kZeroEntry = 1e-12;

bool close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kMatchTol;
}

void require_orthogonal(const Eigen::MatrixXd& g, std::size_t dim, const char* side) {
  if (static_cast<std::size_t>(g.rows()) != dim || static_cast<std::size_t>(g.cols()) != dim)
    throw DimensionError(std::string(side) + " generator has wrong size");
  const double defect = (g.transpose() * g - Eigen::MatrixXd::Identity(dim, dim)).norm();
  if (defect > kOrthogonalityTol) throw GroupError("non-orthogonal generator");
}

}  // namespace

GroupAction::GroupAction(std::size_t n, std::size_t p, std::vector<Eigen::MatrixXd> source_generators,
                         std::vector<Eigen::MatrixXd> target_generators, std::size_t max_order)
    : n_(n), p_(p),
      source_generators_(std::move(source_generators)),
      target_generators_(std::move(target_generators)) {
  if (source_generators_.size() != target_generators_.size())
    throw GroupError("source and target generator counts differ");
  for (const auto& g : source_generators_) require_orthogonal(g, n_, "source");
  for (const auto& g : target_generators_) require_orthogonal(g, p_, "target");

  elements_.push_back({Eigen::MatrixXd::Identity(n_, n_), Eigen::MatrixXd::Identity(p_, p_)});
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t current = frontier.front();
    frontier.pop_front();
    for (std::size_t k = 0; k < source_generators_.size(); ++k) {
      Element next{source_generators_[k] * elements_[current].source,
                   target_generators_[k] * elements_[current].target};
      bool found = false;
      for (const auto& e : elements_) {
        if (!close(e.source, next.source)) continue;
        if (!close(e.target, next.target))
          throw GroupError("source/target pairing is not a homomorphism");
        found = true;
        break;
      }
      if (found) continue;
      if (elements_.size() >= max_order) throw GroupError("group closure exceeds cap");
      elements_.push_back(std::move(next));
      frontier.push_back(elements_.size() - 1);
    }
  }
}

GroupAction GroupAction::trivial(std::size_t n, std::size_t p) { return GroupAction(n, p, {}, {}); }

bool GroupAction::is_weight_compatible(const WeightSystem& weights) const {
  if (weights.size() < n_) return false;
  for (const auto& g : source_generators_)
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(g(i, j)) > kZeroEntry && weights.weight(i) != weights.weight(j)) return false;
  return true;
}

void GroupAction::require_weight_compatible(const WeightSystem& weights) const {
  if (!is_weight_compatible(weights)) throw GroupError("weight-incompatible action");
}

Eigen::VectorXd GroupAction::act_on_point(const Element& g, std::span<const double> u) const {
  if (u.size() < n_) throw DimensionError("group action: point too short");
  Eigen::VectorXd out = Eigen::Map<const Eigen::VectorXd>(u.data(), u.size());
  out.head(n_) = g.source * out.head(n_);
  return out;
}

EquivarianceCheck check_equivariance(const MapGerm& germ, const GroupAction& action,
                                     std::size_t samples, std::uint64_t seed, double tol) {
  if (action.n() != germ.n() || action.p() != germ.p())
    throw DimensionError("group action does not match germ dimensions");
  EquivarianceCheck result;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, i);
    Eigen::VectorXd u(germ.num_vars());
    for (auto& c : u) c = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd fu = germ.evaluate(as_span(u));
    const double scale = 1.0 + germ.magnitude(as_span(u));
    for (std::size_t k = 0; k < action.elements().size(); ++k) {
      const auto& g = action.elements()[k];
      const Eigen::VectorXd gu = action.act_on_point(g, as_span(u));
      const double residual = (germ.evaluate(as_span(gu)) - g.target * fu).norm() / scale;
      if (residual > result.worst_residual) {
        result.worst_residual = residual;
        result.witness = u;
        result.element = k;
      }
    }
  }
  result.holds = result.worst_residual <= tol;
  return result;
}

bool sigma_is_invariant(const SigmaSet& sigma, const GroupAction& action) {
  if (sigma.n() != action.n()) throw DimensionError("sigma and group dimensions differ");
  const auto& subspaces = sigma.subspaces();
  for (const auto& g : action.elements()) {
    for (const auto& s : subspaces) {
      std::set<int> image;
      for (int j : s)
        for (std::size_t i = 0; i < action.n(); ++i)
          if (std::abs(g.source(i, j)) > kZeroEntry) image.insert(static_cast<int>(i));
      if (image.size() != s.size()) return false;
      const std::vector<int> as_vec(image.begin(), image.end());
      if (std::find(subspaces.begin(), subspaces.end(), as_vec) == subspaces.end()) return false;
    }
  }
  return true;
}

double haar_inner_product(const GroupAction& action, ActionSpace space, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& v) {
  if (action.elements().empty()) throw GroupError("group not enumerated");
  if (u.size() != v.size()) throw DimensionError("haar_inner_product: dimension mismatch");
  const std::size_t dim = space == ActionSpace::source ? action.n() : action.p();
  if (static_cast<std::size_t>(u.size()) < dim ||
      (space == ActionSpace::target && static_cast<std::size_t>(u.size()) != dim))
    throw DimensionError("haar_inner_product: vector does not live in the acted space");
  double sum = 0.0;
  for (const auto& g : action.elements()) {
    Eigen::VectorXd gu = u;
    Eigen::VectorXd gv = v;
    const auto& m = space == ActionSpace::source ? g.source : g.target;
    gu.head(dim) = m * u.head(dim);
    gv.head(dim) = m * v.head(dim);
    sum += gu.dot(gv);
  }
  return sum / static_cast<double>(action.elements().size());
}

}  // namespace germflow
