#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace germflow {

class MapGerm;
class SigmaSet;
class WeightSystem;

// Finite group acting orthogonally on the source x-space and the target,
// enumerated as (source, target) pairs from generator pairs. Parameters are
// never acted on.
class GroupAction {
 public:
  struct Element {
    Eigen::MatrixXd source;
    Eigen::MatrixXd target;
  };

  GroupAction() = default;
  GroupAction(std::size_t n, std::size_t p, std::vector<Eigen::MatrixXd> source_generators,
              std::vector<Eigen::MatrixXd> target_generators, std::size_t max_order = 1024);
  static GroupAction trivial(std::size_t n, std::size_t p);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  std::size_t order() const { return elements_.size(); }
  bool is_trivial() const { return elements_.size() <= 1; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Eigen::MatrixXd>& source_generators() const { return source_generators_; }
  const std::vector<Eigen::MatrixXd>& target_generators() const { return target_generators_; }

  // Source generators may only mix coordinates of equal weight.
  bool is_weight_compatible(const WeightSystem& weights) const;
  void require_weight_compatible(const WeightSystem& weights) const;

  // (gamma x, lambda) for a point u of R^n x R^l.
  Eigen::VectorXd act_on_point(const Element& g, std::span<const double> u) const;

 private:
  std::size_t n_ = 0;
  std::size_t p_ = 0;
  std::vector<Eigen::MatrixXd> source_generators_;
  std::vector<Eigen::MatrixXd> target_generators_;
  std::vector<Element> elements_;
};

struct EquivarianceCheck {
  bool holds = true;
  double worst_residual = 0.0;
  Eigen::VectorXd witness;
  std::size_t element = 0;
};

// Checks f(gamma x, lambda) = gamma f(x, lambda) on random points of [-1, 1]^(n+l).
EquivarianceCheck check_equivariance(const MapGerm& germ, const GroupAction& action,
                                     std::size_t samples, std::uint64_t seed = 42,
                                     double tol = 1e-9);

bool sigma_is_invariant(const SigmaSet& sigma, const GroupAction& action);

enum class ActionSpace { source, target };

// Group-averaged inner product |G|^-1 sum <g u, g v>.
double haar_inner_product(const GroupAction& action, ActionSpace space,
                          const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace germflow
