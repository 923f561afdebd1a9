#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace germflow {

struct StepControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double initial_step = 1e-3;
  double min_step = 1e-15;
  std::size_t max_steps = 2'000'000;
};

enum class StepOutcome { completed, step_underflow, stopped, max_steps };

// Dormand-Prince 5(4) with FSAL and PI step-size control, integrating
// y' = rhs(t, y) from t0 to t1 (either direction).
class DormandPrince45 {
 public:
  using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  // Upper bound on |h| at (t, y).
  using StepLimit = std::function<double(double, const Eigen::VectorXd&, const Eigen::VectorXd&)>;
  // Called after each accepted step; returning false stops the integration.
  using Observer = std::function<bool(double t, const Eigen::VectorXd& y, double h)>;

  explicit DormandPrince45(StepControl control = {}) : control_(control) {}

  StepOutcome integrate(const Rhs& rhs, double t0, double t1, Eigen::VectorXd& y,
                        const StepLimit& limit, const Observer& observer) const;

 private:
  StepControl control_;
};

}  // namespace germflow
