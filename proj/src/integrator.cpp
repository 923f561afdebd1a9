#include "germflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace germflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;

}  // namespace

StepOutcome DormandPrince45::integrate(const Rhs& rhs, double t0, double t1, Eigen::VectorXd& y,
                                       const StepLimit& limit, const Observer& observer) const {
  if (t1 == t0) return StepOutcome::completed;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double habs = std::min(control_.initial_step, std::abs(t1 - t0));
  double err_prev = 1e-4;
  std::size_t steps = 0;
  Eigen::VectorXd k1 = rhs(t, y);
  const Eigen::Index dim = y.size();

  while (dir * (t1 - t) > 0.0) {
    if (steps >= control_.max_steps) return StepOutcome::max_steps;
    const double remaining = std::abs(t1 - t);
    if (limit) habs = std::min(habs, limit(t, y, k1));
    const bool last = habs >= remaining;
    if (last) habs = remaining;
    if (habs < control_.min_step && !last) return StepOutcome::step_underflow;
    const double h = dir * habs;

    const Eigen::VectorXd k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Eigen::VectorXd k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 =
        rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double t_new = last ? t1 : t + h;
    Eigen::VectorXd y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = rhs(t_new, y5);
    const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double errn = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double sc = control_.abs_tol + control_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      errn += (err[i] / sc) * (err[i] / sc);
    }
    errn = dim > 0 ? std::sqrt(errn / static_cast<double>(dim)) : 0.0;
    if (!std::isfinite(errn)) {
      habs *= kMinFactor;
      continue;
    }

    if (errn <= 1.0) {
      t = t_new;
      y = std::move(y5);
      k1 = k7;
      ++steps;
      if (observer && !observer(t, y, h)) return StepOutcome::stopped;
      double factor = errn == 0.0 ? kMaxFactor
                                  : kSafety * std::pow(errn, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      err_prev = std::max(errn, 1e-4);
      habs *= factor;
    } else {
      habs *= std::max(kMinFactor, kSafety * std::pow(errn, -kAlpha));
    }
  }
  return StepOutcome::completed;
}

}  // namespace germflow
