#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace germflow::detail {

struct MinimizeResult {
  Eigen::VectorXd x;
  double value = 0.0;
  std::size_t iterations = 0;
};

// Nelder-Mead simplex search (GSL nmsimplex2) from x0 with initial step sizes `step`.
MinimizeResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                           const Eigen::VectorXd& x0, double step, std::size_t max_iterations,
                           double size_tol = 1e-14);

}  // namespace germflow::detail
