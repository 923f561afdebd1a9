#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace germflow {

class HomotopyProblem;
struct HomeomorphismReport;

// theta = P G^T / ||G||^2, zero when G = 0.
Eigen::MatrixXd contact_theta(const Eigen::VectorXd& g, const Eigen::VectorXd& p);

// (I + theta)^-1; throws NeighborhoodTooLargeError when ||theta|| >= 1.
Eigen::MatrixXd contact_tau(const Eigen::MatrixXd& theta);

struct ContactOptions {
  double beta = 0.125;              // inner horn width
  double residual_tol = 1e-6;
  double vanish_tol = 1e-7;         // ||P|| relative to the size of G on the inner horn
  double drift_tol = 1e-5;
  std::size_t decay_rays = 20;
};

struct ContactSample {
  double residual = 0.0;       // ||G(u) - tau G~(phi(u))||
  double theta_norm = 0.0;
  double drift_norm = 0.0;     // ||P(u)||
  double g_magnitude = 0.0;
  bool in_beta_horn = false;
  bool theta_vanishes = true;
  bool tau_defined = true;
};

struct ContactReport {
  std::vector<ContactSample> samples;
  double max_residual = 0.0;
  std::optional<std::size_t> worst_index;
  double max_theta_norm = 0.0;
  std::size_t beta_horn_samples = 0;
  std::size_t theta_zero_violations = 0;
  std::size_t tau_failures = 0;
  double max_drift_residual = 0.0;
  bool drift_ok = true;
  std::size_t decay_rays = 0;
  bool decay_ok = true;
  double residual_tol = 1e-6;

  bool passed() const {
    return max_residual <= residual_tol && theta_zero_violations == 0 && tau_failures == 0 &&
           drift_ok && decay_ok;
  }
};

// Contact identity G(u) = tau(u) G~(phi(u)) with G = f, G~ = f + p and
// P(u) = G~(phi(u)) - G(u). Also checks dF/ds = (1 - chi) p along the stored
// traces and the decay of d^-r P toward Sigma.
ContactReport verify_contact_identity(const HomotopyProblem& problem,
                                      const HomeomorphismReport& flows,
                                      const ContactOptions& options = {});

}  // namespace germflow
