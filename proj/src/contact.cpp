#include "germflow/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "germflow/errors.hpp"
#include "germflow/flow.hpp"
#include "germflow/linalg.hpp"
#include "germflow/parallel.hpp"

namespace germflow {

namespace {

const double kDecayScales[] = {1.0, 0.3, 0.1, 0.03};

// Index of the subspace of Sigma nearest to x.
std::size_t nearest_subspace(const HomotopyProblem& problem, std::span<const double> u) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < problem.sigma().subspaces().size(); ++s) {
    const double d = weighted_distance_to_subspace(u.first(problem.n()), problem.sigma(), s, problem.weights());
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

}  // namespace

Eigen::MatrixXd contact_theta(const Eigen::VectorXd& g, const Eigen::VectorXd& p) {
  if (g.size() != p.size()) throw DimensionError("contact_theta: dimension mismatch");
  const double g2 = g.squaredNorm();
  if (g2 == 0.0) return Eigen::MatrixXd::Zero(g.size(), g.size());
  return p * g.transpose() / g2;
}

Eigen::MatrixXd contact_tau(const Eigen::MatrixXd& theta) {
  const double norm = operator_norm(theta);
  if (norm >= 1.0) throw NeighborhoodTooLargeError("theta has norm >= 1; shrink the neighborhood", norm);
  return (Eigen::MatrixXd::Identity(theta.rows(), theta.cols()) + theta).inverse();
}

ContactReport verify_contact_identity(const HomotopyProblem& problem, const HomeomorphismReport& flows,
                                      const ContactOptions& options) {
  ContactReport report;
  report.residual_tol = options.residual_tol;
  const double r = problem.horn().degree;
  const auto& samples = flows.samples;
  report.samples.resize(samples.size());

  std::vector<double> drift(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    auto& out = report.samples[i];
    const auto u = as_span(s.u);
    const Eigen::VectorXd g = problem.base().evaluate(u);
    const Eigen::VectorXd gt = problem.value(as_span(s.phi), 1.0);
    const Eigen::VectorXd pphi = gt - g;
    out.g_magnitude = problem.base().magnitude(u);
    out.drift_norm = pphi.norm();
    const Eigen::MatrixXd theta = contact_theta(g, pphi);
    out.theta_norm = operator_norm(theta);
    try {
      out.residual = (g - contact_tau(theta) * gt).norm();
    } catch (const NeighborhoodTooLargeError&) {
      out.tau_defined = false;
      out.residual = std::numeric_limits<double>::infinity();
    }
    const double d = problem.distance(u);
    out.in_beta_horn = s.u.norm() < problem.horn().radius && g.norm() <= options.beta * std::pow(d, r);
    out.theta_vanishes = out.drift_norm <= options.vanish_tol * out.g_magnitude;

    // dF/ds = (1 - chi) p at each stored state, with dF/ds taken as a fourth-order
    // central difference of F along the field direction.
    for (const auto& st : s.forward.states) {
      const auto us = as_span(st.u);
      const auto fs = extended_field(problem, us, st.t);
      const Eigen::VectorXd xdot = fs.field.head(problem.n());
      const double d = problem.distance(us);
      if (d == 0.0) continue;
      // The x-displacement of the stencil stays below 0.1 d.
      const double speed = xdot.norm();
      const double eps = speed > 0.0 ? std::min(0.1, 0.1 * d / speed) : 0.1;
      auto along = [&](double sigma) {
        Eigen::VectorXd v = st.u;
        v.head(problem.n()) += sigma * xdot;
        return problem.value(as_span(v), st.t + sigma);
      };
      const Eigen::VectorXd derivative =
          (along(-2.0 * eps) - 8.0 * along(-eps) + 8.0 * along(eps) - along(2.0 * eps)) / (12.0 * eps);
      const Eigen::VectorXd p = problem.perturbation().evaluate(us);
      const Eigen::VectorXd expected = (1.0 - fs.chi) * p;
      const double scale = problem.jacobian_x(us, st.t).norm() * xdot.norm() + p.norm();
      if (scale == 0.0) continue;
      drift[i] = std::max(drift[i], (derivative - expected).norm() / scale);
    }
  });

  for (std::size_t i = 0; i < report.samples.size(); ++i) {
    const auto& s = report.samples[i];
    if (!s.tau_defined) ++report.tau_failures;
    if (s.residual > report.max_residual || !report.worst_index) {
      report.max_residual = std::max(report.max_residual, s.residual);
      report.worst_index = i;
    }
    report.max_theta_norm = std::max(report.max_theta_norm, s.theta_norm);
    if (s.in_beta_horn) {
      ++report.beta_horn_samples;
      if (!s.theta_vanishes) ++report.theta_zero_violations;
    }
    report.max_drift_residual = std::max(report.max_drift_residual, drift[i]);
  }
  report.drift_ok = report.max_drift_residual <= options.drift_tol;

  // d^-r P along rays toward Sigma: the value at the smallest scale must sit
  // well below the largest value seen on the ray.
  std::vector<std::size_t> rays;
  for (std::size_t i = 0; i < samples.size() && rays.size() < options.decay_rays; ++i)
    if (samples[i].ok && problem.distance(as_span(samples[i].u)) > 0.0) rays.push_back(i);
  report.decay_rays = rays.size();
  std::vector<char> ray_ok(rays.size(), 1);
  parallel_for(rays.size(), [&](std::size_t k) {
    const Eigen::VectorXd& u = samples[rays[k]].u;
    const auto normal = problem.sigma().normal_coordinates(nearest_subspace(problem, as_span(u)));
    std::vector<double> values;
    for (double scale : kDecayScales) {
      Eigen::VectorXd us = u;
      for (int j : normal) us[j] *= std::pow(scale, problem.weights().weight(j));
      const FlowTrace tr = integrate_flow(problem, us, 0.0, 1.0);
      if (!tr.success()) {
        ray_ok[k] = 0;
        return;
      }
      const Eigen::VectorXd g = problem.base().evaluate(as_span(us));
      const Eigen::VectorXd pphi = problem.value(as_span(tr.final_point()), 1.0) - g;
      const bool vanishes = pphi.norm() <= options.vanish_tol * problem.base().magnitude(as_span(us));
      values.push_back(vanishes ? 0.0 : pphi.norm() / std::pow(problem.distance(as_span(us)), r));
    }
    const double peak = *std::max_element(values.begin(), values.end());
    ray_ok[k] = values.back() <= 0.1 * peak ? 1 : 0;
  });
  report.decay_ok = std::all_of(ray_ok.begin(), ray_ok.end(), [](char c) { return c != 0; });
  return report;
}

}  // namespace germflow
