#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "germflow/germ.hpp"
#include "germflow/group.hpp"
#include "germflow/horn.hpp"
#include "germflow/kuo.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"

namespace germflow {

// The homotopy F(u, t) = f(u) + t p(u) together with the geometry its flow
// lives in. Construction validates shapes, weight compatibility of the group,
// equivariance of f and p, and invariance of Sigma.
class HomotopyProblem {
 public:
  HomotopyProblem(MapGerm base, MapGerm perturbation, WeightSystem weights, SigmaSet sigma,
                  HornSpec horn, GroupAction group = {}, std::optional<Frame> frame = {});

  const MapGerm& base() const { return base_; }
  const MapGerm& perturbation() const { return pert_; }
  const WeightSystem& weights() const { return weights_; }
  const SigmaSet& sigma() const { return sigma_; }
  const HornSpec& horn() const { return horn_; }
  const GroupAction& group() const { return group_; }
  Frame frame() const { return frame_; }
  std::size_t n() const { return base_.n(); }
  std::size_t l() const { return base_.l(); }
  std::size_t p() const { return base_.p(); }

  Eigen::VectorXd value(std::span<const double> u, double t) const;
  Eigen::MatrixXd jacobian_x(std::span<const double> u, double t) const;
  double value_magnitude(std::span<const double> u, double t) const;
  double distance(std::span<const double> u) const;

 private:
  MapGerm base_;
  MapGerm pert_;
  WeightSystem weights_;
  SigmaSet sigma_;
  HornSpec horn_;
  GroupAction group_;
  Frame frame_;
};

// beta(s) = a(1 - s) / (a(1 - s) + a(s - 1/2)) with a(t) = exp(-1/t^2) for t > 0.
double mollifier_beta(double s);

// chi(u) = beta(||f(u)|| / (width * d_w^r)); 1 on the half-width horn, 0 off the horn.
double bump_chi(const HomotopyProblem& problem, std::span<const double> u);

// Components (x-velocity, 0 on lambda, 1 on t) of the field tangent to the
// level sets of F. Empty when the frame Gram matrix is degenerate. Points of
// Sigma x R^l get d/dt.
std::optional<Eigen::VectorXd> kuo_vector_field(const HomotopyProblem& problem,
                                                std::span<const double> u, double t);

struct FieldSample {
  Eigen::VectorXd field;  // n + l + 1 entries
  double chi = 0.0;
  bool degenerate_on_support = false;
};

// chi X_1 + (1 - chi) d/dt.
FieldSample extended_field(const HomotopyProblem& problem, std::span<const double> u, double t);

// ||X - d/dt|| measured in the frame of the problem.
double field_metric_norm(const HomotopyProblem& problem, std::span<const double> u,
                         const Eigen::VectorXd& field);

// max_j |dF_j(X)|.
double orthogonality_residual(const HomotopyProblem& problem, std::span<const double> u, double t,
                              const Eigen::VectorXd& field);

struct FieldBound {
  double sup = 0.0;  // sup ||X - d/dt|| / d_w over the samples
  Eigen::VectorXd witness;
  double witness_t = 0.0;
  std::size_t samples = 0;
  bool finite = false;
};

// Sweep over horn samples of f (the support of chi) with t uniform in [0, 1].
FieldBound field_bound_sweep(const HomotopyProblem& problem, std::size_t n, std::uint64_t seed);

struct FlowTolerances {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double eta = 0.1;  // |h| <= eta * d_w / (1 + ||X||)
  double min_step = 1e-15;
  std::size_t max_steps = 2'000'000;
};

enum class Termination { completed, stiffness_near_sigma, left_chart, max_steps };
const char* to_string(Termination reason);

struct FlowState {
  double s = 0.0;
  double t = 0.0;
  Eigen::VectorXd u;
  double distance = 0.0;
  double drift = 0.0;  // ||F(u(s), t(s)) - F(u(0), t0)||
  double chi = 0.0;
  double orth_residual = 0.0;
  double step = 0.0;
  double magnitude = 0.0;  // pre-cancellation size of F(u(s), t(s)); not exported
};

struct FlowTrace {
  Eigen::VectorXd initial;
  double t0 = 0.0;
  double t1 = 1.0;
  std::vector<FlowState> states;
  Termination reason = Termination::completed;

  bool success() const { return reason == Termination::completed; }
  const Eigen::VectorXd& final_point() const { return states.back().u; }
  // Largest drift divided by the pre-cancellation size of F along the trace.
  double relative_drift() const;
  double max_abs_drift() const;
};

// Integrates the extended field from (u0, t0) to t1. Lambda and points of
// Sigma x R^l are never moved.
FlowTrace integrate_flow(const HomotopyProblem& problem, const Eigen::VectorXd& u0, double t0,
                         double t1, const FlowTolerances& tol = {});

struct EnvelopeCheck {
  bool holds = true;
  double max_violation = 0.0;  // worst relative excursion outside the band
  std::optional<std::size_t> index;
};

// d0 e^(-CL|s|) (1 - slack) <= d(s) <= d0 e^(CL|s|) (1 + slack).
EnvelopeCheck distance_monitor(const FlowTrace& trace, double cl, double slack = 0.05);

struct HomeomorphismSample {
  Eigen::VectorXd u;
  Eigen::VectorXd phi;
  double round_trip_error = 0.0;
  bool ok = false;
  std::string failure;
  FlowTrace forward;
};

struct HomeomorphismReport {
  std::vector<HomeomorphismSample> samples;
  std::size_t failures = 0;
  double max_round_trip = 0.0;
  bool sigma_fixed = true;
  bool lambda_preserved = true;
  double equivariance_residual = 0.0;
  bool equivariant = true;
  double round_trip_tol = 1e-7;

  bool passed() const { return failures == 0 && sigma_fixed && lambda_preserved && equivariant; }
};

// phi(u) = flow from t = 0 to t = 1; each sample is flowed back to measure the
// round trip |phi^-1(phi(u)) - u| against tol * (1 + ||u||).
HomeomorphismReport build_homeomorphism(const HomotopyProblem& problem,
                                        const std::vector<Eigen::VectorXd>& samples,
                                        double round_trip_tol = 1e-7,
                                        const FlowTolerances& tol = {});

// Points of f^-1(0) inside the ball found by Gauss-Newton in x at fixed lambda
// from uniform starting points. Seeds closer than 1e-3 * radius to Sigma are
// rejected; points of Sigma x R^l are fixed by construction.
std::vector<Eigen::VectorXd> zero_set_seeds(const MapGerm& germ, const SigmaSet& sigma,
                                            const WeightSystem& weights, double radius,
                                            std::size_t n, std::uint64_t seed);

// One row per stored state, led by the trace index.
void write_trace_csv(std::ostream& out, std::size_t num_vars, const std::vector<FlowTrace>& traces);

// Zero-set overlay: seeds on f^-1(0), their images under phi and the residuals
// of f and f + p, one row per seed in index order.
void emit_plot_data(std::ostream& out, const HomotopyProblem& problem,
                    const HomeomorphismReport& report);

}  // namespace germflow
