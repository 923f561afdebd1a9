#include "germflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "germflow/errors.hpp"
#include "germflow/integrator.hpp"
#include "germflow/linalg.hpp"
#include "germflow/parallel.hpp"
#include "germflow/random.hpp"

namespace germflow {

namespace {
constexpr double kDegenerateTol = 1e-14;
constexpr std::size_t kEquivarianceSamples = 64;
}  // namespace

HomotopyProblem::HomotopyProblem(MapGerm base, MapGerm perturbation, WeightSystem weights,
                                 SigmaSet sigma, HornSpec horn, GroupAction group,
                                 std::optional<Frame> frame)
    : base_(std::move(base)),
      pert_(std::move(perturbation)),
      weights_(std::move(weights)),
      sigma_(std::move(sigma)),
      horn_(horn),
      group_(std::move(group)) {
  if (!base_.same_shape(pert_)) throw DimensionError("base and perturbation shapes differ");
  if (weights_.size() != base_.num_vars()) throw DimensionError("weight count does not match germ");
  if (sigma_.n() != base_.n()) throw DimensionError("sigma dimension does not match germ");
  if (!(horn_.degree > 0.0 && horn_.width > 0.0 && horn_.radius > 0.0))
    throw InvalidProblemError("horn parameters must be positive");
  if (group_.elements().empty()) group_ = GroupAction::trivial(base_.n(), base_.p());
  if (group_.n() != base_.n() || group_.p() != base_.p())
    throw DimensionError("group action does not match germ dimensions");
  group_.require_weight_compatible(weights_);
  if (!group_.is_trivial()) {
    if (!check_equivariance(base_, group_, kEquivarianceSamples).holds)
      throw InvalidProblemError("base germ is not equivariant");
    if (!check_equivariance(pert_, group_, kEquivarianceSamples, 43).holds)
      throw InvalidProblemError("perturbation is not equivariant");
    if (!sigma_is_invariant(sigma_, group_)) throw InvalidProblemError("sigma is not group invariant");
  }
  frame_ = frame.value_or(natural_frame(weights_));
}

Eigen::VectorXd HomotopyProblem::value(std::span<const double> u, double t) const {
  return base_.evaluate(u) + t * pert_.evaluate(u);
}

Eigen::MatrixXd HomotopyProblem::jacobian_x(std::span<const double> u, double t) const {
  return base_.jacobian_x(u) + t * pert_.jacobian_x(u);
}

double HomotopyProblem::value_magnitude(std::span<const double> u, double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < p(); ++i) {
    const double m = base_.component(i).magnitude(u) + std::abs(t) * pert_.component(i).magnitude(u);
    sum += m * m;
  }
  return std::sqrt(sum);
}

double HomotopyProblem::distance(std::span<const double> u) const {
  return weighted_distance(u.first(n()), sigma_, weights_);
}

double mollifier_beta(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  auto a = [](double t) { return t > 0.0 ? std::exp(-1.0 / (t * t)) : 0.0; };
  const double num = a(1.0 - s);
  const double den = num + a(s - 0.5);
  return den > 0.0 ? num / den : (s < 0.75 ? 1.0 : 0.0);
}

double bump_chi(const HomotopyProblem& problem, std::span<const double> u) {
  const double fnorm = problem.base().evaluate(u).norm();
  if (fnorm == 0.0) return 1.0;
  const double d = problem.distance(u);
  if (d == 0.0) return 0.0;
  return mollifier_beta(fnorm / (problem.horn().width * std::pow(d, problem.horn().degree)));
}

std::optional<Eigen::VectorXd> kuo_vector_field(const HomotopyProblem& problem,
                                                std::span<const double> u, double t) {
  const std::size_t n = problem.n();
  const std::size_t m = n + problem.l();
  Eigen::VectorXd field = Eigen::VectorXd::Zero(m + 1);
  field[m] = 1.0;
  if (problem.distance(u) == 0.0) return field;

  const Eigen::VectorXd factors = frame_factors(problem.weights(), problem.frame(), n, u);
  const Eigen::MatrixXd d = problem.jacobian_x(u, t) * factors.asDiagonal();
  const Eigen::MatrixXd gram = d * d.transpose();
  const double scale = gram.diagonal().prod();
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (!(scale > 0.0) || llt.info() != Eigen::Success) return std::nullopt;
  const double det = std::pow(llt.matrixL().toDenseMatrix().diagonal().prod(), 2);
  if (!(det > kDegenerateTol * scale)) return std::nullopt;
  const Eigen::VectorXd coeffs = -d.transpose() * llt.solve(problem.perturbation().evaluate(u));
  field.head(n) = factors.cwiseProduct(coeffs);
  return field;
}

FieldSample extended_field(const HomotopyProblem& problem, std::span<const double> u, double t) {
  const std::size_t m = problem.n() + problem.l();
  FieldSample out;
  out.field = Eigen::VectorXd::Zero(m + 1);
  out.field[m] = 1.0;
  out.chi = bump_chi(problem, u);
  if (out.chi == 0.0) return out;
  const auto x1 = kuo_vector_field(problem, u, t);
  if (!x1) {
    out.degenerate_on_support = true;
    return out;
  }
  out.field.head(problem.n()) = out.chi * x1->head(problem.n());
  return out;
}

double field_metric_norm(const HomotopyProblem& problem, std::span<const double> u,
                         const Eigen::VectorXd& field) {
  const std::size_t n = problem.n();
  if (problem.frame() == Frame::euclidean) return field.head(n).norm();
  const Eigen::VectorXd factors = frame_factors(problem.weights(), problem.frame(), n, u);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (field[j] == 0.0) continue;
    if (factors[j] == 0.0) return std::numeric_limits<double>::infinity();
    const double c = field[j] / factors[j];
    sum += c * c;
  }
  return std::sqrt(sum);
}

double orthogonality_residual(const HomotopyProblem& problem, std::span<const double> u, double t,
                              const Eigen::VectorXd& field) {
  const std::size_t n = problem.n();
  const std::size_t m = n + problem.l();
  const Eigen::VectorXd df = problem.jacobian_x(u, t) * field.head(n) +
                             field[m] * problem.perturbation().evaluate(u);
  return df.cwiseAbs().maxCoeff();
}

FieldBound field_bound_sweep(const HomotopyProblem& problem, std::size_t n, std::uint64_t seed) {
  const auto set = sample_horn(problem.base(), problem.horn(), problem.sigma(), problem.weights(), n, seed);
  FieldBound out;
  out.samples = set.samples.size();
  std::vector<double> ratio(set.samples.size());
  std::vector<double> times(set.samples.size());
  parallel_for(set.samples.size(), [&](std::size_t i) {
    CounterRng rng(seed ^ 0x5EEDF1E1DULL, i);
    times[i] = rng.uniform();
    const auto u = as_span(set.samples[i].point);
    const auto fs = extended_field(problem, u, times[i]);
    ratio[i] = fs.degenerate_on_support ? std::numeric_limits<double>::infinity()
                                        : field_metric_norm(problem, u, fs.field) / set.samples[i].distance;
  });
  out.finite = true;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (!std::isfinite(ratio[i])) out.finite = false;
    if (ratio[i] > out.sup || out.witness.size() == 0) {
      out.sup = std::max(out.sup, ratio[i]);
      out.witness = set.samples[i].point;
      out.witness_t = times[i];
    }
  }
  return out;
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::completed:
      return "completed";
    case Termination::stiffness_near_sigma:
      return "stiffness near Σ";
    case Termination::left_chart:
      return "left chart";
    case Termination::max_steps:
      break;
  }
  return "step limit";
}

double FlowTrace::relative_drift() const {
  double drift = 0.0;
  double scale = 0.0;
  for (const auto& s : states) {
    drift = std::max(drift, s.drift);
    scale = std::max(scale, s.magnitude);
  }
  return scale > 0.0 ? drift / scale : drift;
}

double FlowTrace::max_abs_drift() const {
  double drift = 0.0;
  for (const auto& s : states) drift = std::max(drift, s.drift);
  return drift;
}

FlowTrace integrate_flow(const HomotopyProblem& problem, const Eigen::VectorXd& u0, double t0,
                         double t1, const FlowTolerances& tol) {
  const std::size_t n = problem.n();
  const std::size_t m = n + problem.l();
  if (static_cast<std::size_t>(u0.size()) != m) throw DimensionError("integrate_flow: dimension mismatch");
  FlowTrace trace;
  trace.initial = u0;
  trace.t0 = t0;
  trace.t1 = t1;
  const Eigen::VectorXd lambda = u0.tail(problem.l());
  const Eigen::VectorXd f0 = problem.value(as_span(u0), t0);

  auto record = [&](double t, const Eigen::VectorXd& u, double h) {
    FlowState st;
    st.s = t - t0;
    st.t = t;
    st.u = u;
    st.distance = problem.distance(as_span(u));
    st.drift = (problem.value(as_span(u), t) - f0).norm();
    st.magnitude = problem.value_magnitude(as_span(u), t);
    const auto fs = extended_field(problem, as_span(u), t);
    st.chi = fs.chi;
    st.orth_residual = orthogonality_residual(problem, as_span(u), t, fs.field);
    st.step = h;
    trace.states.push_back(std::move(st));
  };

  record(t0, u0, 0.0);
  if (u0.norm() >= problem.horn().radius) {
    trace.reason = Termination::left_chart;
    return trace;
  }
  if (problem.distance(as_span(u0)) == 0.0) {
    if (t1 != t0) record(t1, u0, t1 - t0);
    return trace;
  }

  Eigen::VectorXd u = u0;
  auto assemble = [&](const Eigen::VectorXd& x) {
    u.head(n) = x;
    u.tail(problem.l()) = lambda;
    return u;
  };
  const auto rhs = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd point = x;
    point.conservativeResize(static_cast<Eigen::Index>(m));
    point.tail(problem.l()) = lambda;
    return extended_field(problem, as_span(point), t).field.head(n);
  };
  const auto limit = [&](double, const Eigen::VectorXd& x, const Eigen::VectorXd& xdot) {
    const double d = problem.distance(as_span(assemble(x)));
    return tol.eta * d / (1.0 + std::sqrt(xdot.squaredNorm() + 1.0));
  };
  bool left = false;
  const auto observer = [&](double t, const Eigen::VectorXd& x, double h) {
    const Eigen::VectorXd& point = assemble(x);
    record(t, point, h);
    if (point.norm() >= problem.horn().radius) {
      left = true;
      return false;
    }
    return true;
  };

  StepControl control;
  control.abs_tol = tol.abs_tol;
  control.rel_tol = tol.rel_tol;
  control.min_step = tol.min_step;
  control.max_steps = tol.max_steps;
  control.initial_step = std::min(1e-2, std::abs(t1 - t0));
  Eigen::VectorXd x = u0.head(n);
  const StepOutcome outcome = DormandPrince45(control).integrate(rhs, t0, t1, x, limit, observer);
  switch (outcome) {
    case StepOutcome::completed:
      trace.reason = Termination::completed;
      break;
    case StepOutcome::step_underflow:
      trace.reason = Termination::stiffness_near_sigma;
      break;
    case StepOutcome::stopped:
      trace.reason = left ? Termination::left_chart : Termination::max_steps;
      break;
    case StepOutcome::max_steps:
      trace.reason = Termination::max_steps;
      break;
  }
  return trace;
}

EnvelopeCheck distance_monitor(const FlowTrace& trace, double cl, double slack) {
  EnvelopeCheck out;
  if (trace.states.empty()) return out;
  const double d0 = trace.states.front().distance;
  for (std::size_t k = 0; k < trace.states.size(); ++k) {
    const double s = std::abs(trace.states[k].s);
    const double d = trace.states[k].distance;
    double violation = 0.0;
    if (d0 == 0.0) {
      violation = d;
    } else {
      const double lo = d0 * std::exp(-cl * s) * (1.0 - slack);
      const double hi = d0 * std::exp(cl * s) * (1.0 + slack);
      violation = std::max({0.0, (lo - d) / lo, (d - hi) / hi});
    }
    if (violation > out.max_violation) {
      out.max_violation = violation;
      out.index = k;
    }
  }
  out.holds = out.max_violation == 0.0;
  return out;
}

HomeomorphismReport build_homeomorphism(const HomotopyProblem& problem,
                                        const std::vector<Eigen::VectorXd>& samples,
                                        double round_trip_tol, const FlowTolerances& tol) {
  HomeomorphismReport report;
  report.round_trip_tol = round_trip_tol;
  report.samples.resize(samples.size());
  const std::size_t l = problem.l();
  const auto& elements = problem.group().elements();
  std::vector<double> equivariance(samples.size(), 0.0);

  parallel_for(samples.size(), [&](std::size_t i) {
    auto& out = report.samples[i];
    out.u = samples[i];
    out.forward = integrate_flow(problem, samples[i], 0.0, 1.0, tol);
    out.phi = out.forward.final_point();
    if (!out.forward.success()) {
      out.failure = to_string(out.forward.reason);
      return;
    }
    const FlowTrace back = integrate_flow(problem, out.phi, 1.0, 0.0, tol);
    if (!back.success()) {
      out.failure = std::string("inverse flow: ") + to_string(back.reason);
      return;
    }
    out.round_trip_error = (back.final_point() - samples[i]).norm();
    out.ok = out.round_trip_error <= round_trip_tol * (1.0 + samples[i].norm());
    if (!out.ok) out.failure = "round trip";
    for (std::size_t k = 1; k < elements.size(); ++k) {
      const Eigen::VectorXd gu = problem.group().act_on_point(elements[k], as_span(samples[i]));
      const FlowTrace image = integrate_flow(problem, gu, 0.0, 1.0, tol);
      const Eigen::VectorXd gphi = problem.group().act_on_point(elements[k], as_span(out.phi));
      const double r = image.success() ? (image.final_point() - gphi).norm() / (1.0 + samples[i].norm())
                                       : std::numeric_limits<double>::infinity();
      equivariance[i] = std::max(equivariance[i], r);
    }
  });

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = report.samples[i];
    if (!s.ok) ++report.failures;
    report.max_round_trip = std::max(report.max_round_trip, s.round_trip_error);
    if (s.phi.tail(l) != s.u.tail(l)) report.lambda_preserved = false;
    if (problem.distance(as_span(s.u)) == 0.0 && s.phi != s.u) report.sigma_fixed = false;
    report.equivariance_residual = std::max(report.equivariance_residual, equivariance[i]);
  }
  report.equivariant = report.equivariance_residual <= round_trip_tol;
  return report;
}

std::vector<Eigen::VectorXd> zero_set_seeds(const MapGerm& germ, const SigmaSet& sigma,
                                            const WeightSystem& weights, double radius,
                                            std::size_t n, std::uint64_t seed) {
  const std::size_t m = germ.num_vars();
  const double min_gap = 1e-3 * radius;
  auto solve = [&](std::size_t i) -> std::optional<Eigen::VectorXd> {
    CounterRng rng(seed, i);
    Eigen::VectorXd u(m);
    for (auto& c : u) c = rng.normal();
    const double norm = u.norm();
    if (norm == 0.0) return std::nullopt;
    u *= radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(m)) / norm;
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd f = germ.evaluate(as_span(u));
      if (f.norm() <= 1e-14 * germ.magnitude(as_span(u))) {
        if (u.norm() >= radius) return std::nullopt;
        if (weighted_distance(as_span(u).first(germ.n()), sigma, weights) < min_gap) return std::nullopt;
        return u;
      }
      try {
        const Eigen::MatrixXd pinv = pseudo_inverse(germ.jacobian_x(as_span(u))).matrix;
        u.head(germ.n()) -= pinv * f;
      } catch (const RankDeficientError&) {
        return std::nullopt;
      }
      if (!u.allFinite() || u.norm() >= 2.0 * radius) return std::nullopt;
    }
    return std::nullopt;
  };
  const auto rs = rejection_sample(n, n * 100, 1024, [&](std::size_t i) { return solve(i).has_value(); });
  std::vector<Eigen::VectorXd> seeds;
  for (std::size_t i : rs.accepted_indices) seeds.push_back(*solve(i));
  return seeds;
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << values[i];
  }
  out << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, std::size_t num_vars, const std::vector<FlowTrace>& traces) {
  const auto old_precision = out.precision(17);
  out << "trace,s,t";
  for (std::size_t i = 1; i <= num_vars; ++i) out << ",u" << i;
  out << ",d_omega,F_drift,chi,orth_residual,step\n";
  for (std::size_t k = 0; k < traces.size(); ++k)
    for (const auto& st : traces[k].states) {
      std::vector<double> row{static_cast<double>(k), st.s, st.t};
      for (Eigen::Index i = 0; i < st.u.size(); ++i) row.push_back(st.u[i]);
      row.insert(row.end(), {st.distance, st.drift, st.chi, st.orth_residual, st.step});
      write_row(out, row);
    }
  out.precision(old_precision);
}

void emit_plot_data(std::ostream& out, const HomotopyProblem& problem,
                    const HomeomorphismReport& report) {
  const std::size_t m = problem.n() + problem.l();
  const auto old_precision = out.precision(17);
  out << "index";
  for (std::size_t i = 1; i <= m; ++i) out << ",u" << i;
  for (std::size_t i = 1; i <= m; ++i) out << ",phi" << i;
  out << ",G_residual,Gt_residual,ok\n";
  for (std::size_t k = 0; k < report.samples.size(); ++k) {
    const auto& s = report.samples[k];
    std::vector<double> row{static_cast<double>(k)};
    for (Eigen::Index i = 0; i < s.u.size(); ++i) row.push_back(s.u[i]);
    for (Eigen::Index i = 0; i < s.phi.size(); ++i) row.push_back(s.phi[i]);
    row.push_back(problem.value(as_span(s.u), 0.0).norm());
    row.push_back(problem.value(as_span(s.phi), 1.0).norm());
    row.push_back(s.ok ? 1.0 : 0.0);
    write_row(out, row);
  }
  out.precision(old_precision);
}

}  // namespace germflow
