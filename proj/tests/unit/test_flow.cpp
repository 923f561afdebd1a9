#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "germflow/contact.hpp"
#include "germflow/errors.hpp"
#include "germflow/flow.hpp"
#include "germflow/integrator.hpp"
#include "support/generators.hpp"

namespace germflow {
namespace {

using testing::for_all_cases;

Polynomial mono(double c, int ex, int el) { return Polynomial(2, {Monomial{{ex, el}, c}}); }
MapGerm pitchfork() { return MapGerm(1, 1, {mono(1, 3, 0) + mono(-1, 1, 1)}); }
GroupAction reflection() {
  return GroupAction(1, 1, {Eigen::MatrixXd::Constant(1, 1, -1.0)},
                     {Eigen::MatrixXd::Constant(1, 1, -1.0)});
}
const HornSpec kHorn{3, 0.5, 0.5};

HomotopyProblem quintic_problem() {
  return HomotopyProblem(pitchfork(), MapGerm(1, 1, {mono(1, 5, 0)}), WeightSystem::unit(2),
                         SigmaSet::origin(1), kHorn, reflection());
}

DormandPrince45::StepLimit no_limit() {
  return [](double, const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1e300; };
}

TEST(Integrator, ExponentialGrowth) {
  Eigen::VectorXd y = Eigen::VectorXd::Ones(1);
  const auto outcome = DormandPrince45().integrate(
      [](double, const Eigen::VectorXd& v) { return v; }, 0.0, 1.0, y, no_limit(),
      [](double, const Eigen::VectorXd&, double) { return true; });
  EXPECT_EQ(outcome, StepOutcome::completed);
  EXPECT_NEAR(y[0], std::exp(1.0), 1e-7);
}

TEST(Integrator, BackwardIntegrationReturnsToStart) {
  auto rhs = [](double t, const Eigen::VectorXd& v) {
    return Eigen::VectorXd((Eigen::VectorXd(2) << v[1], -v[0] + std::sin(t)).finished());
  };
  auto keep = [](double, const Eigen::VectorXd&, double) { return true; };
  Eigen::VectorXd y = (Eigen::VectorXd(2) << 1.0, 0.0).finished();
  const Eigen::VectorXd y0 = y;
  StepControl tight;
  tight.abs_tol = 1e-12;
  tight.rel_tol = 1e-12;
  DormandPrince45 dp(tight);
  ASSERT_EQ(dp.integrate(rhs, 0.0, 2.0, y, no_limit(), keep), StepOutcome::completed);
  ASSERT_EQ(dp.integrate(rhs, 2.0, 0.0, y, no_limit(), keep), StepOutcome::completed);
  EXPECT_LE((y - y0).norm(), 1e-9);
}

TEST(Integrator, StepLimitIsRespected) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(1);
  double largest = 0.0;
  DormandPrince45().integrate(
      [](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Ones(1); }, 0.0, 1.0, y,
      [](double, const Eigen::VectorXd&, const Eigen::VectorXd&) { return 0.01; },
      [&](double, const Eigen::VectorXd&, double h) {
        largest = std::max(largest, std::abs(h));
        return true;
      });
  EXPECT_LE(largest, 0.01 + 1e-15);
  EXPECT_NEAR(y[0], 1.0, 1e-12);
}

TEST(Integrator, UnderflowAndStop) {
  Eigen::VectorXd y = Eigen::VectorXd::Ones(1);
  auto rhs = [](double, const Eigen::VectorXd& v) { return v; };
  auto keep = [](double, const Eigen::VectorXd&, double) { return true; };
  EXPECT_EQ(DormandPrince45().integrate(
                rhs, 0.0, 1.0, y,
                [](double, const Eigen::VectorXd&, const Eigen::VectorXd&) { return 1e-20; }, keep),
            StepOutcome::step_underflow);
  y = Eigen::VectorXd::Ones(1);
  EXPECT_EQ(DormandPrince45().integrate(rhs, 0.0, 1.0, y, no_limit(),
                                        [](double, const Eigen::VectorXd&, double) { return false; }),
            StepOutcome::stopped);
}

TEST(Mollifier, PlateauCutoffAndSymmetry) {
  EXPECT_EQ(mollifier_beta(0.0), 1.0);
  EXPECT_EQ(mollifier_beta(0.5), 1.0);
  EXPECT_EQ(mollifier_beta(1.0), 0.0);
  EXPECT_EQ(mollifier_beta(3.0), 0.0);
  EXPECT_NEAR(mollifier_beta(0.75), 0.5, 1e-15);
  double prev = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double v = mollifier_beta(0.5 + 0.5 * k / 1000.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
}

TEST(HomotopyProblem, ValidatesInputs) {
  EXPECT_THROW(HomotopyProblem(pitchfork(), MapGerm(1, 1, {mono(1, 4, 0)}), WeightSystem::unit(2),
                               SigmaSet::origin(1), kHorn, reflection()),
               InvalidProblemError);
  EXPECT_THROW(HomotopyProblem(pitchfork(), MapGerm::zero(1, 1, 2), WeightSystem::unit(2),
                               SigmaSet::origin(1), kHorn),
               DimensionError);
}

TEST(BumpProperty, SandwichBetweenHorns) {
  const HomotopyProblem problem = quintic_problem();
  std::size_t inner = 0;
  std::size_t outer = 0;
  for_all_cases(10000, 61, [&](std::size_t i, CounterRng& rng) {
    const Eigen::VectorXd u = testing::random_point(2, rng, 0.35);
    const double d = problem.distance(as_span(u));
    const double ratio = std::abs(pitchfork().evaluate(as_span(u))[0]) / std::pow(d, 3);
    const double chi = bump_chi(problem, as_span(u));
    if (ratio <= 0.25) {
      ++inner;
      EXPECT_EQ(chi, 1.0) << "case " << i;
    } else if (ratio >= 0.5) {
      ++outer;
      EXPECT_EQ(chi, 0.0) << "case " << i;
    }
  });
  EXPECT_GT(inner, 0u);
  EXPECT_GT(outer, 0u);
}

TEST(FieldProperty, TangentToLevelSetsInsideTheInnerHorn) {
  const HomotopyProblem problem = quintic_problem();
  const HornSampleSet samples =
      sample_horn(pitchfork(), HornSpec{3, 0.25, 0.5}, SigmaSet::origin(1), WeightSystem::unit(2), 300, 3);
  for (std::size_t i = 0; i < samples.samples.size(); ++i) {
    const Eigen::VectorXd& u = samples.samples[i].point;
    const double t = (i % 10) / 10.0;
    const auto field = kuo_vector_field(problem, as_span(u), t);
    ASSERT_TRUE(field.has_value());
    EXPECT_EQ((*field)[1], 0.0);
    EXPECT_EQ((*field)[2], 1.0);
    const double scale = problem.value_magnitude(as_span(u), t) + problem.perturbation().magnitude(as_span(u));
    EXPECT_LE(orthogonality_residual(problem, as_span(u), t, *field), 1e-12 * (1 + scale)) << i;
  }
}

TEST(Field, OnSigmaItIsTheTimeDirection) {
  const HomotopyProblem problem = quintic_problem();
  const std::vector<double> u{0.0, 0.3};
  const auto field = kuo_vector_field(problem, u, 0.5);
  ASSERT_TRUE(field.has_value());
  EXPECT_EQ(*field, (Eigen::Vector3d(0, 0, 1)));
}

TEST(Field, BoundIsFinite) {
  const FieldBound bound = field_bound_sweep(quintic_problem(), 2000, 42);
  EXPECT_TRUE(bound.finite);
  EXPECT_GT(bound.sup, 0.0);
  EXPECT_LT(bound.sup, 10.0);
}

TEST(Flow, ZeroPerturbationIsTheIdentity) {
  const HomotopyProblem problem(pitchfork(), MapGerm::zero(1, 1, 1), WeightSystem::unit(2),
                                SigmaSet::origin(1), kHorn, reflection());
  const auto seeds = zero_set_seeds(pitchfork(), SigmaSet::origin(1), WeightSystem::unit(2), 0.5, 20, 1);
  const HomeomorphismReport report = build_homeomorphism(problem, seeds);
  EXPECT_TRUE(report.passed());
  for (const auto& s : report.samples) EXPECT_LE((s.phi - s.u).norm(), 1e-12);
  std::ostringstream csv;
  emit_plot_data(csv, problem, report);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "index,u1,u2,phi1,phi2,G_residual,Gt_residual,ok");
}

TEST(Flow, QuinticFlowReachesPerturbedZeroSet) {
  const HomotopyProblem problem = quintic_problem();
  const auto seeds = zero_set_seeds(pitchfork(), SigmaSet::origin(1), WeightSystem::unit(2), 0.5, 40, 42);
  ASSERT_EQ(seeds.size(), 40u);
  for (const auto& u : seeds) {
    EXPECT_LE(std::abs(pitchfork().evaluate(as_span(u))[0]), 1e-12);
    EXPECT_GT(std::abs(u[0]), 1e-3 * 0.5);
  }
  const HomeomorphismReport report = build_homeomorphism(problem, seeds);
  EXPECT_TRUE(report.passed());
  EXPECT_LE(report.max_round_trip, 1e-7);
  for (const auto& s : report.samples) {
    EXPECT_LE(problem.value(as_span(s.phi), 1.0).norm(), 1e-6);
    EXPECT_EQ(s.phi[1], s.u[1]);  // lambda is never moved
  }
}

TEST(Flow, CommutesWithTheReflection) {
  const HomotopyProblem problem = quintic_problem();
  const Eigen::Vector2d u(0.3, 0.09), v(-0.3, 0.09);
  const FlowTrace a = integrate_flow(problem, u, 0.0, 1.0);
  const FlowTrace b = integrate_flow(problem, v, 0.0, 1.0);
  ASSERT_TRUE(a.success());
  ASSERT_TRUE(b.success());
  EXPECT_NEAR(a.final_point()[0], -b.final_point()[0], 1e-12);
}

TEST(Flow, SigmaPointsStayFixed) {
  const FlowTrace trace = integrate_flow(quintic_problem(), Eigen::Vector2d(0.0, 0.2), 0.0, 1.0);
  EXPECT_TRUE(trace.success());
  EXPECT_EQ(trace.final_point(), Eigen::Vector2d(0.0, 0.2));
}

TEST(Flow, DriftIsRelativeToTheSizeOfF) {
  const FlowTrace trace = integrate_flow(quintic_problem(), Eigen::Vector2d(0.2, 0.04), 0.0, 1.0);
  ASSERT_TRUE(trace.success());
  EXPECT_LE(trace.relative_drift(), 1e-6);
}

TEST(TraceCsv, EmptySetHasHeaderOnly) {
  std::ostringstream out;
  write_trace_csv(out, 2, {});
  EXPECT_EQ(out.str(), "trace,s,t,u1,u2,d_omega,F_drift,chi,orth_residual,step\n");
}

TEST(Envelope, SyntheticTraces) {
  FlowTrace trace;
  for (int k = 0; k <= 10; ++k) {
    FlowState s;
    s.s = 0.1 * k;
    s.distance = 0.2 * std::exp(0.8 * s.s);
    trace.states.push_back(s);
  }
  EXPECT_TRUE(distance_monitor(trace, 1.0).holds);
  const EnvelopeCheck tight = distance_monitor(trace, 0.5, 0.0);
  EXPECT_FALSE(tight.holds);
  ASSERT_TRUE(tight.index.has_value());
  EXPECT_GT(tight.max_violation, 0.0);
}

TEST(Contact, ThetaMapsGToP) {
  const Eigen::Vector2d g(1.0, 2.0), p(0.1, -0.3);
  const Eigen::MatrixXd theta = contact_theta(g, p);
  EXPECT_LE((theta * g - p).norm(), 1e-15);
  const Eigen::MatrixXd tau = contact_tau(theta);
  EXPECT_LE(((Eigen::MatrixXd::Identity(2, 2) + theta) * tau - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-14);
  EXPECT_EQ(contact_theta(Eigen::Vector2d::Zero(), p).norm(), 0.0);
  EXPECT_THROW(contact_tau(contact_theta(g, -2.0 * g)), NeighborhoodTooLargeError);
}

TEST(Contact, IdentityHoldsOnPitchforkSamples) {
  const HomotopyProblem problem = quintic_problem();
  const HornSampleSet samples =
      sample_horn(pitchfork(), kHorn, SigmaSet::origin(1), WeightSystem::unit(2), 100, 7);
  std::vector<Eigen::VectorXd> points;
  for (const auto& s : samples.samples) points.push_back(s.point);
  const HomeomorphismReport flows = build_homeomorphism(problem, points);
  const ContactReport report = verify_contact_identity(problem, flows);
  EXPECT_TRUE(report.passed());
  EXPECT_LE(report.max_residual, 1e-6);
  EXPECT_GT(report.beta_horn_samples, 0u);
  EXPECT_EQ(report.theta_zero_violations, 0u);
  EXPECT_TRUE(report.drift_ok);
}

}  // namespace
}  // namespace germflow
