#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "germflow/cli/commands.hpp"
#include "germflow/germflow.hpp"
#include "germflow/verify/lemma_suite.hpp"

using namespace germflow;

namespace {

const std::string kData = GERMFLOW_DATA_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

GermSpec pitchfork_spec() { return load_germ_spec(kData + "/pitchfork.germ"); }

// Criterion 1: f = x^3 - lambda x, r = 3, delta = 1, width 0.5, 20000 samples.
Outcome criterion1() {
  const GermSpec f = pitchfork_spec();
  const auto start = std::chrono::steady_clock::now();
  const KuoCertificate cert = check_kuo_condition(f.germ, f.sigma, f.weights, 3.0, 1.0,
                                                  HornSpec{3.0, 0.5, 0.5}, 20000, 42);
  const double elapsed = seconds_since(start);
  const bool pass = cert.verdict == Verdict::holds_empirically && cert.fitted_exponent >= 1.9 &&
                    cert.fitted_exponent <= 2.1 && cert.min_margin >= 1.0 && elapsed < 10.0;
  return {pass, std::string(to_string(cert.verdict)) + ", exponent " + num(cert.fitted_exponent) +
                    " in [1.9, 2.1], min margin " + num(cert.min_margin) + " >= 1, " +
                    std::to_string(cert.samples) + " samples, " + num(elapsed) + " s < 10 s"};
}

// One realization run shared by criteria 2 to 4.
struct Realization {
  std::optional<HomotopyProblem> problem;
  PerturbationOrderReport order;
  HomeomorphismReport seeds;
  double seed_seconds = 0.0;
  HomeomorphismReport horn;
  ContactReport contact;
  FieldBound field;
  GradRhoBound grad;
};

const Realization& realization() {
  static const Realization run = [] {
    Realization r;
    const GermSpec f = pitchfork_spec();
    const GermSpec p = load_germ_spec(kData + "/x5.germ");
    const HornSpec horn{3.0, 0.5, 0.5};
    r.order = perturbation_order(p.germ, f.sigma, f.weights, 3);
    r.problem.emplace(f.germ, p.germ, f.weights, f.sigma, horn, f.group);
    const auto start = std::chrono::steady_clock::now();
    const auto seeds = zero_set_seeds(f.germ, f.sigma, f.weights, 0.5, 500, 42);
    r.seeds = build_homeomorphism(*r.problem, seeds, 1e-7);
    r.seed_seconds = seconds_since(start);
    const HornSampleSet samples = sample_horn(f.germ, horn, f.sigma, f.weights, 500, 43);
    std::vector<Eigen::VectorXd> points;
    for (const auto& s : samples.samples) points.push_back(s.point);
    r.horn = build_homeomorphism(*r.problem, points, 1e-7);
    ContactOptions options;
    options.beta = horn.width / 4.0;
    r.contact = verify_contact_identity(*r.problem, r.horn, options);
    r.field = field_bound_sweep(*r.problem, 10000, 42);
    r.grad = grad_rho_bound_check(f.weights, 10000, 42);
    return r;
  }();
  return run;
}

// Criterion 2: 500 zero-set seeds flowed from t = 0 to 1 under p = x^5.
Outcome criterion2() {
  const Realization& r = realization();
  std::size_t within = 0;
  double worst_residual = 0.0;
  double worst_round_trip = 0.0;
  for (const auto& s : r.seeds.samples) {
    if (!s.ok) continue;
    const double residual = r.problem->value(as_span(s.phi), 1.0).norm();
    worst_residual = std::max(worst_residual, residual);
    worst_round_trip = std::max(worst_round_trip, s.round_trip_error);
    if (residual <= 1e-6) ++within;
  }
  const std::size_t n = r.seeds.samples.size();
  const double fraction = n ? static_cast<double>(within) / n : 0.0;
  const bool pass = r.order.passes() && n == 500 && fraction >= 0.99 && worst_round_trip <= 1e-7 &&
                    r.seed_seconds < 30.0;
  return {pass, r.order.summary() + "; " + std::to_string(within) + "/" + std::to_string(n) +
                    " endpoints with |(f+p)(phi(u))| <= 1e-6 (max " + num(worst_residual) +
                    "), max round trip " + num(worst_round_trip) + " <= 1e-7, " +
                    num(r.seed_seconds) + " s < 30 s"};
}

// Criterion 3: contact identity on 500 horn samples of the same problem.
Outcome criterion3() {
  const Realization& r = realization();
  const ContactReport& c = r.contact;
  const bool pass = c.samples.size() == 500 && c.max_residual <= 1e-6 && c.beta_horn_samples > 0 &&
                    c.theta_zero_violations == 0;
  return {pass, "max ||G - tau G~(phi)|| " + num(c.max_residual) + " <= 1e-6 over " +
                    std::to_string(c.samples.size()) + " samples; theta = 0 on " +
                    std::to_string(c.beta_horn_samples) + " beta-horn samples with " +
                    std::to_string(c.theta_zero_violations) + " violations; drift law " +
                    num(c.max_drift_residual) + ", decay " + (c.decay_ok ? "ok" : "failed")};
}

// Criterion 4: two-sided exponential distance envelope with 5% slack.
Outcome criterion4() {
  const Realization& r = realization();
  const double cl = r.field.sup * r.grad.lipschitz;
  std::size_t traces = 0;
  std::size_t inside = 0;
  double worst = 0.0;
  for (const auto* set : {&r.seeds, &r.horn})
    for (const auto& s : set->samples) {
      if (!s.forward.success()) continue;
      ++traces;
      const EnvelopeCheck e = distance_monitor(s.forward, cl, 0.05);
      worst = std::max(worst, e.max_violation);
      if (e.holds) ++inside;
    }
  const bool pass = r.field.finite && r.grad.finite && traces > 0 && inside == traces;
  return {pass, std::to_string(inside) + "/" + std::to_string(traces) +
                    " successful traces inside the envelope, C " + num(r.field.sup) + ", L " +
                    num(r.grad.lipschitz) + ", worst excursion " + num(worst)};
}

// Criterion 5: randomized oracle suites.
Outcome criterion5() {
  const auto a = verify::oracle_equivalence_suite(200, 42, 1e-8);
  const auto b = verify::pseudoinverse_identity_suite(100, 42, 1e-9);
  const auto c = verify::kappa_pinv_suite(200, 42, 1e-8);
  const auto d = verify::cofactor_norm_suite(200, 42, 1e-8);
  const bool pass = a.passed() && b.passed() && c.passed() && d.passed();
  return {pass, "pseudo-distance rel err " + num(a.worst) + " <= 1e-8 (200), pseudoinverse identity " +
                    num(b.worst) + " <= 1e-9 (100), |kappa ||A+|| - 1| " + num(c.worst) +
                    " <= 1e-8, ||N_j||^2 vs d/A_jj " + num(d.worst) + " <= 1e-8"};
}

// Criterion 6: block norms never exceed the full norm.
Outcome criterion6() {
  const auto s = verify::submatrix_norm_suite(1000, 42, 1e-12);
  return {s.passed(), std::to_string(s.failures) + " violations over " + std::to_string(s.instances) +
                          " matrices, worst excess " + num(s.worst)};
}

// Minimum of d grad F / (C rho^(|nu| - 1)) over a grid of the nu-horn of a
// one-component germ, where d grad F = |dF/dx|.
struct GridResult {
  double min_ratio = 1e300;
  std::size_t points = 0;
};

GridResult grid_bridge(const MapGerm& f, const NdSpec& spec, double constant, int per_axis) {
  GridResult out;
  const double nu = spec.nu[0];
  for (int i = 0; i <= per_axis; ++i)
    for (int j = 0; j <= per_axis; ++j) {
      const Eigen::Vector2d u(spec.radius * (2.0 * i / per_axis - 1.0),
                              spec.radius * (2.0 * j / per_axis - 1.0));
      const double rho = u.norm();
      if (rho == 0.0 || rho >= spec.radius) continue;
      if (std::pow(rho, 1.0 - nu) * std::abs(f.evaluate(as_span(u))[0]) > spec.width) continue;
      ++out.points;
      const double grad = std::abs(f.jacobian_x(as_span(u))(0, 0));
      out.min_ratio = std::min(out.min_ratio, grad / (constant * std::pow(rho, nu - 1.0)));
    }
  return out;
}

// Criterion 7: ND implies the Kuo-type inequality with C = epsilon sqrt(n + l).
Outcome criterion7() {
  const MapGerm identity(1, 1, {Polynomial(2, {Monomial{{1, 0}, 1.0}})});
  const NdSpec linear{{1.0}, 0.7, 0.5, 0.5};
  const NdBridgeReport a = nd_implies_kuo_check(identity, linear, 20000, 42, BridgeConstant::proof);
  const bool a_pass = a.premise_holds && a.premise_violations == 0 && a.checked > 0;

  const GermSpec f = pitchfork_spec();
  const NdSpec cubic{{3.0}, 0.5, 0.1, 0.5};
  const NdBridgeReport b = nd_implies_kuo_check(f.germ, cubic, 20000, 42, BridgeConstant::proof);
  const GridResult grid = grid_bridge(f.germ, cubic, b.constant, 1000);
  const bool grid_agrees = (grid.min_ratio >= 1.0) == (b.violations == 0);
  const bool b_pass = b.holds && grid_agrees;
  const NdBridgeReport tight = nd_implies_kuo_check(f.germ, cubic, 20000, 42, BridgeConstant::tight);

  return {a_pass && b_pass,
          "x, nu=1, eps=0.7: " + std::to_string(a.premise_violations) + " violations on " +
              std::to_string(a.checked) + " ND samples (C " + num(a.constant) + "); pitchfork, nu=3, eps=0.5: " +
              std::to_string(b.violations) + " violations on " + std::to_string(b.horn_samples) +
              " horn samples (" + std::to_string(b.premise_failures) + " with kappa < eps, " +
              std::to_string(b.premise_violations) + " with kappa >= eps), worst ratio " +
              num(b.worst_ratio) + ", grid min ratio " + num(grid.min_ratio) + " on " +
              std::to_string(grid.points) + " points" + (grid_agrees ? "" : " (grid disagrees)") +
              "; with C = eps: " + std::to_string(tight.premise_violations) + " violations with kappa >= eps"};
}

// Criterion 8: invariances of rho, d_w, the pseudo-distance and the bump.
Outcome criterion8() {
  std::size_t failures = 0;
  double worst_homog = 0.0;
  double worst_unit = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    CounterRng rng(8, i);
    const std::vector<int> w{1 + static_cast<int>(rng.next_u64() % 3), 1 + static_cast<int>(rng.next_u64() % 3),
                             1 + static_cast<int>(rng.next_u64() % 3)};
    const WeightSystem weights(w);
    const Eigen::Vector3d u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double t = std::exp(rng.uniform(-3, 3));
    const Eigen::VectorXd tu = weights.dilate(as_span(Eigen::VectorXd(u)), t);
    const double expect = t * rho(weights, as_span(Eigen::VectorXd(u)));
    const double err = std::abs(rho(weights, as_span(tu)) - expect) / expect;
    worst_homog = std::max(worst_homog, err);
    if (err > 1e-12) ++failures;
    const double e = std::abs(rho(WeightSystem::unit(3), as_span(Eigen::VectorXd(u))) - u.norm()) / u.norm();
    worst_unit = std::max(worst_unit, e);
    if (e > 1e-15) ++failures;
  }

  // Z2 acting by x -> -x on the pitchfork, and the swap of two equal-weight coordinates.
  const GermSpec f = pitchfork_spec();
  const MapGerm swap_germ(2, 0, {Polynomial(2, {Monomial{{1, 1}, 1.0}}),
                                 Polynomial(2, {Monomial{{2, 0}, 1.0}, Monomial{{0, 2}, 1.0}})});
  double worst_group = 0.0;
  for (std::size_t i = 0; i < 1000; ++i) {
    CounterRng rng(88, i);
    const Eigen::Vector2d u(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    const Eigen::Vector2d gu(-u[0], u[1]);
    const Eigen::Vector2d su(u[1], u[0]);
    const WeightSystem w22({2, 2});
    const SigmaSet origin2 = SigmaSet::origin(2);
    const double diffs[] = {
        weighted_distance(as_span(Eigen::VectorXd(u)), f.sigma, f.weights) -
            weighted_distance(as_span(Eigen::VectorXd(gu)), f.sigma, f.weights),
        kuo_pseudo_distance(f.germ, f.weights, Frame::euclidean, as_span(Eigen::VectorXd(u))) -
            kuo_pseudo_distance(f.germ, f.weights, Frame::euclidean, as_span(Eigen::VectorXd(gu))),
        weighted_distance(as_span(Eigen::VectorXd(u)), origin2, w22) -
            weighted_distance(as_span(Eigen::VectorXd(su)), origin2, w22),
        kuo_pseudo_distance(swap_germ, w22, Frame::singular, as_span(Eigen::VectorXd(u))) -
            kuo_pseudo_distance(swap_germ, w22, Frame::singular, as_span(Eigen::VectorXd(su)))};
    for (double d : diffs) {
      worst_group = std::max(worst_group, std::abs(d));
      if (std::abs(d) > 1e-9) ++failures;
    }
  }

  const GermSpec p = load_germ_spec(kData + "/x5.germ");
  const HomotopyProblem problem(f.germ, p.germ, f.weights, f.sigma, HornSpec{3.0, 0.5, 0.5}, f.group);
  std::size_t chi_violations = 0;
  std::size_t inner = 0;
  std::size_t outer = 0;
  // Half of the points come from the horn itself, half from the whole ball.
  const HornSampleSet in_horn = sample_horn(f.germ, HornSpec{3.0, 0.5, 0.5}, f.sigma, f.weights, 5000, 888);
  std::vector<Eigen::VectorXd> points;
  for (const auto& s : in_horn.samples) points.push_back(s.point);
  for (std::size_t i = 0; points.size() < 10000; ++i) {
    CounterRng rng(889, i);
    points.push_back(propose_on_weighted_sphere(f.weights, draw_level(0.5, 1e-3, rng), rng));
  }
  for (const auto& u : points) {
    const double d = problem.distance(as_span(u));
    if (d == 0.0) continue;
    const double ratio = std::abs(f.germ.evaluate(as_span(u))[0]) / std::pow(d, 3.0);
    const double chi = bump_chi(problem, as_span(u));
    if (ratio <= 0.25) {
      ++inner;
      if (chi != 1.0) ++chi_violations;
    } else if (ratio >= 0.5) {
      ++outer;
      if (chi != 0.0) ++chi_violations;
    }
  }
  failures += chi_violations;
  return {failures == 0,
          "quasi-homogeneity " + num(worst_homog) + " <= 1e-12, unit weights " + num(worst_unit) +
              " <= 1e-15, group invariance " + num(worst_group) + " <= 1e-9, bump " +
              std::to_string(chi_violations) + " violations (" + std::to_string(inner) + " inner, " +
              std::to_string(outer) + " outer samples)"};
}

int cli_exit(std::vector<std::string> args, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

// Criterion 9: jets of f and f + x^5 agree to order 4 on Sigma; the pipeline
// accepts x^5 and rejects x^4.
Outcome criterion9() {
  const GermSpec f = pitchfork_spec();
  const GermSpec p5 = load_germ_spec(kData + "/x5.germ");
  const MapGerm g = f.germ + p5.germ;
  const SigmaSet sigma(1, {{}});
  const JetComparison k4 = jets_agree_on_sigma(f.germ, g, 4, sigma, 1000);
  const JetComparison k5 = jets_agree_on_sigma(f.germ, g, 5, sigma, 1000);
  const int accept = cli_exit({"verify-equivalence", "--spec", kData + "/pitchfork.germ", "--pert",
                               kData + "/x5.germ", "--d", "3"});
  std::string rejected;
  const int reject = cli_exit({"verify-equivalence", "--spec", kData + "/pitchfork.germ", "--pert",
                               kData + "/x4.germ", "--d", "3"},
                              &rejected);
  const bool message = rejected.find("perturbation order 4 ≤ 4") != std::string::npos;
  const bool pass = k4.agree && !k5.agree && accept == 0 && reject == 1 && message;
  return {pass, std::string("4-jets ") + (k4.agree ? "agree" : "differ") + ", 5-jets " +
                    (k5.agree ? "agree" : "differ") + "; x^5 pipeline exit " + std::to_string(accept) +
                    ", x^4 control exit " + std::to_string(reject) +
                    (message ? " with 'perturbation order 4 ≤ 4'" : " without the order message")};
}

std::string without_timing(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream kept;
  std::string line;
  bool in_timing = false;
  while (std::getline(in, line)) {
    if (line.find("\"timing\"") != std::string::npos) in_timing = true;
    if (!in_timing) kept << line << '\n';
    if (in_timing && line.find('}') != std::string::npos) in_timing = false;
  }
  return kept.str();
}

// Criterion 10: the criterion 1 run twice gives byte-identical reports.
Outcome criterion10() {
  const auto dir = std::filesystem::temp_directory_path();
  std::vector<std::string> texts;
  for (const char* name : {"germflow_accept_a.json", "germflow_accept_b.json"}) {
    const std::string path = (dir / name).string();
    const int code = cli_exit({"check-kuo", "--spec", kData + "/pitchfork.germ", "--r", "3", "--delta", "1",
                               "--width", "0.5", "--radius", "0.5", "--samples", "20000", "--seed",
                               "42", "--report", path});
    if (code != 0) return {false, "check-kuo exit " + std::to_string(code)};
    texts.push_back(without_timing(path));
  }
  const bool same = texts[0] == texts[1] && !texts[0].empty();
  return {same, same ? std::to_string(texts[0].size()) + " bytes identical outside timing"
                     : "reports differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      const int k = std::atoi(argv[++i]);
      if (k < 1 || k > static_cast<int>(criteria.size())) {
        std::cerr << "unknown criterion " << argv[i] << "\n";
        return 2;
      }
      selected.push_back(k);
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  bool all = true;
  for (int k : selected) {
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
