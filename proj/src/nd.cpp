#include "germflow/nd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "germflow/errors.hpp"
#include "germflow/germ.hpp"
#include "germflow/linalg.hpp"
#include "germflow/parallel.hpp"
#include "germflow/random.hpp"
#include "germflow/weights.hpp"

namespace germflow {

namespace {

Eigen::VectorXd scaling(const std::vector<double>& nu, double r) {
  Eigen::VectorXd s(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) s[i] = std::pow(r, 1.0 - nu[i]);
  return s;
}

void check_nu(const MapGerm& germ, const std::vector<double>& nu) {
  if (nu.size() != germ.p()) throw DimensionError("nu must have one entry per component");
}

Eigen::VectorXd propose_euclidean(std::size_t dim, double radius, double min_ratio, CounterRng& rng) {
  const double level = draw_level(radius, min_ratio, rng);
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  do {
    for (auto& c : v) c = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v * (level / norm);
}

struct HornDraw {
  std::vector<Eigen::VectorXd> points;
  std::size_t proposals = 0;
};

HornDraw sample_nd_horn(const MapGerm& germ, const std::vector<double>& nu, double width,
                        double radius, std::size_t n, std::uint64_t seed,
                        const SamplingOptions& options) {
  auto propose = [&](std::size_t i) {
    CounterRng rng(seed, i);
    return propose_euclidean(germ.num_vars(), radius, options.min_level_ratio, rng);
  };
  const auto rs = rejection_sample(n, n * options.proposal_factor, options.block_size,
                                   [&](std::size_t i) {
                                     const Eigen::VectorXd u = propose(i);
                                     return in_nd_horn(germ, nu, width, as_span(u));
                                   });
  HornDraw out;
  out.proposals = rs.proposals;
  for (std::size_t i : rs.accepted_indices) out.points.push_back(propose(i));
  return out;
}

}  // namespace

double nu_norm(const std::vector<double>& nu) {
  if (nu.empty()) throw DimensionError("nu is empty");
  return *std::max_element(nu.begin(), nu.end());
}

const char* to_string(BridgeConstant c) { return c == BridgeConstant::proof ? "proof" : "tight"; }

bool in_nd_horn(const MapGerm& germ, const std::vector<double>& nu, double width,
                std::span<const double> u) {
  check_nu(germ, nu);
  double r2 = 0.0;
  for (double c : u) r2 += c * c;
  const double r = std::sqrt(r2);
  if (r == 0.0) return false;
  return scaling(nu, r).cwiseProduct(germ.evaluate(u)).norm() <= width;
}

double nd_kappa(const MapGerm& germ, const std::vector<double>& nu, std::span<const double> u) {
  check_nu(germ, nu);
  double r2 = 0.0;
  for (double c : u) r2 += c * c;
  return kappa(scaling(nu, std::sqrt(r2)).asDiagonal() * germ.jacobian_x(u));
}

NdReport check_nd(const MapGerm& germ, const NdSpec& spec, std::size_t n, std::uint64_t seed,
                  const SamplingOptions& options) {
  check_nu(germ, spec.nu);
  NdReport report;
  report.spec = spec;

  auto run = [&](const std::vector<double>& nu, double& min_kappa, Verdict& verdict,
                 std::optional<Eigen::VectorXd>* witness, std::size_t* samples, std::size_t* proposals) {
    const auto draw = sample_nd_horn(germ, nu, spec.width, spec.radius, n, seed, options);
    std::vector<double> k(draw.points.size());
    parallel_for(draw.points.size(), [&](std::size_t i) { k[i] = nd_kappa(germ, nu, as_span(draw.points[i])); });
    min_kappa = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] < min_kappa) {
        min_kappa = k[i];
        worst = i;
      }
    if (samples) *samples = draw.points.size();
    if (proposals) *proposals = draw.proposals;
    if (draw.points.empty()) {
      verdict = Verdict::indeterminate;
      return;
    }
    verdict = min_kappa >= spec.epsilon ? Verdict::holds_empirically : Verdict::fails_with_witness;
    if (witness) *witness = draw.points[worst];
  };

  run(spec.nu, report.min_kappa, report.verdict, &report.witness, &report.samples, &report.proposals);
  const std::vector<double> uniform(spec.nu.size(), nu_norm(spec.nu));
  run(uniform, report.min_kappa_uniform, report.verdict_uniform, nullptr, nullptr, nullptr);
  return report;
}

NdBridgeReport nd_implies_kuo_check(const MapGerm& germ, const NdSpec& spec, std::size_t n,
                                    std::uint64_t seed, BridgeConstant constant,
                                    const SamplingOptions& options) {
  check_nu(germ, spec.nu);
  const double order = nu_norm(spec.nu);
  const std::vector<double> uniform(spec.nu.size(), order);
  NdBridgeReport out;
  out.constant = constant == BridgeConstant::proof
                     ? spec.epsilon * std::sqrt(static_cast<double>(germ.num_vars()))
                     : spec.epsilon;

  const auto draw = sample_nd_horn(germ, uniform, spec.width, spec.radius, n, seed, options);
  out.horn_samples = draw.points.size();
  std::vector<double> k(draw.points.size()), ratio(draw.points.size());
  parallel_for(draw.points.size(), [&](std::size_t i) {
    const auto u = as_span(draw.points[i]);
    k[i] = nd_kappa(germ, uniform, u);
    const double pd = kuo_vectors(germ.jacobian_x(u)).pseudo_distance();
    ratio[i] = pd / (out.constant * std::pow(draw.points[i].norm(), order - 1.0));
  });
  out.worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const bool premise = k[i] >= spec.epsilon;
    if (premise)
      ++out.checked;
    else
      ++out.premise_failures;
    if (ratio[i] < 1.0) {
      ++out.violations;
      if (premise) ++out.premise_violations;
    }
    if (ratio[i] < out.worst_ratio) {
      out.worst_ratio = ratio[i];
      out.witness = draw.points[i];
    }
  }
  out.premise_holds = out.horn_samples > 0 && out.premise_failures == 0;
  out.holds = out.horn_samples > 0 && out.violations == 0;
  return out;
}

}  // namespace germflow
