#include "germflow/horn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "germflow/errors.hpp"
#include "germflow/germ.hpp"
#include "germflow/parallel.hpp"
#include "germflow/random.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"
#include "minimize.hpp"

namespace germflow {

namespace {

constexpr double kBisectionTol = 1e-14;

Eigen::VectorXd random_direction(std::size_t dim, CounterRng& rng) {
  Eigen::VectorXd v(dim);
  double norm = 0.0;
  do {
    for (auto& c : v) c = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace

bool horn_membership(const MapGerm& germ, std::span<const double> u, const HornSpec& horn,
                     const SigmaSet& sigma, const WeightSystem& weights) {
  if (u.size() != germ.num_vars()) throw DimensionError("horn_membership: dimension mismatch");
  double norm2 = 0.0;
  for (double c : u) norm2 += c * c;
  if (std::sqrt(norm2) >= horn.radius) return false;
  const double d = weighted_distance(u.first(germ.n()), sigma, weights);
  return germ.evaluate(u).norm() <= horn.width * std::pow(d, horn.degree);
}

double draw_level(double radius, double min_level_ratio, CounterRng& rng) {
  return radius * std::pow(min_level_ratio, rng.uniform());
}

Eigen::VectorXd propose_on_weighted_sphere(const WeightSystem& weights, double level,
                                           CounterRng& rng) {
  Eigen::VectorXd v = random_direction(weights.size(), rng);
  if (!weights.is_unit()) {
    // rho(s v) is increasing in s; find rho(s v) = 1.
    double lo = 0.0;
    double hi = 1.0;
    while (rho(weights, as_span(Eigen::VectorXd(hi * v))) < 1.0) hi *= 2.0;
    while (hi - lo > kBisectionTol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (rho(weights, as_span(Eigen::VectorXd(mid * v))) < 1.0)
        lo = mid;
      else
        hi = mid;
    }
    v *= 0.5 * (lo + hi);
  }
  return weights.dilate(as_span(v), level);
}

RejectionResult rejection_sample(std::size_t n, std::size_t max_proposals, std::size_t block_size,
                                 const std::function<bool(std::size_t)>& accept) {
  RejectionResult result;
  if (block_size == 0) block_size = 1;
  std::vector<char> flags;
  for (std::size_t start = 0; start < max_proposals && result.accepted_indices.size() < n;
       start += block_size) {
    const std::size_t count = std::min(block_size, max_proposals - start);
    flags.assign(count, 0);
    parallel_for(count, [&](std::size_t k) { flags[k] = accept(start + k) ? 1 : 0; });
    for (std::size_t k = 0; k < count; ++k) {
      result.proposals = start + k + 1;
      if (flags[k]) result.accepted_indices.push_back(start + k);
      if (result.accepted_indices.size() == n) break;
    }
  }
  return result;
}

HornSampleSet sample_horn(const MapGerm& germ, const HornSpec& horn, const SigmaSet& sigma,
                          const WeightSystem& weights, std::size_t n, std::uint64_t seed,
                          const SamplingOptions& options) {
  if (weights.size() != germ.num_vars()) throw DimensionError("sample_horn: weight count mismatch");
  if (sigma.n() != germ.n()) throw DimensionError("sample_horn: sigma dimension mismatch");
  auto propose = [&](std::size_t i) {
    CounterRng rng(seed, i);
    const double level = draw_level(horn.radius, options.min_level_ratio, rng);
    return propose_on_weighted_sphere(weights, level, rng);
  };
  auto accept = [&](std::size_t i) {
    const Eigen::VectorXd u = propose(i);
    if (!horn_membership(germ, as_span(u), horn, sigma, weights)) return false;
    return weighted_distance(as_span(u).first(germ.n()), sigma, weights) > 0.0;
  };
  const auto rs = rejection_sample(n, n * options.proposal_factor, options.block_size, accept);

  HornSampleSet out;
  out.proposals = rs.proposals;
  for (std::size_t i : rs.accepted_indices) {
    HornSample s;
    s.point = propose(i);
    s.distance = weighted_distance(as_span(s.point).first(germ.n()), sigma, weights);
    s.value_norm = germ.evaluate(as_span(s.point)).norm();
    out.samples.push_back(std::move(s));
  }
  out.acceptance_ratio =
      rs.proposals == 0 ? 0.0 : static_cast<double>(out.samples.size()) / rs.proposals;
  if (out.samples.size() < n)
    out.diagnostic = "horn acceptance too low: " + std::to_string(out.samples.size()) + " of " +
                     std::to_string(n) + " samples after " + std::to_string(rs.proposals) +
                     " proposals";
  return out;
}

namespace {

// rho^(2q) of the unit vector along v, in the log domain.
double rho_power_on_sphere(const WeightSystem& weights, const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm == 0.0) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double a = std::abs(v[i]) / norm;
    if (a > 0.0) sum += std::exp(2.0 * static_cast<double>(weights.q_i(i)) * std::log(a));
  }
  return sum;
}

}  // namespace

LojasiewiczFit lojasiewicz_estimate(const WeightSystem& weights, std::size_t n,
                                    std::uint64_t seed) {
  LojasiewiczFit fit;
  fit.exponent = static_cast<double>(weights.q()) / weights.min_weight();
  fit.samples = n;
  std::vector<double> values(n);
  std::vector<Eigen::VectorXd> dirs(n);
  parallel_for(n, [&](std::size_t i) {
    CounterRng rng(seed, i);
    dirs[i] = random_direction(weights.size(), rng);
    values[i] = rho_power_on_sphere(weights, dirs[i]);
  });
  if (n == 0) return fit;
  // Polish the best few samples so c approaches the true minimum from above.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const std::size_t keep = std::min<std::size_t>(8, n);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double best = values[order[0]];
  for (std::size_t k = 0; k < keep; ++k) {
    const auto r = detail::nelder_mead(
        [&](const Eigen::VectorXd& v) { return rho_power_on_sphere(weights, v); }, dirs[order[k]],
        0.05, 4000, 1e-15);
    best = std::min(best, r.value);
  }
  fit.c = best;
  fit.pass = std::isfinite(best) && best > 0.0;
  return fit;
}

GradRhoBound grad_rho_bound_check(const WeightSystem& weights, std::size_t n, std::uint64_t seed) {
  const std::size_t m = weights.size();
  GradRhoBound out;
  out.max_per_coordinate.assign(m, 0.0);
  // Coordinate axes first: the bound 1/w_i is attained there.
  const std::size_t total = n + m;
  std::vector<std::vector<double>> values(total, std::vector<double>(m, 0.0));
  parallel_for(total, [&](std::size_t k) {
    Eigen::VectorXd u;
    if (k < m) {
      u = Eigen::VectorXd::Zero(m);
      u[k] = 1.0;
    } else {
      CounterRng rng(seed, k - m);
      u = propose_on_weighted_sphere(weights, draw_level(1.0, 1e-6, rng), rng);
    }
    for (std::size_t i = 0; i < m; ++i) values[k][i] = grad_rho_scaled(weights, as_span(u), i);
  });
  out.finite = true;
  for (const auto& row : values)
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(row[i])) out.finite = false;
      out.max_per_coordinate[i] = std::max(out.max_per_coordinate[i], row[i]);
    }
  out.max_value = *std::max_element(out.max_per_coordinate.begin(), out.max_per_coordinate.end());
  out.lipschitz = static_cast<double>(m) * out.max_value;
  out.samples = total;
  return out;
}

}  // namespace germflow
