#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace germflow {

class CounterRng;
class MapGerm;
class SigmaSet;
class WeightSystem;

// Horn {||f(u)|| <= width * d_w(x, Sigma)^degree, ||u|| < radius}.
struct HornSpec {
  double degree = 3.0;
  double width = 0.5;
  double radius = 0.5;
};

struct SamplingOptions {
  double min_level_ratio = 1e-6;   // levels are log-uniform in [ratio * radius, radius]
  std::size_t proposal_factor = 100;
  std::size_t block_size = 4096;
};

struct HornSample {
  Eigen::VectorXd point;
  double distance = 0.0;    // d_w(x, Sigma)
  double value_norm = 0.0;  // ||f(u)||
};

struct HornSampleSet {
  std::vector<HornSample> samples;
  std::size_t proposals = 0;
  double acceptance_ratio = 0.0;
  std::optional<std::string> diagnostic;
};

bool horn_membership(const MapGerm& germ, std::span<const double> u, const HornSpec& horn,
                     const SigmaSet& sigma, const WeightSystem& weights);

// Point with rho(u) = level: a uniform direction on the Euclidean sphere,
// pulled onto the weighted unit sphere by bisection and dilated by level^w.
Eigen::VectorXd propose_on_weighted_sphere(const WeightSystem& weights, double level,
                                           CounterRng& rng);

// Log-uniform level in [ratio * radius, radius].
double draw_level(double radius, double min_level_ratio, CounterRng& rng);

// Generic deterministic rejection loop. Proposal i uses its own stream; the
// first n accepted proposals in index order are returned.
struct RejectionResult {
  std::vector<std::size_t> accepted_indices;
  std::size_t proposals = 0;
};
RejectionResult rejection_sample(std::size_t n, std::size_t max_proposals, std::size_t block_size,
                                 const std::function<bool(std::size_t)>& accept);

HornSampleSet sample_horn(const MapGerm& germ, const HornSpec& horn, const SigmaSet& sigma,
                          const WeightSystem& weights, std::size_t n, std::uint64_t seed,
                          const SamplingOptions& options = {});

struct LojasiewiczFit {
  double c = 0.0;         // rho^(2q) >= c ||u||^(2 alpha) on the unit ball
  double exponent = 0.0;  // alpha = q * max_i(1 / w_i)
  bool pass = false;
  std::size_t samples = 0;
};

LojasiewiczFit lojasiewicz_estimate(const WeightSystem& weights, std::size_t n,
                                    std::uint64_t seed);

struct GradRhoBound {
  std::vector<double> max_per_coordinate;
  double max_value = 0.0;
  double lipschitz = 0.0;  // dimension * max_value
  bool finite = false;
  std::size_t samples = 0;
};

GradRhoBound grad_rho_bound_check(const WeightSystem& weights, std::size_t n, std::uint64_t seed);

}  // namespace germflow
