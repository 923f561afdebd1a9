#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "germflow/horn.hpp"
#include "germflow/kuo.hpp"

namespace germflow {

class MapGerm;

// Nondegeneracy of order nu: kappa(rho^(1-nu) d_x F) >= epsilon on the horn
// ||rho^(1-nu) F|| <= width inside the ball of the given radius, with rho the
// Euclidean norm of u and rho^(1-nu) = diag(rho^(1 - nu_i)).
struct NdSpec {
  std::vector<double> nu;
  double epsilon = 0.0;
  double width = 0.0;
  double radius = 0.5;
};

double nu_norm(const std::vector<double>& nu);  // max_i nu_i

bool in_nd_horn(const MapGerm& germ, const std::vector<double>& nu, double width,
                std::span<const double> u);
double nd_kappa(const MapGerm& germ, const std::vector<double>& nu, std::span<const double> u);

struct NdReport {
  NdSpec spec;
  std::size_t samples = 0;
  std::size_t proposals = 0;
  double min_kappa = 0.0;
  std::optional<Eigen::VectorXd> witness;
  Verdict verdict = Verdict::indeterminate;
  // The same test with every nu_i replaced by max_i nu_i.
  double min_kappa_uniform = 0.0;
  Verdict verdict_uniform = Verdict::indeterminate;
};

NdReport check_nd(const MapGerm& germ, const NdSpec& spec, std::size_t n, std::uint64_t seed,
                  const SamplingOptions& options = {});

// proof: epsilon * sqrt(n + l). tight: epsilon, the exact value for p = 1.
enum class BridgeConstant { proof, tight };
const char* to_string(BridgeConstant c);

struct NdBridgeReport {
  double constant = 0.0;
  std::size_t horn_samples = 0;
  std::size_t checked = 0;             // samples where kappa >= epsilon
  std::size_t premise_failures = 0;    // horn samples with kappa < epsilon
  std::size_t violations = 0;          // horn samples with d grad F < C rho^(|nu|-1)
  std::size_t premise_violations = 0;  // violations among samples with kappa >= epsilon
  double worst_ratio = 0.0;            // min of d grad F / (C rho^(|nu|-1))
  std::optional<Eigen::VectorXd> witness;
  bool premise_holds = false;
  bool holds = false;                  // no violation at any horn sample
};

// Checks the Kuo-type inequality d_x grad F >= C rho^(|nu|-1) on samples of
// the |nu|-horn.
NdBridgeReport nd_implies_kuo_check(const MapGerm& germ, const NdSpec& spec, std::size_t n,
                                    std::uint64_t seed,
                                    BridgeConstant constant = BridgeConstant::proof,
                                    const SamplingOptions& options = {});

}  // namespace germflow
