#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "germflow/horn.hpp"

namespace germflow {

class MapGerm;
class SigmaSet;
class WeightSystem;

// Singular: gradients taken in the frame rho^(w_j) d/dx_j.
// Euclidean: plain x-gradients, the reduction used when every weight is 1.
enum class Frame { singular, euclidean };

Frame natural_frame(const WeightSystem& weights);
const char* to_string(Frame frame);

Eigen::VectorXd frame_factors(const WeightSystem& weights, Frame frame, std::size_t n,
                              std::span<const double> u);

// Rows are the frame gradients of the components.
Eigen::MatrixXd weighted_jacobian_x(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                                    std::span<const double> u);

struct KuoVectors {
  Eigen::MatrixXd gradients;  // p x n
  Eigen::MatrixXd gram;
  Eigen::MatrixXd cofactors;
  double determinant = 0.0;
  Eigen::MatrixXd normals;    // row j is N_j
  Eigen::VectorXd normal_norms;
  bool degenerate = false;

  // min_j ||N_j||, zero for a degenerate Gram matrix.
  double pseudo_distance() const;
};

// N_j = sum_i (A_ji / A_jj) grad_i with A the cofactors of the Gram matrix.
// Degenerate when det <= 1e-14 * prod(diag(Gram)).
KuoVectors kuo_vectors(const Eigen::MatrixXd& gradients);
KuoVectors kuo_vectors(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                       std::span<const double> u);

double kuo_pseudo_distance(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                           std::span<const double> u);

enum class Verdict { holds_empirically, fails_with_witness, indeterminate };
const char* to_string(Verdict verdict);

struct KuoOptions {
  double c_min = 1e-6;
  double slope_slack = 0.1;
  std::optional<Frame> frame;  // natural_frame when empty
  SamplingOptions sampling;
};

struct KuoWitness {
  Eigen::VectorXd point;
  double distance = 0.0;
  double pseudo_distance = 0.0;
  double margin = 0.0;
};

struct KuoCertificate {
  double r = 0.0;
  double delta = 0.0;
  HornSpec horn;
  Frame frame = Frame::euclidean;
  std::size_t samples = 0;
  std::size_t proposals = 0;
  double acceptance_ratio = 0.0;
  double min_margin = 0.0;
  double fitted_exponent = 0.0;
  std::optional<KuoWitness> witness;  // sample with the smallest margin
  Verdict verdict = Verdict::indeterminate;
  std::string note;

  bool holds() const { return verdict == Verdict::holds_empirically; }
};

// Samples the horn and checks d_x grad f >= c * d_w^(r - delta) through the
// minimum margin and a log-log fit of pseudo-distance against d_w.
KuoCertificate check_kuo_condition(const MapGerm& germ, const SigmaSet& sigma,
                                   const WeightSystem& weights, double r, double delta,
                                   const HornSpec& horn, std::size_t n, std::uint64_t seed,
                                   const KuoOptions& options = {});

struct RankCheck {
  bool full_rank = true;
  std::optional<Eigen::VectorXd> witness;
  double min_relative_singular_value = 0.0;
  std::size_t samples = 0;
};

// rank d_x G = p on a ball minus Sigma x R^l. The smallest singular value is
// measured against the pre-cancellation size of the Jacobian entries; the
// most singular samples are refined by a simplex search.
RankCheck check_rank_condition(const MapGerm& germ, const SigmaSet& sigma, double radius,
                               std::size_t n, std::uint64_t seed);

struct PerturbedMargin {
  double perturbed = 0.0;
  double base = 0.0;
  double ratio = 0.0;
};

PerturbedMargin perturbed_margin(const MapGerm& f, const MapGerm& pert, double t,
                                 const WeightSystem& weights, Frame frame,
                                 std::span<const double> u);

// max_j || N_j / ||N_j||^2 - column j of D^+ ||.
double pseudoinverse_identity_residual(const Eigen::MatrixXd& gradients);
double pseudoinverse_identity_check(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                                    std::span<const double> u);

}  // namespace germflow
