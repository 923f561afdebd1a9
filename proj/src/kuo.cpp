#include "germflow/kuo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "germflow/errors.hpp"
#include "germflow/germ.hpp"
#include "germflow/linalg.hpp"
#include "germflow/parallel.hpp"
#include "germflow/random.hpp"
#include "germflow/sigma.hpp"
#include "germflow/weights.hpp"
#include "minimize.hpp"

namespace germflow {

namespace {
constexpr double kDegenerateTol = 1e-14;
constexpr double kRankWitnessTol = 1e-10;
}  // namespace

Frame natural_frame(const WeightSystem& weights) {
  return weights.is_unit() ? Frame::euclidean : Frame::singular;
}

const char* to_string(Frame frame) { return frame == Frame::singular ? "singular" : "euclidean"; }

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::holds_empirically:
      return "holds-empirically";
    case Verdict::fails_with_witness:
      return "fails-with-witness";
    case Verdict::indeterminate:
      break;
  }
  return "indeterminate";
}

Eigen::VectorXd frame_factors(const WeightSystem& weights, Frame frame, std::size_t n,
                              std::span<const double> u) {
  if (frame == Frame::euclidean) return Eigen::VectorXd::Ones(n);
  const double r = rho(weights, u);
  Eigen::VectorXd out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = std::pow(r, weights.weight(j));
  return out;
}

Eigen::MatrixXd weighted_jacobian_x(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                                    std::span<const double> u) {
  if (weights.size() != germ.num_vars()) throw DimensionError("weight count does not match germ");
  Eigen::MatrixXd j = germ.jacobian_x(u);
  if (frame == Frame::singular) j = j * frame_factors(weights, frame, germ.n(), u).asDiagonal();
  return j;
}

double KuoVectors::pseudo_distance() const {
  if (degenerate || normal_norms.size() == 0) return 0.0;
  return normal_norms.minCoeff();
}

KuoVectors kuo_vectors(const Eigen::MatrixXd& gradients) {
  KuoVectors kv;
  kv.gradients = gradients;
  const Eigen::Index p = gradients.rows();
  kv.gram = gradients * gradients.transpose();
  kv.cofactors = cofactor_matrix(kv.gram);
  kv.determinant = kv.gram.determinant();
  const double scale = kv.gram.diagonal().prod();
  kv.degenerate = !(scale > 0.0) || !(kv.determinant > kDegenerateTol * scale);
  for (Eigen::Index j = 0; j < p && !kv.degenerate; ++j)
    if (!(kv.cofactors(j, j) > 0.0)) kv.degenerate = true;
  kv.normals = Eigen::MatrixXd::Zero(p, gradients.cols());
  kv.normal_norms = Eigen::VectorXd::Zero(p);
  if (kv.degenerate) return kv;
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i)
      kv.normals.row(j) += (kv.cofactors(j, i) / kv.cofactors(j, j)) * gradients.row(i);
    kv.normal_norms[j] = kv.normals.row(j).norm();
  }
  return kv;
}

KuoVectors kuo_vectors(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                       std::span<const double> u) {
  return kuo_vectors(weighted_jacobian_x(germ, weights, frame, u));
}

double kuo_pseudo_distance(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                           std::span<const double> u) {
  return kuo_vectors(germ, weights, frame, u).pseudo_distance();
}

KuoCertificate check_kuo_condition(const MapGerm& germ, const SigmaSet& sigma,
                                   const WeightSystem& weights, double r, double delta,
                                   const HornSpec& horn, std::size_t n, std::uint64_t seed,
                                   const KuoOptions& options) {
  KuoCertificate cert;
  cert.r = r;
  cert.delta = delta;
  cert.horn = horn;
  cert.horn.degree = r;
  cert.frame = options.frame.value_or(natural_frame(weights));

  const auto set = sample_horn(germ, cert.horn, sigma, weights, n, seed, options.sampling);
  cert.samples = set.samples.size();
  cert.proposals = set.proposals;
  cert.acceptance_ratio = set.acceptance_ratio;
  if (set.diagnostic) cert.note = *set.diagnostic;
  if (set.samples.empty()) {
    cert.verdict = Verdict::indeterminate;
    return cert;
  }

  std::vector<double> pd(set.samples.size());
  parallel_for(set.samples.size(), [&](std::size_t i) {
    pd[i] = kuo_pseudo_distance(germ, weights, cert.frame, as_span(set.samples[i].point));
  });

  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t fitted = 0;
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const double d = set.samples[i].distance;
    const double margin = pd[i] / std::pow(d, r - delta);
    if (margin < min_margin) {
      min_margin = margin;
      worst = i;
    }
    if (pd[i] > 0.0) {
      const double x = std::log(d);
      const double y = std::log(pd[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++fitted;
    }
  }
  cert.min_margin = min_margin;
  const double denom = static_cast<double>(fitted) * sxx - sx * sx;
  cert.fitted_exponent = fitted >= 2 && denom > 0.0
                             ? (static_cast<double>(fitted) * sxy - sx * sy) / denom
                             : std::numeric_limits<double>::quiet_NaN();
  const auto& ws = set.samples[worst];
  cert.witness = KuoWitness{ws.point, ws.distance, pd[worst], min_margin};
  const bool slope_ok = std::isfinite(cert.fitted_exponent) &&
                        cert.fitted_exponent >= r - delta - options.slope_slack;
  cert.verdict = (min_margin >= options.c_min && slope_ok) ? Verdict::holds_empirically
                                                            : Verdict::fails_with_witness;
  return cert;
}

namespace {

// sigma_min(d_x G) over the pre-cancellation size of the Jacobian entries.
double relative_singular_value(const MapGerm& germ, std::span<const double> u) {
  const Eigen::MatrixXd j = germ.jacobian_x(u);
  const double scale = germ.jacobian_x_magnitude(u).norm();
  if (scale == 0.0) return 0.0;
  return kappa(j) / scale;
}

}  // namespace

RankCheck check_rank_condition(const MapGerm& germ, const SigmaSet& sigma, double radius,
                               std::size_t n, std::uint64_t seed) {
  if (sigma.n() != germ.n()) throw DimensionError("check_rank_condition: sigma dimension mismatch");
  const std::size_t m = germ.num_vars();
  const double sigma_gap = 1e-6 * radius;
  RankCheck out;
  out.samples = n;

  auto euclid_gap = [&](const Eigen::VectorXd& u) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sigma.subspaces().size(); ++s) {
      double sum = 0.0;
      for (int j : sigma.normal_coordinates(s)) sum += u[j] * u[j];
      best = std::min(best, std::sqrt(sum));
    }
    return best;
  };
  auto admissible = [&](const Eigen::VectorXd& u) {
    return u.norm() < radius && euclid_gap(u) > sigma_gap;
  };

  std::vector<Eigen::VectorXd> points(n);
  std::vector<double> rel(n, std::numeric_limits<double>::infinity());
  parallel_for(n, [&](std::size_t i) {
    CounterRng rng(seed, i);
    Eigen::VectorXd v(m);
    for (auto& c : v) c = rng.normal();
    const double norm = v.norm();
    points[i] = norm == 0.0 ? v : Eigen::VectorXd(v * (radius * std::pow(rng.uniform(), 1.0 / m) / norm));
    if (admissible(points[i])) rel[i] = relative_singular_value(germ, as_span(points[i]));
  });

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rel[a] < rel[b]; });

  double best = n > 0 ? rel[order[0]] : std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_point = n > 0 ? points[order[0]] : Eigen::VectorXd();
  const std::size_t refine = std::min<std::size_t>(16, n);
  std::vector<detail::MinimizeResult> refined(refine);
  parallel_for(refine, [&](std::size_t k) {
    const auto& start = points[order[k]];
    if (!std::isfinite(rel[order[k]])) {
      refined[k] = {start, std::numeric_limits<double>::infinity(), 0};
      return;
    }
    refined[k] = detail::nelder_mead(
        [&](const Eigen::VectorXd& u) {
          if (!admissible(u)) return 1e300;
          return relative_singular_value(germ, as_span(u));
        },
        start, 0.05 * std::max(start.norm(), sigma_gap), 2000, 1e-16);
  });
  for (const auto& r : refined)
    if (r.value < best) {
      best = r.value;
      best_point = r.x;
    }
  out.min_relative_singular_value = best;
  out.full_rank = !(best <= kRankWitnessTol);
  if (!out.full_rank) out.witness = best_point;
  return out;
}

PerturbedMargin perturbed_margin(const MapGerm& f, const MapGerm& pert, double t,
                                 const WeightSystem& weights, Frame frame,
                                 std::span<const double> u) {
  if (!f.same_shape(pert)) throw DimensionError("perturbed_margin: germ shapes differ");
  const Eigen::MatrixXd df = weighted_jacobian_x(f, weights, frame, u);
  const Eigen::MatrixXd dp = weighted_jacobian_x(pert, weights, frame, u);
  PerturbedMargin out;
  out.base = kuo_vectors(df).pseudo_distance();
  out.perturbed = kuo_vectors(Eigen::MatrixXd(df + t * dp)).pseudo_distance();
  out.ratio = out.base > 0.0 ? out.perturbed / out.base : std::numeric_limits<double>::infinity();
  return out;
}

double pseudoinverse_identity_residual(const Eigen::MatrixXd& gradients) {
  const KuoVectors kv = kuo_vectors(gradients);
  if (kv.degenerate) throw RankDeficientError("degenerate Gram matrix", kappa(gradients));
  const Eigen::MatrixXd pinv = pseudo_inverse(gradients).matrix;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < gradients.rows(); ++j) {
    const double n2 = kv.normal_norms[j] * kv.normal_norms[j];
    const Eigen::VectorXd col = pinv.col(j);
    const Eigen::VectorXd nj = kv.normals.row(j).transpose() / n2;
    worst = std::max(worst, (nj - col).norm() / col.norm());
  }
  return worst;
}

double pseudoinverse_identity_check(const MapGerm& germ, const WeightSystem& weights, Frame frame,
                                    std::span<const double> u) {
  return pseudoinverse_identity_residual(weighted_jacobian_x(germ, weights, frame, u));
}

}  // namespace germflow
