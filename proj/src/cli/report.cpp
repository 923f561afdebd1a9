#include "germflow/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "germflow/group.hpp"

namespace germflow::cli {

Json Report::to_json() const {
  return Json{{"job", job},
              {"verdicts", verdicts},
              {"certificates", certificates},
              {"witnesses", witnesses},
              {"timing", timing}};
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

std::string Report::deterministic_dump() const {
  Json j = to_json();
  j.erase("timing");
  return j.dump(2) + "\n";
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json order_json(long order) {
  if (order == kInfiniteOrder) return "inf";
  return order;
}

Json kuo_certificate_json(const KuoCertificate& cert) {
  return Json{{"r", cert.r},
              {"delta", cert.delta},
              {"horn", {{"degree", cert.horn.degree}, {"width", cert.horn.width},
                        {"radius", cert.horn.radius}}},
              {"frame", to_string(cert.frame)},
              {"samples", cert.samples},
              {"proposals", cert.proposals},
              {"acceptance_ratio", cert.acceptance_ratio},
              {"min_margin", cert.min_margin},
              {"fitted_exponent", cert.fitted_exponent},
              {"note", cert.note}};
}

Json kuo_witness_json(const KuoCertificate& cert) {
  if (!cert.witness) return nullptr;
  const KuoWitness& w = *cert.witness;
  return Json{{"point", vector_json(w.point)},
              {"distance", w.distance},
              {"pseudo_distance", w.pseudo_distance},
              {"margin", w.margin}};
}

Json nd_report_json(const NdReport& report) {
  return Json{{"nu", report.spec.nu},
              {"epsilon", report.spec.epsilon},
              {"width", report.spec.width},
              {"radius", report.spec.radius},
              {"samples", report.samples},
              {"proposals", report.proposals},
              {"min_kappa", report.min_kappa},
              {"min_kappa_uniform", report.min_kappa_uniform},
              {"verdict_uniform", to_string(report.verdict_uniform)}};
}

Json bridge_json(const NdBridgeReport& report, BridgeConstant constant) {
  return Json{{"constant_kind", to_string(constant)},
              {"constant", report.constant},
              {"horn_samples", report.horn_samples},
              {"checked", report.checked},
              {"premise_failures", report.premise_failures},
              {"violations", report.violations},
              {"premise_violations", report.premise_violations},
              {"worst_ratio", report.worst_ratio},
              {"premise_holds", report.premise_holds}};
}

Json rank_json(const RankCheck& check) {
  return Json{{"samples", check.samples},
              {"min_relative_singular_value", check.min_relative_singular_value}};
}

Json perturbation_order_json(const PerturbationOrderReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries)
    entries.push_back(Json{{"component", e.component + 1},
                           {"subspace", e.subspace},
                           {"value_order", order_json(e.value_order)},
                           {"derivative_order", order_json(e.derivative_order)},
                           {"value_pass", e.value_pass},
                           {"derivative_pass", e.derivative_pass}});
  return Json{{"d", report.d},
              {"max_weight", report.max_weight},
              {"value_threshold", report.value_threshold},
              {"derivative_threshold", report.derivative_threshold},
              {"min_value_order", order_json(report.min_value_order())},
              {"min_derivative_order", order_json(report.min_derivative_order())},
              {"entries", entries},
              {"summary", report.summary()}};
}

Json equivariance_json(const EquivarianceCheck& check) {
  return Json{{"holds", check.holds}, {"worst_residual", check.worst_residual}};
}

Json homeomorphism_json(const HomeomorphismReport& report, const HomotopyProblem& problem,
                        double residual_tol) {
  std::size_t within = 0;
  double worst_residual = 0.0;
  std::map<std::string, std::size_t> reasons;
  for (const auto& s : report.samples) {
    if (!s.ok) {
      ++reasons[s.failure];
      continue;
    }
    const double residual = problem.value(as_span(s.phi), 1.0).norm();
    worst_residual = std::max(worst_residual, residual);
    if (residual <= residual_tol) ++within;
  }
  const double fraction =
      report.samples.empty() ? 0.0 : static_cast<double>(within) / report.samples.size();
  return Json{{"samples", report.samples.size()},
              {"failures", report.failures},
              {"failure_reasons", reasons},
              {"max_round_trip", report.max_round_trip},
              {"round_trip_tol", report.round_trip_tol},
              {"max_endpoint_residual", worst_residual},
              {"endpoint_residual_tol", residual_tol},
              {"endpoint_fraction", fraction},
              {"sigma_fixed", report.sigma_fixed},
              {"lambda_preserved", report.lambda_preserved},
              {"equivariance_residual", report.equivariance_residual}};
}

Json contact_json(const ContactReport& report) {
  return Json{{"samples", report.samples.size()},
              {"max_residual", report.max_residual},
              {"residual_tol", report.residual_tol},
              {"max_theta_norm", report.max_theta_norm},
              {"beta_horn_samples", report.beta_horn_samples},
              {"theta_zero_violations", report.theta_zero_violations},
              {"tau_failures", report.tau_failures},
              {"max_drift_residual", report.max_drift_residual},
              {"drift_ok", report.drift_ok},
              {"decay_rays", report.decay_rays},
              {"decay_ok", report.decay_ok}};
}

Json field_bound_json(const FieldBound& bound) {
  return Json{{"sup", bound.sup}, {"samples", bound.samples}, {"finite", bound.finite}};
}

Json grad_rho_json(const GradRhoBound& bound) {
  return Json{{"max_per_coordinate", bound.max_per_coordinate},
              {"max_value", bound.max_value},
              {"lipschitz", bound.lipschitz},
              {"samples", bound.samples},
              {"finite", bound.finite}};
}

Json lojasiewicz_json(const LojasiewiczFit& fit) {
  return Json{{"c", fit.c}, {"exponent", fit.exponent}, {"samples", fit.samples},
              {"pass", fit.pass}};
}

Json suite_json(const verify::SuiteResult& result) {
  return Json{{"name", result.name},
              {"instances", result.instances},
              {"failures", result.failures},
              {"worst", result.worst},
              {"tolerance", result.tolerance}};
}

}  // namespace germflow::cli
