#pragma once

#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "germflow/contact.hpp"
#include "germflow/flow.hpp"
#include "germflow/germ.hpp"
#include "germflow/horn.hpp"
#include "germflow/kuo.hpp"
#include "germflow/nd.hpp"
#include "germflow/verify/lemma_suite.hpp"

namespace germflow::cli {

using Json = nlohmann::json;

// Top-level keys are fixed; everything except timing is covered by the
// determinism contract.
struct Report {
  Json job = Json::object();
  Json verdicts = Json::object();
  Json certificates = Json::object();
  Json witnesses = Json::object();
  Json timing = Json::object();

  Json to_json() const;
  std::string dump() const;
  std::string deterministic_dump() const;
};

Json vector_json(const Eigen::VectorXd& v);
Json order_json(long order);

Json kuo_certificate_json(const KuoCertificate& cert);
Json kuo_witness_json(const KuoCertificate& cert);
Json nd_report_json(const NdReport& report);
Json bridge_json(const NdBridgeReport& report, BridgeConstant constant);
Json rank_json(const RankCheck& check);
Json perturbation_order_json(const PerturbationOrderReport& report);
Json equivariance_json(const EquivarianceCheck& check);
Json homeomorphism_json(const HomeomorphismReport& report, const HomotopyProblem& problem,
                        double residual_tol);
Json contact_json(const ContactReport& report);
Json field_bound_json(const FieldBound& bound);
Json grad_rho_json(const GradRhoBound& bound);
Json lojasiewicz_json(const LojasiewiczFit& fit);
Json suite_json(const verify::SuiteResult& result);

}  // namespace germflow::cli
