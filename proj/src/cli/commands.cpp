#include "germflow/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "germflow/contact.hpp"
#include "germflow/errors.hpp"
#include "germflow/flow.hpp"
#include "germflow/group.hpp"
#include "germflow/horn.hpp"
#include "germflow/kuo.hpp"
#include "germflow/nd.hpp"
#include "germflow/spec_format.hpp"
#include "germflow/verify/lemma_suite.hpp"

namespace germflow::cli {

Json JobConfig::to_json() const {
  return Json{{"command", command},
              {"spec", spec_path},
              {"pert", pert_path},
              {"r", r},
              {"delta", delta},
              {"width", width},
              {"radius", radius},
              {"d", d},
              {"samples", samples},
              {"seeds", seeds},
              {"contact_samples", contact_samples},
              {"field_samples", field_samples},
              {"seed", seed},
              {"frame", frame},
              {"c_min", c_min},
              {"slope_slack", slope_slack},
              {"residual_tol", residual_tol},
              {"round_trip_tol", round_trip_tol},
              {"envelope_slack", envelope_slack},
              {"nu", nu},
              {"epsilon", epsilon},
              {"nd_width", nd_width},
              {"bridge", bridge}};
}

namespace {

// A usage problem detected after parsing; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::stringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw UsageError("bad list entry '" + token + "'");
    out.push_back(v);
  }
  return out;
}

// Options of one subcommand keyed by their job-line name.
class Options {
 public:
  Options(CLI::App* app, JobConfig& job) : app_(app), job_(job) {}

  CLI::App* app() const { return app_; }

  void add_double(const std::string& key, double& field, const std::string& help) {
    options_[key] = app_->add_option(flag(key), field, help)->check(CLI::PositiveNumber);
    setters_[key] = [&field](const std::string& v) { field = std::stod(v); };
  }
  void add_count(const std::string& key, std::size_t& field, const std::string& help) {
    options_[key] = app_->add_option(flag(key), field, help)->check(CLI::PositiveNumber);
    setters_[key] = [&field](const std::string& v) { field = std::stoull(v); };
  }
  void add_int(const std::string& key, int& field, const std::string& help) {
    options_[key] = app_->add_option(flag(key), field, help)->check(CLI::NonNegativeNumber);
    setters_[key] = [&field](const std::string& v) { field = std::stoi(v); };
  }
  void add_seed() {
    options_["seed"] = app_->add_option("--seed", job_.seed, "random seed");
    setters_["seed"] = [this](const std::string& v) { job_.seed = std::stoull(v); };
  }
  void add_string(const std::string& key, std::string& field, const std::string& help) {
    options_[key] = app_->add_option(flag(key), field, help);
    setters_[key] = [&field](const std::string& v) { field = v; };
  }
  void add_choice(const std::string& key, std::string& field, std::vector<std::string> choices,
                  const std::string& help) {
    options_[key] = app_->add_option(flag(key), field, help)->check(CLI::IsMember(choices));
    setters_[key] = [&field, choices, key](const std::string& v) {
      if (std::find(choices.begin(), choices.end(), v) == choices.end())
        throw UsageError("job " + key + ": unknown value '" + v + "'");
      field = v;
    };
  }
  void add_list(const std::string& key, std::vector<double>& field, const std::string& help) {
    auto* opt = app_->add_option(flag(key), nu_text_, help + " (comma separated)");
    options_[key] = opt;
    setters_[key] = [&field](const std::string& v) { field = parse_list(v); };
    list_field_ = &field;
  }

  // Flags win; job lines fill whatever was not given on the command line.
  void resolve(const std::map<std::string, std::string>& job_lines) {
    if (list_field_ && !nu_text_.empty()) *list_field_ = parse_list(nu_text_);
    for (const auto& [key, value] : job_lines) {
      auto it = options_.find(key);
      if (it == options_.end() || it->second->count() > 0) continue;
      try {
        setters_.at(key)(value);
      } catch (const std::invalid_argument&) {
        throw UsageError("job " + key + ": bad value '" + value + "'");
      } catch (const std::out_of_range&) {
        throw UsageError("job " + key + ": value out of range '" + value + "'");
      }
    }
  }

 private:
  static std::string flag(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
  }

  CLI::App* app_;
  JobConfig& job_;
  std::map<std::string, CLI::Option*> options_;
  std::map<std::string, std::function<void(const std::string&)>> setters_;
  std::string nu_text_;
  std::vector<double>* list_field_ = nullptr;
};

std::optional<Frame> parse_frame(const std::string& name) {
  if (name == "singular") return Frame::singular;
  if (name == "euclidean") return Frame::euclidean;
  return std::nullopt;
}

HornSpec horn_of(const JobConfig& job) { return HornSpec{job.r, job.width, job.radius}; }

int degree_of(const JobConfig& job) {
  return job.d >= 0 ? job.d : static_cast<int>(std::lround(job.r));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void require_compatible(const GermSpec& spec, const GermSpec& pert) {
  if (!spec.germ.same_shape(pert.germ))
    throw DimensionError("perturbation dims differ from the germ");
  for (std::size_t i = 0; i < spec.weights.size(); ++i)
    if (spec.weights.weight(i) != pert.weights.weight(i))
      throw DimensionError("perturbation weights differ from the germ");
}

CommandResult check_kuo_command(const GermSpec& spec, const JobConfig& job) {
  CommandResult res;
  KuoOptions options;
  options.c_min = job.c_min;
  options.slope_slack = job.slope_slack;
  options.frame = parse_frame(job.frame);
  const KuoCertificate cert = check_kuo_condition(spec.germ, spec.sigma, spec.weights, job.r,
                                                  job.delta, horn_of(job), job.samples, job.seed,
                                                  options);
  res.report.verdicts["kuo"] = to_string(cert.verdict);
  res.report.certificates["kuo"] = kuo_certificate_json(cert);
  res.report.witnesses["kuo"] = kuo_witness_json(cert);
  res.exit_code = cert.holds() ? kExitOk : kExitVerdictFailed;
  res.summary = std::string("kuo ") + to_string(cert.verdict) + ", min margin " +
                fmt(cert.min_margin) + ", fitted exponent " + fmt(cert.fitted_exponent);
  return res;
}

CommandResult check_nd_command(const GermSpec& spec, const JobConfig& job) {
  if (job.nu.empty()) throw UsageError("check-nd needs --nu or a 'job nu' line");
  CommandResult res;
  const NdSpec nd{job.nu, job.epsilon, job.nd_width, job.radius};
  const BridgeConstant constant =
      job.bridge == "tight" ? BridgeConstant::tight : BridgeConstant::proof;
  const NdReport report = check_nd(spec.germ, nd, job.samples, job.seed);
  const NdBridgeReport bridge = nd_implies_kuo_check(spec.germ, nd, job.samples, job.seed, constant);
  res.report.verdicts["nd"] = to_string(report.verdict);
  res.report.verdicts["nd_implies_kuo"] = bridge.holds ? "holds" : "fails";
  res.report.certificates["nd"] = nd_report_json(report);
  res.report.certificates["nd_implies_kuo"] = bridge_json(bridge, constant);
  res.report.witnesses["nd"] = report.witness ? vector_json(*report.witness) : Json(nullptr);
  res.report.witnesses["nd_implies_kuo"] =
      bridge.witness ? vector_json(*bridge.witness) : Json(nullptr);
  const bool ok = report.verdict == Verdict::holds_empirically && bridge.holds;
  res.exit_code = ok ? kExitOk : kExitVerdictFailed;
  res.summary = std::string("nd ") + to_string(report.verdict) + ", min kappa " +
                fmt(report.min_kappa) + "; nd implies kuo " + (bridge.holds ? "holds" : "fails") +
                " (" + std::to_string(bridge.violations) + " violations)";
  return res;
}

CommandResult check_rank_command(const GermSpec& spec, const JobConfig& job) {
  CommandResult res;
  const RankCheck check = check_rank_condition(spec.germ, spec.sigma, job.radius, job.samples, job.seed);
  const char* verdict = to_string(check.full_rank ? Verdict::holds_empirically : Verdict::fails_with_witness);
  res.report.verdicts["rank"] = verdict;
  res.report.certificates["rank"] = rank_json(check);
  res.report.witnesses["rank"] = check.witness ? vector_json(*check.witness) : Json(nullptr);
  res.exit_code = check.full_rank ? kExitOk : kExitVerdictFailed;
  res.summary = std::string("rank ") + verdict + ", min relative singular value " +
                fmt(check.min_relative_singular_value);
  return res;
}

// Order and symmetry of the perturbation; shared by check-perturbation and
// verify-equivalence.
bool admissibility(const GermSpec& spec, const GermSpec& pert, const JobConfig& job,
                   CommandResult& res) {
  require_compatible(spec, pert);
  const PerturbationOrderReport order =
      perturbation_order(pert.germ, spec.sigma, spec.weights, degree_of(job));
  res.report.verdicts["perturbation_order"] = order.passes() ? "admissible" : "rejected";
  res.report.certificates["perturbation_order"] = perturbation_order_json(order);
  res.summary = order.summary();
  if (!order.passes()) {
    for (const auto& e : order.entries)
      if (!e.value_pass || !e.derivative_pass) {
        res.report.witnesses["perturbation_order"] = {{"component", e.component + 1},
                                                      {"subspace", e.subspace}};
        break;
      }
    return false;
  }
  const EquivarianceCheck eq = check_equivariance(pert.germ, spec.group, 1000, job.seed);
  res.report.verdicts["equivariance"] = eq.holds ? "holds" : "fails";
  res.report.certificates["equivariance"] = equivariance_json(eq);
  if (!eq.holds) {
    res.report.witnesses["equivariance"] = {{"point", vector_json(eq.witness)},
                                            {"element", eq.element}};
    res.summary += "; perturbation is not equivariant";
    return false;
  }
  return true;
}

CommandResult check_perturbation_command(const GermSpec& spec, const GermSpec& pert,
                                         const JobConfig& job) {
  CommandResult res;
  res.exit_code = admissibility(spec, pert, job, res) ? kExitOk : kExitVerdictFailed;
  return res;
}

std::vector<FlowTrace> forward_traces(const HomeomorphismReport& report) {
  std::vector<FlowTrace> traces;
  traces.reserve(report.samples.size());
  for (const auto& s : report.samples) traces.push_back(s.forward);
  return traces;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  body(out);
}

void write_flow_outputs(const HomotopyProblem& problem, const HomeomorphismReport& report,
                        const JobConfig& job) {
  if (!job.trace_path.empty())
    write_file(job.trace_path, [&](std::ostream& out) {
      write_trace_csv(out, problem.n() + problem.l(), forward_traces(report));
    });
  if (!job.plot_path.empty())
    write_file(job.plot_path, [&](std::ostream& out) { emit_plot_data(out, problem, report); });
}

// Fraction of seeds whose image lands on the perturbed zero set.
bool homeomorphism_ok(const Json& cert) {
  return cert["failures"] == 0 && cert["sigma_fixed"] == true &&
         cert["lambda_preserved"] == true && cert["samples"].get<std::size_t>() > 0 &&
         cert["endpoint_fraction"].get<double>() >= 0.99 &&
         cert["max_round_trip"].get<double>() <= cert["round_trip_tol"].get<double>();
}

Json worst_round_trip(const HomeomorphismReport& report) {
  const HomeomorphismSample* worst = nullptr;
  for (const auto& s : report.samples) {
    if (!s.ok) return Json{{"point", vector_json(s.u)}, {"failure", s.failure}};
    if (!worst || s.round_trip_error > worst->round_trip_error) worst = &s;
  }
  if (!worst) return nullptr;
  return Json{{"point", vector_json(worst->u)}, {"round_trip_error", worst->round_trip_error}};
}

CommandResult flow_command(const GermSpec& spec, const std::optional<GermSpec>& pert,
                           const JobConfig& job) {
  CommandResult res;
  if (pert) require_compatible(spec, *pert);
  MapGerm p = pert ? pert->germ : MapGerm::zero(spec.germ.n(), spec.germ.l(), spec.germ.p());
  const HomotopyProblem problem(spec.germ, std::move(p), spec.weights, spec.sigma, horn_of(job),
                                spec.group, parse_frame(job.frame));
  const auto seeds =
      zero_set_seeds(spec.germ, spec.sigma, spec.weights, job.radius, job.seeds, job.seed);
  const HomeomorphismReport report = build_homeomorphism(problem, seeds, job.round_trip_tol);
  const Json cert = homeomorphism_json(report, problem, job.residual_tol);
  const bool ok = homeomorphism_ok(cert);
  res.report.verdicts["flow"] = ok ? "succeeded" : "failed";
  res.report.certificates["flow"] = cert;
  res.report.witnesses["flow"] = worst_round_trip(report);
  write_flow_outputs(problem, report, job);
  res.exit_code = ok ? kExitOk : kExitVerdictFailed;
  res.summary = std::string("flow ") + (ok ? "succeeded" : "failed") + " on " +
                std::to_string(seeds.size()) + " seeds, max round trip " +
                fmt(report.max_round_trip);
  return res;
}

CommandResult verify_equivalence_command(const GermSpec& spec, const GermSpec& pert,
                                         const JobConfig& job) {
  CommandResult res;
  res.exit_code = kExitVerdictFailed;
  if (!admissibility(spec, pert, job, res)) return res;

  KuoOptions options;
  options.c_min = job.c_min;
  options.slope_slack = job.slope_slack;
  options.frame = parse_frame(job.frame);
  const KuoCertificate cert = check_kuo_condition(spec.germ, spec.sigma, spec.weights, job.r,
                                                  job.delta, horn_of(job), job.samples, job.seed,
                                                  options);
  res.report.verdicts["kuo"] = to_string(cert.verdict);
  res.report.certificates["kuo"] = kuo_certificate_json(cert);
  res.report.witnesses["kuo"] = kuo_witness_json(cert);
  if (!cert.holds()) {
    res.summary = std::string("kuo ") + to_string(cert.verdict);
    return res;
  }

  const HomotopyProblem problem(spec.germ, pert.germ, spec.weights, spec.sigma, horn_of(job),
                                spec.group, parse_frame(job.frame));

  const FieldBound field = field_bound_sweep(problem, job.field_samples, job.seed);
  const GradRhoBound grad = grad_rho_bound_check(spec.weights, job.field_samples, job.seed);
  res.report.verdicts["field_bound"] = field.finite ? "finite" : "unbounded";
  res.report.certificates["field_bound"] = field_bound_json(field);
  res.report.witnesses["field_bound"] = {{"point", vector_json(field.witness)},
                                         {"t", field.witness_t}};
  res.report.certificates["grad_rho"] = grad_rho_json(grad);

  const auto seeds =
      zero_set_seeds(spec.germ, spec.sigma, spec.weights, job.radius, job.seeds, job.seed);
  const HomeomorphismReport homeo = build_homeomorphism(problem, seeds, job.round_trip_tol);
  const Json homeo_cert = homeomorphism_json(homeo, problem, job.residual_tol);
  const bool homeo_ok = homeomorphism_ok(homeo_cert);
  res.report.verdicts["homeomorphism"] = homeo_ok ? "succeeded" : "failed";
  res.report.certificates["homeomorphism"] = homeo_cert;
  res.report.witnesses["homeomorphism"] = worst_round_trip(homeo);
  write_flow_outputs(problem, homeo, job);

  const HornSampleSet horn_samples = sample_horn(spec.germ, horn_of(job), spec.sigma, spec.weights,
                                                 job.contact_samples, job.seed + 1);
  std::vector<Eigen::VectorXd> points;
  for (const auto& s : horn_samples.samples) points.push_back(s.point);
  const HomeomorphismReport contact_flows = build_homeomorphism(problem, points, job.round_trip_tol);
  ContactOptions contact_options;
  contact_options.beta = job.width / 4.0;
  contact_options.residual_tol = job.residual_tol;
  const ContactReport contact = verify_contact_identity(problem, contact_flows, contact_options);
  res.report.verdicts["contact"] = contact.passed() ? "holds" : "fails";
  res.report.certificates["contact"] = contact_json(contact);
  res.report.witnesses["contact"] =
      contact.worst_index ? vector_json(contact_flows.samples[*contact.worst_index].u) : Json(nullptr);

  const double cl = field.sup * grad.lipschitz;
  std::size_t traces = 0;
  std::size_t envelope_failures = 0;
  double worst_excursion = 0.0;
  Json envelope_witness = nullptr;
  for (const auto* report : {&homeo, &contact_flows})
    for (const auto& s : report->samples) {
      if (!s.forward.success()) continue;
      ++traces;
      const EnvelopeCheck e = distance_monitor(s.forward, cl, job.envelope_slack);
      worst_excursion = std::max(worst_excursion, e.max_violation);
      if (!e.holds) {
        if (envelope_failures++ == 0) envelope_witness = vector_json(s.u);
      }
    }
  const bool envelope_ok = field.finite && grad.finite && envelope_failures == 0 && traces > 0;
  res.report.verdicts["envelope"] = envelope_ok ? "holds" : "fails";
  res.report.certificates["envelope"] = {{"cl", cl},
                                         {"slack", job.envelope_slack},
                                         {"traces", traces},
                                         {"failures", envelope_failures},
                                         {"max_violation", worst_excursion}};
  res.report.witnesses["envelope"] = envelope_witness;

  const bool ok = field.finite && homeo_ok && contact.passed() && envelope_ok;
  res.report.verdicts["equivalence"] = ok ? "realized" : "not-realized";
  res.exit_code = ok ? kExitOk : kExitVerdictFailed;
  res.summary += std::string("; equivalence ") + (ok ? "realized" : "not realized") +
                 ", max round trip " + fmt(homeo.max_round_trip) + ", contact residual " +
                 fmt(contact.max_residual);
  return res;
}

CommandResult verify_lemmas_command(const std::optional<GermSpec>& spec, const JobConfig& job) {
  CommandResult res;
  bool ok = true;
  Json suites = Json::array();
  std::size_t failed = 0;
  for (const auto& suite : verify::run_lemma_suites(job.seed)) {
    suites.push_back(suite_json(suite));
    if (!suite.passed()) {
      ok = false;
      ++failed;
    }
  }
  res.report.verdicts["lemmas"] = ok ? "holds" : "fails";
  res.report.certificates["lemmas"] = suites;
  if (spec) {
    const GradRhoBound grad = grad_rho_bound_check(spec->weights, job.samples, job.seed);
    const LojasiewiczFit fit = lojasiewicz_estimate(spec->weights, job.samples, job.seed);
    res.report.verdicts["grad_rho_bound"] = grad.finite ? "finite" : "unbounded";
    res.report.certificates["grad_rho_bound"] = grad_rho_json(grad);
    res.report.verdicts["lojasiewicz"] = fit.pass ? "holds" : "fails";
    res.report.certificates["lojasiewicz"] = lojasiewicz_json(fit);
    ok = ok && grad.finite && fit.pass;
  }
  res.exit_code = ok ? kExitOk : kExitVerdictFailed;
  res.summary = std::string("lemmas ") + (ok ? "hold" : "fail") + " (" + std::to_string(failed) +
                " failing suites)";
  return res;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  JobConfig job;
  CLI::App app{"Kuo nondegeneracy checks and controlled-flow equivalence for polynomial germs",
               "germflow"};
  app.require_subcommand(1);

  std::deque<Options> registered;
  auto command = [&](const std::string& name, const std::string& help, bool spec_required) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* spec_opt = sub->add_option("--spec", job.spec_path, "germ spec file");
    if (spec_required) spec_opt->required();
    sub->add_option("--report", job.report_path, "write the JSON report here instead of stdout");
    registered.emplace_back(sub, job);
    registered.back().add_seed();
    return &registered.back();
  };
  auto horn_options = [&](Options* o) {
    o->add_double("r", job.r, "horn degree r");
    o->add_double("width", job.width, "horn width");
    o->add_double("radius", job.radius, "ball radius");
  };
  auto kuo_options = [&](Options* o) {
    o->add_double("delta", job.delta, "exponent loss delta");
    o->add_count("samples", job.samples, "horn samples");
    o->add_choice("frame", job.frame, {"auto", "singular", "euclidean"}, "gradient frame");
    o->add_double("c_min", job.c_min, "margin floor");
    o->add_double("slope_slack", job.slope_slack, "slack on the fitted exponent");
  };
  auto flow_options = [&](Options* o) {
    o->add_count("seeds", job.seeds, "zero-set seeds to flow");
    o->add_double("residual_tol", job.residual_tol, "endpoint and contact residual tolerance");
    o->add_double("round_trip_tol", job.round_trip_tol, "round-trip tolerance");
    o->add_string("trace_out", job.trace_path, "trajectory CSV");
    o->add_string("plot_out", job.plot_path, "zero-set overlay CSV");
  };

  Options* kuo = command("check-kuo", "sample the horn and certify the Kuo condition", true);
  horn_options(kuo);
  kuo_options(kuo);

  Options* nd = command("check-nd", "nondegeneracy of order nu and its Kuo consequence", true);
  nd->add_list("nu", job.nu, "orders nu_i");
  nd->add_double("epsilon", job.epsilon, "kappa floor");
  nd->add_double("nd_width", job.nd_width, "nu-horn width");
  nd->add_double("radius", job.radius, "ball radius");
  nd->add_count("samples", job.samples, "horn samples");
  nd->add_choice("bridge", job.bridge, {"proof", "tight"}, "constant of the implied inequality");

  Options* rank = command("check-rank", "rank of d_x f off Sigma", true);
  rank->add_double("radius", job.radius, "ball radius");
  rank->add_count("samples", job.samples, "samples");

  Options* order = command("check-perturbation", "weighted order and symmetry of a perturbation", true);
  order->app()->add_option("--pert", job.pert_path, "perturbation spec file")->required();
  order->add_double("r", job.r, "horn degree r");
  order->add_int("d", job.d, "degree d (defaults to r)");

  Options* flow = command("flow", "flow zero-set seeds of f to f + p", true);
  flow->app()->add_option("--pert", job.pert_path, "perturbation spec file (zero when omitted)");
  horn_options(flow);
  flow->add_choice("frame", job.frame, {"auto", "singular", "euclidean"}, "gradient frame");
  flow_options(flow);

  Options* equiv = command("verify-equivalence", "full pipeline from f to f + p", true);
  equiv->app()->add_option("--pert", job.pert_path, "perturbation spec file")->required();
  horn_options(equiv);
  kuo_options(equiv);
  flow_options(equiv);
  equiv->add_int("d", job.d, "degree d (defaults to r)");
  equiv->add_count("contact_samples", job.contact_samples, "horn samples for the contact check");
  equiv->add_count("field_samples", job.field_samples, "samples for the field and gradient bounds");
  equiv->add_double("envelope_slack", job.envelope_slack, "slack on the distance envelope");

  Options* lemmas = command("verify-lemmas", "randomized linear-algebra suites", false);
  lemmas->add_count("samples", job.samples, "samples for the weight checks");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Options* active = nullptr;
  for (auto& o : registered)
    if (o.app()->parsed()) active = &o;
  job.command = active->app()->get_name();

  std::optional<GermSpec> spec;
  std::optional<GermSpec> pert;
  try {
    if (!job.spec_path.empty()) spec = load_germ_spec(job.spec_path);
    if (!job.pert_path.empty()) pert = load_germ_spec(job.pert_path);
    active->resolve(spec ? spec->job : std::map<std::string, std::string>{});
  } catch (const std::exception& e) {
    err << "germflow " << job.command << ": " << e.what() << "\n";
    return kExitUsage;
  }

  CommandResult result;
  try {
    if (job.command == "check-kuo") result = check_kuo_command(*spec, job);
    else if (job.command == "check-nd") result = check_nd_command(*spec, job);
    else if (job.command == "check-rank") result = check_rank_command(*spec, job);
    else if (job.command == "check-perturbation") result = check_perturbation_command(*spec, *pert, job);
    else if (job.command == "flow") result = flow_command(*spec, pert, job);
    else if (job.command == "verify-equivalence") result = verify_equivalence_command(*spec, *pert, job);
    else result = verify_lemmas_command(spec, job);
  } catch (const DimensionError& e) {
    err << "germflow " << job.command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "germflow " << job.command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // Invalid problems (for example a non-equivariant perturbation) are verdict failures.
    err << "germflow " << job.command << ": " << e.what() << "\n";
    return kExitVerdictFailed;
  }

  result.report.job = job.to_json();
  result.report.timing["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (job.report_path.empty()) {
    out << result.report.dump();
  } else {
    std::ofstream file(job.report_path);
    if (!file) {
      err << "germflow: cannot write '" << job.report_path << "'\n";
      return kExitUsage;
    }
    file << result.report.dump();
    out << job.command << ": " << result.summary << "\n";
  }
  return result.exit_code;
}

}  // namespace germflow::cli
