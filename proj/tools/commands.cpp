#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>
#include <thread>

#include "qcrb/errors.hpp"
#include "qcrb/json_io.hpp"

#ifndef QCRB_VERSION
#define QCRB_VERSION "0.0.0"
#endif

namespace qcrb::cli {

namespace {

using json_io::to_json;

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParameter,
                  std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

std::optional<DerivativeScheme> parse_scheme(const Options& o) {
  if (o.scheme == "auto") return std::nullopt;
  if (o.scheme == "analytic") return DerivativeScheme::analytic();
  if (o.scheme == "central") return DerivativeScheme::central(o.fd_step);
  if (o.scheme == "richardson") return DerivativeScheme::richardson(o.fd_step);
  throw Error(ErrorCode::InvalidParameter, "unknown derivative scheme '" + o.scheme + "'");
}

POVM povm_for(const Analysis& a, const Options& o);

json header(const Analysis& a, const Options& o) {
  json model;
  if (a.fixture) {
    model = {{"source", "registry"}, {"name", a.fixture->model.name}, {"params", a.fixture->params}};
  } else {
    model = {{"source", "numeric"}, {"path", o.numeric_model}};
  }
  return {{"version", json_io::kReportVersion},
          {"tool_version", version()},
          {"model", model},
          {"theta", to_json(a.sp.theta)},
          {"scheme", {{"kind", to_string(a.sp.scheme.kind)}, {"step", a.sp.scheme.step}}},
          {"tolerances",
           {{"rank_tol", o.rank_tol},
            {"cond_tol", a.tol},
            {"sld_tol", a.tol},
            {"prob_tol", DistributionOptions{}.prob_tol},
            {"deriv_tol", DistributionOptions{}.deriv_tol}}},
          {"seed", o.seed}};
}

DistributionOptions distribution_options(const Analysis& a) {
  DistributionOptions d;
  d.collinear_tol = a.tol;
  return d;
}

std::optional<RealMatrix> cost_matrix(const Options& o) {
  if (o.cost_matrix.empty()) return std::nullopt;
  return json_io::real_matrix_from_json(json_io::load_file(o.cost_matrix), "cost matrix");
}

void require_certified(const Analysis& a) {
  if (a.conditions.verdict == Verdict::saturable_certified) return;
  std::ostringstream msg;
  msg << "refusing to construct an optimal POVM: verdict is "
      << to_string(a.conditions.verdict);
  for (const auto& r : a.conditions.reasoning) msg << "; " << r;
  throw Error(ErrorCode::NotCertified, msg.str());
}

ConstructedPOVM construct(const Analysis& a) {
  require_certified(a);
  std::optional<ComplexMatrix> W;
  if (a.dec.r_zero > 0) {
    if (a.conditions.cond4.status != Certification::certified_yes || !a.conditions.cond4.W) {
      throw Error(ErrorCode::NotCertified,
                  "saturability was certified without a condition 4 rotation W; supply the "
                  "null POVM with --povm instead");
    }
    W = a.conditions.cond4.W;
  }
  return construct_optimal(a.dec, a.slds, W, a.tol, a.conditions.seed);
}

POVM povm_for(const Analysis& a, const Options& o) {
  if (a.supplied_povm) return *a.supplied_povm;
  (void)o;
  return construct(a).povm;
}

json fisher_section(Analysis& a, const Options& o, POVM povm, MeasurementDistribution* out) {
  require_valid(povm, 1e-8);
  auto dist = outcome_distribution(a.sp.rho, a.sp.drho, a.slds, povm, distribution_options(a));
  const RealMatrix fc = classical_fim(dist);
  const auto comparison = compare(fc, a.F_Q, cost_matrix(o), a.tol);
  const auto cert = verify_saturation_structural(povm, a.sp.rho, a.dec, a.slds, a.tol);
  json j = {{"povm", json_io::povm_to_json(povm)},
            {"certificate", to_json(cert)},
            {"distribution", to_json(dist)},
            {"comparison", to_json(comparison)}};
  if (dist.has_irregular()) {
    j["notice"] = "some null outcomes have direction-dependent Fisher limits and contribute 0";
  }
  if (out) *out = std::move(dist);
  return j;
}

struct GridAxis {
  double lo;
  double hi;
  int n;
};

std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c)) {
      throw Error(ErrorCode::InvalidParameter, "grid axis must be lo:hi:n, got '" + item + "'");
    }
    try {
      GridAxis axis{std::stod(a), std::stod(b), std::stoi(c)};
      if (axis.n < 1) throw std::invalid_argument(c);
      axes.push_back(axis);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParameter, "cannot parse grid axis '" + item + "'");
    }
  }
  if (axes.empty()) throw Error(ErrorCode::InvalidParameter, "empty grid");
  return axes;
}

std::string theta_text(const std::vector<double>& t) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  return os.str();
}

}  // namespace

std::string version() { return QCRB_VERSION; }

Analysis analyze(const Options& o) {
  Analysis a;
  if (!o.numeric_model.empty()) {
    if (!o.model.empty()) {
      throw Error(ErrorCode::InvalidParameter, "--model and --numeric-model are exclusive");
    }
    a.sp = json_io::parse_numeric_model(json_io::load_file(o.numeric_model));
  } else {
    if (o.model.empty()) throw Error(ErrorCode::InvalidParameter, "--model or --numeric-model is required");
    a.fixture = fixtures::get(o.model, fixtures::parse_params(o.params));
    RealVector theta = a.fixture->default_theta;
    if (!o.theta.empty()) {
      const auto values = parse_list(o.theta, "theta");
      theta = Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
    a.sp = evaluate(a.fixture->model, theta, parse_scheme(o));
  }
  a.tol = o.cond_tol.value_or(default_tolerance(a.sp.scheme));

  DecompositionOptions dopts;
  dopts.rank_tol = o.rank_tol;
  dopts.deriv_tol = a.tol;
  a.dec = support_decomposition(a.sp, dopts);
  a.slds = compute_sld(a.dec, a.sp.rho, a.sp.drho, a.tol);
  a.F_Q = qfim(a.dec, a.slds);
  a.conditions = evaluate_conditions(a.sp.rho, a.dec, a.slds, {a.tol, o.seed});

  if (!o.povm.empty()) {
    a.supplied_povm = json_io::parse_povm(json_io::load_file(o.povm));
    if (a.supplied_povm->dimension() != a.sp.dimension()) {
      throw Error(ErrorCode::ShapeMismatch, "POVM dimension differs from the state dimension");
    }
    classify_elements(*a.supplied_povm, a.sp.rho, a.dec);
  }

  if (a.fixture && a.fixture->model.has_support_basis()) {
    std::vector<ComplexMatrix> null_povm;
    if (a.conditions.cond4.W && a.dec.r_zero > 0) {
      null_povm = null_elements_from_W(a.dec, *a.conditions.cond4.W);
    } else if (a.supplied_povm) {
      for (int k = 0; k < a.supplied_povm->size(); ++k) {
        if (a.supplied_povm->kinds[k] == ElementKind::null) {
          null_povm.push_back(a.supplied_povm->elements[k]);
        }
      }
    }
    std::optional<Cond2PrimeWitness> witness;
    if (!o.no_witness) witness = a.fixture->witness;
    attach_condition2prime(a.conditions,
                           verify_condition2prime(a.fixture->model, a.sp.theta, a.dec, a.slds,
                                                  witness, null_povm, {a.tol, o.fd_step}));
  }

  a.report = header(a, o);
  a.report["decomposition"] = to_json(a.dec);
  a.report["qfim"] = to_json(a.F_Q);
  a.report["sld_residuals"] = a.slds.residuals;
  a.report["conditions"] = to_json(a.conditions);
  a.report["verdict"] = to_string(a.conditions.verdict);
  return a;
}

json cmd_analyze(const Options& o) { return analyze(o).report; }

json cmd_construct_povm(const Options& o) {
  Analysis a = analyze(o);
  auto built = construct(a);
  const auto cert = verify_saturation_structural(built.povm, a.sp.rho, a.dec, a.slds, a.tol);
  json povm = json_io::povm_to_json(built.povm);
  if (!o.povm_out.empty()) json_io::save_file(o.povm_out, povm);
  json labels = json::array();
  for (const auto& l : built.spectrum.labels) labels.push_back(l);
  a.report["povm"] = povm;
  a.report["joint_eigenvalue_labels"] = labels;
  a.report["certificate"] = to_json(cert);
  return a.report;
}

json cmd_fisher(const Options& o) {
  Analysis a = analyze(o);
  a.report["fisher"] = fisher_section(a, o, povm_for(a, o), nullptr);
  return a.report;
}

json cmd_simulate(const Options& o) {
  if (!o.numeric_model.empty()) {
    throw Error(ErrorCode::MonteCarloDisabled,
                "Monte Carlo needs a parameterized model; numeric models describe a single point");
  }
  Analysis a = analyze(o);
  POVM povm = povm_for(a, o);
  MeasurementDistribution dist;
  a.report["fisher"] = fisher_section(a, o, povm, &dist);
  auto record = monte_carlo(dist, o.trials, o.seed);
  if (o.estimator_reps > 0) {
    record.estimator = estimator_study(a.fixture->model, povm, a.sp.theta, o.estimator_reps,
                                       o.estimator_shots, o.seed);
  }
  a.report["monte_carlo"] = to_json(record);
  return a.report;
}

json cmd_sweep(const Options& o) {
  if (!o.numeric_model.empty()) {
    throw Error(ErrorCode::InvalidParameter, "sweep needs a registry model");
  }
  const auto axes = parse_grid(o.grid);
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : points) {
      for (int i = 0; i < axis.n; ++i) {
        auto p = prefix;
        p.push_back(axis.n == 1 ? axis.lo : axis.lo + (axis.hi - axis.lo) * i / (axis.n - 1));
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }

  std::vector<json> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      Options point = o;
      point.theta = theta_text(points[i]);
      try {
        results[i] = cmd_analyze(point);
      } catch (const std::exception& e) {
        results[i] = error_json(e);
        results[i]["theta"] = points[i];
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(
      o.threads > 0 ? static_cast<unsigned>(o.threads) : hw, static_cast<unsigned>(points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::map<std::string, int> tally;
  int errors = 0;
  for (const auto& r : results) {
    if (r.contains("error")) ++errors;
    else ++tally[r.at("verdict").get<std::string>()];
  }
  return {{"version", json_io::kReportVersion},
          {"tool_version", version()},
          {"grid", o.grid},
          {"points", results},
          {"summary", {{"verdicts", tally}, {"errors", errors}, {"total", results.size()}}}};
}

json error_json(const std::exception& e) {
  std::string code = "InternalError";
  if (const auto* err = dynamic_cast<const Error*>(&e)) code = std::string(to_string(err->code()));
  return {{"error", {{"code", code}, {"message", e.what()}}}};
}

}  // namespace qcrb::cli
