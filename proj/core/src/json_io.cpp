#include "qcrb/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb::json_io {

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(ErrorCode::SchemaViolation, msg);
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j, const std::string& what) {
  if (!j.is_number()) schema_error(what + " must be a number");
  return j.get<double>();
}

int int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    schema_error(std::string("missing or non-integer field '") + key + "'");
  }
  return j.at(key).get<int>();
}

json vector_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

json check_json(const CheckResult& c) {
  return {{"residual", c.residual}, {"threshold", c.threshold}, {"pass", c.pass}};
}

json pairwise_json(const PairwiseCheck& c) {
  json j = check_json(c.summary);
  j["pairwise"] = to_json(c.pairwise);
  return j;
}

}  // namespace

json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(number_or_null(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v[i]));
  return out;
}

ComplexMatrix complex_matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) schema_error(what + " must be a non-empty array of rows");
  const auto rows = j.size();
  if (!j[0].is_array()) schema_error(what + " row 0 is not an array");
  const auto cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      schema_error(what + " is ragged: row " + std::to_string(i) + " has a different length");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& entry = row[k];
      if (!entry.is_array() || entry.size() != 2) {
        schema_error(what + " entry (" + std::to_string(i) + "," + std::to_string(k) +
                     ") must be [re, im]");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Complex(number_from(entry[0], what), number_from(entry[1], what));
    }
  }
  return m;
}

RealMatrix real_matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    schema_error(what + " must be a non-empty array of rows");
  }
  const auto cols = j[0].size();
  RealMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) schema_error(what + " is ragged");
    for (std::size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number_from(j[i][k], what);
    }
  }
  return m;
}

StateAtPoint parse_numeric_model(const json& j) {
  if (!j.is_object()) schema_error("numeric model must be a JSON object");
  const int n = int_field(j, "n_s");
  const int p = int_field(j, "p");
  if (n < 1 || p < 1) schema_error("n_s and p must be positive");
  if (!j.contains("rho")) schema_error("missing field 'rho'");
  if (!j.contains("drho") || !j.at("drho").is_array()) schema_error("missing array field 'drho'");
  StateAtPoint sp;
  sp.scheme = DerivativeScheme::supplied();
  sp.rho = complex_matrix_from_json(j.at("rho"), "rho");
  if (sp.rho.rows() != n || sp.rho.cols() != n) schema_error("rho must be n_s x n_s");
  const auto& drho = j.at("drho");
  if (static_cast<int>(drho.size()) != p) schema_error("drho must hold p matrices");
  for (int l = 0; l < p; ++l) {
    const std::string what = "drho[" + std::to_string(l) + "]";
    ComplexMatrix d = complex_matrix_from_json(drho[l], what);
    if (d.rows() != n || d.cols() != n) schema_error(what + " must be n_s x n_s");
    if (hermiticity_residual(d) > 1e-10 * std::max(1.0, d.norm())) {
      throw Error(ErrorCode::NotHermitian, what + " is not Hermitian");
    }
    sp.drho.push_back(hermitian_part(d));
  }
  validate_density(sp.rho);
  sp.rho = hermitian_part(sp.rho);
  if (j.contains("theta")) {
    const auto& t = j.at("theta");
    if (!t.is_array() || static_cast<int>(t.size()) != p) schema_error("theta must hold p numbers");
    sp.theta.resize(p);
    for (int l = 0; l < p; ++l) sp.theta[l] = number_from(t[l], "theta");
  } else {
    sp.theta = RealVector::Zero(p);
  }
  return sp;
}

json numeric_model_to_json(const StateAtPoint& sp) {
  json drho = json::array();
  for (const auto& d : sp.drho) drho.push_back(to_json(d));
  return {{"n_s", sp.dimension()},
          {"p", sp.num_params()},
          {"theta", to_json(sp.theta)},
          {"rho", to_json(sp.rho)},
          {"drho", drho}};
}

POVM parse_povm(const json& j) {
  if (!j.is_object()) schema_error("POVM must be a JSON object");
  if (!j.contains("elements") || !j.at("elements").is_array() || j.at("elements").empty()) {
    schema_error("POVM needs a non-empty 'elements' array");
  }
  std::vector<ComplexMatrix> elements;
  const auto& els = j.at("elements");
  for (std::size_t k = 0; k < els.size(); ++k) {
    elements.push_back(complex_matrix_from_json(els[k], "elements[" + std::to_string(k) + "]"));
  }
  if (j.contains("n_s")) {
    const int n = int_field(j, "n_s");
    for (const auto& e : elements) {
      if (e.rows() != n || e.cols() != n) schema_error("POVM elements must be n_s x n_s");
    }
  }
  POVM povm = make_povm(std::move(elements));
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    if (!labels.is_array() || static_cast<int>(labels.size()) != povm.size()) {
      schema_error("labels must hold one number per element");
    }
    for (int k = 0; k < povm.size(); ++k) povm.labels[k] = number_from(labels[k], "labels");
  }
  return povm;
}

json povm_to_json(const POVM& povm) {
  json elements = json::array();
  for (const auto& e : povm.elements) elements.push_back(to_json(e));
  json kinds = json::array();
  for (auto k : povm.kinds) kinds.push_back(to_string(k));
  return {{"n_s", povm.dimension()},
          {"elements", elements},
          {"labels", povm.labels},
          {"kinds", kinds},
          {"projective", povm.projective}};
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, "'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

json to_json(const SupportDecomposition& dec) {
  return {{"r_plus", dec.r_plus},
          {"r_zero", dec.r_zero},
          {"q", to_json(dec.q)},
          {"rank_tol", dec.rank_tol},
          {"rank_cutoff", dec.rank_cutoff},
          {"null_eigenvalues", to_json(dec.null_eigenvalues)},
          {"null_block_residuals", dec.null_block_residuals}};
}

json to_json(const Condition4Result& r) {
  json j = {{"status", to_string(r.status)},
            {"method", r.method},
            {"threshold", r.threshold},
            {"column_residuals", vector_json(r.column_residuals)}};
  if (r.W) j["W"] = to_json(*r.W);
  json lambdas = json::array();
  for (const auto& l : r.lambdas) lambdas.push_back(to_json(l));
  j["lambdas"] = lambdas;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const Cond2PrimeResult& r) {
  json j = {{"status", to_string(r.status)},
            {"path", to_string(r.path)},
            {"tolerance", r.tolerance},
            {"witness_unitarity_residual", r.witness_unitarity_residual},
            {"support_consistency_residual", r.support_consistency_residual},
            {"pde_residuals", vector_json(r.pde_residuals)},
            {"pde_pass", r.pde_pass},
            {"stationary_residuals", vector_json(r.stationary_residuals)},
            {"stationary_pass", r.stationary_pass},
            {"null_povm_checked", r.null_povm_checked},
            {"null_saturation_residuals", vector_json(r.null_saturation_residuals)},
            {"null_pass", r.null_pass},
            {"lpz_identity_residuals", vector_json(r.lpz_identity_residuals)},
            {"lpz_identity_pass", r.lpz_identity_pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json to_json(const ConditionReport& report) {
  json partial = check_json(report.partial_comm.summary);
  partial["block_form_residual"] = report.partial_comm.block_form_residual;
  partial["cross_check_gap"] = report.partial_comm.cross_check_gap;
  return {{"regime", to_string(report.regime)},
          {"r_plus", report.r_plus},
          {"r_zero", report.r_zero},
          {"tolerance", report.tolerance},
          {"seed", report.seed},
          {"full_commutativity", pairwise_json(report.full_comm)},
          {"average_commutativity", pairwise_json(report.avg_comm)},
          {"partial_commutativity", partial},
          {"condition1", pairwise_json(report.cond1)},
          {"condition3", pairwise_json(report.cond3)},
          {"condition4", to_json(report.cond4)},
          {"condition2prime", to_json(report.cond2prime)},
          {"verdict", to_string(report.verdict)},
          {"reasoning", report.reasoning}};
}

json to_json(const SaturationCertificate& c) {
  json regular = json::array();
  for (const auto& r : c.regular) {
    regular.push_back({{"element", r.element},
                       {"constants", vector_json(r.constants)},
                       {"imaginary_parts", vector_json(r.imaginary_parts)},
                       {"residuals", vector_json(r.residuals)},
                       {"vacuous", r.vacuous},
                       {"pass", r.pass}});
  }
  json null = json::array();
  for (const auto& z : c.null) {
    null.push_back({{"element", z.element},
                    {"constants", to_json(z.constants)},
                    {"residual", z.residual},
                    {"pass", z.pass}});
  }
  return {{"tolerance", c.tolerance}, {"pass", c.pass}, {"regular", regular}, {"null", null}};
}

json to_json(const MeasurementDistribution& d) {
  json status = json::array();
  for (auto s : d.status) status.push_back(to_string(s));
  return {{"p", to_json(d.p)},
          {"dp", to_json(d.dp)},
          {"status", status},
          {"collinearity_residuals", vector_json(d.collinearity_residuals)},
          {"prob_tol", d.options.prob_tol},
          {"deriv_tol", d.options.deriv_tol}};
}

json to_json(const FisherComparison& c) {
  json j = {{"F_c", to_json(c.F_c)},
            {"F_Q", to_json(c.F_Q)},
            {"gap", c.gap},
            {"min_gap_eigenvalue", c.min_gap_eigenvalue},
            {"tolerance", c.tolerance},
            {"saturated", c.saturated}};
  if (c.G) j["G"] = to_json(*c.G);
  if (c.cost_classical) j["cost_classical"] = *c.cost_classical;
  if (c.cost_quantum) j["cost_quantum"] = *c.cost_quantum;
  if (!c.notice.empty()) j["notice"] = c.notice;
  return j;
}

json to_json(const MonteCarloRecord& r) {
  json j = {{"seed", r.seed},
            {"trials", r.trials},
            {"counts", r.counts},
            {"empirical_fim", to_json(r.empirical.estimate)},
            {"standard_errors", to_json(r.empirical.standard_errors)},
            {"F_c", to_json(r.F_c)},
            {"max_z_score", r.max_z_score}};
  if (r.estimator) {
    j["estimator"] = {{"repetitions", r.estimator->repetitions},
                      {"shots_per_repetition", r.estimator->shots_per_repetition},
                      {"mean", to_json(r.estimator->mean)},
                      {"covariance", to_json(r.estimator->covariance)},
                      {"crb", to_json(r.estimator->crb)}};
  }
  return j;
}

}  // namespace qcrb::json_io
