#pragma once

// JSON encoding. Complex numbers are [re, im]; matrices are arrays of rows.

#include <string>

#include <nlohmann/json.hpp>

#include "qcrb/conditions.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/model.hpp"
#include "qcrb/povm.hpp"

namespace qcrb::json_io {

using nlohmann::json;

inline constexpr const char* kReportVersion = "qcrb-report/1";

json to_json(const ComplexMatrix& m);
json to_json(const RealMatrix& m);
json to_json(const RealVector& v);

/// Throws SchemaViolation naming `what` on malformed or ragged input.
ComplexMatrix complex_matrix_from_json(const json& j, const std::string& what);
RealMatrix real_matrix_from_json(const json& j, const std::string& what);

/// {"n_s", "p", "rho", "drho"}; optional "theta". Derivatives are marked
/// as supplied. Throws SchemaViolation, InvalidDensity, TraceNotOne or
/// NotPositive.
StateAtPoint parse_numeric_model(const json& j);
json numeric_model_to_json(const StateAtPoint& sp);

/// {"n_s", "elements": [matrix...], "labels"?, "kinds"?}.
POVM parse_povm(const json& j);
json povm_to_json(const POVM& povm);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

json to_json(const SupportDecomposition& dec);
json to_json(const ConditionReport& report);
json to_json(const Condition4Result& r);
json to_json(const Cond2PrimeResult& r);
json to_json(const SaturationCertificate& c);
json to_json(const MeasurementDistribution& d);
json to_json(const FisherComparison& c);
json to_json(const MonteCarloRecord& r);

}  // namespace qcrb::json_io
