#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "qcrb/json_io.hpp"

using namespace qcrb;
using nlohmann::json;

TEST(JsonIo, ComplexMatrixRoundTrip) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_complex(3, 2, rng);
  const json j = json_io::to_json(m);
  ASSERT_EQ(j.size(), 3u);
  ASSERT_EQ(j[0].size(), 2u);
  EXPECT_EQ((json_io::complex_matrix_from_json(j, "m") - m).norm(), 0.0);
}

TEST(JsonIo, RealMatrixNanIsNull) {
  RealMatrix m(1, 2);
  m << 1.0, std::numeric_limits<double>::quiet_NaN();
  const json j = json_io::to_json(m);
  EXPECT_TRUE(j[0][1].is_null());
  EXPECT_DOUBLE_EQ(j[0][0].get<double>(), 1.0);
}

TEST(JsonIo, SchemaViolations) {
  EXPECT_QCRB_ERROR(json_io::complex_matrix_from_json(json::array(), "m"), ErrorCode::SchemaViolation);
  EXPECT_QCRB_ERROR(json_io::complex_matrix_from_json(json{{{1, 0}}, {{1, 0}, {2, 0}}}, "m"),
                    ErrorCode::SchemaViolation);
  EXPECT_QCRB_ERROR(json_io::complex_matrix_from_json(json{{1.0}}, "m"), ErrorCode::SchemaViolation);
  EXPECT_QCRB_ERROR(json_io::real_matrix_from_json(json{{1.0, "x"}}, "m"), ErrorCode::SchemaViolation);
  EXPECT_QCRB_ERROR(json_io::parse_povm(json{{"elements", json::array()}}), ErrorCode::SchemaViolation);
}

TEST(JsonIo, PovmRoundTripThroughFile) {
  std::mt19937_64 rng(2);
  const POVM povm = random_projective_povm(3, rng);
  const auto path = std::filesystem::temp_directory_path() / "qcrb_test_povm.json";
  json_io::save_file(path.string(), json_io::povm_to_json(povm));
  const POVM back = json_io::parse_povm(json_io::load_file(path.string()));
  std::filesystem::remove(path);
  ASSERT_EQ(back.size(), 3);
  EXPECT_TRUE(back.projective);
  for (int k = 0; k < 3; ++k) EXPECT_LE((back.elements[k] - povm.elements[k]).norm(), 1e-15);
}

TEST(JsonIo, LoadErrors) {
  EXPECT_QCRB_ERROR(json_io::load_file("/nonexistent/qcrb.json"), ErrorCode::IoError);
  const auto path = std::filesystem::temp_directory_path() / "qcrb_test_bad.json";
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_QCRB_ERROR(json_io::load_file(path.string()), ErrorCode::SchemaViolation);
  std::filesystem::remove(path);
}

TEST(JsonIo, ReportSectionsHaveStableKeys) {
  const auto f = fixtures::get("paper-qutrit");
  const auto pt = testing_support::at(f);
  const auto rep = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
  const json j = json_io::to_json(rep);
  for (const char* key : {"regime", "full_commutativity", "average_commutativity",
                          "partial_commutativity", "condition1", "condition3", "condition4",
                          "condition2prime", "verdict", "reasoning"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["verdict"], "SATURABLE_CERTIFIED");
  EXPECT_EQ(j["condition4"]["status"], "CERTIFIED_YES");
  EXPECT_TRUE(j["condition4"].contains("W"));
  const json dec = json_io::to_json(pt.dec);
  EXPECT_EQ(dec["r_plus"], 2);
  EXPECT_EQ(dec["r_zero"], 1);
}
