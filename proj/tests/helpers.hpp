#pragma once

#include <functional>
#include <optional>
#include <string>

#include <gtest/gtest.h>

#include "qcrb/conditions.hpp"
#include "qcrb/errors.hpp"
#include "qcrb/fixtures.hpp"
#include "qcrb/model.hpp"
#include "qcrb/sld.hpp"

namespace testing_support {

inline std::optional<qcrb::ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const qcrb::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// State, decomposition, SLDs and QFIM at one point.
struct Point {
  qcrb::StateAtPoint sp;
  qcrb::SupportDecomposition dec;
  qcrb::SLDSet slds;
  qcrb::RealMatrix F;
};

inline Point at(const qcrb::StateModel& model, const qcrb::RealVector& theta,
                std::optional<qcrb::DerivativeScheme> scheme = std::nullopt) {
  Point p;
  p.sp = qcrb::evaluate(model, theta, scheme);
  const double tol = qcrb::default_tolerance(p.sp.scheme);
  p.dec = qcrb::support_decomposition(p.sp, {1e-10, 10.0, tol});
  p.slds = qcrb::compute_sld(p.dec, p.sp.rho, p.sp.drho, tol);
  p.F = qcrb::qfim(p.dec, p.slds);
  return p;
}

inline Point at(const qcrb::fixtures::Fixture& f,
                std::optional<qcrb::DerivativeScheme> scheme = std::nullopt) {
  return at(f.model, f.default_theta, scheme);
}

inline qcrb::RealVector vec(std::initializer_list<double> values) {
  qcrb::RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace testing_support

#define EXPECT_QCRB_ERROR(stmt, expected_code)                                   \
  do {                                                                          \
    const auto qcrb_code_ = ::testing_support::code_of([&] { (void)(stmt); });  \
    ASSERT_TRUE(qcrb_code_.has_value()) << #stmt " did not throw";              \
    EXPECT_EQ(qcrb::to_string(*qcrb_code_), qcrb::to_string(expected_code));    \
  } while (0)
