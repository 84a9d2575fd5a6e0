#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "qcrb/conditions.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/fixtures.hpp"
#include "qcrb/povm.hpp"

using namespace qcrb;
using testing_support::at;
using testing_support::vec;

namespace {

POVM computational_basis(int n) {
  std::vector<ComplexMatrix> e;
  for (int k = 0; k < n; ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(k, k) = 1.0;
    e.push_back(m);
  }
  return make_povm(e);
}

ConstructedPOVM optimal_for(const testing_support::Point& pt) {
  std::optional<ComplexMatrix> w;
  if (pt.dec.r_zero > 0) w = find_W_condition4(pt.slds, 1e-8).W;
  return construct_optimal(pt.dec, pt.slds, w);
}

}  // namespace

TEST(Validate, TrivialAndOvercomplete) {
  const auto trivial = validate(make_povm({ComplexMatrix::Identity(2, 2)}));
  EXPECT_TRUE(trivial.valid);
  EXPECT_TRUE(trivial.projective);
  const ComplexMatrix half = 0.6 * ComplexMatrix::Identity(2, 2);
  const auto bad = validate(make_povm({half, half}));
  EXPECT_FALSE(bad.valid);
  EXPECT_NEAR(bad.completeness_residual, 0.2 * std::sqrt(2.0), 1e-12);
  EXPECT_QCRB_ERROR(require_valid(make_povm({half, half})), ErrorCode::InvalidPOVM);
}

TEST(Validate, NegativeAndMisshapenElements) {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(1, 1) = 1.5;
  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(1, 1) = -0.5;
  const auto d = validate(make_povm({a, b}));
  EXPECT_FALSE(d.valid);
  EXPECT_NEAR(d.min_eigenvalue, -0.5, 1e-12);
  const auto shape = validate(make_povm({ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(3, 3)}));
  EXPECT_FALSE(shape.valid);
}

TEST(Validate, RandomPovmsAreValid) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10; ++i) {
    const auto proj = random_projective_povm(4, rng);
    EXPECT_TRUE(validate(proj).valid);
    EXPECT_TRUE(proj.projective);
    const auto gen = random_povm(3, 6, rng);
    const auto d = validate(gen);
    EXPECT_TRUE(d.valid);
    EXPECT_FALSE(d.projective);
  }
}

TEST(Classify, QutritOptimalMeasurement) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  auto c = optimal_for(pt);
  const auto cls = classify_elements(c.povm, pt.sp.rho, pt.dec);
  EXPECT_EQ(cls.num_null, 1);
  EXPECT_EQ(cls.num_regular, 2);
  EXPECT_NEAR(std::accumulate(cls.probabilities.begin(), cls.probabilities.end(), 0.0), 1.0, 1e-12);
}

TEST(Classify, StructureViolation) {
  // A null-probability element cannot carry weight on the support, but an
  // element that is not PSD can fake tr(rho E) = 0 while doing so.
  const auto pt = at(fixtures::get("paper-qutrit"));
  const ComplexMatrix v0 = pt.dec.V.col(0) * pt.dec.V.col(0).adjoint();
  const ComplexMatrix v1 = pt.dec.V.col(1) * pt.dec.V.col(1).adjoint();
  const double q0 = pt.dec.q[0], q1 = pt.dec.q[1];
  POVM fake;
  fake.elements = {ComplexMatrix(v0 - (q0 / q1) * v1)};
  fake.labels = {0};
  EXPECT_QCRB_ERROR(classify_elements(fake, pt.sp.rho, pt.dec), ErrorCode::StructureViolation);
}

TEST(ConstructOptimal, QutritHasThreeProjectors) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  const auto c = optimal_for(pt);
  EXPECT_EQ(c.povm.size(), 3);
  EXPECT_TRUE(c.povm.projective);
  EXPECT_TRUE(validate(c.povm).valid);
  EXPECT_LE(unitarity_residual(c.W), 1e-12);
}

TEST(ConstructOptimal, RequiresW) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  EXPECT_QCRB_ERROR(construct_optimal(pt.dec, pt.slds, std::nullopt), ErrorCode::MissingW);
}

TEST(ConstructOptimal, RefusesNonCommutingBlocks) {
  const auto pt = at(fixtures::get("random-rank-r", {{"n_s", 4}, {"r_plus", 3}, {"plant", 0}}));
  ASSERT_FALSE(check_condition1(pt.slds, 1e-8).summary.pass);
  const auto code = testing_support::code_of(
      [&] { construct_optimal(pt.dec, pt.slds, ComplexMatrix(ComplexMatrix::Identity(1, 1))); });
  ASSERT_TRUE(code.has_value());
  EXPECT_TRUE(*code == ErrorCode::NotCommuting || *code == ErrorCode::JointDiagonalizationFailed);
}

TEST(ConstructOptimal, CertifiedFixturesSaturate) {
  for (const auto& name : fixtures::names()) {
    const auto f = fixtures::get(name);
    const auto pt = at(f);
    const auto rep = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
    if (rep.verdict != Verdict::saturable_certified || !rep.cond1.summary.pass) continue;
    if (pt.dec.r_zero > 0 && rep.cond4.status != Certification::certified_yes) continue;
    auto c = construct_optimal(pt.dec, pt.slds, rep.cond4.W);
    const auto cert = verify_saturation_structural(c.povm, pt.sp.rho, pt.dec, pt.slds);
    EXPECT_TRUE(cert.pass) << name;
    EXPECT_EQ(cert.failed_elements(), 0) << name;
    const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, c.povm);
    const auto cmp = compare(classical_fim(dist), pt.F);
    EXPECT_TRUE(cmp.saturated) << name << " gap " << cmp.gap;
  }
}

TEST(Certificate, TrivialMeasurementFails) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  auto trivial = make_povm({ComplexMatrix::Identity(3, 3)});
  const auto cert = verify_saturation_structural(trivial, pt.sp.rho, pt.dec, pt.slds);
  EXPECT_FALSE(cert.pass);
  EXPECT_EQ(cert.failed_elements(), 1);
}

TEST(Certificate, PureQubitRandomProjectiveMeasurementsFail) {
  const auto pt = at(fixtures::get("pure-qubit-amp-phase"));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto povm = random_projective_povm(2, rng);
    const auto cert = verify_saturation_structural(povm, pt.sp.rho, pt.dec, pt.slds);
    EXPECT_FALSE(cert.pass);
    EXPECT_GE(cert.failed_elements(), 1);
  }
}

TEST(Certificate, RegularConstantsAreEigenvalues) {
  const auto pt = at(fixtures::get("diag-multinomial").model, vec({0.2, 0.5}));
  auto povm = computational_basis(3);
  const auto cert = verify_saturation_structural(povm, pt.sp.rho, pt.dec, pt.slds);
  ASSERT_TRUE(cert.pass);
  ASSERT_EQ(cert.regular.size(), 3u);
  EXPECT_NEAR(cert.regular[0].constants[0], 1.0 / 0.2, 1e-12);
  EXPECT_NEAR(cert.regular[2].constants[0], -1.0 / 0.3, 1e-12);
  for (const auto& rc : cert.regular) {
    for (double im : rc.imaginary_parts) EXPECT_NEAR(im, 0.0, 1e-12);
  }
}

TEST(Certificate, NullConstantsMatchCondition4Ratio) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  auto c = optimal_for(pt);
  const auto cert = verify_saturation_structural(c.povm, pt.sp.rho, pt.dec, pt.slds);
  ASSERT_EQ(cert.null.size(), 1u);
  EXPECT_NEAR(cert.null[0].constants(0, 1), 1.0 / 0.7, 1e-10);
}
