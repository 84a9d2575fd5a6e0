#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
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

POVM qutrit_optimal(const testing_support::Point& pt) {
  return construct_optimal(pt.dec, pt.slds, find_W_condition4(pt.slds, 1e-8).W).povm;
}

RealMatrix fc_of(const testing_support::Point& pt, const POVM& povm) {
  return classical_fim(outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, povm));
}

double min_eigenvalue(const RealMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<RealMatrix>(a).eigenvalues()[0];
}

}  // namespace

TEST(ClassicalFim, MultinomialOracle) {
  const auto f = fixtures::get("diag-multinomial");
  for (auto theta : {vec({1.0 / 3, 1.0 / 3}), vec({0.15, 0.6})}) {
    const auto pt = at(f.model, theta);
    const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, computational_basis(3));
    const RealMatrix fc = classical_fim(dist);
    EXPECT_LE((fc - oracle::multinomial_fisher(theta)).norm(), 1e-10);
    EXPECT_LE((fc - oracle::classical_fisher(dist.p, dist.dp)).norm(), 1e-12);
    EXPECT_TRUE(compare(fc, pt.F).saturated);
  }
}

TEST(ClassicalFim, SingleOutcomeCarriesNoInformation) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds,
                                         make_povm({ComplexMatrix::Identity(3, 3)}));
  EXPECT_NEAR(dist.p[0], 1.0, 1e-12);
  EXPECT_LE(classical_fim(dist).norm(), 1e-12);
}

TEST(ClassicalFim, QutritNullOutcomeLimit) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, qutrit_optimal(pt));
  int nulls = 0;
  for (auto s : dist.status) nulls += s == OutcomeStatus::null ? 1 : 0;
  EXPECT_EQ(nulls, 1);
  EXPECT_LE((classical_fim(dist) - oracle::qutrit_qfim(0.3, 0.6, 1.0, 0.7)).norm(), 1e-10);
}

TEST(ClassicalFim, BoundedByQfimForRandomMeasurements) {
  std::mt19937_64 rng(77);
  for (const auto& name : fixtures::names()) {
    const auto pt = at(fixtures::get(name));
    const int n = pt.sp.dimension();
    for (int i = 0; i < 5; ++i) {
      const auto fc = fc_of(pt, i % 2 ? random_projective_povm(n, rng) : random_povm(n, 2 * n, rng));
      EXPECT_GE(min_eigenvalue(pt.F - fc), -1e-9 * std::max(1.0, pt.F.norm())) << name;
    }
  }
}

TEST(ClassicalFim, CoarseGrainingLosesInformation) {
  std::mt19937_64 rng(3);
  const auto pt = at(fixtures::get("random-rank-r", {{"n_s", 4}, {"r_plus", 4}, {"plant", 0}}));
  for (int i = 0; i < 10; ++i) {
    const auto fine = random_povm(4, 6, rng);
    POVM coarse = fine;
    coarse.elements[0] += coarse.elements[1];
    coarse.elements.erase(coarse.elements.begin() + 1);
    coarse.labels.pop_back();
    coarse.kinds.pop_back();
    EXPECT_GE(min_eigenvalue(fc_of(pt, fine) - fc_of(pt, coarse)), -1e-10);
  }
}

TEST(ClassicalFim, SingularOutcome) {
  // diag(1, 0) with d rho = diag(-1, 1) is not rank-constant; a measurement of
  // the second level sees p = 0 with non-zero slope.
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = 1.0;
  const std::vector<ComplexMatrix> drho{d};
  SLDSet slds;
  slds.full = {ComplexMatrix::Zero(2, 2)};
  const auto dist = outcome_distribution(rho, drho, slds, computational_basis(2));
  EXPECT_TRUE(dist.has_singular());
  EXPECT_QCRB_ERROR(classical_fim(dist), ErrorCode::SingularOutcome);
}

TEST(ClassicalFim, IrregularNullOutcomeIsFlagged) {
  // The null projector of an instance failing condition 3: p and dp vanish
  // but {P0 L_l rho^(1/2)} are not real multiples of each other.
  const auto pt = at(fixtures::get("random-rank-r", {{"plant", 1}}));
  const POVM nulls = make_povm({pt.dec.P_plus, pt.dec.P_zero});
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, nulls);
  EXPECT_EQ(dist.status[0], OutcomeStatus::regular);
  EXPECT_EQ(dist.status[1], OutcomeStatus::irregular);
  EXPECT_TRUE(dist.has_irregular());
}

TEST(Compare, ScalarCostsFollowMatrixOrder) {
  std::mt19937_64 rng(9);
  const auto pt = at(fixtures::get("diag-multinomial").model, vec({0.2, 0.3}));
  RealMatrix g(2, 2);
  g << 2.0, 0.5, 0.5, 1.0;
  for (int i = 0; i < 10; ++i) {
    const auto fc = fc_of(pt, random_povm(3, 5, rng));
    const auto cmp = compare(fc, pt.F, g);
    ASSERT_TRUE(cmp.cost_quantum.has_value());
    if (cmp.cost_classical) EXPECT_GE(*cmp.cost_classical, *cmp.cost_quantum - 1e-10);
    EXPECT_GE(cmp.min_gap_eigenvalue, -1e-10);
  }
}

TEST(Compare, RejectsAsymmetricInput) {
  RealMatrix a(2, 2);
  a << 1, 2, 0, 1;
  EXPECT_QCRB_ERROR(compare(a, RealMatrix::Identity(2, 2)), ErrorCode::NotHermitian);
}

TEST(Compare, SingularQuantumFisherHasNoCost) {
  const auto cmp = compare(RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2), RealMatrix::Identity(2, 2));
  EXPECT_TRUE(cmp.saturated);
  EXPECT_FALSE(cmp.cost_quantum.has_value());
  EXPECT_FALSE(cmp.notice.empty());
}

TEST(Sampling, DeterministicForFixedSeed) {
  RealVector p(4);
  p << 0.1, 0.2, 0.3, 0.4;
  const auto a = sample_outcomes(p, 100000, 42);
  EXPECT_EQ(a, sample_outcomes(p, 100000, 42));
  EXPECT_NE(a, sample_outcomes(p, 100000, 43));
  EXPECT_EQ(std::accumulate(a.begin(), a.end(), std::int64_t{0}), 100000);
}

TEST(Sampling, FrequenciesWithinFiveSigma) {
  RealVector p(5);
  p << 0.05, 0.15, 0.0, 0.5, 0.3;
  const std::int64_t n = 200000;
  const auto counts = sample_outcomes(p, n, 7);
  EXPECT_EQ(counts[2], 0);
  for (int k = 0; k < 5; ++k) {
    const double sigma = std::sqrt(n * p[k] * (1 - p[k]));
    EXPECT_LE(std::abs(counts[k] - n * p[k]), 5 * sigma + 1e-12) << k;
  }
}

TEST(EmpiricalFim, ExactCountsReproduceClassical) {
  const auto pt = at(fixtures::get("diag-multinomial").model, vec({0.25, 0.25}));
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, computational_basis(3));
  const auto emp = empirical_fim({1000, 1000, 2000}, dist);
  EXPECT_LE((emp.estimate - classical_fim(dist)).norm(), 1e-12);
}

TEST(EmpiricalFim, ObservedNullOutcomeIsAMismatch) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  const auto povm = qutrit_optimal(pt);
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, povm);
  std::vector<std::int64_t> counts(3, 10);
  EXPECT_QCRB_ERROR(empirical_fim(counts, dist), ErrorCode::ModelMismatch);
}

TEST(MonteCarlo, QutritOptimalMeasurement) {
  const auto pt = at(fixtures::get("paper-qutrit"));
  const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, qutrit_optimal(pt));
  const auto rec = monte_carlo(dist, 200000, 2024);
  EXPECT_LE(rec.max_z_score, 5.0);
  EXPECT_EQ(rec.counts, monte_carlo(dist, 200000, 2024).counts);
}

TEST(Estimator, MultinomialMeanNearTruth) {
  const auto f = fixtures::get("diag-multinomial");
  const auto theta = vec({0.2, 0.3});
  const auto study = estimator_study(f.model, computational_basis(3), theta, 40, 5000, 11);
  for (int l = 0; l < 2; ++l) {
    const double se = std::sqrt(study.crb(l, l) / 40.0);
    EXPECT_NEAR(study.mean[l], theta[l], 5 * se);
    EXPECT_NEAR(study.covariance(l, l), study.crb(l, l), 0.6 * study.crb(l, l));
  }
}
