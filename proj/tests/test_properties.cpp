#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "oracles.hpp"
#include "qcrb/conditions.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/fixtures.hpp"
#include "qcrb/povm.hpp"

// Seeded randomized properties over synthetic instances.

using namespace qcrb;
using testing_support::at;

namespace {

struct Instance {
  int seed;
  int n;
  int r_plus;
  int p;
  int plant;
};

std::vector<Instance> instances(int count) {
  std::vector<Instance> out;
  std::mt19937_64 rng(2718);
  for (int i = 0; i < count; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    const int rp = std::uniform_int_distribution<int>(1, n)(rng);
    const int p = std::uniform_int_distribution<int>(1, 3)(rng);
    out.push_back({i + 1, n, rp, p, i % 3});
  }
  return out;
}

fixtures::Fixture build(const Instance& s) {
  return fixtures::get("random-rank-r", {{"seed", s.seed}, {"n_s", s.n}, {"r_plus", s.r_plus},
                                         {"p", s.p}, {"plant", s.plant}});
}

}  // namespace

TEST(Properties, ConditionImplications) {
  for (const auto& s : instances(60)) {
    const auto pt = at(build(s));
    const auto rep = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
    if (rep.cond4.status == Certification::certified_yes && pt.dec.r_zero > 0) {
      EXPECT_TRUE(rep.cond3.summary.pass) << s.seed;
    }
    if (rep.cond1.summary.pass && rep.cond3.summary.pass) {
      EXPECT_TRUE(rep.partial_comm.summary.pass) << s.seed;
    }
    if (rep.full_comm.summary.pass) EXPECT_TRUE(rep.partial_comm.summary.pass) << s.seed;
    if (rep.cond4.status == Certification::certified_no) EXPECT_FALSE(rep.cond3.summary.pass);
  }
}

TEST(Properties, SldMatchesOracle) {
  for (const auto& s : instances(30)) {
    const auto pt = at(build(s));
    for (int l = 0; l < s.p; ++l) {
      const ComplexMatrix ref = oracle::sld_lyapunov(pt.sp.rho, pt.sp.drho[l]);
      EXPECT_LE((ref - pt.slds.full[l]).norm(), 1e-8 * std::max(1.0, ref.norm())) << s.seed;
    }
  }
}

TEST(Properties, UnitaryCovariance) {
  std::mt19937_64 rng(17);
  for (const auto& s : instances(20)) {
    const auto pt = at(build(s));
    const ComplexMatrix u = random_unitary(s.n, rng);
    const ComplexMatrix rho = u * pt.sp.rho * u.adjoint();
    std::vector<ComplexMatrix> drho;
    for (const auto& d : pt.sp.drho) drho.push_back(u * d * u.adjoint());
    const auto dec = support_decomposition(rho, drho, 1e-8);
    const auto slds = compute_sld(dec, rho, drho);
    EXPECT_LE((qfim(dec, slds) - pt.F).norm(), 1e-9 * std::max(1.0, pt.F.norm())) << s.seed;
    const auto a = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
    const auto b = evaluate_conditions(rho, dec, slds);
    EXPECT_EQ(a.verdict, b.verdict) << s.seed;
  }
}

TEST(Properties, LinearReparameterization) {
  // theta = A phi maps d_phi rho = A^T d_theta rho, so F_phi = A^T F A.
  std::mt19937_64 rng(5);
  for (const auto& s : instances(20)) {
    const auto pt = at(build(s));
    const RealMatrix a = RealMatrix::Random(s.p, s.p);
    std::vector<ComplexMatrix> drho(s.p, ComplexMatrix::Zero(s.n, s.n));
    for (int j = 0; j < s.p; ++j) {
      for (int l = 0; l < s.p; ++l) drho[j] += a(l, j) * pt.sp.drho[l];
    }
    const auto slds = compute_sld(pt.dec, pt.sp.rho, drho);
    const RealMatrix expected = a.transpose() * pt.F * a;
    EXPECT_LE((qfim(pt.dec, slds) - expected).norm(), 1e-9 * std::max(1.0, expected.norm()));
  }
}

TEST(Properties, ClassicalBelowQuantum) {
  std::mt19937_64 rng(23);
  for (const auto& s : instances(30)) {
    const auto pt = at(build(s));
    for (int i = 0; i < 3; ++i) {
      const POVM povm = i == 0 ? random_projective_povm(s.n, rng) : random_povm(s.n, s.n + i, rng);
      const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, povm);
      if (dist.has_singular()) continue;
      const auto cmp = compare(classical_fim(dist), pt.F);
      EXPECT_GE(cmp.min_gap_eigenvalue, -1e-9 * std::max(1.0, pt.F.norm())) << s.seed;
    }
  }
}

TEST(Properties, CertificateAgreesWithFisherEquality) {
  std::mt19937_64 rng(29);
  for (const auto& s : instances(45)) {
    const auto pt = at(build(s));
    const auto rep = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
    std::vector<POVM> povms{random_projective_povm(s.n, rng), random_povm(s.n, s.n + 2, rng)};
    if (rep.cond1.summary.pass && (pt.dec.r_zero == 0 || rep.cond4.W)) {
      povms.push_back(construct_optimal(pt.dec, pt.slds, rep.cond4.W).povm);
    }
    for (auto& povm : povms) {
      const auto cert = verify_saturation_structural(povm, pt.sp.rho, pt.dec, pt.slds);
      const auto dist = outcome_distribution(pt.sp.rho, pt.sp.drho, pt.slds, povm);
      const auto cmp = compare(classical_fim(dist), pt.F);
      EXPECT_EQ(cert.pass, cmp.saturated) << "seed " << s.seed << " gap " << cmp.gap;
    }
  }
}

TEST(Properties, ConstructedMeasurementIsProjective) {
  for (const auto& s : instances(45)) {
    if (s.plant != 2) continue;
    const auto pt = at(build(s));
    const auto rep = evaluate_conditions(pt.sp.rho, pt.dec, pt.slds);
    ASSERT_TRUE(rep.cond1.summary.pass) << s.seed;
    if (pt.dec.r_zero > 0) ASSERT_TRUE(rep.cond4.W.has_value()) << s.seed << " " << rep.cond4.note;
    const auto c = construct_optimal(pt.dec, pt.slds, rep.cond4.W);
    const auto d = validate(c.povm, 1e-9);
    EXPECT_TRUE(d.valid) << s.seed;
    EXPECT_TRUE(d.projective) << s.seed;
  }
}
