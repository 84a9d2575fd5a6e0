#pragma once

// Saturability conditions for the single-copy multiparameter quantum
// Cramer-Rao bound, with residuals and a rule-traced verdict.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcrb/model.hpp"
#include "qcrb/sld.hpp"

namespace qcrb {

struct CheckResult {
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/// Pairwise residual table plus its maximum.
struct PairwiseCheck {
  RealMatrix pairwise;
  CheckResult summary;
};

struct PartialCommutativity {
  CheckResult summary;               // max ||P+ [L_l, L_m] P+||_F
  double block_form_residual = 0.0;  // max ||[Lpp_l,Lpp_m] + Lpz_l Lpz_m^+ - Lpz_m Lpz_l^+||_F
  double cross_check_gap = 0.0;      // max |projected - block form|
};

enum class Certification { certified_yes, certified_no, unknown };
std::string to_string(Certification c);

struct Condition4Result {
  Certification status = Certification::unknown;
  std::optional<ComplexMatrix> W;
  // lambdas[s](l, m) = real ratio col_s(Lpz_l W) / col_s(Lpz_m W); NaN when
  // column s of Lpz_m W vanishes.
  std::vector<RealMatrix> lambdas;
  std::vector<double> column_residuals;
  double threshold = 0.0;
  std::string method;
  std::string note;
};

struct Condition4Verification {
  bool pass = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::vector<RealMatrix> lambdas;
  std::vector<double> column_residuals;
};

/// Checks that, for every column s, the columns {col_s(Lpz_l W)}_l are real
/// multiples of one common vector (vanishing columns allowed). Residuals are
/// compared with tol * max(max_l ||Lpz_l||_F, scale_floor).
Condition4Verification verify_condition4(std::span<const ComplexMatrix> lpz,
                                         const ComplexMatrix& W, double tol,
                                         double scale_floor = 0.0);

PairwiseCheck check_full_commutativity(const SLDSet& slds, double tol);

/// |tr(rho [L_l, L_m])| for every pair.
PairwiseCheck check_average_commutativity(const ComplexMatrix& rho,
                                          const SLDSet& slds, double tol);

PartialCommutativity check_partial_commutativity(const SupportDecomposition& dec,
                                                 const SLDSet& slds, double tol);

/// [Lpp_l, Lpp_m] = 0 for all pairs.
PairwiseCheck check_condition1(const SLDSet& slds, double tol);

/// Lpz_l Lpz_m^dagger - Lpz_m Lpz_l^dagger = 0 for all pairs.
PairwiseCheck check_condition3(const SLDSet& slds, double tol);

/// Searches for the unitary W of Condition 4. Returns certified_yes only with
/// a W that passes verify_condition4, certified_no only when Condition 3
/// fails, and unknown otherwise.
Condition4Result find_W_condition4(const SLDSet& slds, double tol,
                                   std::uint64_t seed = 0xc0ffeeULL);

struct Cond2PrimeWitness {
  std::string name;
  std::function<ComplexMatrix(const RealVector&)> U;
  // Optional analytic dU/dtheta_l; central differences otherwise.
  std::function<ComplexMatrix(const RealVector&, int)> dU;
  // Diagonal of D_l(theta); empty means D_l = 0.
  std::function<RealVector(const RealVector&, int)> D;
};

enum class Cond2PrimePath { diagonal_VdV, user_supplied_U, lemma3_D0, not_checked };
std::string to_string(Cond2PrimePath p);

struct Cond2PrimeResult {
  Certification status = Certification::unknown;
  Cond2PrimePath path = Cond2PrimePath::not_checked;
  double tolerance = 0.0;
  double witness_unitarity_residual = 0.0;
  double support_consistency_residual = 0.0;  // ||V V^+ - P+||_F
  std::vector<double> pde_residuals;
  std::vector<double> stationary_residuals;            // only when all D_l = 0
  std::vector<double> null_saturation_residuals;   // per null element
  bool null_povm_checked = false;
  std::vector<double> lpz_identity_residuals;      // ||V^+ L_l Y - 2 dV_l^+ Y||_F
  bool pde_pass = false;
  bool stationary_pass = true;
  bool null_pass = false;
  bool lpz_identity_pass = false;
  std::string note;
};

struct Cond2PrimeOptions {
  double tol = 1e-8;
  double fd_step = 1e-5;
};

/// Verifies Condition 2' pointwise for a supplied witness (U, D) or, when the
/// model's V^dagger dV is diagonal, for the canonical witness U = I,
/// D_l = i V^dagger d_l V. null_povm holds full-space null elements; when
/// empty the null-measurement test is skipped.
Cond2PrimeResult verify_condition2prime(const StateModel& model,
                                        const RealVector& theta,
                                        const SupportDecomposition& dec,
                                        const SLDSet& slds,
                                        const std::optional<Cond2PrimeWitness>& witness,
                                        std::span<const ComplexMatrix> null_povm,
                                        const Cond2PrimeOptions& options = {});

/// Maximum over l of ||X_l - c_l X_ref||_F with real least-squares c_l, where
/// X_ref is the largest member. Zero when all members vanish.
double real_collinearity_residual(std::span<const ComplexMatrix> xs,
                                  std::vector<double>* coefficients = nullptr,
                                  int* reference = nullptr);

enum class Regime { pure, full_rank, rank_deficient };
enum class Verdict { saturable_certified, not_saturable, inconclusive };
std::string to_string(Regime r);
std::string to_string(Verdict v);

struct ConditionOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0xc0ffeeULL;
};

struct ConditionReport {
  Regime regime = Regime::rank_deficient;
  int r_plus = 0;
  int r_zero = 0;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  PairwiseCheck full_comm;
  PairwiseCheck avg_comm;
  PartialCommutativity partial_comm;
  PairwiseCheck cond1;
  PairwiseCheck cond3;
  Condition4Result cond4;
  Cond2PrimeResult cond2prime;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> reasoning;
};

struct VerdictResult {
  Verdict verdict;
  std::vector<std::string> trace;
};

/// Runs every pointwise check except Condition 2' and fills in the verdict.
ConditionReport evaluate_conditions(const ComplexMatrix& rho,
                                    const SupportDecomposition& dec,
                                    const SLDSet& slds,
                                    const ConditionOptions& options = {});

/// Decision tree over the populated report.
VerdictResult verdict(const ConditionReport& report, int r_plus, int r_zero);

/// Stores a Condition 2' result and recomputes the verdict.
void attach_condition2prime(ConditionReport& report, Cond2PrimeResult result);

/// Full-space null POVM elements Y W D_j W^dagger Y^dagger.
std::vector<ComplexMatrix> null_elements_from_W(const SupportDecomposition& dec,
                                                const ComplexMatrix& W);

}  // namespace qcrb
