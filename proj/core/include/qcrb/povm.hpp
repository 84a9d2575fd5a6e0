#pragma once

// Finite-outcome measurements: validation, regular/null classification, the
// optimal projective measurement for saturable states, and the structural
// saturation certificate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcrb/model.hpp"
#include "qcrb/numkernel.hpp"
#include "qcrb/sld.hpp"

namespace qcrb {

enum class ElementKind { unclassified, regular, null };
std::string to_string(ElementKind k);

struct POVM {
  std::vector<ComplexMatrix> elements;
  std::vector<double> labels;  // outcome values; element index by default
  std::vector<ElementKind> kinds;
  bool projective = false;

  int size() const { return static_cast<int>(elements.size()); }
  int dimension() const { return elements.empty() ? 0 : static_cast<int>(elements[0].rows()); }
};

/// Wraps elements with default labels 0..M-1 and the projective flag taken
/// from validate().
POVM make_povm(std::vector<ComplexMatrix> elements, double tol = 1e-10);

struct POVMDiagnostics {
  bool valid = false;
  bool projective = false;
  double completeness_residual = 0.0;  // ||sum E_k - I||_F
  double min_eigenvalue = 0.0;         // over all elements
  double idempotency_residual = 0.0;   // max ||E_k^2 - E_k||_F
  double commutation_residual = 0.0;   // max ||[E_k, E_j]||_F
  std::vector<std::string> violations;
};

POVMDiagnostics validate(const POVM& povm, double tol = 1e-10);

/// Throws InvalidPOVM listing every violation.
void require_valid(const POVM& povm, double tol = 1e-10);

struct Classification {
  std::vector<ElementKind> kinds;
  std::vector<double> probabilities;
  std::vector<double> null_structure_residuals;  // ||E_{++}|| + ||E_{+0}|| per null element, else 0
  int num_regular = 0;
  int num_null = 0;
};

/// Regular iff tr(rho E_k) > tol. Null elements must have vanishing ++ and +0
/// blocks, otherwise StructureViolation. Also stores the kinds in the POVM.
Classification classify_elements(POVM& povm, const ComplexMatrix& rho,
                                 const SupportDecomposition& dec, double tol = 1e-10);

struct ConstructedPOVM {
  POVM povm;
  JointSpectrum spectrum;      // joint eigenprojectors of the ++ blocks
  ComplexMatrix W;             // null-space rotation (r0 x r0)
};

/// Regular elements V Pi_k V^dagger from the joint eigenprojectors of the
/// Lpp_l; null elements Y w_j w_j^dagger Y^dagger for the columns of W.
/// Throws MissingW when r0 > 0 and no W is given, and NotCommuting /
/// JointDiagonalizationFailed when the ++ blocks do not commute.
ConstructedPOVM construct_optimal(const SupportDecomposition& dec, const SLDSet& slds,
                                  const std::optional<ComplexMatrix>& W,
                                  double tol = 1e-8, std::uint64_t seed = 0x51d5eedULL);

struct RegularCertificate {
  int element = 0;
  std::vector<double> constants;        // Re c_l
  std::vector<double> imaginary_parts;  // Im c_l
  std::vector<double> residuals;        // ||E L_l P+ - Re(c_l) E P+||_F
  bool vacuous = false;                 // E P+ vanishes
  bool pass = true;
};

struct NullCertificate {
  int element = 0;
  RealMatrix constants;  // c_lm with E00 Lpz_l^dagger = c_lm E00 Lpz_m^dagger; NaN if undefined
  double residual = 0.0;
  bool pass = true;
};

struct SaturationCertificate {
  std::vector<RegularCertificate> regular;
  std::vector<NullCertificate> null;
  double tolerance = 0.0;
  bool pass = true;

  int failed_elements() const;
};

/// Checks E_k L_l P+ = c E_k P+ with real c for every regular element and
/// real collinearity of {E_{k,00} Lpz_l^dagger}_l for every null element.
/// Classifies the POVM first when needed.
SaturationCertificate verify_saturation_structural(POVM& povm, const ComplexMatrix& rho,
                                                   const SupportDecomposition& dec,
                                                   const SLDSet& slds, double tol = 1e-8);

/// Haar-random rank-one projective measurement.
POVM random_projective_povm(int n, std::mt19937_64& rng);

/// Random informationally rich POVM: M rank-one elements S^{-1/2} g_k g_k^dagger S^{-1/2}.
POVM random_povm(int n, int m, std::mt19937_64& rng);

}  // namespace qcrb
