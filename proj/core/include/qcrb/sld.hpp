#pragma once

// Symmetric logarithmic derivatives in support/null block form and the
// quantum Fisher information matrix.

#include <span>
#include <vector>

#include "qcrb/model.hpp"
#include "qcrb/numkernel.hpp"

namespace qcrb {

/// An operator split along the support (+) and null (0) subspaces:
/// pp = V^dagger O V, pz = V^dagger O Y, zp = Y^dagger O V, zz = Y^dagger O Y.
struct BlockOperator {
  ComplexMatrix pp;
  ComplexMatrix pz;
  ComplexMatrix zp;
  ComplexMatrix zz;
};

BlockOperator to_blocks(const ComplexMatrix& op, const SupportDecomposition& dec);

ComplexMatrix from_blocks(const BlockOperator& blocks,
                          const SupportDecomposition& dec);

struct SLDSet {
  std::vector<ComplexMatrix> Lpp;
  std::vector<ComplexMatrix> Lpz;
  std::vector<ComplexMatrix> Lzz;
  std::vector<ComplexMatrix> full;
  std::vector<double> residuals;  // ||(L rho + rho L)/2 - drho||_F
  double tolerance = 1e-8;

  int num_params() const { return static_cast<int>(full.size()); }
};

/// Solves the SLD equations blockwise in the eigenbasis of rho:
/// (Lpp)_jk = 2 R_jk / (q_j + q_k) with R = V^dagger drho V,
/// Lpz = 2 diag(q)^-1 V^dagger drho Y, Lzz = 0.
///
/// Throws SLDInconsistent when a defining-equation residual exceeds
/// sld_tol * max(1, ||drho||_F).
SLDSet compute_sld(const SupportDecomposition& dec, const ComplexMatrix& rho,
                   std::span<const ComplexMatrix> drho, double sld_tol = 1e-8);

/// F_jk = Re tr(diag(q) (Lpp_j Lpp_k + Lpz_j Lpz_k^dagger)).
RealMatrix qfim(const SupportDecomposition& dec, const SLDSet& slds);

/// F_jk = tr(rho {L_j, L_k}) / 2 evaluated on full-space operators; used to
/// cross-check the block formula.
RealMatrix qfim_from_full(const ComplexMatrix& rho,
                          std::span<const ComplexMatrix> slds);

}  // namespace qcrb
