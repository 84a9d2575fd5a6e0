#pragma once

// Dense complex matrix kernel: Hermitian eigendecomposition, joint spectral
// decomposition of commuting Hermitian families, and residual metrics.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcrb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct HermitianEigen {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Decomposes A after symmetrizing it as (A + A^dagger)/2.
///
/// Throws NonSquare for non-square input and NotHermitian when
/// ||A - A^dagger||_F exceeds herm_tol * max(1, ||A||_F).
HermitianEigen eig_hermitian(const ComplexMatrix& a, double herm_tol = 1e-8);

/// Common spectral projectors of a commuting Hermitian family.
///
/// labels[k][l] is the eigenvalue of family member l on projectors[k].
struct JointSpectrum {
  std::vector<ComplexMatrix> projectors;
  std::vector<std::vector<double>> labels;
  std::vector<double> mixture_coefficients;
  std::uint64_t seed = 0;
  double max_commutator_residual = 0.0;
  std::vector<double> reconstruction_residuals;

  std::size_t count() const { return projectors.size(); }
};

struct JointOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0x51d5eedULL;
  // Absolute size below which members count as zero and against which
  // near-zero members are compared; 0 keeps every test relative.
  double scale = 0.0;
};

/// Diagonalizes a random real mixture of the family, clusters its spectrum,
/// and refines every cluster by successively diagonalizing each member
/// restricted to it. Throws NotCommuting if some pair has
/// ||[A_l, A_m]||_F > tol * ||A_l||_F * ||A_m||_F.
JointSpectrum joint_eigenprojectors(std::span<const ComplexMatrix> family,
                                    const JointOptions& options = {});

/// ||AB - BA||_F. Throws ShapeMismatch unless both are square of equal size.
double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b);

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return (a + a.adjoint()) / 2.0;
}

double hermiticity_residual(const ComplexMatrix& a);

/// ||U^dagger U - I||_F; for an isometry (tall U) this measures column
/// orthonormality.
double unitarity_residual(const ComplexMatrix& u);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square root of a positive semidefinite matrix; negative eigenvalues from
/// roundoff are clipped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Moore-Penrose inverse; singular values below rel_tol * sigma_max are
/// treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double rel_tol = 1e-10);

/// Orthonormal basis (columns) of ker(A).
ComplexMatrix null_space(const ComplexMatrix& a, double rel_tol = 1e-10);

/// Orthonormal columns spanning the orthogonal complement of range(Q), Q
/// having orthonormal columns.
ComplexMatrix orthonormal_complement(const ComplexMatrix& q);

/// Makes the largest-modulus entry of every column real and positive.
void fix_column_phases(ComplexMatrix& m);

/// Haar-random unitary via QR of a complex Ginibre matrix.
ComplexMatrix random_unitary(int n, std::mt19937_64& rng);

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng);

ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng);

/// Splits a sorted sequence into runs whose consecutive gaps are <= gap_tol.
/// Returns the start index of every run plus a final end sentinel.
std::vector<std::size_t> cluster_sorted(const RealVector& sorted_values,
                                        double gap_tol);

}  // namespace qcrb
