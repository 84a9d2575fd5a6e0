#pragma once

// Parameterized state families rho(theta), their parameter derivatives, and
// the support/null split of a density matrix at a point.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcrb/numkernel.hpp"

namespace qcrb {

/// Open box lower < theta < upper, optionally cut down by a constraint.
struct Domain {
  RealVector lower;
  RealVector upper;
  std::function<bool(const RealVector&)> constraint;
  std::string description;

  bool contains(const RealVector& theta) const;
};

struct StateModel {
  std::string name;
  int dimension = 0;
  int num_params = 0;
  Domain domain;

  std::function<ComplexMatrix(const RealVector&)> state;
  // Optional pieces; an empty function means "not provided".
  std::function<ComplexMatrix(const RealVector&, int)> derivative;
  std::function<ComplexMatrix(const RealVector&)> support_basis;
  std::function<ComplexMatrix(const RealVector&, int)> support_basis_derivative;
  std::function<ComplexMatrix(const RealVector&)> null_basis;

  bool has_analytic_derivative() const { return static_cast<bool>(derivative); }
  bool has_support_basis() const { return static_cast<bool>(support_basis); }
};

enum class DerivativeKind { analytic, central_fd, richardson, supplied };

struct DerivativeScheme {
  DerivativeKind kind = DerivativeKind::analytic;
  double step = 1e-5;

  static DerivativeScheme analytic() { return {DerivativeKind::analytic, 0.0}; }
  static DerivativeScheme central(double h = 1e-5) {
    return {DerivativeKind::central_fd, h};
  }
  static DerivativeScheme richardson(double h = 1e-5) {
    return {DerivativeKind::richardson, h};
  }
  static DerivativeScheme supplied() { return {DerivativeKind::supplied, 0.0}; }

  bool is_exact() const {
    return kind == DerivativeKind::analytic || kind == DerivativeKind::supplied;
  }
};

std::string to_string(DerivativeKind kind);

/// Default tolerance for derivative-dependent identities: 1e-8 for exact
/// derivatives, 1e-4 for finite differences.
double default_tolerance(const DerivativeScheme& scheme);

struct StateAtPoint {
  RealVector theta;
  ComplexMatrix rho;
  std::vector<ComplexMatrix> drho;
  DerivativeScheme scheme;

  int dimension() const { return static_cast<int>(rho.rows()); }
  int num_params() const { return static_cast<int>(drho.size()); }
};

/// Checks n x n shape, Hermiticity (1e-12), PSD floor (-1e-12) and unit trace
/// (1e-12). Throws InvalidDensity / NotPositive / TraceNotOne.
void validate_density(const ComplexMatrix& rho, double tol = 1e-12);

/// Evaluates rho(theta) and all partial derivatives. Uses analytic
/// derivatives when the model has them and no scheme is forced.
StateAtPoint evaluate(const StateModel& model, const RealVector& theta,
                      std::optional<DerivativeScheme> scheme = std::nullopt);

/// (rho(theta + h e_l) - rho(theta - h e_l)) / 2h, symmetrized.
ComplexMatrix finite_difference_derivative(const StateModel& model,
                                           const RealVector& theta, int l,
                                           double h);

/// Richardson extrapolation (4 D(h/2) - D(h)) / 3 of the central difference.
ComplexMatrix richardson_derivative(const StateModel& model,
                                    const RealVector& theta, int l, double h);

/// Derivative of the model's support basis V(theta): analytic when provided,
/// else central differences on support_basis with step h.
ComplexMatrix support_basis_derivative(const StateModel& model,
                                       const RealVector& theta, int l,
                                       double h = 1e-5);

struct SupportDecomposition {
  RealVector q;          // support eigenvalues, descending
  ComplexMatrix V;       // n x r+ isometry
  ComplexMatrix Y;       // n x r0 isometry
  ComplexMatrix P_plus;
  ComplexMatrix P_zero;
  int r_plus = 0;
  int r_zero = 0;
  double rank_tol = 1e-10;        // relative
  double rank_cutoff = 0.0;       // absolute: rank_tol * lambda_max
  RealVector null_eigenvalues;
  std::vector<double> null_block_residuals;  // ||P0 drho_l P0||_F

  ComplexMatrix rho_plus() const {
    return q.cast<Complex>().asDiagonal();
  }
};

struct DecompositionOptions {
  double rank_tol = 1e-10;
  double ambiguity_factor = 10.0;
  // Tolerance on P0 drho P0, relative to max(1, ||drho||_F). Negative means
  // "derive from the derivative scheme".
  double deriv_tol = -1.0;
};

/// Support/null split from the eigendecomposition of rho.
///
/// Throws RankAmbiguous when an eigenvalue falls inside
/// (rank_tol, ambiguity_factor * rank_tol) relative to the largest eigenvalue,
/// and RankNotLocallyConstant when some P0 drho_l P0 is non-zero.
SupportDecomposition support_decomposition(const StateAtPoint& sp,
                                           const DecompositionOptions& options = {});

SupportDecomposition support_decomposition(const ComplexMatrix& rho,
                                           std::span<const ComplexMatrix> drho,
                                           double deriv_tol,
                                           const DecompositionOptions& options = {});

}  // namespace qcrb
