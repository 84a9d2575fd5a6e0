#include "qcrb/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb {

bool Domain::contains(const RealVector& theta) const {
  if (theta.size() != lower.size() || theta.size() != upper.size()) return false;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > lower[i] && theta[i] < upper[i])) return false;
  }
  return !constraint || constraint(theta);
}

std::string to_string(DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::analytic: return "analytic";
    case DerivativeKind::central_fd: return "central_fd";
    case DerivativeKind::richardson: return "richardson";
    case DerivativeKind::supplied: return "supplied";
  }
  return "unknown";
}

double default_tolerance(const DerivativeScheme& scheme) {
  return scheme.is_exact() ? 1e-8 : 1e-4;
}

void validate_density(const ComplexMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw Error(ErrorCode::InvalidDensity,
                "density matrix must be square and non-empty");
  }
  if (!rho.allFinite()) {
    throw Error(ErrorCode::InvalidDensity, "density matrix has non-finite entries");
  }
  const double asym = hermiticity_residual(rho);
  if (asym > tol * std::max(1.0, rho.norm())) {
    std::ostringstream msg;
    msg << "density matrix is not Hermitian: ||rho - rho^dagger||_F = " << asym;
    throw Error(ErrorCode::InvalidDensity, msg.str());
  }
  const Complex trace = rho.trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > tol) {
    std::ostringstream msg;
    msg << "density matrix trace is " << trace.real() << " (expected 1)";
    throw Error(ErrorCode::TraceNotOne, msg.str());
  }
  const auto e = eig_hermitian(rho, 1.0);
  if (e.eigenvalues[0] < -tol) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << e.eigenvalues[0];
    throw Error(ErrorCode::NotPositive, msg.str());
  }
}

namespace {

void require_in_domain(const StateModel& model, const RealVector& theta) {
  if (theta.size() != model.num_params) {
    std::ostringstream msg;
    msg << "model '" << model.name << "' expects " << model.num_params
        << " parameters, got " << theta.size();
    throw Error(ErrorCode::DomainViolation, msg.str());
  }
  if (!model.domain.contains(theta)) {
    std::ostringstream msg;
    msg << "theta = (";
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      msg << (i ? ", " : "") << theta[i];
    }
    msg << ") lies outside the open domain of model '" << model.name << "'";
    throw Error(ErrorCode::DomainViolation, msg.str());
  }
}

ComplexMatrix central_difference(const std::function<ComplexMatrix(const RealVector&)>& f,
                                 const RealVector& theta, int l, double h) {
  RealVector plus = theta;
  RealVector minus = theta;
  plus[l] += h;
  minus[l] -= h;
  return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace

ComplexMatrix finite_difference_derivative(const StateModel& model,
                                           const RealVector& theta, int l,
                                           double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "finite difference step must be > 0");
  }
  if (l < 0 || l >= model.num_params) {
    throw Error(ErrorCode::InvalidParameter, "parameter index out of range");
  }
  require_in_domain(model, theta);
  RealVector plus = theta;
  RealVector minus = theta;
  plus[l] += h;
  minus[l] -= h;
  require_in_domain(model, plus);
  require_in_domain(model, minus);
  return hermitian_part(central_difference(model.state, theta, l, h));
}

ComplexMatrix richardson_derivative(const StateModel& model,
                                    const RealVector& theta, int l, double h) {
  const ComplexMatrix coarse = finite_difference_derivative(model, theta, l, h);
  const ComplexMatrix fine = finite_difference_derivative(model, theta, l, h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

ComplexMatrix support_basis_derivative(const StateModel& model,
                                       const RealVector& theta, int l,
                                       double h) {
  if (!model.support_basis) {
    throw Error(ErrorCode::InvalidParameter,
                "model '" + model.name + "' has no support basis map");
  }
  if (model.support_basis_derivative) return model.support_basis_derivative(theta, l);
  return central_difference(model.support_basis, theta, l, h);
}

StateAtPoint evaluate(const StateModel& model, const RealVector& theta,
                      std::optional<DerivativeScheme> scheme) {
  require_in_domain(model, theta);
  StateAtPoint sp;
  sp.theta = theta;
  sp.rho = model.state(theta);
  if (sp.rho.rows() != model.dimension || sp.rho.cols() != model.dimension) {
    throw Error(ErrorCode::InvalidDensity,
                "model '" + model.name + "' returned a state of the wrong size");
  }
  validate_density(sp.rho);
  sp.rho = hermitian_part(sp.rho);

  DerivativeScheme chosen = scheme.value_or(
      model.has_analytic_derivative() ? DerivativeScheme::analytic()
                                      : DerivativeScheme::central());
  if (chosen.kind == DerivativeKind::analytic && !model.has_analytic_derivative()) {
    throw Error(ErrorCode::InvalidParameter,
                "model '" + model.name + "' has no analytic derivatives");
  }
  if (chosen.kind == DerivativeKind::supplied) {
    throw Error(ErrorCode::InvalidParameter,
                "'supplied' derivatives only come from numeric model files");
  }
  sp.scheme = chosen;
  for (int l = 0; l < model.num_params; ++l) {
    switch (chosen.kind) {
      case DerivativeKind::analytic:
        sp.drho.push_back(hermitian_part(model.derivative(theta, l)));
        break;
      case DerivativeKind::central_fd:
        sp.drho.push_back(finite_difference_derivative(model, theta, l, chosen.step));
        break;
      case DerivativeKind::richardson:
        sp.drho.push_back(richardson_derivative(model, theta, l, chosen.step));
        break;
      case DerivativeKind::supplied:
        break;
    }
  }
  return sp;
}

SupportDecomposition support_decomposition(const StateAtPoint& sp,
                                           const DecompositionOptions& options) {
  const double deriv_tol =
      options.deriv_tol >= 0.0 ? options.deriv_tol : default_tolerance(sp.scheme);
  return support_decomposition(sp.rho, sp.drho, deriv_tol, options);
}

SupportDecomposition support_decomposition(const ComplexMatrix& rho,
                                           std::span<const ComplexMatrix> drho,
                                           double deriv_tol,
                                           const DecompositionOptions& options) {
  const auto e = eig_hermitian(rho);
  const auto n = rho.rows();
  const double lambda_max = e.eigenvalues[n - 1];
  const double cutoff = options.rank_tol * lambda_max;
  const double band_top = options.ambiguity_factor * cutoff;

  SupportDecomposition dec;
  dec.rank_tol = options.rank_tol;
  dec.rank_cutoff = cutoff;

  Eigen::Index r0 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = e.eigenvalues[i];
    if (v <= cutoff) {
      ++r0;
    } else if (v < band_top) {
      std::ostringstream msg;
      msg << "eigenvalue " << v << " lies in the rank ambiguity band ("
          << cutoff << ", " << band_top << ")";
      throw Error(ErrorCode::RankAmbiguous, msg.str());
    }
  }
  const Eigen::Index rp = n - r0;
  dec.r_plus = static_cast<int>(rp);
  dec.r_zero = static_cast<int>(r0);
  dec.null_eigenvalues = e.eigenvalues.head(r0);

  // Support eigenvalues in descending order.
  dec.q.resize(rp);
  dec.V.resize(n, rp);
  for (Eigen::Index k = 0; k < rp; ++k) {
    dec.q[k] = e.eigenvalues[n - 1 - k];
    dec.V.col(k) = e.eigenvectors.col(n - 1 - k);
  }
  dec.Y = e.eigenvectors.leftCols(r0);
  fix_column_phases(dec.V);
  fix_column_phases(dec.Y);
  dec.P_plus = dec.V * dec.V.adjoint();
  dec.P_zero = dec.Y * dec.Y.adjoint();

  for (std::size_t l = 0; l < drho.size(); ++l) {
    const ComplexMatrix block = dec.Y.adjoint() * drho[l] * dec.Y;
    const double r = block.norm();
    dec.null_block_residuals.push_back(r);
    const double bound = deriv_tol * std::max(1.0, drho[l].norm());
    if (r > bound) {
      std::ostringstream msg;
      msg << "||P0 d_" << l << " rho P0||_F = " << r << " exceeds " << bound
          << ": the rank of rho is not locally constant";
      throw Error(ErrorCode::RankNotLocallyConstant, msg.str());
    }
  }
  return dec;
}

}  // namespace qcrb
