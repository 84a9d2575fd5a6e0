#include "qcrb/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qcrb/conditions.hpp"
#include "qcrb/errors.hpp"

namespace qcrb {

std::string to_string(ElementKind k) {
  switch (k) {
    case ElementKind::unclassified: return "unclassified";
    case ElementKind::regular: return "regular";
    case ElementKind::null: return "null";
  }
  return "unclassified";
}

POVM make_povm(std::vector<ComplexMatrix> elements, double tol) {
  POVM povm;
  povm.elements = std::move(elements);
  for (int k = 0; k < povm.size(); ++k) povm.labels.push_back(k);
  povm.kinds.assign(povm.elements.size(), ElementKind::unclassified);
  povm.projective = validate(povm, tol).projective;
  return povm;
}

POVMDiagnostics validate(const POVM& povm, double tol) {
  POVMDiagnostics d;
  if (povm.elements.empty()) {
    d.violations.push_back("POVM has no elements");
    return d;
  }
  const auto n = povm.elements.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  d.min_eigenvalue = std::numeric_limits<double>::infinity();
  bool shapes_ok = true;
  for (int k = 0; k < povm.size(); ++k) {
    const auto& e = povm.elements[k];
    if (e.rows() != n || e.cols() != n) {
      std::ostringstream msg;
      msg << "element " << k << " is " << e.rows() << "x" << e.cols()
          << ", expected " << n << "x" << n;
      d.violations.push_back(msg.str());
      shapes_ok = false;
      continue;
    }
    const double asym = hermiticity_residual(e);
    if (asym > tol * std::max(1.0, e.norm())) {
      std::ostringstream msg;
      msg << "element " << k << " is not Hermitian (residual " << asym << ")";
      d.violations.push_back(msg.str());
      shapes_ok = false;
      continue;
    }
    total += e;
    const double lo = eig_hermitian(e, 1.0).eigenvalues[0];
    d.min_eigenvalue = std::min(d.min_eigenvalue, lo);
    if (lo < -tol) {
      std::ostringstream msg;
      msg << "element " << k << " has negative eigenvalue " << lo;
      d.violations.push_back(msg.str());
    }
  }
  if (!shapes_ok) return d;

  d.completeness_residual = (total - ComplexMatrix::Identity(n, n)).norm();
  if (d.completeness_residual > tol) {
    std::ostringstream msg;
    msg << "elements do not sum to the identity (||sum E - I||_F = "
        << d.completeness_residual << ")";
    d.violations.push_back(msg.str());
  }

  for (int k = 0; k < povm.size(); ++k) {
    const auto& e = povm.elements[k];
    d.idempotency_residual = std::max(d.idempotency_residual, (e * e - e).norm());
    for (int j = k + 1; j < povm.size(); ++j) {
      d.commutation_residual =
          std::max(d.commutation_residual, commutator_residual(e, povm.elements[j]));
    }
  }
  d.valid = d.violations.empty();
  d.projective = d.valid && d.idempotency_residual <= tol && d.commutation_residual <= tol;
  return d;
}

void require_valid(const POVM& povm, double tol) {
  const auto d = validate(povm, tol);
  if (d.valid) return;
  std::ostringstream msg;
  msg << "invalid POVM:";
  for (const auto& v : d.violations) msg << " " << v << ";";
  throw Error(ErrorCode::InvalidPOVM, msg.str());
}

Classification classify_elements(POVM& povm, const ComplexMatrix& rho,
                                 const SupportDecomposition& dec, double tol) {
  Classification c;
  for (int k = 0; k < povm.size(); ++k) {
    const auto& e = povm.elements[k];
    const double p = (rho * e).trace().real();
    c.probabilities.push_back(p);
    if (p > tol) {
      c.kinds.push_back(ElementKind::regular);
      c.null_structure_residuals.push_back(0.0);
      ++c.num_regular;
      continue;
    }
    // A PSD element with tr(rho E) <= tol has ||E V sqrt(q)||^2 <= tol, so its
    // ++ and +0 blocks are at most of order sqrt(tol / q_min).
    const double pp = (dec.V.adjoint() * e * dec.V).norm();
    const double pz = (dec.V.adjoint() * e * dec.Y).norm();
    const double q_min = dec.r_plus > 0 ? dec.q.minCoeff() : 1.0;
    const double bound = 10.0 * std::sqrt(std::max(tol, 0.0) / q_min) * std::max(1.0, e.norm());
    if (pp + pz > bound) {
      std::ostringstream msg;
      msg << "element " << k << " has tr(rho E) = " << p
          << " but non-zero support blocks (||E_++|| = " << pp
          << ", ||E_+0|| = " << pz << ")";
      throw Error(ErrorCode::StructureViolation, msg.str());
    }
    c.kinds.push_back(ElementKind::null);
    c.null_structure_residuals.push_back(pp + pz);
    ++c.num_null;
  }
  povm.kinds = c.kinds;
  return c;
}

ConstructedPOVM construct_optimal(const SupportDecomposition& dec, const SLDSet& slds,
                                  const std::optional<ComplexMatrix>& W, double tol,
                                  std::uint64_t seed) {
  if (dec.r_zero > 0 && !W) {
    throw Error(ErrorCode::MissingW,
                "a null-space rotation W is required when rho is rank deficient");
  }
  if (W && (W->rows() != dec.r_zero || W->cols() != dec.r_zero)) {
    throw Error(ErrorCode::ShapeMismatch, "W must be r0 x r0");
  }
  ConstructedPOVM out;
  double scale = 0.0;
  for (const auto& l : slds.full) scale = std::max(scale, l.norm());
  out.spectrum = joint_eigenprojectors(slds.Lpp, {tol, seed, scale});
  std::vector<ComplexMatrix> elements;
  for (const auto& proj : out.spectrum.projectors) {
    elements.push_back(hermitian_part(dec.V * proj * dec.V.adjoint()));
  }
  const auto regular_count = elements.size();
  if (dec.r_zero > 0) {
    out.W = *W;
    for (auto& e : null_elements_from_W(dec, *W)) elements.push_back(hermitian_part(e));
  } else {
    out.W = ComplexMatrix(0, 0);
  }
  out.povm = make_povm(std::move(elements), 1e-8);
  out.povm.kinds.assign(out.povm.elements.size(), ElementKind::null);
  std::fill_n(out.povm.kinds.begin(), regular_count, ElementKind::regular);
  return out;
}

int SaturationCertificate::failed_elements() const {
  int n = 0;
  for (const auto& r : regular) n += r.pass ? 0 : 1;
  for (const auto& z : null) n += z.pass ? 0 : 1;
  return n;
}

SaturationCertificate verify_saturation_structural(POVM& povm, const ComplexMatrix& rho,
                                                   const SupportDecomposition& dec,
                                                   const SLDSet& slds, double tol) {
  const bool classified =
      static_cast<int>(povm.kinds.size()) == povm.size() &&
      std::none_of(povm.kinds.begin(), povm.kinds.end(),
                   [](ElementKind k) { return k == ElementKind::unclassified; });
  if (!classified) classify_elements(povm, rho, dec);

  SaturationCertificate cert;
  cert.tolerance = tol;
  const int p = slds.num_params();
  double l_scale = 0.0;
  for (const auto& l : slds.full) l_scale = std::max(l_scale, l.norm());

  for (int k = 0; k < povm.size(); ++k) {
    const auto& e = povm.elements[k];
    if (povm.kinds[k] == ElementKind::regular) {
      RegularCertificate rc;
      rc.element = k;
      const ComplexMatrix b = e * dec.P_plus;
      const double bn = b.norm();
      rc.vacuous = bn <= tol * std::max(1.0, e.norm());
      const double threshold = tol * std::max(1.0, e.norm() * l_scale);
      for (int l = 0; l < p; ++l) {
        const ComplexMatrix x = e * slds.full[l] * dec.P_plus;
        Complex c{0.0, 0.0};
        if (!rc.vacuous) c = (b.conjugate().cwiseProduct(x)).sum() / (bn * bn);
        const double r = rc.vacuous ? 0.0 : (x - c.real() * b).norm();
        rc.constants.push_back(c.real());
        rc.imaginary_parts.push_back(c.imag());
        rc.residuals.push_back(r);
        if (r > threshold) rc.pass = false;
      }
      if (!rc.pass) cert.pass = false;
      cert.regular.push_back(std::move(rc));
    } else {
      NullCertificate nc;
      nc.element = k;
      nc.constants = RealMatrix::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
      if (dec.r_zero > 0 && p > 0) {
        const ComplexMatrix e00 = dec.Y.adjoint() * e * dec.Y;
        std::vector<ComplexMatrix> xs;
        double scale = 0.0;
        for (int l = 0; l < p; ++l) {
          xs.push_back(e00 * slds.Lpz[l].adjoint());
          scale = std::max(scale, slds.Lpz[l].norm());
        }
        std::vector<double> coeffs;
        nc.residual = real_collinearity_residual(xs, &coeffs);
        for (int l = 0; l < p; ++l) {
          for (int m = 0; m < p; ++m) {
            if (std::abs(coeffs[m]) > 0.0) nc.constants(l, m) = coeffs[l] / coeffs[m];
          }
        }
        nc.pass = nc.residual <= tol * std::max(1.0, e00.norm() * scale);
      }
      if (!nc.pass) cert.pass = false;
      cert.null.push_back(std::move(nc));
    }
  }
  return cert;
}

POVM random_projective_povm(int n, std::mt19937_64& rng) {
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<ComplexMatrix> elements;
  for (int k = 0; k < n; ++k) elements.push_back(u.col(k) * u.col(k).adjoint());
  return make_povm(std::move(elements), 1e-8);
}

POVM random_povm(int n, int m, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(n, m, rng);
  const ComplexMatrix s = g * g.adjoint();
  const ComplexMatrix s_inv_half = pseudo_inverse(psd_sqrt(s));
  std::vector<ComplexMatrix> elements;
  for (int k = 0; k < m; ++k) {
    const ComplexVector v = s_inv_half * g.col(k);
    elements.push_back(v * v.adjoint());
  }
  return make_povm(std::move(elements), 1e-8);
}

}  // namespace qcrb
