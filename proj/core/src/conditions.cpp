#include "qcrb/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <unsupported/Eigen/LevenbergMarquardt>
#include <unsupported/Eigen/NumericalDiff>

#include "qcrb/errors.hpp"

namespace qcrb {

std::string to_string(Certification c) {
  switch (c) {
    case Certification::certified_yes: return "CERTIFIED_YES";
    case Certification::certified_no: return "CERTIFIED_NO";
    case Certification::unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string to_string(Cond2PrimePath p) {
  switch (p) {
    case Cond2PrimePath::diagonal_VdV: return "diagonal_VdV";
    case Cond2PrimePath::user_supplied_U: return "user_supplied_U";
    case Cond2PrimePath::lemma3_D0: return "lemma3_D0";
    case Cond2PrimePath::not_checked: return "not_checked";
  }
  return "not_checked";
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::pure: return "pure";
    case Regime::full_rank: return "full_rank";
    case Regime::rank_deficient: return "rank_deficient";
  }
  return "rank_deficient";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::saturable_certified: return "SATURABLE_CERTIFIED";
    case Verdict::not_saturable: return "NOT_SATURABLE";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Commutator-type residuals are bilinear in the SLDs, so thresholds scale
// with the squared largest SLD norm.
double sld_scale(const SLDSet& slds) {
  double s = 0.0;
  for (const auto& l : slds.full) s = std::max(s, l.squaredNorm());
  return s;
}

template <typename F>
PairwiseCheck pairwise(int p, double threshold, F&& residual) {
  PairwiseCheck out;
  out.pairwise = RealMatrix::Zero(p, p);
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      const double r = residual(l, m);
      out.pairwise(l, m) = r;
      out.pairwise(m, l) = r;
      out.summary.residual = std::max(out.summary.residual, r);
    }
  }
  out.summary.threshold = threshold;
  out.summary.pass = out.summary.residual <= threshold;
  return out;
}

ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

// Orthonormal basis of the range of a (numerically exact) projector.
ComplexMatrix projector_range(const ComplexMatrix& projector) {
  const auto e = eig_hermitian(projector, 1e-6);
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    if (e.eigenvalues[i] > 0.5) ++count;
  }
  return e.eigenvectors.rightCols(count);
}

// Least-squares residual of the column collinearity conditions for
// W = base * exp(iH), with H Hermitian, zero on the diagonal since column
// phases do not affect collinearity, packed into k(k-1) reals. For each
// column the antihermitian parts of x_l x_m^dagger vanish exactly when the
// columns x_l = B_l w are pairwise real multiples of one another.
struct CollinearityResidual : Eigen::DenseFunctor<double> {
  const std::vector<ComplexMatrix>* blocks = nullptr;
  ComplexMatrix base;

  CollinearityResidual(const std::vector<ComplexMatrix>& b, const ComplexMatrix& start)
      : Eigen::DenseFunctor<double>(static_cast<int>(start.cols() * (start.cols() - 1)),
                                    residual_count(b, start.cols())),
        blocks(&b),
        base(start) {}

  static int residual_count(const std::vector<ComplexMatrix>& b, Eigen::Index k) {
    const auto p = static_cast<Eigen::Index>(b.size());
    const Eigen::Index rows = b.front().rows();
    return static_cast<int>(std::max<Eigen::Index>(1, k * (p * (p - 1) / 2) * rows * rows * 2));
  }

  ComplexMatrix unitary(const Eigen::VectorXd& x) const {
    const auto k = base.cols();
    ComplexMatrix h = ComplexMatrix::Zero(k, k);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        h(i, j) = Complex(x[at], x[at + 1]);
        h(j, i) = std::conj(h(i, j));
        at += 2;
      }
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    ComplexVector phases(k);
    for (Eigen::Index i = 0; i < k; ++i) phases[i] = std::exp(Complex(0.0, es.eigenvalues()[i]));
    return base * es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const ComplexMatrix w = unitary(x);
    const auto& b = *blocks;
    f.setZero(values());
    Eigen::Index at = 0;
    std::vector<ComplexMatrix> cols;
    for (const auto& block : b) cols.push_back(block * w);
    for (Eigen::Index s = 0; s < w.cols(); ++s) {
      for (std::size_t l = 0; l < b.size(); ++l) {
        for (std::size_t m = l + 1; m < b.size(); ++m) {
          const ComplexMatrix a = cols[l].col(s) * cols[m].col(s).adjoint() -
                                  cols[m].col(s) * cols[l].col(s).adjoint();
          for (Eigen::Index i = 0; i < a.size(); ++i) {
            f[at++] = a.data()[i].real();
            f[at++] = a.data()[i].imag();
          }
        }
      }
    }
    return 0;
  }
};

// Drives the collinearity residual to zero from a unitary starting point.
// Re-centering on the current iterate keeps the difference Jacobian accurate.
ComplexMatrix refine_collinear(const std::vector<ComplexMatrix>& blocks, ComplexMatrix w) {
  for (int round = 0; round < 3; ++round) {
    CollinearityResidual functor(blocks, w);
    Eigen::NumericalDiff<CollinearityResidual, Eigen::Central> diff(functor);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CollinearityResidual, Eigen::Central>> lm(diff);
    lm.setMaxfev(400);
    lm.setXtol(1e-15);
    lm.setFtol(1e-15);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(functor.inputs());
    lm.minimize(x);
    w = functor.unitary(x);
    // Restore exact unitarity lost to rounding.
    Eigen::HouseholderQR<ComplexMatrix> qr(w);
    ComplexMatrix q = qr.householderQ();
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      const Complex d = qr.matrixQR()(j, j);
      if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    w = q;
  }
  return w;
}

}  // namespace

double real_collinearity_residual(std::span<const ComplexMatrix> xs,
                                  std::vector<double>* coefficients,
                                  int* reference) {
  int ref = -1;
  double best = 0.0;
  for (std::size_t l = 0; l < xs.size(); ++l) {
    const double n = xs[l].norm();
    if (n > best) {
      best = n;
      ref = static_cast<int>(l);
    }
  }
  if (reference) *reference = ref;
  if (coefficients) coefficients->assign(xs.size(), 0.0);
  if (ref < 0) return 0.0;
  const auto& x_ref = xs[static_cast<std::size_t>(ref)];
  const double denom = x_ref.squaredNorm();
  double worst = 0.0;
  for (std::size_t l = 0; l < xs.size(); ++l) {
    const double c = (x_ref.conjugate().cwiseProduct(xs[l])).sum().real() / denom;
    if (coefficients) (*coefficients)[l] = c;
    worst = std::max(worst, (xs[l] - c * x_ref).norm());
  }
  return worst;
}

PairwiseCheck check_full_commutativity(const SLDSet& slds, double tol) {
  return pairwise(slds.num_params(), tol * sld_scale(slds), [&](int l, int m) {
    return commutator_residual(slds.full[l], slds.full[m]);
  });
}

PairwiseCheck check_average_commutativity(const ComplexMatrix& rho,
                                          const SLDSet& slds, double tol) {
  return pairwise(slds.num_params(), tol * sld_scale(slds), [&](int l, int m) {
    return std::abs((rho * commutator(slds.full[l], slds.full[m])).trace());
  });
}

PartialCommutativity check_partial_commutativity(const SupportDecomposition& dec,
                                                 const SLDSet& slds, double tol) {
  PartialCommutativity out;
  const int p = slds.num_params();
  out.summary.threshold = tol * sld_scale(slds);
  for (int l = 0; l < p; ++l) {
    for (int m = l + 1; m < p; ++m) {
      const ComplexMatrix projected =
          dec.V.adjoint() * commutator(slds.full[l], slds.full[m]) * dec.V;
      ComplexMatrix block = commutator(slds.Lpp[l], slds.Lpp[m]);
      if (dec.r_zero > 0) {
        block += slds.Lpz[l] * slds.Lpz[m].adjoint() -
                 slds.Lpz[m] * slds.Lpz[l].adjoint();
      }
      const double a = projected.norm();
      const double b = block.norm();
      out.summary.residual = std::max(out.summary.residual, a);
      out.block_form_residual = std::max(out.block_form_residual, b);
      out.cross_check_gap = std::max(out.cross_check_gap, (projected - block).norm());
    }
  }
  out.summary.pass = out.summary.residual <= out.summary.threshold;
  return out;
}

PairwiseCheck check_condition1(const SLDSet& slds, double tol) {
  return pairwise(slds.num_params(), tol * sld_scale(slds), [&](int l, int m) {
    return commutator_residual(slds.Lpp[l], slds.Lpp[m]);
  });
}

PairwiseCheck check_condition3(const SLDSet& slds, double tol) {
  return pairwise(slds.num_params(), tol * sld_scale(slds), [&](int l, int m) {
    if (slds.Lpz[l].size() == 0) return 0.0;
    return (slds.Lpz[l] * slds.Lpz[m].adjoint() -
            slds.Lpz[m] * slds.Lpz[l].adjoint())
        .norm();
  });
}

Condition4Verification verify_condition4(std::span<const ComplexMatrix> lpz,
                                         const ComplexMatrix& W, double tol,
                                         double scale_floor) {
  Condition4Verification out;
  const auto p = static_cast<int>(lpz.size());
  const auto cols = W.cols();
  std::vector<ComplexMatrix> rotated;
  double scale = 0.0;
  double max_col = 0.0;
  for (const auto& b : lpz) {
    rotated.push_back(b * W);
    scale = std::max(scale, b.norm());
    for (Eigen::Index s = 0; s < cols; ++s) {
      max_col = std::max(max_col, rotated.back().col(s).norm());
    }
  }
  out.threshold = tol * std::max(scale, scale_floor);
  const double vanish = tol * std::max(max_col, scale_floor);
  out.pass = true;
  for (Eigen::Index s = 0; s < cols; ++s) {
    RealMatrix lambdas = RealMatrix::Constant(p, p, kNaN);
    double worst = 0.0;
    for (int l = 0; l < p; ++l) {
      const ComplexVector cl = rotated[l].col(s);
      for (int m = 0; m < p; ++m) {
        const ComplexVector cm = rotated[m].col(s);
        const double nm = cm.norm();
        if (nm <= vanish) continue;  // covered by the (m, l) ordering
        const double lambda = cm.dot(cl).real() / (nm * nm);
        lambdas(l, m) = lambda;
        worst = std::max(worst, (cl - lambda * cm).norm());
      }
    }
    out.lambdas.push_back(std::move(lambdas));
    out.column_residuals.push_back(worst);
    out.max_residual = std::max(out.max_residual, worst);
    if (worst > out.threshold) out.pass = false;
  }
  return out;
}

Condition4Result find_W_condition4(const SLDSet& slds, double tol,
                                   std::uint64_t seed) {
  Condition4Result result;
  const int p = slds.num_params();
  if (p == 0) {
    result.status = Certification::certified_yes;
    result.method = "vacuous";
    return result;
  }
  const auto rp = slds.Lpz.front().rows();
  const auto r0 = slds.Lpz.front().cols();
  if (r0 == 0) {
    result.status = Certification::certified_yes;
    result.W = ComplexMatrix(0, 0);
    result.method = "vacuous (no null space)";
    return result;
  }

  const auto cond3 = check_condition3(slds, tol);
  if (!cond3.summary.pass) {
    result.status = Certification::certified_no;
    result.method = "condition 3 refutation";
    std::ostringstream note;
    note << "condition 3 residual " << cond3.summary.residual << " > "
         << cond3.summary.threshold << "; condition 4 implies condition 3";
    result.note = note.str();
    return result;
  }

  std::span<const ComplexMatrix> lpz(slds.Lpz);
  // Columns are judged against the overall SLD size so that numerically
  // vanishing blocks do not produce spurious ratios.
  double floor = 0.0;
  for (const auto& l : slds.full) floor = std::max(floor, l.norm());
  auto accept = [&](const ComplexMatrix& W, const std::string& method) {
    if (W.rows() != r0 || W.cols() != r0) return false;
    if (unitarity_residual(W) > 1e-8) return false;
    auto v = verify_condition4(lpz, W, tol, floor);
    if (!v.pass) return false;
    result.status = Certification::certified_yes;
    result.W = W;
    result.lambdas = std::move(v.lambdas);
    result.column_residuals = std::move(v.column_residuals);
    result.threshold = v.threshold;
    result.method = method;
    return true;
  };

  if (accept(ComplexMatrix::Identity(r0, r0), "identity")) return result;

  // Joint kernel: columns there vanish for every parameter.
  ComplexMatrix stacked(p * rp, r0);
  for (int l = 0; l < p; ++l) stacked.middleRows(l * rp, rp) = slds.Lpz[l];
  const ComplexMatrix kernel = null_space(stacked, tol);
  const ComplexMatrix range = orthonormal_complement(kernel);
  const auto k = range.cols();

  std::vector<ComplexMatrix> reduced;
  for (const auto& b : slds.Lpz) reduced.push_back(b * range);
  std::vector<ComplexMatrix> normalized;
  {
    double s = 0.0;
    for (const auto& b : reduced) s = std::max(s, b.norm());
    for (const auto& b : reduced) normalized.push_back(s > 0.0 ? ComplexMatrix(b / s) : b);
  }
  auto polish = [&](const ComplexMatrix& wk) {
    return p > 1 && wk.cols() > 1 ? refine_collinear(normalized, wk) : wk;
  };

  // Reference pencils: the largest block first, then random real mixtures.
  std::vector<ComplexMatrix> references;
  std::vector<std::string> names;
  {
    int m_star = 0;
    for (int l = 1; l < p; ++l) {
      if (slds.Lpz[l].norm() > slds.Lpz[m_star].norm()) m_star = l;
    }
    references.push_back(reduced[m_star]);
    names.push_back("pencil(m*=" + std::to_string(m_star) + ")");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int attempt = 0; attempt < 4; ++attempt) {
      ComplexMatrix mix = ComplexMatrix::Zero(rp, k);
      for (int l = 0; l < p; ++l) mix += coeff(rng) * reduced[l];
      references.push_back(mix);
      names.push_back("pencil(random mixture " + std::to_string(attempt) + ")");
    }
  }

  for (std::size_t i = 0; i < references.size() && k > 0; ++i) {
    const auto& c = references[i];
    Eigen::JacobiSVD<ComplexMatrix> svd(c);
    const RealVector& s = svd.singularValues();
    if (s.size() < k || s[0] <= 0.0 || s[k - 1] <= std::sqrt(tol) * s[0]) continue;
    const ComplexMatrix c_pinv = pseudo_inverse(c);
    std::vector<ComplexMatrix> pencil;
    for (const auto& b : reduced) pencil.push_back(hermitian_part(c_pinv * b));
    try {
      const auto joint = joint_eigenprojectors(pencil, {tol, seed, 0.0});
      ComplexMatrix basis(k, 0);
      for (const auto& proj : joint.projectors) basis = hstack(basis, projector_range(proj));
      if (basis.cols() != k) continue;
      const ComplexMatrix W = hstack(range * polish(basis), kernel);
      if (accept(W, names[i])) return result;
    } catch (const Error&) {
      continue;
    }
  }

  // Pencils with a column-rank deficient reference (r0 > r+) admit a
  // continuum of collinear directions; search for an orthonormal choice.
  if (p > 1 && k > 0) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int attempt = 0; attempt < 12; ++attempt) {
      const ComplexMatrix start =
          attempt == 0 ? ComplexMatrix(ComplexMatrix::Identity(k, k)) : random_unitary(static_cast<int>(k), rng);
      const ComplexMatrix wk = polish(start);
      const ComplexMatrix W = hstack(range * wk, kernel);
      if (accept(W, "least-squares refinement (start " + std::to_string(attempt) + ")")) {
        return result;
      }
    }
  }

  if (rp == 1) {
    // Real Gram-Schmidt: with a real Gram matrix the coordinates of every
    // Lpz_l^dagger in the constructed basis are real.
    const double max_norm = [&] {
      double m = 0.0;
      for (const auto& b : slds.Lpz) m = std::max(m, b.norm());
      return m;
    }();
    ComplexMatrix basis(r0, 0);
    for (const auto& b : slds.Lpz) {
      ComplexVector z = b.adjoint();
      if (basis.cols() > 0) z -= basis * (basis.adjoint() * z);
      const double nz = z.norm();
      if (nz > tol * max_norm) basis = hstack(basis, z / nz);
    }
    const ComplexMatrix W = hstack(basis, orthonormal_complement(basis));
    if (accept(W, "real Gram-Schmidt (r+ = 1)")) return result;
  }

  result.status = Certification::unknown;
  result.method = "search exhausted";
  result.note = "no candidate W passed verification; condition 4 undetermined";
  return result;
}

Cond2PrimeResult verify_condition2prime(const StateModel& model,
                                        const RealVector& theta,
                                        const SupportDecomposition& dec,
                                        const SLDSet& slds,
                                        const std::optional<Cond2PrimeWitness>& witness,
                                        std::span<const ComplexMatrix> null_povm,
                                        const Cond2PrimeOptions& options) {
  Cond2PrimeResult res;
  res.tolerance = options.tol;
  const double tol = options.tol;
  if (!model.has_support_basis()) {
    res.note = "model provides no smooth support basis V(theta)";
    return res;
  }
  const int p = model.num_params;
  const ComplexMatrix V = model.support_basis(theta);
  if (V.rows() != dec.V.rows() || V.cols() != dec.r_plus) {
    res.note = "support basis V(theta) does not match the detected rank";
    return res;
  }
  res.support_consistency_residual = (V * V.adjoint() - dec.P_plus).norm();

  std::vector<ComplexMatrix> dV;
  for (int l = 0; l < p; ++l) {
    dV.push_back(support_basis_derivative(model, theta, l, options.fd_step));
  }

  res.lpz_identity_pass = true;
  for (int l = 0; l < p; ++l) {
    const ComplexMatrix lhs = V.adjoint() * slds.full[l] * dec.Y;
    const ComplexMatrix rhs = 2.0 * dV[l].adjoint() * dec.Y;
    const double r = (lhs - rhs).norm();
    res.lpz_identity_residuals.push_back(r);
    if (r > tol * std::max(1.0, lhs.norm())) res.lpz_identity_pass = false;
  }

  const auto rp = dec.r_plus;
  std::vector<ComplexMatrix> generators;  // V^dagger dV_l
  for (int l = 0; l < p; ++l) generators.push_back(V.adjoint() * dV[l]);

  ComplexMatrix U;
  std::vector<ComplexMatrix> dU;
  std::vector<RealVector> D;
  if (witness) {
    U = witness->U(theta);
    if (U.rows() != rp || U.cols() != rp) {
      throw Error(ErrorCode::NonUnitaryWitness,
                  "witness U has the wrong size for the support dimension");
    }
    res.witness_unitarity_residual = unitarity_residual(U);
    if (res.witness_unitarity_residual > 1e-10) {
      std::ostringstream msg;
      msg << "witness U is not unitary: ||U^dagger U - I||_F = "
          << res.witness_unitarity_residual;
      throw Error(ErrorCode::NonUnitaryWitness, msg.str());
    }
    bool all_zero = true;
    for (int l = 0; l < p; ++l) {
      if (witness->dU) {
        dU.push_back(witness->dU(theta, l));
      } else {
        RealVector plus = theta, minus = theta;
        plus[l] += options.fd_step;
        minus[l] -= options.fd_step;
        dU.push_back((witness->U(plus) - witness->U(minus)) / (2.0 * options.fd_step));
      }
      RealVector d = witness->D ? witness->D(theta, l) : RealVector::Zero(rp);
      if (d.size() != rp) {
        throw Error(ErrorCode::ShapeMismatch, "witness D_l has the wrong length");
      }
      if (d.norm() > 0.0) all_zero = false;
      D.push_back(std::move(d));
    }
    res.path = all_zero ? Cond2PrimePath::lemma3_D0 : Cond2PrimePath::user_supplied_U;
  } else {
    for (int l = 0; l < p; ++l) {
      const ComplexMatrix& g = generators[l];
      const ComplexMatrix off = g - ComplexMatrix(g.diagonal().asDiagonal());
      if (off.norm() > tol * std::max(1.0, g.norm())) {
        res.note = "V^dagger dV is not diagonal and no witness was supplied";
        return res;
      }
    }
    res.path = Cond2PrimePath::diagonal_VdV;
    U = ComplexMatrix::Identity(rp, rp);
    for (int l = 0; l < p; ++l) {
      dU.push_back(ComplexMatrix::Zero(rp, rp));
      // D_l = i V^dagger d_l V is real because V^dagger d_l V is skew-Hermitian.
      D.push_back((Complex(0.0, 1.0) * generators[l].diagonal()).real());
    }
  }

  res.pde_pass = true;
  bool d_zero = true;
  for (int l = 0; l < p; ++l) {
    const ComplexMatrix iD = Complex(0.0, 1.0) * D[l].cast<Complex>().asDiagonal();
    const double r = (dU[l] - U * (generators[l] + iD)).norm();
    res.pde_residuals.push_back(r);
    if (r > tol * std::max(1.0, dU[l].norm() + generators[l].norm())) res.pde_pass = false;
    if (D[l].norm() > 0.0) d_zero = false;
  }

  std::vector<ComplexMatrix> dVt;  // d(V U^dagger)
  for (int l = 0; l < p; ++l) dVt.push_back(dV[l] * U.adjoint() + V * dU[l].adjoint());

  res.stationary_pass = true;
  if (d_zero) {
    for (int l = 0; l < p; ++l) {
      const double r = (V * (V.adjoint() * dVt[l])).norm();
      res.stationary_residuals.push_back(r);
      if (r > tol * std::max(1.0, dVt[l].norm())) res.stationary_pass = false;
    }
  }

  double dvt_scale = 1.0;
  for (const auto& x : dVt) dvt_scale = std::max(dvt_scale, x.norm());
  if (dec.r_zero == 0) {
    res.null_povm_checked = true;
    res.null_pass = true;
  } else if (!null_povm.empty()) {
    res.null_povm_checked = true;
    res.null_pass = true;
    for (const auto& e : null_povm) {
      std::vector<ComplexMatrix> xs;
      for (int l = 0; l < p; ++l) xs.push_back(e * dVt[l]);
      const double r = real_collinearity_residual(xs);
      res.null_saturation_residuals.push_back(r);
      if (r > tol * dvt_scale) res.null_pass = false;
    }
  } else {
    res.note = "no null POVM available; null-measurement compatibility unchecked";
  }

  const bool ok = res.pde_pass && res.stationary_pass && res.lpz_identity_pass &&
                  res.null_povm_checked && res.null_pass;
  res.status = ok ? Certification::certified_yes : Certification::unknown;
  if (!ok && res.note.empty()) {
    res.note = "the supplied witness does not verify condition 2' at this point";
  }
  return res;
}

VerdictResult verdict(const ConditionReport& report, int r_plus, int r_zero) {
  VerdictResult out{Verdict::inconclusive, {}};
  auto& t = out.trace;
  if (r_zero == 0) {
    t.push_back("full-rank state: saturable iff the SLDs commute");
    out.verdict = report.full_comm.summary.pass ? Verdict::saturable_certified
                                                : Verdict::not_saturable;
    t.push_back(std::string("full commutativity ") +
                (report.full_comm.summary.pass ? "holds" : "fails"));
    return out;
  }
  if (r_plus == 1) {
    t.push_back("rank-one state: conditions 1 and 3 are necessary and sufficient");
    t.push_back("condition 1 holds trivially for 1x1 support blocks");
    out.verdict = report.cond3.summary.pass ? Verdict::saturable_certified
                                            : Verdict::not_saturable;
    t.push_back(std::string("condition 3 (equivalently average commutativity) ") +
                (report.cond3.summary.pass ? "holds" : "fails"));
    return out;
  }
  t.push_back("rank-deficient mixed state");
  const bool c1 = report.cond1.summary.pass;
  const bool c3 = report.cond3.summary.pass;
  const bool pc = report.partial_comm.summary.pass;
  if (c1 && report.cond4.status == Certification::certified_yes) {
    t.push_back("conditions 1 and 4 hold: sufficient, optimal projective POVM exists");
    out.verdict = Verdict::saturable_certified;
    return out;
  }
  if (!c1 || !c3 || !pc) {
    if (!c1) t.push_back("condition 1 fails (necessary)");
    if (!c3) t.push_back("condition 3 fails (necessary)");
    if (!pc) t.push_back("partial commutativity fails (necessary)");
    out.verdict = Verdict::not_saturable;
    return out;
  }
  if (report.cond2prime.status == Certification::certified_yes) {
    t.push_back("conditions 1 and 2' hold: necessary and sufficient");
    out.verdict = Verdict::saturable_certified;
    return out;
  }
  t.push_back("conditions 1 and 3 hold but condition 4 was not certified");
  t.push_back("condition 2' undetermined");
  out.verdict = Verdict::inconclusive;
  return out;
}

ConditionReport evaluate_conditions(const ComplexMatrix& rho,
                                    const SupportDecomposition& dec,
                                    const SLDSet& slds,
                                    const ConditionOptions& options) {
  ConditionReport r;
  r.r_plus = dec.r_plus;
  r.r_zero = dec.r_zero;
  r.tolerance = options.tol;
  r.seed = options.seed;
  r.regime = dec.r_zero == 0 ? Regime::full_rank
             : dec.r_plus == 1 ? Regime::pure
                               : Regime::rank_deficient;
  r.full_comm = check_full_commutativity(slds, options.tol);
  r.avg_comm = check_average_commutativity(rho, slds, options.tol);
  r.partial_comm = check_partial_commutativity(dec, slds, options.tol);
  r.cond1 = check_condition1(slds, options.tol);
  r.cond3 = check_condition3(slds, options.tol);
  r.cond4 = find_W_condition4(slds, options.tol, options.seed);
  r.cond2prime.tolerance = options.tol;
  r.cond2prime.note = "not evaluated";
  auto v = verdict(r, dec.r_plus, dec.r_zero);
  r.verdict = v.verdict;
  r.reasoning = std::move(v.trace);
  return r;
}

void attach_condition2prime(ConditionReport& report, Cond2PrimeResult result) {
  report.cond2prime = std::move(result);
  auto v = verdict(report, report.r_plus, report.r_zero);
  report.verdict = v.verdict;
  report.reasoning = std::move(v.trace);
}

std::vector<ComplexMatrix> null_elements_from_W(const SupportDecomposition& dec,
                                                const ComplexMatrix& W) {
  std::vector<ComplexMatrix> out;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    const ComplexVector v = dec.Y * W.col(j);
    out.push_back(v * v.adjoint());
  }
  return out;
}

}  // namespace qcrb
