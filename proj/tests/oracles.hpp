#pragma once

// Reference computations that share no code with the library: the SLD via a
// dense Kronecker-product solve, closed-form Fisher matrices, and a brute
// force search over 2x2 unitaries.

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Minimum-norm solution of (L rho + rho L)/2 = drho, found by vectorizing
// the Lyapunov operator. The minimum-norm choice sets the null-null block to 0.
inline CMat sld_lyapunov(const CMat& rho, const CMat& drho) {
  const auto n = rho.rows();
  const CMat id = CMat::Identity(n, n);
  CMat op = CMat::Zero(n * n, n * n);
  // vec(A X B) = (B^T kron A) vec(X), column-major vec.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) += 0.5 * rho(j, i) * id;  // X rho
      if (i == j) op.block(i * n, j * n, n, n) += 0.5 * rho;   // rho X
    }
  }
  const Eigen::VectorXcd rhs = Eigen::Map<const Eigen::VectorXcd>(drho.data(), n * n);
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(op);
  cod.setThreshold(1e-12);
  const Eigen::VectorXcd x = cod.solve(rhs);
  return Eigen::Map<const CMat>(x.data(), n, n);
}

inline RMat fisher_from_slds(const CMat& rho, const std::vector<CMat>& ls) {
  const auto p = static_cast<Eigen::Index>(ls.size());
  RMat f(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) {
      f(j, k) = 0.5 * (rho * (ls[j] * ls[k] + ls[k] * ls[j])).trace().real();
    }
  }
  return f;
}

// Fisher information of the categorical distribution
// (theta_1, ..., theta_p, 1 - sum theta): diag(1/theta) + 1/(1 - sum) J.
inline RMat multinomial_fisher(const RVec& theta) {
  const auto p = theta.size();
  const double last = 1.0 - theta.sum();
  RMat f = RMat::Constant(p, p, 1.0 / last);
  for (Eigen::Index i = 0; i < p; ++i) f(i, i) += 1.0 / theta[i];
  return f;
}

// 4 Re(<d_j psi|d_k psi> - <d_j psi|psi><psi|d_k psi>).
inline RMat pure_state_qfim(const Eigen::VectorXcd& psi,
                            const std::vector<Eigen::VectorXcd>& dpsi) {
  const auto p = static_cast<Eigen::Index>(dpsi.size());
  RMat f(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) {
      const Complex a = dpsi[j].dot(dpsi[k]);
      const Complex b = dpsi[j].dot(psi) * psi.dot(dpsi[k]);
      f(j, k) = 4.0 * (a - b).real();
    }
  }
  return f;
}

// QFIM of theta1 |e2><e2| + (1 - theta1)|psi><psi| with
// psi = (d e^{i(c1 theta1 + c2 theta2)}, 0, sqrt(1 - d^2)): the two branches
// are orthogonal, so F = classical mixing part + (1 - theta1) F_psi.
inline RMat qutrit_qfim(double theta1, double d, double c1, double c2) {
  const double c[2] = {c1, c2};
  RMat f(2, 2);
  for (int l = 0; l < 2; ++l) {
    for (int m = 0; m < 2; ++m) {
      f(l, m) = 4.0 * (1.0 - theta1) * c[l] * c[m] * d * d * (1.0 - d * d);
    }
  }
  f(0, 0) += 1.0 / (theta1 * (1.0 - theta1));
  return f;
}

// sum_k (dp_j dp_k / p) over outcomes with p > 0.
inline RMat classical_fisher(const RVec& prob, const RMat& dprob) {
  const auto p = dprob.rows();
  RMat f = RMat::Zero(p, p);
  for (Eigen::Index k = 0; k < prob.size(); ++k) {
    if (prob[k] <= 0.0) continue;
    f += dprob.col(k) * dprob.col(k).transpose() / prob[k];
  }
  return f;
}

// Columns (up to phase) of every 2x2 unitary: first column
// (cos a, e^{ib} sin a), second column orthogonal to it.
inline CMat unitary_2x2(double a, double b) {
  CMat w(2, 2);
  const Complex e = std::polar(1.0, b);
  w << std::cos(a), -std::conj(e) * std::sin(a), e * std::sin(a), std::cos(a);
  return w;
}

// Largest over columns s of sigma_2 of the real matrix whose l-th column is
// [Re; Im] col_s(lpz_l W), normalized by the overall size of the blocks.
inline double collinearity_defect(const std::vector<CMat>& lpz, const CMat& w) {
  double scale = 0.0;
  for (const auto& b : lpz) scale = std::max(scale, b.norm());
  if (scale == 0.0) return 0.0;
  const auto rows = lpz.front().rows();
  const auto p = static_cast<Eigen::Index>(lpz.size());
  double worst = 0.0;
  for (Eigen::Index s = 0; s < w.cols(); ++s) {
    RMat x(2 * rows, p);
    for (Eigen::Index l = 0; l < p; ++l) {
      const Eigen::VectorXcd col = lpz[l] * w.col(s);
      x.col(l) << col.real(), col.imag();
    }
    const Eigen::JacobiSVD<RMat> svd(x);
    const auto& sv = svd.singularValues();
    const double sigma2 = sv.size() > 1 ? sv[1] : 0.0;
    worst = std::max(worst, sigma2 / scale);
  }
  return worst;
}

// Exhaustive search over a in [0, pi/2], b in [0, 2 pi) with the given step;
// returns the smallest defect found.
inline double grid_min_defect(const std::vector<CMat>& lpz, double step = 0.01) {
  double best = std::numeric_limits<double>::infinity();
  for (double a = 0.0; a <= std::numbers::pi / 2 + 1e-12; a += step) {
    for (double b = 0.0; b < 2 * std::numbers::pi; b += step) {
      best = std::min(best, collinearity_defect(lpz, unitary_2x2(a, b)));
    }
  }
  return best;
}

}  // namespace oracle
