#include "qcrb/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << what << ": expected a square matrix, got " << a.rows() << "x"
        << a.cols();
    throw Error(ErrorCode::NonSquare, msg.str());
  }
}

double spectral_scale(const RealVector& eigenvalues) {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

struct Group {
  ComplexMatrix basis;
};

}  // namespace

HermitianEigen eig_hermitian(const ComplexMatrix& a, double herm_tol) {
  require_square(a, "eig_hermitian");
  const double norm = a.norm();
  const double asym = (a - a.adjoint()).norm();
  if (asym > herm_tol * std::max(1.0, norm)) {
    std::ostringstream msg;
    msg << "eig_hermitian: ||A - A^dagger||_F = " << asym
        << " exceeds tolerance " << herm_tol * std::max(1.0, norm);
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  if (a.size() == 0) return {RealVector(0), ComplexMatrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NotHermitian, "eig_hermitian: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    std::ostringstream msg;
    msg << "commutator_residual: shapes " << a.rows() << "x" << a.cols()
        << " and " << b.rows() << "x" << b.cols() << " are incompatible";
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  return (a * b - b * a).norm();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

double hermiticity_residual(const ComplexMatrix& a) {
  return (a - a.adjoint()).norm();
}

double unitarity_residual(const ComplexMatrix& u) {
  const auto n = u.cols();
  return (u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm();
}

std::vector<std::size_t> cluster_sorted(const RealVector& sorted_values,
                                        double gap_tol) {
  std::vector<std::size_t> starts;
  const auto n = static_cast<std::size_t>(sorted_values.size());
  if (n == 0) {
    starts.push_back(0);
    return starts;
  }
  starts.push_back(0);
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted_values[static_cast<Eigen::Index>(i)] -
            sorted_values[static_cast<Eigen::Index>(i - 1)] >
        gap_tol) {
      starts.push_back(i);
    }
  }
  starts.push_back(n);
  return starts;
}

JointSpectrum joint_eigenprojectors(std::span<const ComplexMatrix> family,
                                    const JointOptions& options) {
  if (family.empty()) {
    throw Error(ErrorCode::ShapeMismatch,
                "joint_eigenprojectors: empty family");
  }
  const auto n = family.front().rows();
  std::vector<ComplexMatrix> members;
  members.reserve(family.size());
  for (const auto& a : family) {
    require_square(a, "joint_eigenprojectors");
    if (a.rows() != n) {
      throw Error(ErrorCode::ShapeMismatch,
                  "joint_eigenprojectors: family members differ in size");
    }
    const double asym = hermiticity_residual(a);
    if (asym > 1e-8 * std::max(1.0, a.norm())) {
      throw Error(ErrorCode::NotHermitian,
                  "joint_eigenprojectors: non-Hermitian family member");
    }
    members.push_back(hermitian_part(a));
    if (members.back().norm() <= options.tol * options.scale) members.back().setZero();
  }
  auto floor_norm = [&](const ComplexMatrix& a) { return std::max(a.norm(), options.scale); };

  JointSpectrum out;
  out.seed = options.seed;

  // Pairwise commutation, relative to the product of norms.
  for (std::size_t l = 0; l < members.size(); ++l) {
    for (std::size_t m = l + 1; m < members.size(); ++m) {
      const double r = commutator_residual(members[l], members[m]);
      out.max_commutator_residual = std::max(out.max_commutator_residual, r);
      const double bound = options.tol * floor_norm(members[l]) * floor_norm(members[m]);
      if (r > bound) {
        std::ostringstream msg;
        msg << "joint_eigenprojectors: members " << l << " and " << m
            << " do not commute: ||[A_l, A_m]||_F = " << r << " > " << bound;
        throw Error(ErrorCode::NotCommuting, msg.str());
      }
    }
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  ComplexMatrix mixture = ComplexMatrix::Zero(n, n);
  for (const auto& a : members) {
    const double c = coeff(rng);
    out.mixture_coefficients.push_back(c);
    const double norm = a.norm();
    if (norm > 0.0) mixture += (c / norm) * a;
  }

  // Coarse split from the mixture spectrum.
  const auto mix = eig_hermitian(mixture);
  const double mix_gap = options.tol * spectral_scale(mix.eigenvalues);
  std::vector<Group> groups;
  {
    const auto starts = cluster_sorted(mix.eigenvalues, mix_gap);
    for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
      const auto begin = static_cast<Eigen::Index>(starts[c]);
      const auto width = static_cast<Eigen::Index>(starts[c + 1] - starts[c]);
      if (width > 0) groups.push_back({mix.eigenvectors.middleCols(begin, width)});
    }
  }

  // Refinement: split each group by the restricted spectrum of each member.
  for (const auto& a : members) {
    const auto member_eig = eig_hermitian(a);
    const double gap =
        options.tol * std::max(spectral_scale(member_eig.eigenvalues), options.scale);
    std::vector<Group> refined;
    for (const auto& g : groups) {
      if (g.basis.cols() == 1) {
        refined.push_back(g);
        continue;
      }
      const ComplexMatrix restricted = g.basis.adjoint() * a * g.basis;
      const auto local = eig_hermitian(restricted, 1.0);
      const auto starts = cluster_sorted(local.eigenvalues, gap);
      for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
        const auto begin = static_cast<Eigen::Index>(starts[c]);
        const auto width =
            static_cast<Eigen::Index>(starts[c + 1] - starts[c]);
        refined.push_back(
            {g.basis * local.eigenvectors.middleCols(begin, width)});
      }
    }
    groups = std::move(refined);
  }

  // Labels as mean Rayleigh quotients.
  std::vector<std::vector<double>> labels;
  for (const auto& g : groups) {
    std::vector<double> tuple;
    for (const auto& a : members) {
      const ComplexMatrix restricted = g.basis.adjoint() * a * g.basis;
      tuple.push_back(restricted.trace().real() /
                      static_cast<double>(g.basis.cols()));
    }
    labels.push_back(std::move(tuple));
  }

  // Merge groups whose label tuples coincide (possible when the mixture
  // separated a joint eigenspace by roundoff).
  std::vector<double> label_tol;
  for (const auto& a : members) {
    label_tol.push_back(options.tol *
                        std::max({spectral_scale(eig_hermitian(a).eigenvalues),
                                  options.scale, 1e-300}));
  }
  auto same = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t l = 0; l < x.size(); ++l) {
      if (std::abs(x[l] - y[l]) > label_tol[l]) return false;
    }
    return true;
  };
  std::vector<Group> merged;
  std::vector<std::vector<double>> merged_labels;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    bool placed = false;
    for (std::size_t j = 0; j < merged.size(); ++j) {
      if (same(labels[i], merged_labels[j])) {
        const auto cols = merged[j].basis.cols() + groups[i].basis.cols();
        ComplexMatrix basis(n, cols);
        basis << merged[j].basis, groups[i].basis;
        merged[j].basis = basis;
        placed = true;
        break;
      }
    }
    if (!placed) {
      merged.push_back(groups[i]);
      merged_labels.push_back(labels[i]);
    }
  }

  // Deterministic order: lexicographic in the label tuple.
  std::vector<std::size_t> order(merged.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return merged_labels[x] < merged_labels[y];
  });
  for (auto k : order) {
    out.projectors.push_back(merged[k].basis * merged[k].basis.adjoint());
    out.labels.push_back(merged_labels[k]);
  }

  for (std::size_t l = 0; l < members.size(); ++l) {
    ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < out.projectors.size(); ++k) {
      rebuilt += out.labels[k][l] * out.projectors[k];
    }
    const double r = (members[l] - rebuilt).norm();
    out.reconstruction_residuals.push_back(r);
    const double bound =
        10.0 * options.tol * std::max(floor_norm(members[l]), 1e-300) *
        std::sqrt(static_cast<double>(std::max<Eigen::Index>(n, 1)));
    if (r > bound) {
      std::ostringstream msg;
      msg << "joint_eigenprojectors: member " << l
          << " is not reproduced by the joint spectrum (residual " << r
          << " > " << bound << ")";
      throw Error(ErrorCode::JointDiagonalizationFailed, msg.str());
    }
  }
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const auto e = eig_hermitian(a, 1e-6);
  const RealVector roots = e.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return e.eigenvectors * roots.cast<Complex>().asDiagonal() *
         e.eigenvectors.adjoint();
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double rel_tol) {
  if (a.size() == 0) return ComplexMatrix::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU |
                                             Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double cutoff = rel_tol * (s.size() ? s[0] : 0.0);
  ComplexMatrix sinv = ComplexMatrix::Zero(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) sinv(i, i) = 1.0 / s[i];
  }
  return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

ComplexMatrix null_space(const ComplexMatrix& a, double rel_tol) {
  const auto cols = a.cols();
  if (a.rows() == 0) return ComplexMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const double cutoff = rel_tol * (s.size() ? s[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(cols - rank);
}

ComplexMatrix orthonormal_complement(const ComplexMatrix& q) {
  const auto n = q.rows();
  if (q.cols() == 0) return ComplexMatrix::Identity(n, n);
  const ComplexMatrix projector =
      ComplexMatrix::Identity(n, n) - q * q.adjoint();
  const auto e = eig_hermitian(projector, 1e-6);
  // Eigenvalues are ~0 (range of q) or ~1 (complement), ascending.
  const auto k = n - q.cols();
  return e.eigenvectors.rightCols(k);
}

void fix_column_phases(ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      // Ties resolve to the first index; tiny slack keeps the choice stable
      // against roundoff between equal-modulus entries.
      const double v = std::abs(m(i, j));
      if (v > best_abs * (1.0 + 1e-9)) {
        best_abs = v;
        best = i;
      }
    }
    if (best_abs > 0.0) {
      const Complex phase = std::conj(m(best, j)) / best_abs;
      m.col(j) *= phase;
      m(best, j) = Complex(m(best, j).real(), 0.0);
    }
  }
}

ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex(n, n, rng);
  return hermitian_part(g);
}

}  // namespace qcrb
