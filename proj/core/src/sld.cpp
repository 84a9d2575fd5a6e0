#include "qcrb/sld.hpp"

#include <algorithm>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb {

BlockOperator to_blocks(const ComplexMatrix& op, const SupportDecomposition& dec) {
  const auto n = dec.V.rows();
  if (op.rows() != n || op.cols() != n) {
    std::ostringstream msg;
    msg << "to_blocks: operator is " << op.rows() << "x" << op.cols()
        << ", expected " << n << "x" << n;
    throw Error(ErrorCode::ShapeMismatch, msg.str());
  }
  return {dec.V.adjoint() * op * dec.V, dec.V.adjoint() * op * dec.Y,
          dec.Y.adjoint() * op * dec.V, dec.Y.adjoint() * op * dec.Y};
}

ComplexMatrix from_blocks(const BlockOperator& b, const SupportDecomposition& dec) {
  const auto& V = dec.V;
  const auto& Y = dec.Y;
  ComplexMatrix out = V * b.pp * V.adjoint();
  if (dec.r_zero > 0) {
    out += V * b.pz * Y.adjoint() + Y * b.zp * V.adjoint() + Y * b.zz * Y.adjoint();
  }
  return out;
}

SLDSet compute_sld(const SupportDecomposition& dec, const ComplexMatrix& rho,
                   std::span<const ComplexMatrix> drho, double sld_tol) {
  const auto rp = dec.r_plus;
  const auto r0 = dec.r_zero;
  SLDSet out;
  out.tolerance = sld_tol;
  for (std::size_t l = 0; l < drho.size(); ++l) {
    const ComplexMatrix R = dec.V.adjoint() * drho[l] * dec.V;
    ComplexMatrix pp(rp, rp);
    for (int j = 0; j < rp; ++j) {
      for (int k = 0; k < rp; ++k) pp(j, k) = 2.0 * R(j, k) / (dec.q[j] + dec.q[k]);
    }
    pp = hermitian_part(pp);

    ComplexMatrix pz = dec.V.adjoint() * drho[l] * dec.Y;
    for (int j = 0; j < rp; ++j) pz.row(j) *= 2.0 / dec.q[j];

    BlockOperator blocks{pp, pz, pz.adjoint(), ComplexMatrix::Zero(r0, r0)};
    ComplexMatrix full = hermitian_part(from_blocks(blocks, dec));

    const double residual = ((full * rho + rho * full) / 2.0 - drho[l]).norm();
    const double bound = sld_tol * std::max(1.0, drho[l].norm());
    if (residual > bound) {
      std::ostringstream msg;
      msg << "SLD defining equation fails for parameter " << l << ": residual "
          << residual << " > " << bound
          << " (inconsistent derivatives or misdetected rank)";
      throw Error(ErrorCode::SLDInconsistent, msg.str());
    }
    out.Lpp.push_back(std::move(pp));
    out.Lpz.push_back(std::move(pz));
    out.Lzz.push_back(blocks.zz);
    out.full.push_back(std::move(full));
    out.residuals.push_back(residual);
  }
  return out;
}

RealMatrix qfim(const SupportDecomposition& dec, const SLDSet& slds) {
  const int p = slds.num_params();
  const ComplexMatrix q = dec.q.cast<Complex>().asDiagonal();
  RealMatrix f(p, p);
  for (int j = 0; j < p; ++j) {
    for (int k = j; k < p; ++k) {
      ComplexMatrix prod = slds.Lpp[j] * slds.Lpp[k];
      if (dec.r_zero > 0) prod += slds.Lpz[j] * slds.Lpz[k].adjoint();
      f(j, k) = (q * prod).trace().real();
      f(k, j) = f(j, k);
    }
  }
  return f;
}

RealMatrix qfim_from_full(const ComplexMatrix& rho,
                          std::span<const ComplexMatrix> slds) {
  const auto p = static_cast<Eigen::Index>(slds.size());
  RealMatrix f(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = 0; k < p; ++k) {
      const auto& a = slds[static_cast<std::size_t>(j)];
      const auto& b = slds[static_cast<std::size_t>(k)];
      f(j, k) = (rho * (a * b + b * a)).trace().real() / 2.0;
    }
  }
  return f;
}

}  // namespace qcrb
