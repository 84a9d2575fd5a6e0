#include "qcrb/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qcrb/conditions.hpp"
#include "qcrb/errors.hpp"

namespace qcrb {

std::string to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::regular: return "regular";
    case OutcomeStatus::null: return "null";
    case OutcomeStatus::irregular: return "irregular";
    case OutcomeStatus::singular: return "singular";
  }
  return "regular";
}

bool MeasurementDistribution::has_singular() const {
  return std::find(status.begin(), status.end(), OutcomeStatus::singular) != status.end();
}

bool MeasurementDistribution::has_irregular() const {
  return std::find(status.begin(), status.end(), OutcomeStatus::irregular) != status.end();
}

MeasurementDistribution outcome_distribution(const ComplexMatrix& rho,
                                             std::span<const ComplexMatrix> drho,
                                             const SLDSet& slds, const POVM& povm,
                                             const DistributionOptions& options) {
  const int p = static_cast<int>(drho.size());
  const int m = povm.size();
  if (slds.num_params() != p) {
    throw Error(ErrorCode::ShapeMismatch, "SLD count differs from the number of derivatives");
  }
  for (const auto& e : povm.elements) {
    if (e.rows() != rho.rows() || e.cols() != rho.cols()) {
      throw Error(ErrorCode::ShapeMismatch, "POVM element size differs from the state");
    }
  }
  MeasurementDistribution d;
  d.options = options;
  d.p.resize(m);
  d.dp.resize(p, m);
  double scale = 0.0;
  for (const auto& x : drho) scale = std::max(scale, x.norm());
  const double dtol = options.deriv_tol * scale;
  const ComplexMatrix sqrt_rho = psd_sqrt(rho);
  double collinear_floor = 0.0;
  for (const auto& l : slds.full) collinear_floor = std::max(collinear_floor, (l * sqrt_rho).norm());

  for (int k = 0; k < m; ++k) {
    const auto& e = povm.elements[k];
    d.p[k] = (rho * e).trace().real();
    double max_dp = 0.0;
    for (int l = 0; l < p; ++l) {
      d.dp(l, k) = (drho[l] * e).trace().real();
      max_dp = std::max(max_dp, std::abs(d.dp(l, k)));
    }
    RealMatrix limit = RealMatrix::Zero(p, p);
    double collinearity = 0.0;
    if (d.p[k] > options.prob_tol) {
      d.status.push_back(OutcomeStatus::regular);
    } else if (max_dp > dtol) {
      d.status.push_back(OutcomeStatus::singular);
    } else {
      std::vector<ComplexMatrix> xs;
      double largest = 0.0;
      for (int l = 0; l < p; ++l) {
        xs.push_back(e * slds.full[l] * sqrt_rho);
        largest = std::max(largest, xs.back().norm());
      }
      collinearity = real_collinearity_residual(xs);
      if (collinearity <= options.collinear_tol * std::max(largest, collinear_floor)) {
        d.status.push_back(OutcomeStatus::null);
        for (int l = 0; l < p; ++l) {
          for (int j = 0; j < p; ++j) {
            limit(l, j) = (e * slds.full[l] * rho * slds.full[j]).trace().real();
          }
        }
        limit = (limit + limit.transpose()) / 2.0;
      } else {
        d.status.push_back(OutcomeStatus::irregular);
      }
    }
    d.null_limit.push_back(std::move(limit));
    d.collinearity_residuals.push_back(collinearity);
  }
  return d;
}

RealMatrix classical_fim(const MeasurementDistribution& dist) {
  const int p = dist.num_params();
  RealMatrix f = RealMatrix::Zero(p, p);
  for (int k = 0; k < dist.outcomes(); ++k) {
    switch (dist.status[k]) {
      case OutcomeStatus::regular:
        f += dist.dp.col(k) * dist.dp.col(k).transpose() / dist.p[k];
        break;
      case OutcomeStatus::null:
        f += dist.null_limit[k];
        break;
      case OutcomeStatus::irregular:
        break;
      case OutcomeStatus::singular: {
        std::ostringstream msg;
        msg << "outcome " << k << " has p = " << dist.p[k]
            << " but non-zero derivative; the classical Fisher information is undefined";
        throw Error(ErrorCode::SingularOutcome, msg.str());
      }
    }
  }
  return f;
}

namespace {

void require_symmetric(const RealMatrix& a, const char* name) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::NonSquare, std::string(name) + " is not square");
  }
  if ((a - a.transpose()).norm() > 1e-10 * std::max(1.0, a.norm())) {
    throw Error(ErrorCode::NotHermitian, std::string(name) + " is not symmetric");
  }
}

std::optional<RealMatrix> safe_inverse(const RealMatrix& a) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(a);
  const auto& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (!(top > 0.0) || ev.minCoeff() <= 1e-12 * top) return std::nullopt;
  return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

double operator_norm(const RealMatrix& sym) {
  if (sym.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<RealMatrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

FisherComparison compare(const RealMatrix& F_c, const RealMatrix& F_Q,
                         const std::optional<RealMatrix>& G, double tol) {
  require_symmetric(F_c, "F_c");
  require_symmetric(F_Q, "F_Q");
  if (F_c.rows() != F_Q.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "F_c and F_Q differ in size");
  }
  FisherComparison out;
  out.F_c = F_c;
  out.F_Q = F_Q;
  out.tolerance = tol;
  const RealMatrix diff = (F_Q - F_c + (F_Q - F_c).transpose()) / 2.0;
  out.gap = operator_norm(diff);
  if (diff.size() > 0) {
    out.min_gap_eigenvalue =
        Eigen::SelfAdjointEigenSolver<RealMatrix>(diff, Eigen::EigenvaluesOnly).eigenvalues()[0];
  }
  out.saturated = out.gap <= tol * operator_norm(F_Q);

  if (G) {
    require_symmetric(*G, "G");
    if (G->rows() != F_Q.rows()) {
      throw Error(ErrorCode::ShapeMismatch, "cost matrix G has the wrong size");
    }
    out.G = *G;
    const auto q_inv = safe_inverse(F_Q);
    const auto c_inv = safe_inverse(F_c);
    if (q_inv) out.cost_quantum = (*G * *q_inv).trace();
    if (c_inv) out.cost_classical = (*G * *c_inv).trace();
    if (!q_inv) out.notice = "F_Q is singular; scalar costs omitted";
    else if (!c_inv) out.notice = "F_c is singular; classical scalar cost is infinite";
  }
  return out;
}

std::vector<std::int64_t> sample_outcomes(const RealVector& p, std::int64_t trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidParameter, "trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(p.size()), 0);
  std::int64_t remaining = trials;
  double mass = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) mass += std::max(p[k], 0.0);
  for (Eigen::Index k = 0; k < p.size() && remaining > 0; ++k) {
    const double pk = std::max(p[k], 0.0);
    if (k + 1 == p.size() || mass <= pk) {
      counts[k] = remaining;
      break;
    }
    const double cond = std::clamp(pk / mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, cond);
    counts[k] = draw(rng);
    remaining -= counts[k];
    mass -= pk;
  }
  return counts;
}

EmpiricalFisher empirical_fim(const std::vector<std::int64_t>& counts,
                              const MeasurementDistribution& dist) {
  if (static_cast<int>(counts.size()) != dist.outcomes()) {
    throw Error(ErrorCode::ShapeMismatch, "count vector length differs from the outcome count");
  }
  const int p = dist.num_params();
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "no samples");

  RealMatrix first = RealMatrix::Zero(p, p);
  RealMatrix second = RealMatrix::Zero(p, p);
  RealMatrix deterministic = RealMatrix::Zero(p, p);
  for (int k = 0; k < dist.outcomes(); ++k) {
    if (dist.status[k] != OutcomeStatus::regular) {
      if (counts[k] > 0) {
        std::ostringstream msg;
        msg << "outcome " << k << " observed " << counts[k]
            << " times but has model probability " << dist.p[k];
        throw Error(ErrorCode::ModelMismatch, msg.str());
      }
      if (dist.status[k] == OutcomeStatus::null) deterministic += dist.null_limit[k];
      continue;
    }
    const double freq = static_cast<double>(counts[k]) / static_cast<double>(n);
    const RealVector score = dist.dp.col(k) / dist.p[k];
    const RealMatrix summand = score * score.transpose();
    first += freq * summand;
    second += freq * summand.cwiseProduct(summand);
  }
  EmpiricalFisher out;
  out.estimate = first + deterministic;
  const RealMatrix variance = (second - first.cwiseProduct(first)).cwiseMax(0.0);
  out.standard_errors = (variance / static_cast<double>(n)).cwiseSqrt();
  return out;
}

MonteCarloRecord monte_carlo(const MeasurementDistribution& dist, std::int64_t trials,
                             std::uint64_t seed) {
  MonteCarloRecord rec;
  rec.seed = seed;
  rec.trials = trials;
  rec.counts = sample_outcomes(dist.p, trials, seed);
  rec.empirical = empirical_fim(rec.counts, dist);
  rec.F_c = classical_fim(dist);
  for (Eigen::Index i = 0; i < rec.F_c.rows(); ++i) {
    for (Eigen::Index j = 0; j < rec.F_c.cols(); ++j) {
      const double se = rec.empirical.standard_errors(i, j);
      if (se > 0.0) {
        rec.max_z_score = std::max(
            rec.max_z_score, std::abs(rec.empirical.estimate(i, j) - rec.F_c(i, j)) / se);
      }
    }
  }
  return rec;
}

namespace {

RealVector probabilities_at(const StateModel& model, const POVM& povm,
                            const RealVector& theta) {
  const ComplexMatrix rho = model.state(theta);
  RealVector p(povm.size());
  for (int k = 0; k < povm.size(); ++k) p[k] = (rho * povm.elements[k]).trace().real();
  return p;
}

double log_likelihood(const StateModel& model, const POVM& povm, const RealVector& theta,
                      const std::vector<std::int64_t>& counts) {
  if (!model.domain.contains(theta)) return -std::numeric_limits<double>::infinity();
  const RealVector p = probabilities_at(model, povm, theta);
  double ll = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) continue;
    if (p[static_cast<Eigen::Index>(k)] <= 0.0) return -std::numeric_limits<double>::infinity();
    ll += static_cast<double>(counts[k]) * std::log(p[static_cast<Eigen::Index>(k)]);
  }
  return ll;
}

}  // namespace

EstimatorStudy estimator_study(const StateModel& model, const POVM& povm,
                               const RealVector& theta, int repetitions,
                               std::int64_t shots, std::uint64_t seed) {
  if (repetitions < 2 || shots < 1) {
    throw Error(ErrorCode::InvalidParameter, "estimator study needs >= 2 repetitions and >= 1 shot");
  }
  const auto sp = evaluate(model, theta);
  const auto dec = support_decomposition(sp);
  const auto slds = compute_sld(dec, sp.rho, sp.drho);
  const auto dist = outcome_distribution(sp.rho, sp.drho, slds, povm);
  const RealMatrix fc = classical_fim(dist);
  const auto fc_inv = safe_inverse(fc);
  if (!fc_inv) {
    throw Error(ErrorCode::InvalidParameter,
                "classical Fisher information is singular; theta is not identifiable");
  }
  const int p = model.num_params;
  EstimatorStudy study;
  study.repetitions = repetitions;
  study.shots_per_repetition = shots;
  study.crb = *fc_inv / static_cast<double>(shots);

  // Search window of +-8 standard deviations around theta.
  RealVector half_width(p);
  for (int l = 0; l < p; ++l) half_width[l] = 8.0 * std::sqrt(study.crb(l, l));

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  std::vector<RealVector> estimates;
  for (int r = 0; r < repetitions; ++r) {
    const auto counts = sample_outcomes(dist.p, shots, seed + static_cast<std::uint64_t>(r));
    RealVector est = theta;
    for (int sweep = 0; sweep < 4; ++sweep) {
      for (int l = 0; l < p; ++l) {
        double a = std::max(theta[l] - half_width[l], model.domain.lower[l]);
        double b = std::min(theta[l] + half_width[l], model.domain.upper[l]);
        auto f = [&](double x) {
          RealVector t = est;
          t[l] = x;
          return log_likelihood(model, povm, t, counts);
        };
        double x1 = b - golden * (b - a);
        double x2 = a + golden * (b - a);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 60; ++it) {
          if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + golden * (b - a); f2 = f(x2);
          } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - golden * (b - a); f1 = f(x1);
          }
        }
        est[l] = (a + b) / 2.0;
      }
    }
    estimates.push_back(est);
  }
  study.mean = RealVector::Zero(p);
  for (const auto& e : estimates) study.mean += e;
  study.mean /= repetitions;
  study.covariance = RealMatrix::Zero(p, p);
  for (const auto& e : estimates) {
    const RealVector d = e - theta;
    study.covariance += d * d.transpose();
  }
  study.covariance /= repetitions;
  return study;
}

}  // namespace qcrb
