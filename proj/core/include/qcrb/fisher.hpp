#pragma once

// Classical Fisher information of a measurement, comparison with the QFIM,
// and Monte Carlo evidence.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcrb/model.hpp"
#include "qcrb/povm.hpp"
#include "qcrb/sld.hpp"

namespace qcrb {

enum class OutcomeStatus {
  regular,    // p > prob_tol
  null,       // p and dp vanish, null vectors real-collinear
  irregular,  // p and dp vanish, but the limit (dp)^2/p depends on direction
  singular    // p vanishes while some dp does not
};
std::string to_string(OutcomeStatus s);

struct DistributionOptions {
  double prob_tol = 1e-12;
  double deriv_tol = 1e-8;      // relative to max_l ||drho_l||_F
  double collinear_tol = 1e-8;  // null-outcome collinearity, relative
};

struct MeasurementDistribution {
  RealVector p;                        // M
  RealMatrix dp;                       // p x M, dp(l, k) = d_l p_k
  std::vector<OutcomeStatus> status;   // M
  std::vector<RealMatrix> null_limit;  // per outcome; zero unless status == null
  std::vector<double> collinearity_residuals;
  DistributionOptions options;

  int outcomes() const { return static_cast<int>(p.size()); }
  int num_params() const { return static_cast<int>(dp.rows()); }
  bool has_singular() const;
  bool has_irregular() const;
};

/// p_k = tr(rho E_k), d_l p_k = tr(d_l rho E_k). For outcomes with p_k = 0
/// and d p_k = 0 the limiting contribution Re tr(E L_l rho L_m) is recorded
/// when the vectors {E L_l rho^{1/2}}_l are real-collinear.
MeasurementDistribution outcome_distribution(const ComplexMatrix& rho,
                                             std::span<const ComplexMatrix> drho,
                                             const SLDSet& slds, const POVM& povm,
                                             const DistributionOptions& options = {});

/// Throws SingularOutcome if any outcome is singular.
RealMatrix classical_fim(const MeasurementDistribution& dist);

struct FisherComparison {
  RealMatrix F_c;
  RealMatrix F_Q;
  double gap = 0.0;                   // ||F_Q - F_c||_op
  double min_gap_eigenvalue = 0.0;    // smallest eigenvalue of F_Q - F_c
  double tolerance = 0.0;
  bool saturated = false;
  std::optional<RealMatrix> G;
  std::optional<double> cost_classical;  // tr(G F_c^-1)
  std::optional<double> cost_quantum;    // tr(G F_Q^-1)
  std::string notice;
};

/// saturated iff ||F_Q - F_c||_op <= tol * ||F_Q||_op. Scalar costs are
/// reported when the relevant inverse exists. Throws NotHermitian on
/// non-symmetric input.
FisherComparison compare(const RealMatrix& F_c, const RealMatrix& F_Q,
                         const std::optional<RealMatrix>& G = std::nullopt,
                         double tol = 1e-8);

/// Multinomial draw of N outcomes. Deterministic for a fixed seed.
std::vector<std::int64_t> sample_outcomes(const RealVector& p, std::int64_t trials,
                                          std::uint64_t seed);

struct EmpiricalFisher {
  RealMatrix estimate;
  RealMatrix standard_errors;
};

/// Plug-in estimate sum_k (n_k / N) s_kl s_km with exact scores s = d ln p,
/// plus the deterministic null-outcome limits. Throws ModelMismatch when an
/// outcome with p_k <= prob_tol was observed.
EmpiricalFisher empirical_fim(const std::vector<std::int64_t>& counts,
                              const MeasurementDistribution& dist);

struct EstimatorStudy {
  int repetitions = 0;
  std::int64_t shots_per_repetition = 0;
  RealVector mean;
  RealMatrix covariance;
  RealMatrix crb;  // F_c^-1 / shots
};

struct MonteCarloRecord {
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::vector<std::int64_t> counts;
  EmpiricalFisher empirical;
  RealMatrix F_c;
  double max_z_score = 0.0;  // max |F_hat - F_c| / se over entries with se > 0
  std::optional<EstimatorStudy> estimator;
};

MonteCarloRecord monte_carlo(const MeasurementDistribution& dist, std::int64_t trials,
                             std::uint64_t seed);

/// Maximum-likelihood estimates from repeated experiments of `shots` outcomes
/// each; per-coordinate golden-section refinement of a coarse grid over the
/// domain box. Requires the outcome distribution to identify theta locally.
EstimatorStudy estimator_study(const StateModel& model, const POVM& povm,
                               const RealVector& theta, int repetitions,
                               std::int64_t shots, std::uint64_t seed);

}  // namespace qcrb
