#include "qcrb/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qcrb/errors.hpp"

namespace qcrb::fixtures {

namespace {

constexpr Complex kI{0.0, 1.0};

ComplexVector basis_vector(int n, int k) {
  ComplexVector v = ComplexVector::Zero(n);
  v[k] = 1.0;
  return v;
}

ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b) { return a * b.adjoint(); }

ComplexMatrix sym_outer(const ComplexVector& da, const ComplexVector& a) {
  return da * a.adjoint() + a * da.adjoint();
}

Domain box(RealVector lower, RealVector upper, std::string description) {
  Domain d;
  d.lower = std::move(lower);
  d.upper = std::move(upper);
  d.description = std::move(description);
  return d;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// ---------------------------------------------------------------------------
// Rank-2 qutrit: rho = theta1 |e2><e2| + (1 - theta1) |psi><psi| with
// psi = (d e^{i phi}, 0, sqrt(1 - |d|^2)), phi = c1 theta1 + c2 theta2.

struct QutritParams {
  Complex d;
  double s;
  double c1;
  double c2;

  double phi(const RealVector& t) const { return c1 * t[0] + c2 * t[1]; }
  double c(int l) const { return l == 0 ? c1 : c2; }
  ComplexVector psi(const RealVector& t) const {
    ComplexVector v(3);
    v << d * std::exp(kI * phi(t)), 0.0, s;
    return v;
  }
  ComplexVector dpsi(const RealVector& t, int l) const {
    ComplexVector v = ComplexVector::Zero(3);
    v[0] = kI * c(l) * d * std::exp(kI * phi(t));
    return v;
  }
};

QutritParams qutrit_params(const ParamMap& p) {
  const double mag = p.at("d");
  require(mag > 0.0 && mag < 1.0, "d must satisfy 0 < d < 1");
  require(p.at("c1") != 0.0 && p.at("c2") != 0.0, "c1 and c2 must be non-zero");
  return {std::polar(mag, p.at("arg_d")), std::sqrt(1.0 - mag * mag), p.at("c1"), p.at("c2")};
}

StateModel qutrit_model(const QutritParams& q, const std::string& name) {
  StateModel m;
  m.name = name;
  m.dimension = 3;
  m.num_params = 2;
  m.domain = box(RealVector::Zero(2), RealVector::Ones(2), "(0,1) x (0,1)");
  const ComplexVector e2 = basis_vector(3, 1);
  m.state = [q, e2](const RealVector& t) {
    const ComplexVector psi = q.psi(t);
    return ComplexMatrix(t[0] * outer(e2, e2) + (1.0 - t[0]) * outer(psi, psi));
  };
  m.derivative = [q, e2](const RealVector& t, int l) {
    const ComplexVector psi = q.psi(t);
    ComplexMatrix d = (1.0 - t[0]) * sym_outer(q.dpsi(t, l), psi);
    if (l == 0) d += outer(e2, e2) - outer(psi, psi);
    return d;
  };
  m.support_basis = [q, e2](const RealVector& t) {
    ComplexMatrix v(3, 2);
    v.col(0) = e2;
    v.col(1) = q.psi(t);
    return v;
  };
  m.support_basis_derivative = [q](const RealVector& t, int l) {
    ComplexMatrix v = ComplexMatrix::Zero(3, 2);
    v.col(1) = q.dpsi(t, l);
    return v;
  };
  m.null_basis = [q](const RealVector& t) {
    ComplexMatrix y(3, 1);
    y << q.s, 0.0, -std::conj(q.d) * std::exp(-kI * q.phi(t));
    return y;
  };
  return m;
}

Fixture build_paper_qutrit(const ParamMap& p) {
  Fixture f;
  f.model = qutrit_model(qutrit_params(p), "paper-qutrit");
  f.default_theta = RealVector::Constant(2, 0.0);
  f.default_theta << 0.3, 0.5;
  return f;
}

Fixture build_lcss(const ParamMap& p) {
  const auto q = qutrit_params(p);
  Fixture f;
  f.model = qutrit_model(q, "corrigendum-lcss");
  f.default_theta.resize(2);
  f.default_theta << 0.3, 0.5;
  const double d2 = std::norm(q.d);
  Cond2PrimeWitness w;
  w.name = "U = diag(1, exp(i |d|^2 phi))";
  w.U = [q, d2](const RealVector& t) {
    ComplexMatrix u = ComplexMatrix::Identity(2, 2);
    u(1, 1) = std::exp(kI * d2 * q.phi(t));
    return u;
  };
  w.dU = [q, d2](const RealVector& t, int l) {
    ComplexMatrix du = ComplexMatrix::Zero(2, 2);
    du(1, 1) = kI * d2 * q.c(l) * std::exp(kI * d2 * q.phi(t));
    return du;
  };
  f.witness = std::move(w);
  return f;
}

// ---------------------------------------------------------------------------
// Fixed support: V = B+ S(theta), S = R diag(exp(i a_k . theta)).

Fixture build_theta_independent(const ParamMap& p) {
  require(is_integer(p.at("seed")) && p.at("seed") >= 0, "seed must be a non-negative integer");
  std::mt19937_64 rng(static_cast<std::uint64_t>(p.at("seed")));
  const ComplexMatrix b = random_unitary(4, rng);
  const ComplexMatrix b_plus = b.leftCols(3);
  const ComplexMatrix r = random_unitary(3, rng);
  RealMatrix rates(3, 2);
  rates << 0.3, 0.7, -0.5, 0.2, 0.9, -0.4;

  auto q_of = [](const RealVector& t) {
    RealVector q(3);
    q << t[0], (1.0 - t[0]) * t[1], (1.0 - t[0]) * (1.0 - t[1]);
    return q;
  };
  auto dq_of = [](const RealVector& t, int l) {
    RealVector d(3);
    if (l == 0) d << 1.0, -t[1], -(1.0 - t[1]);
    else d << 0.0, 1.0 - t[0], -(1.0 - t[0]);
    return d;
  };
  auto phases = [rates](const RealVector& t) {
    const RealVector angles = rates * t;
    ComplexVector ph(3);
    for (int k = 0; k < 3; ++k) ph[k] = std::exp(kI * angles[k]);
    return ph;
  };
  auto s_of = [r, phases](const RealVector& t) { return ComplexMatrix(r * phases(t).asDiagonal()); };
  auto ds_of = [r, rates, phases](const RealVector& t, int l) {
    const ComplexVector d = kI * rates.col(l).cast<Complex>().cwiseProduct(phases(t));
    return ComplexMatrix(r * d.asDiagonal());
  };

  Fixture f;
  StateModel& m = f.model;
  m.name = "theta-independent-support";
  m.dimension = 4;
  m.num_params = 2;
  m.domain = box(RealVector::Zero(2), RealVector::Ones(2), "(0,1) x (0,1)");
  m.state = [b_plus, r, q_of](const RealVector& t) {
    return ComplexMatrix(b_plus * r * q_of(t).cast<Complex>().asDiagonal() * r.adjoint() *
                         b_plus.adjoint());
  };
  m.derivative = [b_plus, r, dq_of](const RealVector& t, int l) {
    return ComplexMatrix(b_plus * r * dq_of(t, l).cast<Complex>().asDiagonal() * r.adjoint() *
                         b_plus.adjoint());
  };
  m.support_basis = [b_plus, s_of](const RealVector& t) { return ComplexMatrix(b_plus * s_of(t)); };
  m.support_basis_derivative = [b_plus, ds_of](const RealVector& t, int l) {
    return ComplexMatrix(b_plus * ds_of(t, l));
  };
  const ComplexMatrix y = b.rightCols(1);
  m.null_basis = [y](const RealVector&) { return y; };
  f.default_theta.resize(2);
  f.default_theta << 0.3, 0.4;
  Cond2PrimeWitness w;
  w.name = "U = S(theta)";
  w.U = s_of;
  w.dU = ds_of;
  f.witness = std::move(w);
  return f;
}

// ---------------------------------------------------------------------------
// Stationary basis: psi1 = (cos a, 0, sin a), psi2 = e2, a = k1 theta1 + k2 theta2.

Fixture build_stationary(const ParamMap& p) {
  const double k1 = p.at("k1");
  const double k2 = p.at("k2");
  auto angle = [k1, k2](const RealVector& t) { return k1 * t[0] + k2 * t[1]; };
  auto psi1 = [angle](const RealVector& t) {
    ComplexVector v(3);
    v << std::cos(angle(t)), 0.0, std::sin(angle(t));
    return v;
  };
  auto perp = [angle](const RealVector& t) {
    ComplexVector v(3);
    v << -std::sin(angle(t)), 0.0, std::cos(angle(t));
    return v;
  };
  const ComplexVector e2 = basis_vector(3, 1);
  auto rate = [k1, k2](int l) { return l == 0 ? k1 : k2; };

  Fixture f;
  StateModel& m = f.model;
  m.name = "stationary-basis";
  m.dimension = 3;
  m.num_params = 2;
  m.domain = box(RealVector::Zero(2), RealVector::Ones(2), "(0,1) x (0,1)");
  m.state = [psi1, e2](const RealVector& t) {
    return ComplexMatrix(t[0] * outer(psi1(t), psi1(t)) + (1.0 - t[0]) * outer(e2, e2));
  };
  m.derivative = [psi1, perp, e2, rate](const RealVector& t, int l) {
    ComplexMatrix d = t[0] * rate(l) * sym_outer(perp(t), psi1(t));
    if (l == 0) d += outer(psi1(t), psi1(t)) - outer(e2, e2);
    return d;
  };
  m.support_basis = [psi1, e2](const RealVector& t) {
    ComplexMatrix v(3, 2);
    v.col(0) = psi1(t);
    v.col(1) = e2;
    return v;
  };
  m.support_basis_derivative = [perp, rate](const RealVector& t, int l) {
    ComplexMatrix v = ComplexMatrix::Zero(3, 2);
    v.col(0) = rate(l) * perp(t);
    return v;
  };
  m.null_basis = [perp](const RealVector& t) { return ComplexMatrix(perp(t)); };
  f.default_theta.resize(2);
  f.default_theta << 0.4, 0.6;
  return f;
}

// ---------------------------------------------------------------------------

Fixture build_multinomial(const ParamMap& p) {
  const double dims = p.at("dims");
  require(is_integer(dims) && dims >= 2 && dims <= 64, "dims must be an integer in [2, 64]");
  const int n = static_cast<int>(dims);
  const int np = n - 1;
  Fixture f;
  StateModel& m = f.model;
  m.name = "diag-multinomial";
  m.dimension = n;
  m.num_params = np;
  m.domain = box(RealVector::Zero(np), RealVector::Ones(np), "theta_l > 0, sum theta_l < 1");
  m.domain.constraint = [](const RealVector& t) { return t.sum() < 1.0; };
  m.state = [n](const RealVector& t) {
    RealVector q(n);
    q.head(n - 1) = t;
    q[n - 1] = 1.0 - t.sum();
    return ComplexMatrix(q.cast<Complex>().asDiagonal());
  };
  m.derivative = [n](const RealVector&, int l) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    d(l, l) = 1.0;
    d(n - 1, n - 1) = -1.0;
    return d;
  };
  m.support_basis = [n](const RealVector&) { return ComplexMatrix(ComplexMatrix::Identity(n, n)); };
  m.support_basis_derivative = [n](const RealVector&, int) {
    return ComplexMatrix(ComplexMatrix::Zero(n, n));
  };
  f.default_theta = RealVector::Constant(np, 1.0 / n);
  return f;
}

// ---------------------------------------------------------------------------
// psi = (cos theta1, e^{i theta2} sin theta1).

Fixture build_pure_qubit(const ParamMap&) {
  auto psi = [](const RealVector& t) {
    ComplexVector v(2);
    v << std::cos(t[0]), std::exp(kI * t[1]) * std::sin(t[0]);
    return v;
  };
  auto dpsi = [](const RealVector& t, int l) {
    ComplexVector v(2);
    if (l == 0) v << -std::sin(t[0]), std::exp(kI * t[1]) * std::cos(t[0]);
    else v << 0.0, kI * std::exp(kI * t[1]) * std::sin(t[0]);
    return v;
  };
  Fixture f;
  StateModel& m = f.model;
  m.name = "pure-qubit-amp-phase";
  m.dimension = 2;
  m.num_params = 2;
  RealVector lo(2), hi(2);
  lo << 0.0, -std::numbers::pi;
  hi << std::numbers::pi / 2.0, std::numbers::pi;
  m.domain = box(lo, hi, "(0, pi/2) x (-pi, pi)");
  m.state = [psi](const RealVector& t) { return ComplexMatrix(outer(psi(t), psi(t))); };
  m.derivative = [psi, dpsi](const RealVector& t, int l) {
    return ComplexMatrix(sym_outer(dpsi(t, l), psi(t)));
  };
  m.support_basis = [psi](const RealVector& t) { return ComplexMatrix(psi(t)); };
  m.support_basis_derivative = [dpsi](const RealVector& t, int l) {
    return ComplexMatrix(dpsi(t, l));
  };
  m.null_basis = [](const RealVector& t) {
    ComplexMatrix y(2, 1);
    y << -std::sin(t[0]), std::exp(kI * t[1]) * std::cos(t[0]);
    return y;
  };
  f.default_theta.resize(2);
  f.default_theta << 0.7, 0.2;
  return f;
}

// ---------------------------------------------------------------------------
// Planted synthetic family. rho(theta) = U(theta) V0 diag(q(theta)) V0^dagger
// U(theta)^dagger with U(theta) = prod_l exp(i theta_l G_l) and
// q(theta) = q0 + sum_l theta_l dq_l. G_l and dq_l are solved from the SLD
// block equations so that the SLD blocks at theta = 0 are the planted ones.

struct Exponential {
  ComplexMatrix vectors;
  RealVector values;

  ComplexMatrix at(double t) const {
    ComplexVector ph(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) ph[k] = std::exp(kI * t * values[k]);
    return vectors * ph.asDiagonal() * vectors.adjoint();
  }
};

Fixture build_random(const ParamMap& params) {
  const double ns_d = params.at("n_s"), rp_d = params.at("r_plus"), p_d = params.at("p");
  const double seed_d = params.at("seed"), plant_d = params.at("plant");
  require(is_integer(ns_d) && ns_d >= 2 && ns_d <= 32, "n_s must be an integer in [2, 32]");
  require(is_integer(rp_d) && rp_d >= 1 && rp_d <= ns_d, "r_plus must be an integer in [1, n_s]");
  require(is_integer(p_d) && p_d >= 1 && p_d <= 8, "p must be an integer in [1, 8]");
  require(is_integer(seed_d) && seed_d >= 0, "seed must be a non-negative integer");
  require(plant_d == 0.0 || plant_d == 1.0 || plant_d == 2.0, "plant must be 0, 1 or 2");
  const int n = static_cast<int>(ns_d), rp = static_cast<int>(rp_d), r0 = n - rp;
  const int np = static_cast<int>(p_d);
  const int plant = static_cast<int>(plant_d);

  std::mt19937_64 rng(static_cast<std::uint64_t>(seed_d));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const ComplexMatrix b = random_unitary(n, rng);
  const ComplexMatrix v0 = b.leftCols(rp);
  RealVector q0(rp);
  for (int k = 0; k < rp; ++k) q0[k] = (k + 1.0) + 0.5 * unif(rng);
  q0 /= q0.sum();

  // Planted blocks in the V0 basis.
  std::vector<ComplexMatrix> lpp(np), lpz(np);
  const ComplexMatrix common = random_unitary(rp, rng);
  for (int l = 0; l < np; ++l) {
    if (plant == 0) {
      lpp[l] = random_hermitian(rp, rng);
    } else {
      RealVector eig(rp);
      for (int k = 0; k < rp; ++k) eig[k] = gauss(rng);
      lpp[l] = common * eig.cast<Complex>().asDiagonal() * common.adjoint();
    }
    // Trace preservation requires tr(rho L) = 0.
    const Complex shift = (q0.cast<Complex>().asDiagonal() * lpp[l]).trace();
    lpp[l] -= shift.real() * ComplexMatrix::Identity(rp, rp);
  }
  if (r0 > 0) {
    if (plant == 2) {
      const ComplexMatrix u = random_complex(rp, r0, rng);
      const ComplexMatrix w0 = random_unitary(r0, rng);
      for (int l = 0; l < np; ++l) {
        ComplexMatrix a = u;
        for (int s = 0; s < r0; ++s) a.col(s) *= gauss(rng);
        lpz[l] = a * w0.adjoint();
      }
    } else {
      for (int l = 0; l < np; ++l) lpz[l] = random_complex(rp, r0, rng);
    }
  }

  std::vector<Exponential> gens;
  std::vector<RealVector> dq(np);
  for (int l = 0; l < np; ++l) {
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    for (int j = 0; j < rp; ++j) {
      for (int k = 0; k < rp; ++k) {
        if (j == k) continue;
        g(j, k) = lpp[l](j, k) * (q0[j] + q0[k]) / (2.0 * kI * (q0[k] - q0[j]));
      }
    }
    if (r0 > 0) {
      g.topRightCorner(rp, r0) = 0.5 * kI * lpz[l];
      g.bottomLeftCorner(r0, rp) = g.topRightCorner(rp, r0).adjoint();
    }
    dq[l] = q0.cwiseProduct(lpp[l].diagonal().real());
    const ComplexMatrix gl = hermitian_part(b * g * b.adjoint());
    const auto e = eig_hermitian(gl);
    gens.push_back({e.eigenvectors, e.eigenvalues});
  }

  double drift = 0.0;
  for (int k = 0; k < rp; ++k) {
    double s = 0.0;
    for (int l = 0; l < np; ++l) s += std::abs(dq[l][k]);
    drift = std::max(drift, s);
  }
  const double eps = drift > 0.0 ? std::min(0.1, 0.5 * q0.minCoeff() / drift) : 0.1;

  auto q_of = [q0, dq](const RealVector& t) {
    RealVector q = q0;
    for (std::size_t l = 0; l < dq.size(); ++l) q += t[static_cast<Eigen::Index>(l)] * dq[l];
    return q;
  };
  // Factors exp(i theta_l G_l) and, for index `which`, i G_l exp(i theta_l G_l).
  auto unitary = [gens, n](const RealVector& t, int which) {
    ComplexMatrix u = ComplexMatrix::Identity(n, n);
    for (std::size_t l = 0; l < gens.size(); ++l) {
      const auto& g = gens[l];
      ComplexMatrix f = g.at(t[static_cast<Eigen::Index>(l)]);
      if (static_cast<int>(l) == which) {
        f = kI * g.vectors * g.values.cast<Complex>().asDiagonal() * g.vectors.adjoint() * f;
      }
      u = u * f;
    }
    return u;
  };

  Fixture f;
  StateModel& m = f.model;
  m.name = "random-rank-r";
  m.dimension = n;
  m.num_params = np;
  m.domain = box(RealVector::Constant(np, -eps), RealVector::Constant(np, eps), "(-eps, eps)^p");
  m.state = [unitary, v0, q_of](const RealVector& t) {
    const ComplexMatrix v = unitary(t, -1) * v0;
    return ComplexMatrix(v * q_of(t).cast<Complex>().asDiagonal() * v.adjoint());
  };
  m.derivative = [unitary, v0, q_of, dq](const RealVector& t, int l) {
    const ComplexMatrix u = unitary(t, -1);
    const ComplexMatrix du = unitary(t, l);
    const ComplexMatrix inner = v0 * q_of(t).cast<Complex>().asDiagonal() * v0.adjoint();
    const ComplexMatrix a = du * inner * u.adjoint();
    return ComplexMatrix(a + a.adjoint() +
                         u * v0 * dq[l].cast<Complex>().asDiagonal() * v0.adjoint() * u.adjoint());
  };
  m.support_basis = [unitary, v0](const RealVector& t) { return ComplexMatrix(unitary(t, -1) * v0); };
  m.support_basis_derivative = [unitary, v0](const RealVector& t, int l) {
    return ComplexMatrix(unitary(t, l) * v0);
  };
  const ComplexMatrix y0 = b.rightCols(r0);
  m.null_basis = [unitary, y0](const RealVector& t) { return ComplexMatrix(unitary(t, -1) * y0); };
  f.default_theta = RealVector::Zero(np);
  return f;
}

std::vector<RegistryEntry> make_registry() {
  return {
      {"paper-qutrit",
       "Rank-2 qutrit mixing |e2> and (d e^{i phi}, 0, sqrt(1-d^2)), phi = c1 theta1 + c2 theta2; "
       "saturable on (0,1)^2",
       {{"d", 0.6}, {"arg_d", 0.0}, {"c1", 1.0}, {"c2", 0.7}},
       &build_paper_qutrit},
      {"corrigendum-lcss",
       "The rank-2 qutrit with closed-form V(theta), Y(theta) and the unitary witness "
       "U = diag(1, e^{i |d|^2 phi})",
       {{"d", 0.6}, {"arg_d", 0.0}, {"c1", 1.0}, {"c2", 0.7}},
       &build_lcss},
      {"theta-independent-support",
       "4-level, rank-3 family with a fixed support and V = B+ S(theta), diagonal dS^dagger S",
       {{"seed", 11.0}},
       &build_theta_independent},
      {"stationary-basis",
       "Rank-2 qutrit rotating in the e1-e3 plane; V^dagger dV = 0",
       {{"k1", 1.0}, {"k2", 0.5}},
       &build_stationary},
      {"diag-multinomial",
       "Full-rank diagonal state diag(theta_1, ..., 1 - sum theta)",
       {{"dims", 3.0}},
       &build_multinomial},
      {"pure-qubit-amp-phase",
       "Pure qubit (cos theta1, e^{i theta2} sin theta1); not saturable",
       {},
       &build_pure_qubit},
      {"random-rank-r",
       "Seeded synthetic family with planted SLD blocks at theta = 0",
       {{"n_s", 4.0}, {"r_plus", 2.0}, {"p", 2.0}, {"seed", 1.0}, {"plant", 2.0}},
       &build_random},
  };
}

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = make_registry();
  return entries;
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.name);
  return out;
}

Fixture get(const std::string& name, const ParamMap& params) {
  const auto& reg = registry();
  const auto it = std::find_if(reg.begin(), reg.end(),
                               [&](const RegistryEntry& e) { return e.name == name; });
  if (it == reg.end()) {
    std::ostringstream msg;
    msg << "unknown model '" << name << "'; available:";
    for (const auto& e : reg) msg << " " << e.name;
    throw Error(ErrorCode::UnknownModel, msg.str());
  }
  ParamMap merged = it->defaults;
  for (const auto& [key, value] : params) {
    if (!merged.count(key)) {
      throw Error(ErrorCode::InvalidParameter,
                  "model '" + name + "' has no parameter '" + key + "'");
    }
    require(std::isfinite(value), "parameter '" + key + "' must be finite");
    merged[key] = value;
  }
  Fixture f = it->build(merged);
  f.params = std::move(merged);
  return f;
}

ParamMap parse_params(const std::string& text) {
  ParamMap out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::InvalidParameter, "expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      out[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParameter, "parameter '" + key + "' is not a number: '" + value + "'");
    }
  }
  return out;
}

}  // namespace qcrb::fixtures
