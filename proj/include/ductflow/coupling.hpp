#ifndef DUCTFLOW_COUPLING_HPP
#define DUCTFLOW_COUPLING_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ductflow/gas.hpp"
#include "ductflow/lax_curves.hpp"

namespace ductflow {

/// The four junction coupling conditions.
enum class CouplingKind { S, P, L, p };

inline std::string to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::S: return "S";
    case CouplingKind::P: return "P";
    case CouplingKind::L: return "L";
    case CouplingKind::p: return "p";
  }
  return "?";
}

/// Pipe section description: either an ordered list of piecewise-constant
/// values or a smooth monotone shape on [-X, X].
struct SmoothSection {
  double a_minus;
  double a_plus;
  double X = 1.0;
  // shape(x) on [-X, X] with shape(-X) = a_minus, shape(X) = a_plus.
  // Empty means the default linear interpolant.
  std::function<double(double)> shape;
  std::function<double(double)> shape_derivative;

  double value(double x) const {
    if (shape) return shape(x);
    const double t = (x + X) / (2.0 * X);
    return a_minus + (a_plus - a_minus) * t;
  }
  double derivative(double x) const {
    if (shape_derivative) return shape_derivative(x);
    if (shape) {  // central difference fallback
      const double h = 1e-6 * X;
      return (shape(x + h) - shape(x - h)) / (2.0 * h);
    }
    return (a_plus - a_minus) / (2.0 * X);
  }
};

struct PiecewiseSection {
  std::vector<double> x;  // strictly increasing junction positions
  std::vector<double> a;  // a.size() == x.size() + 1, all positive
};

/// Guard on the perturbative regime: section jumps above this relative size
/// are rejected unless explicitly overridden.
constexpr double kSectionRatioGuard = 0.2;

struct CouplingOptions {
  SolverOptions solver;
  int ode_steps = 2000;       // fixed RK4 steps over [-X, X]
  double sonic_guard = 1e-6;  // reject when |lambda_1| or |lambda_2| < guard * c
  bool allow_large_ratio = false;
};

namespace detail {

// Jacobian of the flux f = (q, P, F) in conserved variables.
inline std::array<Vec3, 3> flux_jacobian_columns(const GasState& u,
                                                 const GasLaw& law) {
  const Primitives pr = primitives(u, law);
  const double g = law.gamma, v = pr.v;
  const double dp_drho = 0.5 * (g - 1.0) * v * v;
  const double dp_dq = -(g - 1.0) * v;
  const double dp_dE = g - 1.0;
  const double h = (u.E + pr.p) / u.rho;
  // Columns are partial derivatives with respect to (rho, q, E).
  Vec3 c0{0.0, -v * v + dp_drho, -v * h + v * dp_drho};
  Vec3 c1{1.0, 2.0 * v + dp_dq, h + v * dp_dq};
  Vec3 c2{0.0, dp_dE, v + v * dp_dE};
  return {c0, c1, c2};
}

inline void check_subsonic_interior(const GasState& u, const GasLaw& law,
                                    double guard) {
  const Primitives pr = primitives(u, law);
  if (std::abs(pr.v - pr.c) < guard * pr.c || std::abs(pr.v) < guard * pr.c)
    throw SonicError("characteristic speed inside guard band");
  if (!(pr.v > 0.0 && pr.v < pr.c))
    throw SonicError("state left the subsonic region");
}

}  // namespace detail

/// Result of integrating the stationary balance across a smooth section.
struct StationaryPath {
  GasState endpoint;
  std::vector<std::pair<double, GasState>> samples;
  double Sigma;           // integral of p a'(x) dx along the path
  double error_estimate;  // Richardson estimate from one step halving
};

/// Integrate du/dx = -(Df(u))^-1 g(u) a'(x)/a(x), g = (q, q^2/rho, F),
/// from x = -X with datum u_start; accumulates Sigma = int p a' dx.
inline StationaryPath integrate_stationary(const GasState& u_start,
                                           const SmoothSection& profile,
                                           const GasLaw& law,
                                           const CouplingOptions& opt = {}) {
  if (!is_subsonic(u_start, law))
    throw DomainError("u_start not subsonic, v/c",
                      primitives(u_start, law).v / primitives(u_start, law).c);
  const double span = profile.a_plus - profile.a_minus;
  const double base = std::min(profile.a_minus, profile.a_plus);
  if (!(base > 0.0)) throw DomainError("section", base);
  if (std::abs(span) / base > kSectionRatioGuard && !opt.allow_large_ratio)
    throw DomainError("|da|/a beyond perturbative guard", std::abs(span) / base);

  auto rhs = [&](double x, const GasState& u, double* dSigma) -> Vec3 {
    detail::check_subsonic_interior(u, law, opt.sonic_guard);
    const double a = profile.value(x);
    const double ap = profile.derivative(x);
    if (!(a > 0.0)) throw DomainError("section a(x)", a);
    const Primitives pr = primitives(u, law);
    const Vec3 g{u.q, u.q * pr.v, energy_flux(u, law)};
    const auto jac = detail::flux_jacobian_columns(u, law);
    const Vec3 du = detail::solve3(jac, (-ap / a) * g);
    if (dSigma) *dSigma = pr.p * ap;
    return du;
  };

  auto run = [&](int steps, std::vector<std::pair<double, GasState>>* path)
      -> std::pair<GasState, double> {
    const double X = profile.X;
    const double dx = 2.0 * X / steps;
    GasState u = u_start;
    double Sigma = 0.0;
    if (path) path->push_back({-X, u});
    for (int i = 0; i < steps; ++i) {
      const double x = -X + i * dx;
      double s1, s2, s3, s4;
      const Vec3 k1 = rhs(x, u, &s1);
      const GasState u2{u.rho + 0.5 * dx * k1[0], u.q + 0.5 * dx * k1[1],
                        u.E + 0.5 * dx * k1[2]};
      const Vec3 k2 = rhs(x + 0.5 * dx, u2, &s2);
      const GasState u3{u.rho + 0.5 * dx * k2[0], u.q + 0.5 * dx * k2[1],
                        u.E + 0.5 * dx * k2[2]};
      const Vec3 k3 = rhs(x + 0.5 * dx, u3, &s3);
      const GasState u4{u.rho + dx * k3[0], u.q + dx * k3[1],
                        u.E + dx * k3[2]};
      const Vec3 k4 = rhs(x + dx, u4, &s4);
      u.rho += dx / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
      u.q += dx / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
      u.E += dx / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
      Sigma += dx / 6.0 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
      if (path) path->push_back({x + dx, u});
    }
    return {u, Sigma};
  };

  StationaryPath out;
  const auto coarse = run(opt.ode_steps, &out.samples);
  const auto fine = run(2 * opt.ode_steps, nullptr);
  out.endpoint = fine.first;
  out.Sigma = fine.second;
  out.error_estimate =
      norm(detail::to_vec(fine.first) - detail::to_vec(coarse.first)) / 15.0;
  return out;
}

/// Residual of the coupling condition Psi(kind; aM, uM; aP, uP).
///
/// First component is aP qP - aM qM and third aP F(uP) - aM F(uM) for every
/// kind. The second component is per kind: the momentum balance with the
/// section integral for S, P(uP) - P(uM) for P, aP P(uP) - aM P(uM) for L,
/// and p(uP) - p(uM) for p. For kind S the integral term enters with the
/// sign that makes the stationary endpoint a zero of Psi.
inline Vec3 psi_residual(CouplingKind kind, double aM, const GasState& uM,
                         double aP, const GasState& uP, const GasLaw& law,
                         const CouplingOptions& opt = {}) {
  if (!(aM > 0.0)) throw DomainError("a-", aM);
  if (!(aP > 0.0)) throw DomainError("a+", aP);
  Vec3 r;
  r[0] = aP * uP.q - aM * uM.q;
  r[2] = aP * energy_flux(uP, law) - aM * energy_flux(uM, law);
  switch (kind) {
    case CouplingKind::S: {
      double Sigma = 0.0;
      if (aM != aP) {
        SmoothSection prof{aM, aP};
        try {
          Sigma = integrate_stationary(uM, prof, law, opt).Sigma;
        } catch (const SonicError& err) {
          throw IntegrationError(std::string("stationary integral failed: ") +
                                 err.what());
        }
      }
      r[1] = aP * momentum_flux(uP, law) - aM * momentum_flux(uM, law) - Sigma;
      break;
    }
    case CouplingKind::P:
      r[1] = momentum_flux(uP, law) - momentum_flux(uM, law);
      break;
    case CouplingKind::L:
      r[1] = aP * momentum_flux(uP, law) - aM * momentum_flux(uM, law);
      break;
    case CouplingKind::p:
      r[1] = primitives(uP, law).p - primitives(uM, law).p;
      break;
  }
  return r;
}

namespace detail {

// Analytic Jacobian D_{u+} Psi for the algebraic kinds P, L, p.
inline std::array<Vec3, 3> psi_jacobian_uP(CouplingKind kind, double aP,
                                           const GasState& uP,
                                           const GasLaw& law) {
  const Primitives pr = primitives(uP, law);
  const double g = law.gamma, v = pr.v;
  const double dp_drho = 0.5 * (g - 1.0) * v * v;
  const double dp_dq = -(g - 1.0) * v;
  const double dp_dE = g - 1.0;
  const double h = (uP.E + pr.p) / uP.rho;
  const Vec3 dP{-v * v + dp_drho, 2.0 * v + dp_dq, dp_dE};
  const Vec3 dF{-v * h + v * dp_drho, h + v * dp_dq, v + v * dp_dE};
  const Vec3 dq{0.0, 1.0, 0.0};
  const Vec3 dpress{dp_drho, dp_dq, dp_dE};

  Vec3 row0 = aP * dq;
  Vec3 row2 = aP * dF;
  Vec3 row1;
  switch (kind) {
    case CouplingKind::P: row1 = dP; break;
    case CouplingKind::L: row1 = aP * dP; break;
    case CouplingKind::p: row1 = dpress; break;
    default:
      throw NotApplicable("analytic Jacobian only for kinds P, L, p");
  }
  // Return as columns (derivatives with respect to rho, q, E).
  return {Vec3{row0[0], row1[0], row2[0]}, Vec3{row0[1], row1[1], row2[1]},
          Vec3{row0[2], row1[2], row2[2]}};
}

inline Vec3 psi_scale(double aM, const GasState& uM, const GasLaw& law) {
  const Primitives pr = primitives(uM, law);
  return {aM * (std::abs(uM.q) + uM.rho * pr.c),
          aM * (momentum_flux(uM, law) + pr.p),
          aM * (std::abs(energy_flux(uM, law)) + pr.c * uM.E)};
}

}  // namespace detail

namespace detail {

inline GasState t_map_newton(CouplingKind kind, double aM, double aP,
                             const GasState& uM, const GasLaw& law,
                             const CouplingOptions& opt) {
  const Vec3 scale = detail::psi_scale(aM, uM, law);
  // Seed with the uniformly rescaled state: it satisfies the first
  // component exactly, keeps v/c unchanged (so the iteration starts on the
  // subsonic branch), and is exact for kind L.
  const double s0 = aM / aP;
  GasState u{uM.rho * s0, uM.q * s0, uM.E * s0};
  double rn = 0.0;
  for (int it = 0; it <= opt.solver.max_iterations; ++it) {
    const Vec3 raw = psi_residual(kind, aM, uM, aP, u, law, opt);
    const Vec3 r{raw[0] / scale[0], raw[1] / scale[1], raw[2] / scale[2]};
    rn = norm(r);
    if (rn <= opt.solver.tolerance) {
      if (!is_subsonic(u, law))
        throw NonSubsonicResult("t_map result left the subsonic region");
      return u;
    }
    auto jac = detail::psi_jacobian_uP(kind, aP, u, law);
    for (int j = 0; j < 3; ++j)
      jac[j] = {jac[j][0] / scale[0], jac[j][1] / scale[1],
                jac[j][2] / scale[2]};
    const Vec3 delta = detail::solve3(jac, (-1.0) * r);
    double lambda = 1.0;
    bool accepted = false;
    for (int halve = 0; halve <= opt.solver.max_halvings; ++halve) {
      const GasState trial{u.rho + lambda * delta[0], u.q + lambda * delta[1],
                           u.E + lambda * delta[2]};
      try {
        if (!is_subsonic(trial, law))
          throw NonSubsonicResult("trial left the subsonic region");
        const Vec3 rtraw = psi_residual(kind, aM, uM, aP, trial, law, opt);
        const Vec3 rt{rtraw[0] / scale[0], rtraw[1] / scale[1],
                      rtraw[2] / scale[2]};
        if (norm(rt) < rn || norm(rt) <= opt.solver.tolerance) {
          u = trial;
          accepted = true;
          break;
        }
      } catch (const std::runtime_error&) {
      }
      lambda *= 0.5;
    }
    if (!accepted) throw NoConvergence("t_map", rn, it);
  }
  throw NoConvergence("t_map", rn, opt.solver.max_iterations);
}

}  // namespace detail

/// Transmission map: the right trace u+ with Psi(kind; aM, uM; aP, u+) = 0.
inline GasState t_map(CouplingKind kind, double aM, double aP,
                      const GasState& uM, const GasLaw& law,
                      const CouplingOptions& opt = {}) {
  if (!(aM > 0.0)) throw DomainError("a-", aM);
  if (!(aP > 0.0)) throw DomainError("a+", aP);
  if (std::abs(aP - aM) / std::min(aM, aP) > kSectionRatioGuard &&
      !opt.allow_large_ratio)
    throw DomainError("|da|/a beyond perturbative guard",
                      std::abs(aP - aM) / std::min(aM, aP));
  if (!is_subsonic(uM, law))
    throw DomainError("uM not subsonic, v/c",
                      primitives(uM, law).v / primitives(uM, law).c);
  if (aM == aP) return uM;

  if (kind == CouplingKind::S) {
    SmoothSection prof{aM, aP};
    const StationaryPath path = integrate_stationary(uM, prof, law, opt);
    if (!is_subsonic(path.endpoint, law))
      throw NonSubsonicResult("stationary endpoint left the subsonic region");
    return path.endpoint;
  }

  // Newton from uM; near the sonic boundary the full step can stall, in
  // which case the section change is split at the geometric mean and the
  // two halves are composed (exact by the consistency of Psi).
  for (int splits = 0; splits <= 4; ++splits) {
    try {
      GasState u = uM;
      const int pieces = 1 << splits;
      for (int k = 0; k < pieces; ++k) {
        const double a0 = aM * std::pow(aP / aM, double(k) / pieces);
        const double a1 = aM * std::pow(aP / aM, double(k + 1) / pieces);
        u = detail::t_map_newton(kind, a0, a1, u, law, opt);
      }
      return u;
    } catch (const NoConvergence&) {
      if (splits == 4) throw;
    }
  }
  throw NoConvergence("t_map", 0.0, 0);  // unreachable
}

/// Determinant non-degeneracy criterion at (a, u; a, u).
struct DetCriterion {
  double numeric;      // finite-difference determinant of the 3x3 matrix
  double analytic;     // closed-form det D_{u+} Psi
  double cross_check;  // -analytic * det[r1 r2 r3]
};

inline DetCriterion det_criterion(CouplingKind kind, double a,
                                  const GasState& u, const GasLaw& law,
                                  const CouplingOptions& opt = {}) {
  if (!(a > 0.0)) throw DomainError("a", a);
  if (!is_subsonic(u, law))
    throw DomainError("u not subsonic, v/c",
                      primitives(u, law).v / primitives(u, law).c);
  const Eigensystem es = eigensystem(u, law);

  // Finite-difference directional derivatives of Psi at coincident data.
  const double h = 1e-6;
  auto dpsi = [&](bool minus_side, const Vec3& dir) -> Vec3 {
    const double step = h / std::max(1.0, norm(dir));
    const GasState up{u.rho + step * dir[0], u.q + step * dir[1],
                      u.E + step * dir[2]};
    const GasState um{u.rho - step * dir[0], u.q - step * dir[1],
                      u.E - step * dir[2]};
    Vec3 rp, rm;
    if (minus_side) {
      rp = psi_residual(kind, a, up, a, u, law, opt);
      rm = psi_residual(kind, a, um, a, u, law, opt);
    } else {
      rp = psi_residual(kind, a, u, a, up, law, opt);
      rm = psi_residual(kind, a, u, a, um, law, opt);
    }
    return (1.0 / (2.0 * step)) * (rp - rm);
  };

  DetCriterion out;
  out.numeric =
      det3(dpsi(true, es.r[0]), dpsi(false, es.r[1]), dpsi(false, es.r[2]));

  const double l1 = es.lambda[0], l2 = es.lambda[1], l3 = es.lambda[2];
  const Primitives pr = primitives(u, law);
  switch (kind) {
    case CouplingKind::S: out.analytic = a * a * a * l1 * l2 * l3; break;
    case CouplingKind::P: out.analytic = a * a * l1 * l2 * l3; break;
    case CouplingKind::L: out.analytic = a * a * a * l1 * l2 * l3; break;
    case CouplingKind::p: {
      const double dpde_over_rho = law.gamma - 1.0;  // partial_e p / rho
      out.analytic =
          -a * a * l2 * (pr.c * pr.c + l2 * l2 * dpde_over_rho);
      break;
    }
  }
  out.cross_check = -out.analytic * det3(es.r[0], es.r[1], es.r[2]);
  return out;
}

}  // namespace ductflow

#endif
