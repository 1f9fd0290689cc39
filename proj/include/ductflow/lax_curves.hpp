#ifndef DUCTFLOW_LAX_CURVES_HPP
#define DUCTFLOW_LAX_CURVES_HPP

#include <array>
#include <cmath>

#include "ductflow/gas.hpp"

namespace ductflow {

enum class WaveFamily { one = 1, two = 2, three = 3 };
enum class CurveDirection { forward, reversed };

constexpr double kDensityFloor = 1e-12;
constexpr double kEnergyFloor = 1e-12;

namespace detail {

// Internal energy on the Hugoniot through (rho_o, e_o) at density rho.
// The jump relation e - e_o = -(p + p_o)(1/rho - 1/rho_o)/2 is linear in e
// for the ideal gas and is solved directly.
inline double hugoniot_energy(double rho, double rho_o, double e_o,
                              double p_o, const GasLaw& law) {
  const double d = 1.0 / rho - 1.0 / rho_o;
  const double denom = 1.0 + 0.5 * (law.gamma - 1.0) * rho * d;
  if (!(denom > 0.0)) throw DomainError("hugoniot denominator", denom);
  return (e_o - 0.5 * p_o * d) / denom;
}

// Velocity jump magnitude across a shock between (rho_o, p_o) and (rho, p).
inline double shock_speed_jump(double rho, double p, double rho_o,
                               double p_o) {
  const double arg = -(p - p_o) * (1.0 / rho - 1.0 / rho_o);
  return std::sqrt(arg > 0.0 ? arg : 0.0);
}

}  // namespace detail

/// State on the Lax curve of the given family through u0 at parameter sigma.
///
/// Parametrization follows the density offset convention: 1-curves move
/// along rho = rho0 - sigma (forward) and the 2-, 3-curves along
/// rho = rho0 + sigma; reversed curves flip the offset. Families 1 and 3
/// take the shock branch for sigma < 0 and the rarefaction branch for
/// sigma >= 0.
inline GasState lax_curve(WaveFamily family, CurveDirection dir,
                          const GasState& u0, double sigma,
                          const GasLaw& law) {
  const Primitives p0 = primitives(u0, law);
  const bool fwd = dir == CurveDirection::forward;

  double rho;
  switch (family) {
    case WaveFamily::one:
      rho = fwd ? u0.rho - sigma : u0.rho + sigma;
      break;
    case WaveFamily::two:
      rho = fwd ? u0.rho + sigma : u0.rho - sigma;
      break;
    case WaveFamily::three:
      rho = fwd ? u0.rho + sigma : u0.rho - sigma;
      break;
    default:
      throw NotApplicable("unknown wave family");
  }
  if (!(rho > kDensityFloor)) throw VacuumError("density floor reached on Lax curve");

  double v, e;
  if (family == WaveFamily::two) {
    // Contact: v and p unchanged.
    v = p0.v;
    e = p0.p / ((law.gamma - 1.0) * rho);
  } else if (sigma >= 0.0) {
    // Rarefaction along the isentrope S = S0. The ideal gas gives the
    // closed form v jump +-2 (c - c0) / (gamma - 1).
    e = p0.e * std::pow(rho / u0.rho, law.gamma - 1.0);
    const double c = std::sqrt(law.gamma * (law.gamma - 1.0) * e);
    const double dv = 2.0 / (law.gamma - 1.0) * (c - p0.c);
    // The rarefaction v jump does not depend on the direction; only the
    // density map flips.
    v = family == WaveFamily::one ? p0.v - dv : p0.v + dv;
  } else {
    // Shock branch: Rankine-Hugoniot e-jump plus the square-root v jump.
    e = detail::hugoniot_energy(rho, u0.rho, p0.e, p0.p, law);
    if (!(e > kEnergyFloor)) throw VacuumError("energy floor reached on Lax curve");
    const double p = (law.gamma - 1.0) * rho * e;
    const double dv = detail::shock_speed_jump(rho, p, u0.rho, p0.p);
    v = fwd ? p0.v - dv : p0.v + dv;
  }
  if (!(e > kEnergyFloor)) throw VacuumError("energy floor reached on Lax curve");
  return conserved_from_primitive(rho, v, e, law);
}

/// d L_i / d sigma at sigma = 0 in conserved variables.
///
/// Families 2 and 3 give the columns (1, lambda_i, .) of the closed forms;
/// family 1 carries the opposite sign since its forward parametrization is
/// rho = rho0 - sigma. Reversed curves negate the forward tangent.
inline Vec3 lax_tangent_at_zero(WaveFamily family, CurveDirection dir,
                                const GasState& u0, const GasLaw& law) {
  const Primitives pr = primitives(u0, law);
  const double h = (u0.E + pr.p) / u0.rho;
  Vec3 t;
  switch (family) {
    case WaveFamily::one:
      t = {-1.0, -(pr.v - pr.c), -(h - pr.v * pr.c)};
      break;
    case WaveFamily::two: {
      const double dpde = (law.gamma - 1.0) * u0.rho;
      t = {1.0, pr.v, h - u0.rho * pr.c * pr.c / dpde};
      break;
    }
    case WaveFamily::three:
      t = {1.0, pr.v + pr.c, h + pr.v * pr.c};
      break;
    default:
      throw NotApplicable("unknown wave family");
  }
  if (dir == CurveDirection::reversed) t = -1.0 * t;
  return t;
}

/// Strengths and intermediate states of a classical Riemann solution.
struct WaveFan {
  double sigma1, sigma2, sigma3;
  GasState uL, uStarL, uStarR, uR;
};

struct SolverOptions {
  double tolerance = 1e-11;  // scaled residual
  int max_iterations = 60;
  int max_halvings = 30;
  double fd_step = 1e-7;
};

namespace detail {

inline Vec3 to_vec(const GasState& u) { return {u.rho, u.q, u.E}; }

inline Vec3 scale_of(const GasState& a, const GasState& b) {
  return {std::max(std::abs(a.rho), std::abs(b.rho)),
          std::max({std::abs(a.q), std::abs(b.q), 1e-12}),
          std::max(std::abs(a.E), std::abs(b.E))};
}

inline double scaled_norm(const Vec3& r, const Vec3& s) {
  const Vec3 t{r[0] / s[0], r[1] / s[1], r[2] / s[2]};
  return norm(t);
}

// Solve A x = b for a 3x3 system by Gaussian elimination with pivoting.
inline Vec3 solve3(std::array<Vec3, 3> cols, Vec3 b) {
  double m[3][4];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = cols[j][i];
    m[i][3] = b[i];
  }
  for (int k = 0; k < 3; ++k) {
    int piv = k;
    for (int i = k + 1; i < 3; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    if (std::abs(m[piv][k]) < 1e-300)
      throw NoConvergence("singular Jacobian", 0.0, 0);
    if (piv != k)
      for (int j = 0; j < 4; ++j) std::swap(m[k][j], m[piv][j]);
    for (int i = 0; i < 3; ++i) {
      if (i == k) continue;
      const double f = m[i][k] / m[k][k];
      for (int j = k; j < 4; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

// Damped Newton iteration on a 3-vector of strengths. The residual
// callable maps strengths to a scaled residual vector.
template <typename Residual>
std::array<double, 3> newton3(Residual&& residual,
                              std::array<double, 3> sigma,
                              const SolverOptions& opt,
                              const char* label) {
  auto eval = [&](const std::array<double, 3>& s) { return residual(s); };
  Vec3 r = eval(sigma);
  double rn = norm(r);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (rn <= opt.tolerance) return sigma;
    std::array<Vec3, 3> jac;
    for (int j = 0; j < 3; ++j) {
      auto sp = sigma;
      const double step = opt.fd_step * (1.0 + std::abs(sigma[j]));
      double used = step;
      Vec3 rp;
      try {
        sp[j] = sigma[j] + step;
        rp = eval(sp);
      } catch (const std::runtime_error&) {
        sp[j] = sigma[j] - step;
        rp = eval(sp);
        used = -step;
      }
      jac[j] = (1.0 / used) * (rp - r);
    }
    const Vec3 delta = solve3(jac, (-1.0) * r);
    double lambda = 1.0;
    bool accepted = false;
    for (int halve = 0; halve <= opt.max_halvings; ++halve) {
      std::array<double, 3> trial{sigma[0] + lambda * delta[0],
                                  sigma[1] + lambda * delta[1],
                                  sigma[2] + lambda * delta[2]};
      try {
        const Vec3 rt = eval(trial);
        const double rtn = norm(rt);
        if (rtn < rn || rtn <= opt.tolerance) {
          sigma = trial;
          r = rt;
          rn = rtn;
          accepted = true;
          break;
        }
      } catch (const std::runtime_error&) {
        // Trial left the curve domain; halve the step.
      }
      lambda *= 0.5;
    }
    if (!accepted) throw NoConvergence(label, rn, it);
  }
  if (rn <= opt.tolerance) return sigma;
  throw NoConvergence(label, rn, opt.max_iterations);
}

}  // namespace detail

/// Exact Riemann solver: find (sigma1, sigma2, sigma3) with
/// L3(L2(L1(uL; s1); s2); s3) = uR.
inline WaveFan solve_riemann(const GasState& uL, const GasState& uR,
                             const GasLaw& law,
                             const SolverOptions& opt = {}) {
  const Vec3 scale = detail::scale_of(uL, uR);
  auto residual = [&](const std::array<double, 3>& s) -> Vec3 {
    const GasState a = lax_curve(WaveFamily::one, CurveDirection::forward, uL,
                                 s[0], law);
    const GasState b = lax_curve(WaveFamily::two, CurveDirection::forward, a,
                                 s[1], law);
    const GasState c = lax_curve(WaveFamily::three, CurveDirection::forward, b,
                                 s[2], law);
    const Vec3 d = detail::to_vec(c) - detail::to_vec(uR);
    return {d[0] / scale[0], d[1] / scale[1], d[2] / scale[2]};
  };
  const auto s =
      detail::newton3(residual, {0.0, 0.0, 0.0}, opt, "riemann solver");
  WaveFan fan;
  fan.sigma1 = s[0];
  fan.sigma2 = s[1];
  fan.sigma3 = s[2];
  fan.uL = uL;
  fan.uStarL =
      lax_curve(WaveFamily::one, CurveDirection::forward, uL, s[0], law);
  fan.uStarR = lax_curve(WaveFamily::two, CurveDirection::forward, fan.uStarL,
                         s[1], law);
  fan.uR = lax_curve(WaveFamily::three, CurveDirection::forward, fan.uStarR,
                     s[2], law);
  return fan;
}

}  // namespace ductflow

#endif
