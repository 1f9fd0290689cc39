#ifndef DUCTFLOW_GAS_HPP
#define DUCTFLOW_GAS_HPP

#include <array>
#include <cmath>

#include "ductflow/errors.hpp"

namespace ductflow {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double det3(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  return c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
         c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
         c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
}

/// Ideal-gas law p = (gamma - 1) rho e.
struct GasLaw {
  double gamma = 5.0 / 3.0;

  GasLaw() = default;
  explicit GasLaw(double g) : gamma(g) {
    if (!(gamma > 1.0)) throw DomainError("gamma", gamma);
  }
};

/// One fluid state in conserved variables (density, momentum, total energy).
struct GasState {
  double rho;
  double q;
  double E;
};

struct Primitives {
  double v;      // fluid speed q / rho
  double e;      // internal energy density
  double p;      // pressure
  double S;      // entropy  ln e - (gamma - 1) ln rho
  double c;      // sound speed
  double theta;  // (v / c)^2
};

inline Primitives primitives(const GasState& u, const GasLaw& law) {
  if (!(u.rho > 0.0)) throw DomainError("rho", u.rho);
  if (!(u.E > 0.0)) throw DomainError("E", u.E);
  Primitives pr;
  pr.v = u.q / u.rho;
  pr.e = u.E / u.rho - 0.5 * pr.v * pr.v;
  if (!(pr.e > 0.0)) throw DomainError("e", pr.e);
  pr.p = (law.gamma - 1.0) * u.rho * pr.e;
  pr.S = std::log(pr.e) - (law.gamma - 1.0) * std::log(u.rho);
  pr.c = std::sqrt(law.gamma * (law.gamma - 1.0) * pr.e);
  pr.theta = (pr.v * pr.v) / (pr.c * pr.c);
  return pr;
}

inline GasState conserved_from_primitive(double rho, double v, double e,
                                         const GasLaw& /*law*/) {
  if (!(rho > 0.0)) throw DomainError("rho", rho);
  if (!(e > 0.0)) throw DomainError("e", e);
  return {rho, rho * v, 0.5 * rho * v * v + rho * e};
}

/// Momentum flux  P = q^2 / rho + p.
inline double momentum_flux(const GasState& u, const GasLaw& law) {
  const Primitives pr = primitives(u, law);
  return u.q * pr.v + pr.p;
}

/// Energy flux  F = (q / rho) (E + p).
inline double energy_flux(const GasState& u, const GasLaw& law) {
  const Primitives pr = primitives(u, law);
  return pr.v * (u.E + pr.p);
}

/// Characteristic speeds, right eigenvectors in conserved variables and
/// tangent vectors to the Lax curves in (rho, q, e) variables.
struct Eigensystem {
  std::array<double, 3> lambda;
  std::array<Vec3, 3> r;        // columns in (rho, q, E)
  std::array<Vec3, 3> r_tilde;  // columns in (rho, q, e)
};

inline Eigensystem eigensystem(const GasState& u, const GasLaw& law) {
  const Primitives pr = primitives(u, law);
  const double v = pr.v, c = pr.c, e = pr.e, p = pr.p;
  const double dpde = (law.gamma - 1.0) * u.rho;  // partial_e p

  Eigensystem es;
  es.lambda = {v - c, v, v + c};
  es.r[0] = {-u.rho, u.rho * c - u.q, u.q * c - u.E - p};
  es.r[1] = {u.rho, u.q, u.E + p - u.rho * u.rho * c * c / dpde};
  es.r[2] = {u.rho, u.q + u.rho * c, u.E + p + u.q * c};
  // Signs follow the curve parametrizations (1-curves have
  // d rho / d sigma = -1), so r_tilde_1 is the sigma-derivative of the
  // 1-curve: dq = v*drho + rho*dv = c - v along it.
  es.r_tilde[0] = {-1.0, -v + c, -(law.gamma - 1.0) * e / u.rho};
  es.r_tilde[1] = {1.0, v, -e / u.rho};
  es.r_tilde[2] = {1.0, v + c, (law.gamma - 1.0) * e / u.rho};
  return es;
}

/// Subsonic region A0: lambda_1 < 0 < lambda_2, i.e. 0 < v < c.
inline bool is_subsonic(const GasState& u, const GasLaw& law) {
  const Primitives pr = primitives(u, law);
  return pr.v > 0.0 && pr.v < pr.c;
}

}  // namespace ductflow

#endif
