#ifndef DUCTFLOW_JUNCTION_HPP
#define DUCTFLOW_JUNCTION_HPP

#include <cmath>
#include <vector>

#include "ductflow/closed_forms.hpp"
#include "ductflow/coupling.hpp"
#include "ductflow/gas.hpp"
#include "ductflow/lax_curves.hpp"

namespace ductflow {

/// Solution of the Riemann problem at a junction: a 1-wave on the left,
/// the stationary jump satisfying Psi, then 2- and 3-waves on the right.
struct JunctionFan {
  double sigma1, sigma2, sigma3;
  GasState traceL, traceR;  // traces u(t, 0-) and u(t, 0+)
  GasState uFarL, uFarR;
  double residual;  // scaled residual of the defining system
};

namespace detail {

inline void check_wave_speeds(const JunctionFan& fan, const GasLaw& law) {
  // 1-wave must not cross the junction, 2- and 3-waves must move right.
  const double tol = 1e-9;
  const Primitives pL = primitives(fan.uFarL, law);
  const Primitives pT = primitives(fan.traceL, law);
  if (fan.sigma1 < 0.0) {
    // Shock speed from the mass jump.
    const double drho = fan.traceL.rho - fan.uFarL.rho;
    if (std::abs(drho) > 1e-14) {
      const double s = (fan.traceL.q - fan.uFarL.q) / drho;
      if (s > tol) throw SpeedSignError("1-shock has positive speed");
    }
  } else {
    if (pL.v - pL.c > tol || pT.v - pT.c > tol)
      throw SpeedSignError("1-rarefaction reaches positive speeds");
  }
  const Primitives pR = primitives(fan.traceR, law);
  if (pR.v < -tol) throw SpeedSignError("2-wave has non-positive speed");
  const Primitives p3 = primitives(fan.uFarR, law);
  if (p3.v + p3.c < tol) throw SpeedSignError("3-wave has non-positive speed");
}

}  // namespace detail

/// Solve L3(L2(T(aM, aP; L1(uL; s1)); s2); s3) = uR for the strengths.
inline JunctionFan solve_junction_riemann(CouplingKind kind, double aM,
                                          double aP, const GasState& uL,
                                          const GasState& uR,
                                          const GasLaw& law,
                                          const CouplingOptions& opt = {}) {
  if (!is_subsonic(uL, law) || !is_subsonic(uR, law))
    throw DomainError("junction data not subsonic", 0.0);

  SolverOptions sopt = opt.solver;
  if (sopt.tolerance > 1e-10) sopt.tolerance = 1e-10;
  const Vec3 scale = detail::scale_of(uL, uR);
  auto states = [&](const std::array<double, 3>& s) {
    struct {
      GasState traceL, traceR, mid, far;
    } st{};
    st.traceL =
        lax_curve(WaveFamily::one, CurveDirection::forward, uL, s[0], law);
    if (!is_subsonic(st.traceL, law))
      throw NonSubsonicTrace("left trace left the subsonic region");
    st.traceR = t_map(kind, aM, aP, st.traceL, law, opt);
    st.mid =
        lax_curve(WaveFamily::two, CurveDirection::forward, st.traceR, s[1], law);
    st.far =
        lax_curve(WaveFamily::three, CurveDirection::forward, st.mid, s[2], law);
    return st;
  };
  auto residual = [&](const std::array<double, 3>& s) -> Vec3 {
    const auto st = states(s);
    const Vec3 d = detail::to_vec(st.far) - detail::to_vec(uR);
    return {d[0] / scale[0], d[1] / scale[1], d[2] / scale[2]};
  };

  const auto s =
      detail::newton3(residual, {0.0, 0.0, 0.0}, sopt, "junction riemann");
  const auto st = states(s);
  JunctionFan fan;
  fan.sigma1 = s[0];
  fan.sigma2 = s[1];
  fan.sigma3 = s[2];
  fan.traceL = st.traceL;
  fan.traceR = st.traceR;
  fan.uFarL = uL;
  fan.uFarR = st.far;
  fan.residual = norm(residual(s));
  if (!is_subsonic(fan.traceR, law))
    throw NonSubsonicTrace("right trace left the subsonic region");
  detail::check_wave_speeds(fan, law);
  return fan;
}

/// Outcome of one incoming 3-wave hitting a junction.
struct InteractionResult {
  double sigma1p, sigma2p, sigma3p;
  GasState uPlus;    // left state of the outgoing 3-wave
  double thetaPlus;  // theta evaluated at uPlus
  JunctionFan fan;
};

/// Solve the first-interaction system: an incoming 3-wave of strength
/// sigma3m riding on u meets a junction where the section jumps a -> a+da.
inline InteractionResult interact_incoming(CouplingKind kind,
                                           const GasState& u, double sigma3m,
                                           double a, double da,
                                           const GasLaw& law,
                                           const CouplingOptions& opt = {}) {
  if (da == 0.0) {
    // No junction: the wave passes unchanged.
    InteractionResult out;
    out.sigma1p = 0.0;
    out.sigma2p = 0.0;
    out.sigma3p = sigma3m;
    out.uPlus = u;
    out.thetaPlus = primitives(u, law).theta;
    out.fan.sigma1 = 0.0;
    out.fan.sigma2 = 0.0;
    out.fan.sigma3 = sigma3m;
    out.fan.traceL = u;
    out.fan.traceR = u;
    out.fan.uFarL = u;
    out.fan.uFarR =
        lax_curve(WaveFamily::three, CurveDirection::forward, u, sigma3m, law);
    out.fan.residual = 0.0;
    return out;
  }
  const GasState behind =
      lax_curve(WaveFamily::three, CurveDirection::forward, u, sigma3m, law);
  if (!is_subsonic(behind, law))
    throw DomainError("state behind incoming wave not subsonic", 0.0);
  const GasState uR = t_map(kind, a, a + da, behind, law, opt);

  InteractionResult out;
  out.fan = solve_junction_riemann(kind, a, a + da, u, uR, law, opt);
  out.sigma1p = out.fan.sigma1;
  out.sigma2p = out.fan.sigma2;
  out.sigma3p = out.fan.sigma3;
  // The reversed 3-curve pullback of uR by sigma3+ is exactly the state
  // between the 2- and 3-waves of the fan.
  out.uPlus = lax_curve(WaveFamily::two, CurveDirection::forward, out.fan.traceR,
                        out.fan.sigma2, law);
  out.thetaPlus = primitives(out.uPlus, law).theta;
  return out;
}

/// One +da / -da junction pair: the outgoing 3-wave of the first junction
/// is the incoming wave of the second; slower waves are discarded.
struct PairResult {
  double sigma3p;          // after the first junction
  double sigma3pp;         // after the second junction
  double ratio;            // sigma3pp / sigma3m
  double predicted_ratio;  // 1 + chi(theta) (da/a)^2, NaN when gamma != 5/3
  GasState uAfter;         // left state of the sigma3pp wave
  double thetaPlus;        // theta of the state the second junction sees
};

inline PairResult amplify_pair(CouplingKind kind, const GasState& u,
                               double sigma3m, double a, double da,
                               const GasLaw& law,
                               const CouplingOptions& opt = {}) {
  const InteractionResult first =
      interact_incoming(kind, u, sigma3m, a, da, law, opt);
  const InteractionResult second = interact_incoming(
      kind, first.uPlus, first.sigma3p, a + da, -da, law, opt);
  PairResult out;
  out.sigma3p = first.sigma3p;
  out.sigma3pp = second.sigma3p;
  out.ratio = sigma3m != 0.0 ? out.sigma3pp / sigma3m : 1.0;
  out.uAfter = second.uPlus;
  out.thetaPlus = first.thetaPlus;
  if (std::abs(law.gamma - 5.0 / 3.0) < 1e-12) {
    const double theta = primitives(u, law).theta;
    const double h = da / a;
    out.predicted_ratio = 1.0 + chi_closed(kind, theta) * h * h;
  } else {
    out.predicted_ratio = std::nan("");
  }
  return out;
}

/// Strength trajectory across n consecutive junction pairs. Between pairs
/// the background state is re-anchored to the left state produced by the
/// previous pair.
struct ChainResult {
  std::vector<double> sigma3;  // n_pairs + 1 entries, starting at sigma3m
  std::vector<double> ratios;  // per-pair ratios sigma3[k+1] / sigma3[k]
  std::vector<double> predicted;  // per-pair 1 + chi h^2 at the pair's state
};

inline ChainResult chain_propagate(CouplingKind kind, const GasState& u,
                                   double sigma3m, double a, double da,
                                   int n_pairs, const GasLaw& law,
                                   const CouplingOptions& opt = {}) {
  ChainResult out;
  out.sigma3.push_back(sigma3m);
  GasState cur = u;
  double sigma = sigma3m;
  for (int k = 0; k < n_pairs; ++k) {
    if (std::abs(sigma) > 0.2 * cur.rho)
      throw AmplitudeOverflow("sigma3 exceeded the perturbative guard");
    const PairResult pair = amplify_pair(kind, cur, sigma, a, da, law, opt);
    sigma = pair.sigma3pp;
    cur = pair.uAfter;
    out.sigma3.push_back(sigma);
    out.ratios.push_back(pair.ratio);
    out.predicted.push_back(pair.predicted_ratio);
  }
  return out;
}

/// Piecewise-constant stationary profile: u_hat_0 = u0 and
/// u_hat_j = T(a_{j-1}, a_j; u_hat_{j-1}).
struct StationaryProfile {
  std::vector<GasState> states;  // one per pipe segment
  double tv_u;                   // total variation in scaled conserved variables
  double tv_a;
};

inline StationaryProfile stationary_profile(CouplingKind kind,
                                            const PiecewiseSection& profile,
                                            const GasState& u0,
                                            const GasLaw& law,
                                            const CouplingOptions& opt = {}) {
  if (profile.a.empty()) throw DomainError("profile pieces", 0.0);
  for (double a : profile.a)
    if (!(a > 0.0)) throw DomainError("section", a);
  for (size_t j = 1; j < profile.x.size(); ++j)
    if (!(profile.x[j] > profile.x[j - 1]))
      throw DomainError("junction positions not increasing", profile.x[j]);

  StationaryProfile out;
  out.states.push_back(u0);
  out.tv_a = 0.0;
  for (size_t j = 1; j < profile.a.size(); ++j) {
    out.tv_a += std::abs(profile.a[j] - profile.a[j - 1]);
    out.states.push_back(
        t_map(kind, profile.a[j - 1], profile.a[j], out.states.back(), law, opt));
  }
  const Vec3 s{u0.rho, std::max(std::abs(u0.q), 1e-12), u0.E};
  out.tv_u = 0.0;
  for (size_t j = 1; j < out.states.size(); ++j) {
    const Vec3 d = detail::to_vec(out.states[j]) - detail::to_vec(out.states[j - 1]);
    out.tv_u += norm(Vec3{d[0] / s[0], d[1] / s[1], d[2] / s[2]});
  }
  return out;
}

}  // namespace ductflow

#endif
