#ifndef DUCTFLOW_CLOSED_FORMS_HPP
#define DUCTFLOW_CLOSED_FORMS_HPP

#include <cmath>

#include "ductflow/coupling.hpp"
#include "ductflow/gas.hpp"

namespace ductflow {

/// First and second order coefficients of the transmission map expansion
/// T(a, a + da; u) = u + H(u) h + G(u) h^2 + o(h^2), h = da/a, in the
/// (rho, q, e) variables. Valid for gamma = 5/3 only.
struct ExpansionHG {
  Vec3 H;
  Vec3 G;
};

namespace closed_detail {

inline void require_gamma_53(const GasLaw& law) {
  if (std::abs(law.gamma - 5.0 / 3.0) > 1e-12) throw UnsupportedGamma(law.gamma);
}

inline void require_theta_open(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta", theta);
}

// (theta - 1)^3, the stable factored form of theta^3 - 3 theta^2 + 3 theta - 1.
inline double cube_theta_m1(double theta) {
  const double t = theta - 1.0;
  return t * t * t;
}

}  // namespace closed_detail

inline ExpansionHG expansion_hg(CouplingKind kind, const GasState& u,
                                const GasLaw& law) {
  closed_detail::require_gamma_53(law);
  if (!is_subsonic(u, law))
    throw DomainError("u not subsonic, v/c",
                      primitives(u, law).v / primitives(u, law).c);
  const Primitives pr = primitives(u, law);
  const double t = pr.theta;
  closed_detail::require_theta_open(t);
  const double D = closed_detail::cube_theta_m1(t);
  const double rho = u.rho, q = u.q, e = pr.e;

  ExpansionHG out;
  switch (kind) {
    case CouplingKind::S:
      out.H = {-(t * t * t - 4.0 * t * t + 5.0 * t - 2.0) / D * rho,
               -q,
               -2.0 * (-t * t * t + 2.0 * t * t - t) / (3.0 * D) * e};
      out.G = {-4.0 * (t * t * t - 2.0 * t * t) / (3.0 * D) * rho,
               q,
               -(70.0 * t * t * t * t - 257.0 * t * t * t + 342.0 * t * t -
                 207.0 * t + 36.0) /
                   (18.0 * D) * e};
      break;
    case CouplingKind::P:
      out.H = {8.0 * (-t * t * t + 2.0 * t * t - t) / (3.0 * D) * rho,
               -q,
               -2.0 * (5.0 * t * t * t * t - 7.0 * t * t * t - t * t +
                       3.0 * t) /
                   (9.0 * D) * e};
      out.G = {64.0 * (t * t * t + 3.0 * t * t) / (27.0 * D) * rho,
               q,
               -(565.0 * t * t * t * t - 1599.0 * t * t * t + 927.0 * t * t -
                 405.0 * t) /
                   (81.0 * D) * e};
      break;
    case CouplingKind::L: {
      const double d1 = t - 1.0;
      out.H = {-rho, -q, 0.0};
      out.G = {-4.0 * t / (3.0 * d1) * rho,
               q,
               -(35.0 * t * t - 9.0 * (4.0 * t - 1.0)) / (9.0 * d1) * e};
      break;
    }
    case CouplingKind::p: {
      const double tp = 2.0 * t + 3.0;
      const double Dp = tp * tp * tp;  // 4(2t^3 + 9t^2) + 27(2t + 1)
      const double n = 2.0 * (4.0 * t * t * t + 12.0 * t * t + 9.0 * t) / Dp;
      out.H = {-n * rho, -q, n * e};
      out.G = {-4.0 * (t * t * t + 3.0 * t * t) / Dp * rho,
               q,
               12.0 * (t * t * t + 2.0 * t * t) / Dp * e};
      break;
    }
  }
  return out;
}

/// Interaction coefficients f1, f2 of the transmitted 3-wave strength,
/// sigma3+ = (1 + f1 h + f2 h^2) sigma3-, gamma = 5/3.
struct FCoeffs {
  double f1;
  double f2;
};

inline FCoeffs f_coeffs(CouplingKind kind, double theta) {
  closed_detail::require_theta_open(theta);
  const double t = theta;
  const double s = std::sqrt(t);
  const double D = closed_detail::cube_theta_m1(t);  // (t-1)^3 < 0 on (0,1)
  FCoeffs out{};
  switch (kind) {
    case CouplingKind::S: {
      const double den1 = 6.0 * s * (t - 1.0) - 6.0 * (t - 1.0);
      if (den1 == 0.0) throw DomainError("f1 denominator", den1);
      out.f1 = -(-3.0 * t + (t - 3.0) * s - 3.0) / den1;
      const double den2 = 72.0 * D * (s - 1.0);
      out.f2 = (s * (126.0 * t * t * t * t - 505.0 * t * t * t +
                     758.0 * t * t - 489.0 * t + 270.0) +
                42.0 * t * t * t * t - 183.0 * t * t * t + 278.0 * t * t +
                33.0 * t + 54.0) /
               den2;
      break;
    }
    case CouplingKind::P: {
      const double den1 = 18.0 * (t - 1.0) * (s - 1.0);
      out.f1 = (s * (9.0 * t * t + 2.0 * t - 27.0) + 3.0 * t * t -
                42.0 * t - 9.0) /
               den1;
      const double den2 = 324.0 * D * (s - 1.0);
      out.f2 =
          (s * (154.0 * std::pow(t, 5) + 931.0 * t * t * t * t -
                4416.0 * t * t * t + 6570.0 * t * t + 990.0 * t + 891.0) +
           86.0 * std::pow(t, 5) - 311.0 * t * t * t * t -
           752.0 * t * t * t + 7038.0 * t * t + 1026.0 * t + 81.0) /
          den2;
      break;
    }
    case CouplingKind::L: {
      out.f1 = 0.0;
      const double sm1 = s - 1.0;
      const double den = 36.0 * sm1 * sm1 * (s + 1.0);
      out.f2 = (s * (63.0 * t * t - 106.0 * t + 27.0) + 21.0 * t * t -
                78.0 * t + 9.0) /
               den;
      break;
    }
    case CouplingKind::p: {
      const double tp = 2.0 * t + 3.0;
      out.f1 = (-2.0 * t * t + 4.0 * t * s + 3.0 * t - 9.0) /
               (2.0 * tp * tp);
      out.f2 = (32.0 * t * t * t * t +
                8.0 * s * (4.0 * t * t * t + 9.0 * t * t - 9.0 * t) +
                316.0 * t * t * t + 558.0 * t * t + 216.0 * t + 81.0) /
               (6.0 * tp * tp * tp * tp);
      break;
    }
  }
  return out;
}

/// Amplification coefficient across a +da/-da junction pair:
/// sigma3++ = (1 + chi(theta) h^2) sigma3-.
inline double chi_closed(CouplingKind kind, double theta) {
  closed_detail::require_theta_open(theta);
  const double t = theta;
  const double s = std::sqrt(t);
  const double D = closed_detail::cube_theta_m1(t);
  switch (kind) {
    case CouplingKind::S:
      return (s * (126.0 * t * t * t * t - 506.0 * t * t * t +
                   773.0 * t * t - 480.0 * t + 279.0) +
              42.0 * t * t * t * t - 174.0 * t * t * t + 311.0 * t * t +
              96.0 * t + 45.0) /
             (36.0 * D * (s - 1.0));
    case CouplingKind::P:
      return (s * (407.0 * std::pow(t, 5) + 1931.0 * t * t * t * t -
                   7858.0 * t * t * t + 14766.0 * t * t + 1179.0 * t +
                   1863.0) +
              (-23.0 * std::pow(t, 5) + 141.0 * t * t * t * t +
               2002.0 * t * t * t + 15714.0 * t * t + 2565.0 * t + 81.0)) /
             (324.0 * D * (s - 1.0));
    case CouplingKind::L: {
      const double sm1 = s - 1.0;
      return (s * (63.0 * t * t - 106.0 * t + 27.0) + 21.0 * t * t -
              78.0 * t + 9.0) /
             (18.0 * sm1 * sm1 * (s + 1.0));
    }
    case CouplingKind::p: {
      const double tp = 2.0 * t + 3.0;
      return (60.0 * t * t * t * t +
              96.0 * s * (t * t * t + t * t - 3.0 * t) +
              700.0 * t * t * t + 1107.0 * t * t - 54.0 * t + 81.0) /
             (6.0 * tp * tp * tp * tp);
    }
  }
  throw NotApplicable("unknown coupling kind");
}

/// Post-interaction Mach-like parameter theta+ as printed: second order in
/// h = da/a, first order in sigma3-. The kind L line reproduces the printed
/// text verbatim, including its defects; the numeric extraction is the
/// authority there (see the series-fit oracle).
inline double theta_plus_closed(CouplingKind kind, double theta,
                                double sigma3m, double h) {
  closed_detail::require_theta_open(theta);
  const double t = theta;
  const double s = std::sqrt(t);
  const double m = sigma3m;
  const double D = closed_detail::cube_theta_m1(t);
  switch (kind) {
    case CouplingKind::S: {
      const double c1 =
          (s * ((m + 6.0) * t * t + 18.0 * t - 9.0 * m) +
           2.0 * (3.0 - 2.0 * m) * t * t + 6.0 * (2.0 * m + 3.0) * t) /
          (9.0 * s * (t - 1.0) + 9.0 * (t - 1.0));
      const double den2 = 108.0 * (s * D + D);
      const double c2a =
          s * (14.0 * (11.0 * m - 30.0) * std::pow(t, 5) +
               (990.0 - 301.0 * m) * std::pow(t, 4) +
               3.0 * (25.0 * m - 236.0) * t * t * t +
               (111.0 * m - 18.0) * t * t + 45.0 * (12.0 - m) * t -
               378.0 * m) /
          den2;
      const double c2b =
          (4.0 * (217.0 * m - 105.0) * std::pow(t, 5) +
           2.0 * (495.0 - 1489.0 * m) * std::pow(t, 4) +
           4.0 * (928.0 * m - 177.0) * t * t * t -
           2.0 * (1077.0 * m - 9.0) * t * t +
           24.0 * (26.0 * m + 15.0) * t) /
          den2;
      return t - c1 * h - (c2a + c2b) * h * h;
    }
    case CouplingKind::P: {
      const double c1 =
          (s * ((11.0 * m - 30.0) * t * t * t +
                (-19.0 * m - 108.0) * t * t + 9.0 * (5.0 * m - 6.0) * t +
                27.0 * m) +
           2.0 * (31.0 * m - 15.0) * t * t * t -
           36.0 * (m + 3.0) * t * t - 18.0 * (5.0 * m + 3.0) * t) /
          (27.0 * s * (t - 1.0) + 27.0 * (t - 1.0));
      const double den2 = 486.0 * (s * D + D);
      const double c2a =
          s * (2.0 * (233.0 * m - 300.0) * std::pow(t, 6) +
               (1279.0 * m - 5310.0) * std::pow(t, 5) +
               (5400.0 - 2543.0 * m) * std::pow(t, 4) +
               6.0 * (677.0 * m + 1242.0) * t * t * t +
               36.0 * (109.0 - 297.0 * m) * t * t +
               729.0 * (2.0 - 5.0 * m) * t - 1215.0 * m) /
          den2;
      const double c2b =
          (4.0 * (601.0 * m - 150.0) * std::pow(t, 6) +
           2.0 * (3521.0 * m - 2655.0) * std::pow(t, 5) +
           8.0 * (225.0 - 3814.0 * m) * std::pow(t, 4) +
           36.0 * (655.0 * m + 207.0) * t * t * t +
           108.0 * (53.0 * m + 36.0) * t * t +
           162.0 * (9.0 * m + 25.0) * t) /
          den2;
      return t - c1 * h - (c2a + c2b) * h * h;
    }
    case CouplingKind::L: {
      // Verbatim transcription of the printed line (known to be defective:
      // a stray "2+" and an (da/a)^2 power on what should be the first
      // order term).
      const double c =
          (s * ((77.0 * m - 210.0) * t * t * t +
                (-13.0 * m - 36.0) * t * t + 27.0 * (m + 2.0) * t -
                27.0 * m) *
               2.0 +
           (217.0 * m - 105.0) * t * t * t -
           4.0 * (147.0 * m + 9.0) * t * t + 18.0 * (5.0 * m + 3.0) * t) /
          (54.0 * s * (t - 1.0) + 54.0 * (t - 1.0));
      return t - c * h * h;
    }
    case CouplingKind::p: {
      const double tp = 2.0 * t + 3.0;
      const double c1 =
          (-2.0 * (m + 6.0) * t * t * t +
           s * (10.0 * m * t * t + 27.0 * m * t + 27.0 * m) +
           3.0 * (m - 18.0) * t * t - 9.0 * (m + 6.0) * t) /
          (3.0 * tp * tp);
      const double den2 =
          48.0 * (2.0 * std::pow(t, 4) + 12.0 * t * t * t + 27.0 * t * t +
                  27.0 * t + 12.0);
      const double c2a =
          (-48.0 * (m + 5.0) * std::pow(t, 5) +
           s * (144.0 * m * std::pow(t, 4) + 780.0 * m * t * t * t +
                2214.0 * m * t * t + 1944.0 * m * t + 1215.0 * m)) /
          den2;
      const double c2b =
          (-4.0 * (91.0 * m + 342.0) * std::pow(t, 4) -
           54.0 * (11.0 * m + 56.0) * t * t * t -
           216.0 * (2.0 * m + 15.0) * t * t -
           81.0 * (5.0 * m + 18.0) * t) /
          den2;
      return t + c1 * h - (c2a + c2b) * h * h;
    }
  }
  throw NotApplicable("unknown coupling kind");
}

}  // namespace ductflow

#endif
