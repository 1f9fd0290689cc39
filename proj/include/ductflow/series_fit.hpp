#ifndef DUCTFLOW_SERIES_FIT_HPP
#define DUCTFLOW_SERIES_FIT_HPP

#include <array>
#include <cmath>
#include <vector>

#include "ductflow/coupling.hpp"
#include "ductflow/gas.hpp"
#include "ductflow/junction.hpp"

namespace ductflow {

/// Least-squares fit of samples y(h) against the model b1 h + b2 h^2.
struct QuadraticFit {
  double b1;
  double b2;
  double residual;  // root mean square misfit
};

namespace fit_detail {

inline QuadraticFit fit_h_h2(const std::vector<double>& h,
                             const std::vector<double>& y) {
  double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    const double x1 = h[i], x2 = h[i] * h[i];
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    r1 += x1 * y[i];
    r2 += x2 * y[i];
  }
  const double det = s11 * s22 - s12 * s12;
  QuadraticFit fit;
  fit.b1 = (s22 * r1 - s12 * r2) / det;
  fit.b2 = (s11 * r2 - s12 * r1) / det;
  double ss = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    const double m = fit.b1 * h[i] + fit.b2 * h[i] * h[i];
    ss += (y[i] - m) * (y[i] - m);
  }
  fit.residual = std::sqrt(ss / h.size());
  return fit;
}

/// Least-squares fit against b1 h + ... + b4 h^4. The cubic and quartic
/// terms are nuisance parameters that remove the leading bias on b1, b2.
inline QuadraticFit fit_h_poly4(const std::vector<double>& h,
                                const std::vector<double>& y) {
  double m[4][5] = {};
  for (size_t i = 0; i < h.size(); ++i) {
    double x[5];
    x[0] = 1.0;
    for (int k = 1; k < 5; ++k) x[k] = x[k - 1] * h[i];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) m[a][b] += x[a + 1] * x[b + 1];
      m[a][4] += x[a + 1] * y[i];
    }
  }
  for (int k = 0; k < 4; ++k) {
    int piv = k;
    for (int i = k + 1; i < 4; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    for (int j = 0; j < 5; ++j) std::swap(m[k][j], m[piv][j]);
    if (std::abs(m[k][k]) < 1e-300)
      throw NoConvergence("singular fit system", 0.0, 0);
    for (int i = 0; i < 4; ++i) {
      if (i == k) continue;
      const double f = m[i][k] / m[k][k];
      for (int j = k; j < 5; ++j) m[i][j] -= f * m[k][j];
    }
  }
  const double b[4] = {m[0][4] / m[0][0], m[1][4] / m[1][1],
                       m[2][4] / m[2][2], m[3][4] / m[3][3]};
  QuadraticFit fit;
  fit.b1 = b[0];
  fit.b2 = b[1];
  double ss = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    double x = h[i], mdl = 0;
    for (int k = 0; k < 4; ++k, x *= h[i]) mdl += b[k] * x;
    ss += (y[i] - mdl) * (y[i] - mdl);
  }
  fit.residual = std::sqrt(ss / h.size());
  return fit;
}

/// Least-squares fit against b1 h + b2 h^2 + b3 h^3. The cubic term is a
/// nuisance parameter that removes the leading bias on b1 and b2.
inline QuadraticFit fit_h_h2_h3(const std::vector<double>& h,
                                const std::vector<double>& y) {
  std::array<Vec3, 3> cols{};  // normal-equation matrix columns
  Vec3 rhs{0, 0, 0};
  for (size_t i = 0; i < h.size(); ++i) {
    const Vec3 x{h[i], h[i] * h[i], h[i] * h[i] * h[i]};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) cols[b][a] += x[a] * x[b];
      rhs[a] += x[a] * y[i];
    }
  }
  const Vec3 b = detail::solve3(cols, rhs);
  QuadraticFit fit;
  fit.b1 = b[0];
  fit.b2 = b[1];
  double ss = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    const double m = b[0] * h[i] + b[1] * h[i] * h[i] +
                     b[2] * h[i] * h[i] * h[i];
    ss += (y[i] - m) * (y[i] - m);
  }
  fit.residual = std::sqrt(ss / h.size());
  return fit;
}

}  // namespace fit_detail

inline std::vector<double> default_h_grid() {
  return {1e-2, -1e-2, 5e-3, -5e-3, 2.5e-3, -2.5e-3};
}

/// Section-jump grid for the transmission-map series fit, shrunk near the
/// sonic boundary where the expansion coefficients blow up like (1-theta)^-3.
inline std::vector<double> default_t_series_grid(double theta) {
  const double scale = std::min(1.0, 3.0 * (1.0 - theta) * (1.0 - theta));
  std::vector<double> grid;
  for (double h : {4e-3, -4e-3, 2e-3, -2e-3, 1e-3, -1e-3, 5e-4, -5e-4})
    grid.push_back(scale * h);
  return grid;
}

/// Numerically fitted expansion of the transmission map against h and h^2
/// per component in (rho, q, e); the independent oracle for the closed
/// forms H and G.
struct TSeriesFit {
  Vec3 H;
  Vec3 G;
  Vec3 residual;  // per-component RMS misfit
};

inline TSeriesFit extract_t_series(CouplingKind kind, const GasState& u,
                                   const GasLaw& law,
                                   const std::vector<double>& h_grid_in = {},
                                   const CouplingOptions& opt_in = {}) {
  CouplingOptions opt = opt_in;
  opt.solver.tolerance = std::min(opt.solver.tolerance, 1e-13);
  const Primitives pr = primitives(u, law);
  const std::vector<double> h_grid =
      h_grid_in.empty() ? default_t_series_grid(pr.theta) : h_grid_in;
  const double a = 1.0;
  std::array<std::vector<double>, 3> y;
  for (double h : h_grid) {
    const GasState up = t_map(kind, a, a * (1.0 + h), u, law, opt);
    const Primitives pp = primitives(up, law);
    y[0].push_back(up.rho - u.rho);
    y[1].push_back(up.q - u.q);
    y[2].push_back(pp.e - pr.e);
  }
  TSeriesFit out;
  for (int c = 0; c < 3; ++c) {
    const QuadraticFit f = fit_detail::fit_h_poly4(h_grid, y[c]);
    out.H[c] = f.b1;
    out.G[c] = f.b2;
    out.residual[c] = f.residual;
  }
  return out;
}

/// Reference subsonic state with the given theta at scales (rho_bar, e_bar):
/// v = sqrt(gamma (gamma-1) e_bar theta).
inline GasState state_from_theta(double theta, const GasLaw& law,
                                 double rho_bar = 1.0, double e_bar = 1.0) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta", theta);
  const double v = std::sqrt(law.gamma * (law.gamma - 1.0) * e_bar * theta);
  return conserved_from_primitive(rho_bar, v, e_bar, law);
}

/// Numerically fitted interaction coefficients; the independent oracle for
/// f1, f2 and chi. sigma3- is held at epsilon * rho_bar while h varies,
/// and the fit is repeated at epsilon / 2 to report the drift of the
/// coefficients in the joint limit.
struct InteractionSeriesFit {
  double f1, f2, chi;
  double ratio_fit_residual;
  double pair_linear_coeff;  // linear-in-h coefficient of the pair ratio
  double f1_drift, f2_drift, chi_drift;  // relative change under epsilon/2
};

inline InteractionSeriesFit extract_interaction_series(
    CouplingKind kind, double theta, const GasLaw& law,
    double rho_bar = 1.0, double e_bar = 1.0, double epsilon = 1e-4,
    const std::vector<double>& h_grid = default_h_grid(),
    const CouplingOptions& opt_in = {}) {
  CouplingOptions opt = opt_in;
  opt.solver.tolerance = std::min(opt.solver.tolerance, 1e-13);
  const GasState u = state_from_theta(theta, law, rho_bar, e_bar);

  auto fit_at = [&](double eps) {
    const double sigma3m = eps * rho_bar;
    std::vector<double> hs, single, pair;
    for (double h : h_grid) {
      const InteractionResult one =
          interact_incoming(kind, u, sigma3m, 1.0, h, law, opt);
      const PairResult two = amplify_pair(kind, u, sigma3m, 1.0, h, law, opt);
      hs.push_back(h);
      single.push_back(one.sigma3p / sigma3m - 1.0);
      pair.push_back(two.ratio - 1.0);
    }
    const QuadraticFit fs = fit_detail::fit_h_h2_h3(hs, single);
    const QuadraticFit fp = fit_detail::fit_h_h2_h3(hs, pair);
    return std::array<double, 5>{fs.b1, fs.b2, fp.b2, fs.residual, fp.b1};
  };

  const auto full = fit_at(epsilon);
  const auto half = fit_at(0.5 * epsilon);
  InteractionSeriesFit out;
  out.f1 = full[0];
  out.f2 = full[1];
  out.chi = full[2];
  out.ratio_fit_residual = full[3];
  out.pair_linear_coeff = full[4];
  auto rel = [](double x, double y) {
    return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-12});
  };
  out.f1_drift = rel(full[0], half[0]);
  out.f2_drift = rel(full[1], half[1]);
  out.chi_drift = rel(full[2], half[2]);
  return out;
}

}  // namespace ductflow

#endif
