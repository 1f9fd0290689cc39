// ej: command line front end. Subcommands:
//   chi-scan    amplification coefficient chi over a theta grid (CSV)
//   blowup      strength trajectory across junction pairs (CSV + JSON summary)
//   junction    one junction Riemann problem (JSON)
//   stationary  piecewise stationary profile (JSON)
//   riemann     classical Riemann problem (JSON)
// Exit codes: 0 success, 2 input or solver error, 3 perturbative-guard
// violation. Output is byte-stable for a fixed configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ductflow/ductflow.hpp"

using namespace ductflow;
using nlohmann::json;

namespace {

constexpr int kExitError = 2;
constexpr int kExitGuard = 3;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CouplingKind parse_kind(const std::string& s) {
  if (s == "S") return CouplingKind::S;
  if (s == "P") return CouplingKind::P;
  if (s == "L") return CouplingKind::L;
  if (s == "p") return CouplingKind::p;
  throw CLI::ValidationError("--kind", "must be one of S, P, L, p");
}

// Parse "rho,v,e" into a conserved state.
GasState parse_state(const std::string& text, const GasLaw& law,
                     const std::string& field) {
  std::istringstream in(text);
  double rho, v, e;
  char c1, c2;
  if (!(in >> rho >> c1 >> v >> c2 >> e) || c1 != ',' || c2 != ',') {
    json err{{"error", {{"message", "expected rho,v,e"}, {"field", field}}}};
    std::cout << err.dump() << "\n";
    std::exit(kExitError);
  }
  return conserved_from_primitive(rho, v, e, law);
}

json state_json(const GasState& u) {
  return {{"rho", u.rho}, {"q", u.q}, {"E", u.E}};
}

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
  }
};

// Common run configuration shared by all subcommands.
struct Config {
  std::string kind_name = "P";
  double gamma = 5.0 / 3.0;
  double tol = 1e-11;
  unsigned seed = 0;
  std::string out;

  CouplingKind kind() const { return parse_kind(kind_name); }
  GasLaw law() const { return GasLaw(gamma); }
  CouplingOptions options() const {
    CouplingOptions opt;
    opt.solver.tolerance = tol;
    return opt;
  }
};

int run_chi_scan(const Config& cfg, double theta_min, double theta_max,
                 int samples, bool with_oracle) {
  if (!(theta_min > 0.0 && theta_min < theta_max && theta_max < 1.0)) {
    json err{{"error",
              {{"message", "need 0 < theta-min < theta-max < 1"},
               {"field", "theta-min/theta-max"}}}};
    std::cout << err.dump() << "\n";
    return kExitError;
  }
  const CouplingKind kind = cfg.kind();
  const GasLaw law = cfg.law();
  std::ostringstream csv;
  csv << "theta,chi_closed,chi_fitted,fit_residual\n";
  for (int i = 0; i < samples; ++i) {
    const double theta =
        theta_min + (theta_max - theta_min) * double(i) / (samples - 1);
    csv << fmt17(theta) << ",";
    try {
      const double chi = chi_closed(kind, theta);
      csv << fmt17(chi) << ",";
      if (with_oracle) {
        const InteractionSeriesFit fit = extract_interaction_series(
            kind, theta, law, 1.0, 1.0, 1e-4, default_h_grid(),
            cfg.options());
        csv << fmt17(fit.chi) << "," << fmt17(fit.ratio_fit_residual);
      } else {
        csv << ",";
      }
      csv << "\n";
    } catch (const std::exception& e) {
      // Diagnostic column appended to rows that cannot be evaluated.
      csv << ",,," << e.what() << "\n";
    }
  }
  Output{cfg.out}.write(csv.str());
  return 0;
}

int run_blowup(const Config& cfg, double theta, double sigma0, double h,
               int n_pairs) {
  const CouplingKind kind = cfg.kind();
  const GasLaw law = cfg.law();
  if (std::abs(h) > 0.2) {
    json err{{"error",
              {{"message", "|h| beyond the perturbative guard 0.2"},
               {"field", "h"}}}};
    std::cout << err.dump() << "\n";
    return kExitGuard;
  }
  const GasState u = state_from_theta(theta, law);
  std::ostringstream csv;
  csv << "pair_index,sigma3,ratio,predicted_ratio\n";
  csv << "0," << fmt17(sigma0) << ",,\n";

  bool overflow = false;
  std::string overflow_what;
  ChainResult chain;
  chain.sigma3.push_back(sigma0);
  GasState cur = u;
  double sigma = sigma0;
  for (int k = 0; k < n_pairs; ++k) {
    try {
      if (std::abs(sigma) > 0.2 * cur.rho)
        throw AmplitudeOverflow("sigma3 exceeded the perturbative guard");
      const PairResult pair =
          amplify_pair(kind, cur, sigma, 1.0, h, law, cfg.options());
      sigma = pair.sigma3pp;
      cur = pair.uAfter;
      chain.sigma3.push_back(sigma);
      chain.ratios.push_back(pair.ratio);
      chain.predicted.push_back(pair.predicted_ratio);
      csv << (k + 1) << "," << fmt17(sigma) << "," << fmt17(pair.ratio)
          << "," << fmt17(pair.predicted_ratio) << "\n";
    } catch (const AmplitudeOverflow& e) {
      overflow = true;
      overflow_what = e.what();
      break;
    }
  }
  Output{cfg.out}.write(csv.str());

  json summary;
  summary["kind"] = to_string(kind);
  summary["theta"] = theta;
  summary["h"] = h;
  summary["pairs_completed"] = chain.ratios.size();
  summary["note"] =
      "only the fastest outgoing wave reaches the next junction; slower "
      "waves are discarded";
  if (chain.sigma3.size() > 1) {
    const double exponent =
        std::log(std::abs(chain.sigma3.back() / chain.sigma3.front())) /
        double(chain.sigma3.size() - 1);
    summary["growth_exponent_fit"] = exponent;
  }
  try {
    summary["predicted_exponent"] =
        std::log(1.0 + chi_closed(kind, theta) * h * h);
  } catch (const std::exception&) {
    summary["predicted_exponent"] = nullptr;
  }
  if (overflow) {
    summary["error"] = overflow_what;
    std::cout << summary.dump() << "\n";
    return kExitGuard;
  }
  std::cout << summary.dump() << "\n";
  return 0;
}

int run_junction(const Config& cfg, double aM, double aP,
                 const std::string& left, const std::string& right) {
  const GasLaw law = cfg.law();
  const GasState uL = parse_state(left, law, "left");
  const GasState uR = parse_state(right, law, "right");
  const JunctionFan fan = solve_junction_riemann(cfg.kind(), aM, aP, uL, uR,
                                                 law, cfg.options());
  const DetCriterion det = det_criterion(cfg.kind(), aM, fan.traceL, law);
  json out;
  out["sigma"] = {fan.sigma1, fan.sigma2, fan.sigma3};
  out["traces"] = {{"left", state_json(fan.traceL)},
                   {"right", state_json(fan.traceR)}};
  out["residual"] = fan.residual;
  out["det_numeric"] = det.numeric;
  out["det_analytic"] = det.analytic;
  Output{cfg.out}.write(out.dump() + "\n");
  return 0;
}

int run_stationary(const Config& cfg, const std::string& u0_text,
                   const std::vector<double>& sections) {
  const GasLaw law = cfg.law();
  const GasState u0 = parse_state(u0_text, law, "u0");
  if (sections.empty()) {
    json err{{"error",
              {{"message", "need at least one section value"},
               {"field", "sections"}}}};
    std::cout << err.dump() << "\n";
    return kExitError;
  }
  PiecewiseSection prof;
  prof.a = sections;
  for (size_t j = 1; j < sections.size(); ++j) prof.x.push_back(double(j));
  const StationaryProfile sp =
      stationary_profile(cfg.kind(), prof, u0, law, cfg.options());
  json out;
  out["states"] = json::array();
  for (const GasState& u : sp.states) out["states"].push_back(state_json(u));
  out["tv_u"] = sp.tv_u;
  out["tv_a"] = sp.tv_a;
  Output{cfg.out}.write(out.dump() + "\n");
  return 0;
}

int run_riemann(const Config& cfg, const std::string& left,
                const std::string& right) {
  const GasLaw law = cfg.law();
  const GasState uL = parse_state(left, law, "left");
  const GasState uR = parse_state(right, law, "right");
  SolverOptions opt;
  opt.tolerance = cfg.tol;
  const WaveFan fan = solve_riemann(uL, uR, law, opt);
  json out;
  out["sigma"] = {fan.sigma1, fan.sigma2, fan.sigma3};
  out["star_left"] = state_json(fan.uStarL);
  out["star_right"] = state_json(fan.uStarR);
  Output{cfg.out}.write(out.dump() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duct flow junction experiments"};
  app.require_subcommand(1);

  Config cfg;
  app.add_option("--kind", cfg.kind_name, "coupling condition: S, P, L or p")
      ->envname("EJ_KIND");
  app.add_option("--gamma", cfg.gamma, "adiabatic exponent")
      ->envname("EJ_GAMMA");
  app.add_option("--tol", cfg.tol, "solver tolerance")->envname("EJ_TOL");
  app.add_option("--seed", cfg.seed, "seed for randomized sweeps")
      ->envname("EJ_SEED");
  app.add_option("--out", cfg.out, "output file (default: stdout)")
      ->envname("EJ_OUT");

  auto* chi = app.add_subcommand("chi-scan", "chi(theta) over a grid");
  double theta_min = 0.02, theta_max = 0.98;
  int samples = 97;
  bool with_oracle = false;
  chi->add_option("--theta-min", theta_min);
  chi->add_option("--theta-max", theta_max);
  chi->add_option("--samples", samples)->check(CLI::Range(2, 100000));
  chi->add_flag("--with-oracle", with_oracle,
                "also fit chi numerically per row");

  auto* blow = app.add_subcommand("blowup", "strength across junction pairs");
  double theta = 0.5, sigma0 = 1e-4, h = 0.05;
  int n_pairs = 40;
  blow->add_option("--theta", theta);
  blow->add_option("--sigma0", sigma0);
  blow->add_option("--jump", h, "relative section jump da / a");
  blow->add_option("--n-pairs", n_pairs)->check(CLI::Range(1, 100000));

  auto* junc = app.add_subcommand("junction", "one junction Riemann problem");
  double aM = 1.0, aP = 1.05;
  std::string left = "1,0.4,1", right = "1,0.4,1";
  junc->add_option("--aM", aM);
  junc->add_option("--aP", aP);
  junc->add_option("--left", left, "left state rho,v,e");
  junc->add_option("--right", right, "right state rho,v,e");

  auto* stat = app.add_subcommand("stationary", "piecewise stationary profile");
  std::string u0_text = "1,0.4,1";
  std::vector<double> sections;
  stat->add_option("--u0", u0_text, "inlet state rho,v,e");
  stat->add_option("--sections", sections, "section values a_0,a_1,...")
      ->delimiter(',');

  auto* riem = app.add_subcommand("riemann", "classical Riemann problem");
  riem->add_option("--left", left, "left state rho,v,e");
  riem->add_option("--right", right, "right state rho,v,e");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err{{"error", {{"message", e.what()}, {"field", e.get_name()}}}};
    std::cout << err.dump() << "\n";
    return kExitError;
  }

  try {
    if (chi->parsed())
      return run_chi_scan(cfg, theta_min, theta_max, samples, with_oracle);
    if (blow->parsed())
      return run_blowup(cfg, theta, sigma0, h, n_pairs);
    if (junc->parsed()) return run_junction(cfg, aM, aP, left, right);
    if (stat->parsed()) return run_stationary(cfg, u0_text, sections);
    if (riem->parsed()) return run_riemann(cfg, left, right);
  } catch (const AmplitudeOverflow& e) {
    json err{{"error", {{"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return kExitGuard;
  } catch (const DomainError& e) {
    json err{{"error", {{"message", e.what()}, {"field", e.quantity()}}}};
    std::cout << err.dump() << "\n";
    const bool guard =
        e.quantity().find("guard") != std::string::npos;
    return guard ? kExitGuard : kExitError;
  } catch (const std::exception& e) {
    json err{{"error", {{"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return kExitError;
  }
  return kExitError;
}
