#include <catch2/catch_amalgamated.hpp>

#include "ductflow/ductflow.hpp"
#include "oracle.hpp"

using namespace ductflow;

namespace {
const CouplingKind kAllKinds[] = {CouplingKind::S, CouplingKind::P,
                                  CouplingKind::L, CouplingKind::p};
}

TEST_CASE("junction riemann: constant data, equal sections") {
  GasLaw law;
  const GasState u = conserved_from_primitive(1.0, 0.4, 1.0, law);
  for (CouplingKind kind : kAllKinds) {
    const JunctionFan fan = solve_junction_riemann(kind, 1.0, 1.0, u, u, law);
    CHECK(std::abs(fan.sigma1) < 1e-11);
    CHECK(std::abs(fan.sigma2) < 1e-11);
    CHECK(std::abs(fan.sigma3) < 1e-11);
  }
}

TEST_CASE("junction riemann reduces to the classical solver at equal sections") {
  GasLaw law;
  const GasState uL = conserved_from_primitive(1.0, 0.4, 1.0, law);
  const GasState uR = conserved_from_primitive(1.1, 0.35, 1.05, law);
  const WaveFan classic = solve_riemann(uL, uR, law);
  for (CouplingKind kind : kAllKinds) {
    const JunctionFan fan = solve_junction_riemann(kind, 1.2, 1.2, uL, uR, law);
    CHECK(fan.sigma1 == Catch::Approx(classic.sigma1).margin(1e-9));
    CHECK(fan.sigma2 == Catch::Approx(classic.sigma2).margin(1e-9));
    CHECK(fan.sigma3 == Catch::Approx(classic.sigma3).margin(1e-9));
  }
}

TEST_CASE("junction riemann: stationary data gives zero strengths") {
  GasLaw law;
  const GasState uL = conserved_from_primitive(1.0, 0.45, 1.0, law);
  for (CouplingKind kind : kAllKinds) {
    const double aM = 1.0, aP = 1.04;
    const GasState uR = t_map(kind, aM, aP, uL, law);
    const JunctionFan fan = solve_junction_riemann(kind, aM, aP, uL, uR, law);
    CHECK(std::abs(fan.sigma1) < 1e-8);
    CHECK(std::abs(fan.sigma2) < 1e-8);
    CHECK(std::abs(fan.sigma3) < 1e-8);
    CHECK(fan.residual <= 1e-10);
  }
}

TEST_CASE("interact_incoming: no junction passes the wave through exactly") {
  GasLaw law;
  const GasState u = conserved_from_primitive(1.0, 0.4, 1.0, law);
  for (CouplingKind kind : kAllKinds) {
    const InteractionResult r =
        interact_incoming(kind, u, 0.01, 1.0, 0.0, law);
    CHECK(r.sigma1p == 0.0);
    CHECK(r.sigma2p == 0.0);
    CHECK(r.sigma3p == 0.01);
    CHECK(r.thetaPlus == primitives(u, law).theta);
  }
}

TEST_CASE("interact_incoming: residual and fan consistency") {
  GasLaw law;
  for (CouplingKind kind : kAllKinds) {
    for (double theta : {0.25, 0.5}) {
      const GasState u = state_from_theta(theta, law);
      const InteractionResult r =
          interact_incoming(kind, u, 1e-3, 1.0, 0.02, law);
      CHECK(r.fan.residual <= 1e-10);
      // uPlus connects to the far state by the outgoing 3-wave.
      const GasState far = lax_curve(WaveFamily::three,
                                     CurveDirection::forward, r.uPlus,
                                     r.sigma3p, law);
      CHECK(far.rho == Catch::Approx(r.fan.uFarR.rho).epsilon(1e-9));
      CHECK(far.q == Catch::Approx(r.fan.uFarR.q).epsilon(1e-9));
      CHECK(far.E == Catch::Approx(r.fan.uFarR.E).epsilon(1e-9));
    }
  }
}

TEST_CASE("interact_incoming: degenerate incoming wave") {
  GasLaw law;
  const GasState u = state_from_theta(0.3, law);
  for (CouplingKind kind : kAllKinds) {
    const InteractionResult r =
        interact_incoming(kind, u, 0.0, 1.0, 0.03, law);
    CHECK(std::abs(r.sigma1p) < 1e-8);
    CHECK(std::abs(r.sigma2p) < 1e-8);
    CHECK(std::abs(r.sigma3p) < 1e-8);
  }
}

TEST_CASE("kind L interaction strengths are exact rescalings") {
  // T is multiplication by a-/a+, which conjugates the whole fan; the
  // transmitted density offset scales by exactly a-/a+.
  GasLaw law;
  const GasState u = state_from_theta(0.4, law);
  const double sigma = 5e-4, a = 1.0, da = 0.03;
  const InteractionResult r =
      interact_incoming(CouplingKind::L, u, sigma, a, da, law);
  CHECK(r.sigma3p == Catch::Approx(sigma * a / (a + da)).epsilon(1e-6));
  CHECK(std::abs(r.sigma1p) < 1e-9);
  CHECK(std::abs(r.sigma2p) < 1e-9);
  CHECK(r.thetaPlus == Catch::Approx(primitives(u, law).theta).epsilon(1e-8));
}

TEST_CASE("amplify_pair: no junction is neutral") {
  GasLaw law;
  const GasState u = state_from_theta(0.3, law);
  const PairResult pair =
      amplify_pair(CouplingKind::P, u, 1e-3, 1.0, 0.0, law);
  CHECK(pair.ratio == 1.0);
}

TEST_CASE("amplify_pair: kind L pairs are neutral to solver accuracy") {
  GasLaw law;
  for (double theta : {0.2, 0.5, 0.8}) {
    const GasState u = state_from_theta(theta, law);
    const PairResult pair =
        amplify_pair(CouplingKind::L, u, 1e-4, 1.0, 0.05, law);
    CHECK(pair.ratio == Catch::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("chain_propagate: zero pairs") {
  GasLaw law;
  const GasState u = state_from_theta(0.3, law);
  const ChainResult chain =
      chain_propagate(CouplingKind::P, u, 1e-3, 1.0, 0.05, 0, law);
  REQUIRE(chain.sigma3.size() == 1);
  CHECK(chain.sigma3[0] == 1e-3);
  CHECK(chain.ratios.empty());
}

TEST_CASE("chain_propagate: growth at positive amplification") {
  GasLaw law;
  // Reference coefficients give chi > 0 for kind P at theta = 0.5.
  const GasState u = state_from_theta(0.5, law);
  const ChainResult chain =
      chain_propagate(CouplingKind::P, u, 1e-4, 1.0, 0.05, 10, law);
  for (size_t k = 1; k < chain.sigma3.size(); ++k)
    CHECK(chain.sigma3[k] > chain.sigma3[k - 1]);
}

TEST_CASE("chain_propagate overflow guard") {
  GasLaw law;
  const GasState u = state_from_theta(0.3, law);
  CHECK_THROWS_AS(
      chain_propagate(CouplingKind::P, u, 0.5, 1.0, 0.05, 3, law),
      AmplitudeOverflow);
}

TEST_CASE("stationary_profile basics") {
  GasLaw law;
  const GasState u0 = conserved_from_primitive(1.0, 0.45, 1.0, law);
  for (CouplingKind kind : kAllKinds) {
    PiecewiseSection constant{{}, {1.0}};
    const StationaryProfile flat = stationary_profile(kind, constant, u0, law);
    CHECK(flat.tv_u == 0.0);
    CHECK(flat.tv_a == 0.0);

    PiecewiseSection two{{0.0}, {1.0, 1.05}};
    const StationaryProfile prof = stationary_profile(kind, two, u0, law);
    REQUIRE(prof.states.size() == 2);
    const GasState want = t_map(kind, 1.0, 1.05, u0, law);
    CHECK(prof.states[1].rho == Catch::Approx(want.rho));
    CHECK(prof.states[1].q == Catch::Approx(want.q));
    CHECK(prof.states[1].E == Catch::Approx(want.E));
    CHECK(prof.tv_a == Catch::Approx(0.05));
  }
}

TEST_CASE("stationary_profile sawtooth TV stays bounded") {
  GasLaw law;
  const GasState u0 = conserved_from_primitive(1.0, 0.45, 1.0, law);
  for (CouplingKind kind : kAllKinds) {
    // 20 pieces alternating between 1 and 1 + amp, TV(a) fixed.
    auto make = [&](int pieces, double tv_a) {
      PiecewiseSection s;
      const double amp = tv_a / (pieces - 1);
      for (int j = 0; j < pieces; ++j) {
        if (j) s.x.push_back(double(j));
        s.a.push_back(j % 2 ? 1.0 + amp : 1.0);
      }
      return s;
    };
    const StationaryProfile coarse =
        stationary_profile(kind, make(20, 0.2), u0, law);
    const StationaryProfile fine =
        stationary_profile(kind, make(40, 0.2), u0, law);
    const double m_coarse = coarse.tv_u / coarse.tv_a;
    const double m_fine = fine.tv_u / fine.tv_a;
    CHECK(m_coarse > 0.0);
    CHECK(oracle::rel_err(m_fine, m_coarse) < 0.1);
  }
}

TEST_CASE("wave speed signs are enforced") {
  GasLaw law;
  // Data engineered so no subsonic junction solution pattern exists is hard
  // to construct generically; instead assert the checker rejects a fan with
  // a wrong-speed 2-wave.
  JunctionFan fan{};
  fan.uFarL = conserved_from_primitive(1.0, 0.4, 1.0, law);
  fan.traceL = fan.uFarL;
  fan.traceR = conserved_from_primitive(1.0, -0.2, 1.0, law);
  fan.uFarR = fan.traceR;
  fan.sigma1 = 0.0;
  CHECK_THROWS_AS(detail::check_wave_speeds(fan, law), SpeedSignError);
}
