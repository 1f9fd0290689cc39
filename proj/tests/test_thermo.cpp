#include <catch2/catch_amalgamated.hpp>

#include "ductflow/ductflow.hpp"
#include "oracle.hpp"

using namespace ductflow;

TEST_CASE("primitive round trip") {
  GasLaw law;
  oracle::StateGen gen(12001);
  for (int i = 0; i < 200; ++i) {
    const GasState u = gen.subsonic(law);
    const Primitives pr = primitives(u, law);
    const GasState back = conserved_from_primitive(u.rho, pr.v, pr.e, law);
    CHECK(back.rho == Catch::Approx(u.rho).epsilon(1e-14));
    CHECK(back.q == Catch::Approx(u.q).epsilon(1e-13).margin(1e-14));
    CHECK(back.E == Catch::Approx(u.E).epsilon(1e-13));
    CHECK(pr.p == Catch::Approx((law.gamma - 1.0) * u.rho * pr.e));
    CHECK(pr.c * pr.c ==
          Catch::Approx(law.gamma * (law.gamma - 1.0) * pr.e));
    CHECK(pr.theta == Catch::Approx(pr.v * pr.v / (pr.c * pr.c)));
  }
}

TEST_CASE("fluxes in terms of primitives") {
  GasLaw law(1.4);
  const GasState u = conserved_from_primitive(1.2, 0.5, 2.0, law);
  const Primitives pr = primitives(u, law);
  CHECK(momentum_flux(u, law) ==
        Catch::Approx(u.rho * pr.v * pr.v + pr.p));
  CHECK(energy_flux(u, law) == Catch::Approx(pr.v * (u.E + pr.p)));
}

TEST_CASE("entropy constant on the isentrope, increasing across shocks") {
  GasLaw law;
  const GasState u = conserved_from_primitive(1.0, 0.4, 1.0, law);
  const double S0 = primitives(u, law).S;
  const GasState r = lax_curve(WaveFamily::three, CurveDirection::forward, u,
                               0.2, law);
  CHECK(primitives(r, law).S == Catch::Approx(S0).margin(1e-12));
  // The compressive shock branch (family 1 forward, sigma < 0 raises the
  // density) increases the entropy.
  const GasState s = lax_curve(WaveFamily::one, CurveDirection::forward, u,
                               -0.2, law);
  CHECK(primitives(s, law).S > S0);
}

TEST_CASE("eigensystem diagonalizes the flux Jacobian") {
  GasLaw law;
  oracle::StateGen gen(12002);
  for (int i = 0; i < 100; ++i) {
    const GasState u = gen.subsonic(law);
    const Eigensystem es = eigensystem(u, law);
    const auto jac = detail::flux_jacobian_columns(u, law);
    for (int k = 0; k < 3; ++k) {
      Vec3 Ar{0, 0, 0};
      for (int j = 0; j < 3; ++j) Ar = Ar + es.r[k][j] * jac[j];
      const Vec3 want = es.lambda[k] * es.r[k];
      CHECK(norm(Ar - want) < 1e-8 * std::max(1.0, norm(want)));
    }
  }
}

TEST_CASE("primitive-coordinate tangents match the conserved ones") {
  // r_tilde expressed back in conserved variables must be parallel to r.
  GasLaw law;
  oracle::StateGen gen(12003);
  for (int i = 0; i < 100; ++i) {
    const GasState u = gen.subsonic(law);
    const Primitives pr = primitives(u, law);
    const Eigensystem es = eigensystem(u, law);
    for (int k = 0; k < 3; ++k) {
      const Vec3 t = es.r_tilde[k];  // (drho, dq, de)
      const double dv = (t[1] - pr.v * t[0]) / u.rho;
      // dE = d(rho e) + d(rho v^2 / 2)
      const double dE = pr.e * t[0] + u.rho * t[2] +
                        0.5 * pr.v * pr.v * t[0] + u.rho * pr.v * dv;
      const Vec3 conserved{t[0], t[1], dE};
      const double cr = dot(conserved, es.r[k]) /
                        (norm(conserved) * norm(es.r[k]));
      CHECK(std::abs(std::abs(cr) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("subsonic region boundaries") {
  GasLaw law;
  const double c = std::sqrt(law.gamma * (law.gamma - 1.0));
  CHECK(is_subsonic(conserved_from_primitive(1.0, 0.5 * c, 1.0, law), law));
  CHECK_FALSE(is_subsonic(conserved_from_primitive(1.0, -0.1, 1.0, law), law));
  CHECK_FALSE(is_subsonic(conserved_from_primitive(1.0, 1.1 * c, 1.0, law), law));
}

TEST_CASE("domain errors on invalid states") {
  GasLaw law;
  CHECK_THROWS_AS(primitives({-1.0, 0.0, 1.0}, law), DomainError);
  CHECK_THROWS_AS(primitives({1.0, 10.0, 1.0}, law), DomainError);  // e < 0
  CHECK_THROWS_AS(GasLaw(0.9), DomainError);
  CHECK_THROWS_AS(conserved_from_primitive(0.0, 0.1, 1.0, law), DomainError);
}

TEST_CASE("det3 agrees with cofactor expansion") {
  const Vec3 a{1, 2, 3}, b{0, 4, 5}, c{1, 0, 6};
  CHECK(det3(a, b, c) == Catch::Approx(22.0));
  CHECK(det3(a, a, c) == Catch::Approx(0.0).margin(1e-15));
}
