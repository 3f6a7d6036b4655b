#include <cmath>

#include "doctest.h"
#include "hnls/shooting.hpp"
#include "test_helpers.hpp"

using namespace hnls;

TEST_CASE("classical soliton (d=3, c=0, alpha=2) satisfies its identities") {
  ModelParams p(3, 0.0, 2.0, true);
  const ShootingSolution sol = shoot_elliptic(p, 1.0);
  // Pohozaev ratios at c=0, alpha=2, omega=1:
  //   ||grad Q||^2 = (3/4) ||Q||_4^4,  ||Q||^2 = (1/4) ||Q||_4^4
  CHECK(sol.kinetic == doctest::Approx(0.75 * sol.lp).epsilon(2e-6));
  CHECK(sol.mass == doctest::Approx(0.25 * sol.lp).epsilon(2e-6));
  CHECK(sol.kinetic == doctest::Approx(3.0 * sol.mass).epsilon(5e-6));
  CHECK(sol.omega_rayleigh() == doctest::Approx(1.0).epsilon(1e-6));
  // known peak amplitude of the 3d cubic soliton
  CHECK(sol.q.maxCoeff() == doctest::Approx(4.3374).epsilon(1e-3));
  CHECK((sol.q > 0).all());
}

TEST_CASE("origin behavior r^{-1/4} for d=3, c=3/16") {
  ModelParams p(3, 3.0 / 16.0, 4.0 / 3.0);
  CHECK(p.rho == doctest::Approx(0.25).epsilon(1e-14));
  const ShootingSolution sol = shoot_elliptic(p, 1.0);
  // compare growth against the leading power between two small radii
  const Real r1 = sol.r[0], q1 = sol.q[0];
  Index j = 0;
  while (sol.r[j] < 2.0 * r1) ++j;
  const Real measured = std::log(sol.q[j] / q1) / std::log(sol.r[j] / r1);
  CHECK(measured == doctest::Approx(-0.25).epsilon(0.02));
}

TEST_CASE("origin behavior r^{sqrt(2)-1} for d=4, c=-1") {
  ModelParams p(4, -1.0, 1.0);
  CHECK(p.rho == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-14));
  const ShootingSolution sol = shoot_elliptic(p, 1.0);
  const Real r1 = sol.r[0], q1 = sol.q[0];
  Index j = 0;
  while (sol.r[j] < 2.0 * r1) ++j;
  const Real measured = std::log(sol.q[j] / q1) / std::log(sol.r[j] / r1);
  CHECK(measured == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(0.02));
  CHECK((sol.q > 0).all());
}

TEST_CASE("critical-case Pohozaev ratios from the oracle (d=3, c=3/16)") {
  ModelParams p(3, 3.0 / 16.0, 4.0 / 3.0);
  const ShootingSolution sol = shoot_elliptic(p, 1.0);
  const Real hh = sol.hardy_norm_sq();
  // ||Q||_Hc^2 = (d/(d+2)) lp = (d omega/2) ||Q||^2
  CHECK(hh == doctest::Approx(0.6 * sol.lp).epsilon(5e-6));
  CHECK(hh == doctest::Approx(1.5 * sol.mass).epsilon(5e-6));
  CHECK(std::abs(sol.energy()) / hh < 5e-6);
}

TEST_CASE("oracle resamples cleanly onto a production grid") {
  ModelParams p(3, 3.0 / 16.0, 4.0 / 3.0);
  const ShootingSolution sol = shoot_elliptic(p, 1.0);
  auto g = make_grid(2048, 20.0, Grading::Geometric, 1.004, 3);
  const RealVec qg = sol.on_grid(*g);
  CHECK((qg >= 0).all());
  // grid quadrature of the resampled profile agrees with the oracle's own
  CHECK(mass(*g, qg) == doctest::Approx(sol.mass).epsilon(1e-5));
}
