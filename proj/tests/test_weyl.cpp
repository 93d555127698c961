#include <doctest.h>

#include <cmath>

#include "gravfact/weyl.hpp"

using namespace gravfact;

TEST_CASE("spectral curve at the reference point") {
  // rho = 1, v = 0, lambda = +1: omega(tau) = (1 - tau^2)/(2 tau).
  WeylPoint p(1.0, 0.0, 1);
  CHECK(std::abs(spectral_omega({-1.0 - std::sqrt(2.0), 0.0}, p) - cplx(1.0)) <
        1e-14);
  // The involution fixes omega.
  for (cplx tau : {cplx(0.3, 0.7), cplx(-1.2, 0.1), cplx(2.0, -0.5)}) {
    CHECK(std::abs(spectral_omega(tau, p) -
                   spectral_omega(involution(tau, 1), p)) < 1e-13);
    WeylPoint q(0.7, 0.4, -1);
    CHECK(std::abs(spectral_omega(tau, q) -
                   spectral_omega(involution(tau, -1), q)) < 1e-13);
  }
}

TEST_CASE("phi roots solve the curve and pair under the involution") {
  WeylPoint p(1.0, 0.0, 1);
  auto [tp, tm] = phi_roots(1.0, p);
  CHECK(std::abs(tp - cplx(std::sqrt(2.0) - 1.0)) < 1e-14);
  CHECK(std::abs(tm - cplx(-1.0 - std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(tm - involution(tp, 1)) < 1e-13);

  for (cplx om : {cplx(0.5, 0.2), cplx(-1.0, 0.0), cplx(2.0, -1.0)}) {
    WeylPoint q(1.3, -0.4, -1);
    auto [a, b] = phi_roots(om, q);
    CHECK(std::abs(spectral_omega(a, q) - om) < 1e-12);
    CHECK(std::abs(spectral_omega(b, q) - om) < 1e-12);
    CHECK(std::abs(a * b * cplx(static_cast<double>(q.lambda)) + 1.0) < 1e-12);
  }
}

TEST_CASE("SpectralValue carries the curve value; tau = 0 rejected") {
  WeylPoint p(1.0, 0.5, 1);
  SpectralValue s({0.4, 0.1}, p);
  CHECK(std::abs(s.omega - spectral_omega(s.tau, p)) == 0.0);
  auto [tp, tm] = phi_roots(0.25, p);
  CHECK(std::abs(SpectralValue(tp, p).omega - 0.25) < 1e-13);
  CHECK(std::abs(SpectralValue(tm, p).omega - 0.25) < 1e-13);
  CHECK_THROWS_AS(SpectralValue({0.0, 0.0}, p), domain_error);
  CHECK_THROWS_AS(involution({0.0, 0.0}, 1), domain_error);
}

TEST_CASE("prolate coordinates round-trip") {
  const double c = std::sqrt(3.0);  // m=2, a=1
  for (double u : {2.0, 2.5}) {
    for (double y : {-0.7, 0.1, 0.9}) {
      WeylPoint p = weyl_from_prolate(u, y, c);
      CHECK(p.v == doctest::Approx(u * y).epsilon(1e-14));
      CHECK(p.rho * p.rho ==
            doctest::Approx((u * u - c * c) * (1 - y * y)).epsilon(1e-13));
      auto [u2, y2] = prolate_from_weyl(p, c);
      CHECK(u2 == doctest::Approx(u).epsilon(1e-12));
      CHECK(y2 == doctest::Approx(y).epsilon(1e-12));
    }
  }
}

TEST_CASE("Schwarzschild coordinate patches land in the half-plane") {
  const double m = 1.0;
  WeylPoint e = schwarzschild_coords(3.0, 1.0, m, SchwarzschildBranch::Exterior);
  CHECK(e.rho == doctest::Approx(std::sqrt(3.0) * std::sin(1.0)));
  CHECK(e.v == doctest::Approx(2.0 * std::cos(1.0)));
  // exterior strip: |v| < m requires cos(theta) small enough; this point has
  // v > m, fine for the map itself
  WeylPoint a = schwarzschild_coords(1.0, 0.5, m, SchwarzschildBranch::AII);
  CHECK(a.rho == doctest::Approx(std::sinh(0.5)));
  WeylPoint n =
      schwarzschild_coords(1.0, 0.3, m, SchwarzschildBranch::Negative);
  CHECK(n.rho == doctest::Approx(std::sqrt(3.0) * std::sin(0.3)));
  CHECK_THROWS_AS(schwarzschild_coords(1.5, 0.1, m, SchwarzschildBranch::Exterior),
                  domain_error);
  CHECK_THROWS_AS(schwarzschild_coords(2.5, 0.1, m, SchwarzschildBranch::AII),
                  domain_error);
}
