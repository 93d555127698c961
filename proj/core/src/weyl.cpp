#include "gravfact/weyl.hpp"

#include <cmath>

namespace gravfact {

namespace {
void check_sign(int s, const char* name) {
  if (s != 1 && s != -1)
    throw parameter_error(std::string(name) + " must be +1 or -1");
}
}  // namespace

WeylPoint::WeylPoint(double rho_, double v_, int lambda_, int sigma_,
                     int epsilon_)
    : rho(rho_), v(v_), lambda(lambda_), sigma(sigma_), epsilon(epsilon_) {
  if (!(rho > 0.0)) throw parameter_error("WeylPoint: rho must be positive");
  check_sign(lambda, "lambda");
  check_sign(sigma, "sigma");
  check_sign(epsilon, "epsilon");
  if (lambda != sigma * epsilon)
    throw parameter_error("WeylPoint: lambda must equal sigma*epsilon");
}

WeylPoint::WeylPoint(double rho_, double v_, int lambda_)
    : WeylPoint(rho_, v_, lambda_, 1, lambda_) {}

cplx spectral_omega(cplx tau, const WeylPoint& p) {
  if (tau == cplx(0.0, 0.0))
    throw domain_error("spectral_omega: tau = 0 is a pole of the spectral curve");
  const double lam = p.lambda;
  return p.v + 0.5 * lam * p.rho * (lam - tau * tau) / tau;
}

cplx involution(cplx tau, int lambda) {
  check_sign(lambda, "lambda");
  if (tau == cplx(0.0, 0.0))
    throw domain_error("involution: tau = 0 has no image");
  return -static_cast<double>(lambda) / tau;
}

SpectralValue::SpectralValue(cplx tau_, const WeylPoint& p)
    : tau(tau_), omega(spectral_omega(tau_, p)) {}

std::pair<cplx, cplx> phi_roots(cplx omega, const WeylPoint& p) {
  const double lam = p.lambda;
  const cplx d = omega - p.v;
  const cplx root = std::sqrt(d * d + lam * p.rho * p.rho);
  const cplx plus = (-lam * d + root) / p.rho;
  const cplx minus = (-lam * d - root) / p.rho;
  return {plus, minus};
}

std::pair<double, double> prolate_from_weyl(const WeylPoint& p, double c) {
  if (!(c > 0.0)) throw parameter_error("prolate_from_weyl: c must be positive");
  // u^2 solves  a^2 - a (c^2 + v^2 + rho^2) + c^2 v^2 = 0 (larger root).
  const double s = c * c + p.v * p.v + p.rho * p.rho;
  const double disc = s * s - 4.0 * c * c * p.v * p.v;
  const double a = 0.5 * (s + std::sqrt(std::max(disc, 0.0)));
  const double u = std::sqrt(a);
  if (!(u > c))
    throw domain_error("prolate_from_weyl: point outside image region (u <= c)");
  const double y = p.v / u;
  if (!(std::abs(y) < 1.0))
    throw domain_error("prolate_from_weyl: point outside image region (|y| >= 1)");
  return {u, y};
}

WeylPoint weyl_from_prolate(double u, double y, double c, int lambda,
                            int sigma, int epsilon) {
  if (!(c > 0.0)) throw parameter_error("weyl_from_prolate: c must be positive");
  if (!(u > c)) throw domain_error("weyl_from_prolate: requires u > c");
  if (!(std::abs(y) < 1.0))
    throw domain_error("weyl_from_prolate: requires |y| < 1");
  const double rho = std::sqrt((u * u - c * c) * (1.0 - y * y));
  return WeylPoint(rho, u * y, lambda, sigma, epsilon);
}

WeylPoint schwarzschild_coords(double r, double theta, double m,
                               SchwarzschildBranch branch) {
  if (!(m > 0.0)) throw parameter_error("schwarzschild_coords: m must be positive");
  double rho = 0.0, v = 0.0;
  switch (branch) {
    case SchwarzschildBranch::Exterior:
      if (!(r > 2.0 * m))
        throw domain_error("schwarzschild_coords: exterior needs r > 2m");
      rho = std::sqrt(r * r - 2.0 * m * r) * std::sin(theta);
      v = (r - m) * std::cos(theta);
      break;
    case SchwarzschildBranch::AII:
      if (!(r > 0.0 && r < 2.0 * m))
        throw domain_error("schwarzschild_coords: AII needs 0 < r < 2m");
      rho = std::sqrt(2.0 * m * r - r * r) * std::sinh(theta);
      v = (r - m) * std::cosh(theta);
      break;
    case SchwarzschildBranch::Negative:
      if (!(r > 0.0))
        throw domain_error("schwarzschild_coords: negative branch needs r > 0");
      rho = std::sqrt(r * r + 2.0 * m * r) * std::sin(theta);
      v = (r + m) * std::cos(theta);
      break;
  }
  if (!(rho > 0.0))
    throw domain_error("schwarzschild_coords: image point lies on the axis rho = 0");
  return WeylPoint(rho, v, 1);
}

}  // namespace gravfact
