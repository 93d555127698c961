#pragma once

#include <utility>

#include "gravfact/types.hpp"

namespace gravfact {

/*
 * A point of the Weyl half-plane together with the 2D line-element signs:
 *
 *   ds2^2 = sigma drho^2 + epsilon dv^2 ,   lambda = sigma * epsilon ,
 *
 * and the Hodge star acting as  *drho = -lambda dv, *dv = drho.
 */
struct WeylPoint {
  double rho;
  double v;
  int lambda;
  int sigma;
  int epsilon;

  WeylPoint(double rho_, double v_, int lambda_, int sigma_, int epsilon_);
  // Convenience: picks sigma = 1, epsilon = lambda.
  WeylPoint(double rho_, double v_, int lambda_);
};

/*
 * Spectral curve:  omega = v + (lambda/2) rho (lambda - tau^2)/tau.
 * Invariant under the involution tau -> -lambda/tau.
 */
cplx spectral_omega(cplx tau, const WeylPoint& p);

// i_lambda(tau) = -lambda/tau.
cplx involution(cplx tau, int lambda);

// A (tau, omega) pair checked against the spectral relation at construction.
struct SpectralValue {
  cplx tau;
  cplx omega;
  SpectralValue(cplx tau_, const WeylPoint& p);
};

/*
 * The two tau-roots of omega = spectral_omega(tau):
 *
 *   phi^{+-} = ( -lambda (omega - v) +- sqrt((omega - v)^2 + lambda rho^2) ) / rho
 *
 * with the principal square root; phi^- = -lambda / phi^+.
 */
std::pair<cplx, cplx> phi_roots(cplx omega, const WeylPoint& p);

// Prolate spheroidal coordinates: v = u y, rho^2 = (u^2 - c^2)(1 - y^2),
// valid for u > c, |y| < 1.
std::pair<double, double> prolate_from_weyl(const WeylPoint& p, double c);
WeylPoint weyl_from_prolate(double u, double y, double c, int lambda = 1,
                            int sigma = 1, int epsilon = 1);

enum class SchwarzschildBranch { Exterior, AII, Negative };

/*
 * Coordinate maps into the Weyl half-plane:
 *   exterior:  rho = sqrt(r^2 - 2 m r) sin(theta), v = (r - m) cos(theta),  r > 2m
 *   AII:       rho = sqrt(2 m r - r^2) sinh(theta), v = (r - m) cosh(theta), 0 < r < 2m
 *   negative:  rho = sqrt(r^2 + 2 m r) sin(theta), v = (r + m) cos(theta),  r > 0
 */
WeylPoint schwarzschild_coords(double r, double theta, double m,
                               SchwarzschildBranch branch);

}  // namespace gravfact
