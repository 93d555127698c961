#pragma once

#include <functional>
#include <vector>

#include "gravfact/contour.hpp"
#include "gravfact/types.hpp"

namespace gravfact {

// Samples of a scalar function at the contour nodes.
struct BoundarySamples {
  AdmissibleContour contour;
  VecC values;

  BoundarySamples(AdmissibleContour g, VecC vals);
  static BoundarySamples from_function(const AdmissibleContour& g,
                                       const std::function<cplx(cplx)>& f);
};

/*
 * Cauchy integral  (C f)(z) = (1/2 pi i) \oint f(u)/(u - z) du  for z off the
 * curve. For z inside it continues the plus part of f; for z outside, minus
 * the minus part (which vanishes at infinity).
 */
cplx cauchy_integral(const BoundarySamples& f, cplx z);

/*
 * Singular operator  (S f)(tau) = (1/pi i) PV \int f(u)/(u - tau) du  at the
 * nodes. Discretization: regularized trapezoid
 *
 *   S f(tau_j) = f_j + (dtheta/(pi i)) [ sum_{k != j} (f_k - f_j)/(tau_k - tau_j) tau'_k
 *                                        + (df/dtheta)_j ]
 *
 * where the diagonal term (df/dtheta)_j comes from spectral differentiation,
 * and PV \oint du/(u - tau_j) = pi i on a smooth curve absorbs the f_j term.
 */
VecC singular_S(const BoundarySamples& f);

// P^{+-} = (Id +- S)/2; returns (P+f, P-f) sampled at the nodes.
std::pair<VecC, VecC> projections(const BoundarySamples& f);

// Spectral differentiation d/dtheta of periodic samples (FFT; Nyquist mode
// dropped for even N).
VecC spectral_derivative(const VecC& f);

// Dense matrices of the same discrete operators, acting on node samples.
// Used by the matrix collocation solver.
Mat singular_S_matrix(const AdmissibleContour& g);
Mat spectral_derivative_matrix(int N);

/*
 * Branch-continuous logarithm along the nodes: principal log at node 0, then
 * argument unwrapping. Throws numerical_error on a vanishing sample or an
 * argument jump large enough to indicate under-resolution.
 * Returns (log samples, winding number).
 */
std::pair<VecC, int> continuous_log(const BoundarySamples& f);

int winding_number(const BoundarySamples& f);

/*
 * Scalar canonical factorisation g = g_- g_+ with g_-(infinity) = 1:
 * g_{+-} = exp(P^{+-} log g). Requires winding 0.
 */
struct ScalarFactorization {
  BoundarySamples logdensity;  // continuous log g at the nodes
  cplx plus_at_zero;           // g_+(0) = exp((1/2 pi i) \oint log g(u)/u du)
  int winding;                 // always 0 on successful construction

  // Boundary values at the nodes.
  VecC plus_boundary() const;
  VecC minus_boundary() const;
  // Analytic continuations: plus_at valid strictly inside, minus_at strictly
  // outside the contour.
  cplx plus_at(cplx z) const;
  cplx minus_at(cplx z) const;

  double reconstruction_residual() const;
};

ScalarFactorization scalar_factorize(const BoundarySamples& g);

}  // namespace gravfact
