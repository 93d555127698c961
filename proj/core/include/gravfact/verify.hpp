#pragma once

#include <functional>

#include "gravfact/grid.hpp"
#include "gravfact/types.hpp"
#include "gravfact/weyl.hpp"

namespace gravfact {

// Components of the flat connection A = M^{-1} dM on a grid; traceless to
// discretization error since det M = 1.
struct ConnectionGrids {
  GridSpec grid;
  std::vector<MatR> A_rho, A_v;  // index i * n_v + j
};

// Centered second-order differences, one-sided at the edges.
ConnectionGrids connection_A(const CosetGrid& Mg);

// Exact-derivative overload for closed-form catalog fields.
ConnectionGrids connection_A(const GridSpec& g,
                             const std::function<MatR(double, double)>& M,
                             const std::function<MatR(double, double)>& dM_rho,
                             const std::function<MatR(double, double)>& dM_v);

/*
 * drho^dv coefficient of d(rho * A), up to overall sign:
 *
 *   *A = -lambda A_rho dv + A_v drho
 *   d(rho *A) = -[ lambda d_rho(rho A_rho) + rho d_v A_v ] drho^dv ,
 *
 * reported as the max-abs matrix entry per interior grid point (edges zero).
 */
MatR field_equation_residual(const CosetGrid& Mg, int lambda);

// Pointwise variant on a local 5-point stencil with step h (the grids are not
// needed); used for refinement studies at small h.
double field_equation_residual_at(const std::function<MatR(double, double)>& M,
                                  double rho, double v, int lambda, double h);

// Residual of dA + A^A = 0: d_rho A_v - d_v A_rho + [A_rho, A_v], max-abs
// entry per interior point.
MatR zero_curvature_residual(const ConnectionGrids& A);

/*
 * Residual of the linear system tau (dX + A X) = *dX along the spectral curve
 * tau = phi_omega^branch(rho, v), with total (rho, v)-derivatives through the
 * chain rule in tau:
 *
 *   r_rho = tau (D_rho X + A_rho X) - D_v X
 *   r_v   = tau (D_v X + A_v X) + lambda D_rho X .
 *
 * Total derivatives by Richardson-extrapolated central differences
 * (h = 1e-5 relative). Returns the max-abs entry over both components.
 */
double lax_residual(const std::function<Mat(cplx, double, double)>& X,
                    const std::function<MatR(double, double)>& A_rho,
                    const std::function<MatR(double, double)>& A_v, double omega,
                    int branch, const WeylPoint& p);

}  // namespace gravfact
