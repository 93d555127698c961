#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "gravfact/grid.hpp"
#include "gravfact/types.hpp"
#include "gravfact/verify.hpp"

namespace gravfact {

/*
 * Metric data of the 4D line element
 *
 *   ds4^2 = -lambda Delta (dy + B dphi)^2
 *           + Delta^{-1} ( e^psi (sigma drho^2 + epsilon dv^2) + rho^2 dphi^2 )
 *
 * over a Weyl-coordinate grid. Delta and Btilde come algebraically from M;
 * B and psi from line integration (anchored at a base point).
 */
struct SpacetimeFields {
  GridSpec grid;
  int lambda = 1, sigma = 1, epsilon = 1;
  MatR Delta, Btilde, B, psi;  // (n_rho x n_v), entry (i, j) at (rho_i, v_j)
  double b_closure = 0.0;      // recorded loop-closure residuals
  double psi_closure = 0.0;
};

struct MetricSample {
  double g_tt, g_tphi, g_phiphi, g_rhorho, g_vv;
};

// Delta = 1/M22, Btilde = M12/M22 from M = [[Delta + Bt^2/Delta, Bt/Delta],
// [Bt/Delta, 1/Delta]]. Throws signature_error when M22 <= 0.
std::pair<MatR, MatR> fields_from_M(const CosetGrid& Mg);

/*
 * B from path integration of rho * dBtilde = Delta^2 dB, i.e.
 *
 *   d_rho B = (rho/Delta^2) d_v Btilde ,  d_v B = -lambda (rho/Delta^2) d_rho Btilde
 *
 * (star action *drho = -lambda dv, *dv = drho applied to dBtilde). Spine along
 * rho at the base v-row, then v-columns; B(base) = 0; max cell-circulation
 * closure residual reported through *closure.
 */
MatR integrate_B(const GridSpec& g, const MatR& Delta, const MatR& Btilde,
                 int lambda, std::pair<int, int> base, double* closure = nullptr);

// psi from d_rho psi = (rho/4) Tr(A_rho^2 - lambda A_v^2),
// d_v psi = (rho/2) Tr(A_rho A_v); grid-difference path integration with
// mixed-partial consistency check (reported through *closure).
MatR integrate_psi(const ConnectionGrids& A, int lambda, std::pair<int, int> base,
                   double* closure = nullptr);

// High-accuracy variant with exact connection evaluators: the same 1-form
// integrated by composite Simpson with `panels` subintervals per grid step.
MatR integrate_psi(const GridSpec& g,
                   const std::function<MatR(double, double)>& A_rho,
                   const std::function<MatR(double, double)>& A_v, int lambda,
                   std::pair<int, int> base, int panels = 16);

// Path integration of an exact closed 1-form w_rho drho + w_v dv from the
// base node (value 0 there), Simpson-subsampled along grid lines.
MatR integrate_form(const GridSpec& g,
                    const std::function<double(double, double)>& w_rho,
                    const std::function<double(double, double)>& w_v,
                    std::pair<int, int> base, int panels = 16);

MetricSample metric_components(const SpacetimeFields& f, int i, int j);

/*
 * Closed-form reference catalog (oracle fields for the acceptance tests):
 *   schwarzschild_exterior(m)                lambda=+1
 *   kasner()                                 lambda=-1, sigma=-1
 *   einstein_rosen(a, b, k)                  lambda=-1
 *   deformed_kasner(a, b)                    lambda=-1 (k = 1)
 *   deformed_schwarzschild_first_order(m, xi) lambda=+1, Delta/B to O(xi^2)
 */
SpacetimeFields reference_solution(const std::string& name,
                                   const std::map<std::string, double>& params,
                                   const GridSpec& g);

// J_0 / J_1 via the contour representation
// J_n(x) = (1/2 pi i) \oint e^{x (z - 1/z)/2} z^{-n-1} dz  on the unit circle.
double bessel_J(int order, double x);
// General non-negative integer order (same quadrature; used by the
// Einstein-Rosen plus-factor series).
double bessel_Jn(int order, double x);

// Ward's 2x2 block for the diagonal (B = Btilde = 0) sector:
// g = diag(-Delta/rho, rho/Delta), det g = -1.
MatR ward_g_matrix(double Delta, double rho);

// CSV "rho,v,Delta,Btilde,B,psi", 17 significant digits, rows ordered v-major
// (outer v, inner rho). Written to a temp file and atomically renamed.
void write_fields_csv(const std::string& path, const SpacetimeFields& f);

}  // namespace gravfact
