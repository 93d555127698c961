#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gravfact/contour.hpp"
#include "gravfact/types.hpp"
#include "gravfact/weyl.hpp"

namespace gravfact {

/*
 * A pair (M, X): coset field and Lax-system solution X(tau, rho, v). dX_tau
 * is the analytic tau-derivative when available (null: finite differences,
 * with correspondingly looser achievable invariance residuals).
 */
struct LaxPair {
  int lambda = 1;
  bool diagonal_flag = false;
  std::function<MatR(double, double)> M;
  std::function<Mat(cplx, double, double)> X;
  std::function<Mat(cplx, double, double)> dX_tau;
};

/*
 * The 1-form
 *
 *   G_{M,X} = tau dM + (1/rho)[(lambda - tau^2) drho + 2 lambda tau dv] M (dX/dtau) X^{-1}
 *             + ((tau^2 + lambda)/tau) M (dX/drho drho + dX/dv dv) X^{-1} ,
 *
 * returned as its (drho, dv) coefficient matrices. tau-independent exactly
 * when the pair solves the field equations + linear system.
 */
std::pair<Mat, Mat> G_expression(const LaxPair& pair, cplx tau, const WeylPoint& p);

// Max over 32 contour samples of d/dtau applied to both components of G
// (product-rule form when dX_tau is provided, tangential finite differences
// otherwise).
double tau_invariance_residual(const LaxPair& pair, const AdmissibleContour& g,
                               const WeylPoint& p);

/*
 * Diagonal generators from spectral-curve roots tau_i = phi^branch(omega_i):
 * with tau~_i = -lambda/tau_i,
 *
 *   R_i(tau) = (tau_i/tau~_i) (tau - tau~_i)/(tau - tau_i) ,  N_i = tau~_i/tau_i ,
 *
 * the pair ( diag(prod N_i^alpha, prod N_i^-alpha),
 *            diag(prod R_i^alpha, prod R_i^-alpha) ) is tau-invariant on
 * contours avoiding all tau_i, tau~_i. Powers are principal; non-integer
 * alpha is meaningful only where the principal branch stays single-valued.
 */
LaxPair generator_RN(const std::vector<double>& omegas, double alpha,
                     const WeylPoint& p, int branch = -1);

// (M_a M_b, X_b X_a): new pair by the product construction. Commutation
// hypotheses hold trivially for two diagonal pairs; otherwise they are
// sampled numerically (threshold 1e-9) and failure raises parameter_error.
LaxPair product_solution(const LaxPair& a, const LaxPair& b);

/*
 * Catalog (lambda = -1 unless noted):
 *   kasner                    M = diag((rho/2)^4, .), X = (tau^2 + 2(v/rho) tau + 1)^{+-2}
 *   kasner_canonical          M_c = diag(((rho/2) tau0)^4, .), X_c = ((tau - tau0)/tau0)^{+-4}
 *   interior_schwarzschild(m) M = diag(-tau2/tau1, -tau1/tau2)
 *   interior_flattener_1(m)   N1 = diag(-1/tau2, -tau2) with its R
 *   interior_flattener_2(m)   N2 = diag(tau1, 1/tau1) with its R
 *   einstein_rosen(a, b, k)   M_ER with the entire plus factor
 *                             log X11 = sum_n 4b e^{-ak} J_n(k rho) cos(kv + n pi/2) tau^n
 */
LaxPair catalog_pair(const std::string& name,
                     const std::map<std::string, double>& params = {});

// General Lax solution for the Kasner connection; singular at tau = 0 (not
// normalisable there), det = c1 c4 - c2 c3.
Mat kasner_general_X(double c1, double c2, double c3, double c4, cplx tau,
                     const WeylPoint& p);

}  // namespace gravfact
