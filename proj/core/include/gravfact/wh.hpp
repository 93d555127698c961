#pragma once

#include <optional>
#include <vector>

#include "gravfact/catalog.hpp"
#include "gravfact/cauchy.hpp"
#include "gravfact/contour.hpp"
#include "gravfact/types.hpp"
#include "gravfact/weyl.hpp"

namespace gravfact {

/*
 * Canonical factorisation of a matrix symbol on an admissible contour.
 *
 * The solver works with the linear jump problem
 *
 *   Phi_-(tau) = Msym(tau) Phi_+(tau)  on Gamma,   Phi(inf) = I,
 *
 * represented as Phi = I + C gamma with an unknown density gamma at the
 * nodes. The strict factors with the plus-factor normalisation M_+(0) = I are
 *
 *   M_+(z) = Phi_+(0) Phi_+(z)^{-1},   M_-(z) = Phi_-(z) Phi_+(0)^{-1},
 *
 * and the coset representative is the limit of M_- at infinity,
 * M = Phi_+(0)^{-1} = (I + C gamma(0))^{-1}.
 */
struct FactorizationResult {
  AdmissibleContour contour;
  std::vector<Mat> symbol;   // composed symbol at the nodes
  std::vector<Mat> density;  // collocation unknown gamma at the nodes
  Mat Mstrict;               // (I + C gamma(0))^{-1}, strict normalisation
  MatR M;                    // reported representative: sign-fixed, symmetrised
  double sign = 1.0;         // recorded overall sign applied to Mstrict
  double jump_residual = 0.0;
  double asymmetry = 0.0;    // max of transpose defect / imaginary part of Mstrict
  // Collocation-operator diagnostics; NaN on the diagonal fast path, which
  // has no collocation matrix.
  double sigma_min = 0.0;
  double cond = 0.0;

  int dims() const { return static_cast<int>(symbol.front().rows()); }

  // C gamma (z) entrywise, z off the curve.
  Mat cauchy_density(cplx z) const;
  // Strict factors off the curve: plus_at valid inside, minus_at outside.
  Mat plus_at(cplx z) const;
  Mat minus_at(cplx z) const;
  // Boundary values of the strict factors at the nodes.
  std::vector<Mat> plus_boundary() const;
  std::vector<Mat> minus_boundary() const;
};

enum class ExistenceVerdict { Canonical, Borderline, NoCanonical };

struct ExistenceReport {
  ExistenceVerdict verdict;
  double sigma_min;         // finer resolution (2N)
  double sigma_min_coarse;  // resolution N
  std::optional<DegreeVerdict> criterion;
};

// Collocation solve from explicit symbol samples at the contour nodes
// (shared backend; also the entry point for perturbation studies).
FactorizationResult factorize_samples(const AdmissibleContour& g,
                                      const std::vector<Mat>& symbol,
                                      InvolutionRule rule = InvolutionRule::Transpose);

/*
 * General solver: composes the family with the spectral curve at p, solves the
 * jump problem at resolution N, and refines once to rule out a vanishing
 * sigma_min. Throws no_canonical_error when the collocation operator loses
 * injectivity under refinement (existence failure).
 */
FactorizationResult factorize_general(const MonodromyFamily& f, const WeylPoint& p,
                                      const AdmissibleContour& g, int N = 256);

// Diagonal fast path: entrywise scalar factorisation; M = diag of the
// plus-factor values at 0, renormalised to det 1.
FactorizationResult factorize_diagonal(const MonodromyFamily& f, const WeylPoint& p,
                                       const AdmissibleContour& g);

// Max node residual of Msym - M_- M_+ from freshly composed symbol samples;
// also checks M_+(0) = I.
double verify_factorization(const FactorizationResult& r, const MonodromyFamily& f,
                            const WeylPoint& p);

// Max node residual of Msym(tau) - X^T(-lambda/tau) M X(tau), X the
// normalised plus factor (2x2, transpose involution).
double symmetric_form_check(const FactorizationResult& r, const MonodromyFamily& f,
                            const WeylPoint& p);

// sigma_min of the collocation operator at resolutions N and 2N; NoCanonical
// when it decays toward zero under refinement.
ExistenceReport injectivity_diagnostic(const MonodromyFamily& f, const WeylPoint& p,
                                       const AdmissibleContour& g, int N);

/*
 * Kerr existence boundary. With tau1, tau2 the minus-branch roots of the
 * spectral curve at omega = +-c, c = sqrt(m^2 - a^2), the factorisation fails
 * exactly on the zero locus of
 *
 *   -16 (m-v)^2 tau1^2 tau2^2
 *   + rho^2 (1 + 4 tau1^3 tau2 + 6 tau1^2 tau2^2 + 4 tau1 tau2^3 + tau1^4 tau2^4)
 *   - 8 rho (m-v) tau1 tau2 (-tau1 - tau2 + tau1^2 tau2 + tau1 tau2^2),
 *
 * which is the Weyl-coordinate image of the ergosurface u(y) = sqrt(m^2 - a^2 y^2).
 */
double kerr_ergosurface_residual(const WeylPoint& p, double m, double a);

struct ErgoSample {
  double y;
  double u;
  double rho;  // 0 at the axis endpoints y = +-1
  double v;
};

// Trace of the existence-failure curve by root-finding the residual along
// prolate rays; `samples` points with y uniformly spaced on [-1, 1].
std::vector<ErgoSample> ergosurface_trace(double m, double a, int samples);

}  // namespace gravfact
