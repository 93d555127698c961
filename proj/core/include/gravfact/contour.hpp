#pragma once

#include <string>
#include <vector>

#include "gravfact/types.hpp"

namespace gravfact {

enum class PointSide { Inside, Outside, OnCurve };

/*
 * Admissible contour: simple closed curve around 0, invariant under the
 * involution tau -> -lambda/tau, parametrized as
 *
 *   tau(theta) = exp(s(theta) + i theta),  theta_j = 2 pi j / N.
 *
 * The profile satisfies s(pi - theta) = -s(theta) for lambda = +1 and
 * s(-theta) = -s(theta) for lambda = -1, which makes the invariance exact:
 * the involution permutes the node set.
 *
 * Profiles: "circle" (s = 0) and "bump" (s = -c cos(theta) for lambda = +1,
 * s = c sin(theta) for lambda = -1).
 */
class AdmissibleContour {
 public:
  static AdmissibleContour unit_circle(int lambda, int N);
  static AdmissibleContour bump_contour(int lambda, double c, int N);

  // {"lambda": +-1, "kind": "circle"|"bump", "c": real, "N": even int}
  static AdmissibleContour from_json(const std::string& text);
  std::string to_json() const;

  int lambda() const { return lambda_; }
  int N() const { return N_; }
  const std::string& kind() const { return kind_; }
  double c() const { return c_; }
  double dtheta() const { return 2.0 * kPi / N_; }

  cplx node(int j) const { return nodes_[static_cast<size_t>(j)]; }
  // tau'(theta_j) = (s'(theta_j) + i) tau(theta_j)
  cplx deriv(int j) const { return derivs_[static_cast<size_t>(j)]; }
  const std::vector<cplx>& nodes() const { return nodes_; }
  const std::vector<cplx>& derivs() const { return derivs_; }

  double profile(double theta) const;
  double profile_deriv(double theta) const;

  // Node index of i_lambda(tau_j); exact by the profile functional equation.
  int involution_index(int j) const;

  // Same family, different resolution.
  AdmissibleContour resampled(int N) const;

  // Local OnCurve tolerance near node j: 10 x |tau'(theta_j)| dtheta.
  double on_curve_tol(int j) const;

  // Winding-number / radial classification with an OnCurve band of
  // 10 local node spacings.
  PointSide contains(cplx z) const;

  // Distance from z to the curve (fine sampling; used for diagnostics).
  double distance(cplx z) const;

  double arc_length() const;

 private:
  AdmissibleContour(int lambda, int N, std::string kind, double c);

  int lambda_;
  int N_;
  std::string kind_;
  double c_;
  std::vector<cplx> nodes_;
  std::vector<cplx> derivs_;
};

/*
 * Which of the four Schwarzschild contour classes g realizes for
 * roots tau1, tau2 (both real negative in the physical range):
 *   1: tau1, tau2 inside    2: tau2 inside, tau1 outside
 *   3: both outside         4: tau1 inside, tau2 outside
 */
int classify_schwarzschild_case(const AdmissibleContour& g, double tau1,
                                double tau2);

}  // namespace gravfact
