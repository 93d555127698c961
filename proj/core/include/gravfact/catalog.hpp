#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gravfact/contour.hpp"
#include "gravfact/types.hpp"
#include "gravfact/weyl.hpp"

namespace gravfact {

enum class InvolutionRule { Transpose, Identity };

// Degrees of the polynomial entries p_ij in a rational 2x2 symbol p/q.
struct DegreeData {
  int n;
  int k11;
  int k12;
  int k22;
  int N1() const { return std::max(k11, k12); }
  int N2() const { return std::max(k12, k22); }
};

enum class DegreeVerdict { CanonicalAlways, CurveExceptional, Reducible };

DegreeVerdict degree_criterion(const DegreeData& d);

/*
 * A parametrized monodromy family omega -> M(omega) with det M = 1 and
 * M = M^natural, together with its tau-plane pole bookkeeping.
 */
struct MonodromyFamily {
  std::string name;
  int lambda = 1;
  int dims = 2;
  std::map<std::string, double> params;
  std::function<Mat(cplx)> eval;
  // tau-plane singular points at a given Weyl point (poles of the composed
  // symbol and their involution images).
  std::function<std::vector<cplx>(const WeylPoint&)> poles;
  InvolutionRule natural_involution = InvolutionRule::Transpose;
  std::optional<DegreeData> degrees;
  bool diagonal = false;
  // Branch-tracked evaluation along an ordered closed path of omega values;
  // set for families whose entries need branch continuation (attractor cube
  // root). Null for single-valued families.
  std::function<std::vector<Mat>(const std::vector<cplx>&)> eval_path;

  WeylPoint point(double rho, double v) const { return WeylPoint(rho, v, lambda); }
};

/*
 * Builtins: identity, schwarzschild(m[,lambda]), kerr(m,a),
 * kasner_power([exponent, lambda=-1]), einstein_rosen(a,b,k),
 * schwarzschild_deformed(m,xi), attractor(h1,h2,Q,P).
 */
MonodromyFamily builtin(const std::string& name,
                        const std::map<std::string, double>& params = {});

const std::vector<std::string>& builtin_names();

// From JSON {"name": ..., "params": {...}}.
MonodromyFamily family_from_json(const std::string& text);

Mat generalized_transpose(const Mat& m, InvolutionRule rule);

// Symbol samples at the contour nodes, i.e. the composition with the
// spectral curve; validates poles off the curve and det = 1 per node.
std::vector<Mat> eval_on_contour(const MonodromyFamily& f, const WeylPoint& p,
                                 const AdmissibleContour& g);

// Schwarzschild roots tau1 = phi^-(m), tau2 = phi^-(-m) for lambda = +1 and
// the interior roots (plus branch) for lambda = -1.
std::pair<double, double> schwarzschild_tau12(const WeylPoint& p, double m);

/*
 * Daniele-Khrapkov reduction of the deformed Schwarzschild symbol at a
 * spectral point: M_{rho,v}(tau) = Sigma D Sigma^{-1} J with
 * Sigma = [[1,1],[R,-R]], R = (omega+m)/(omega-m),
 * D = diag(e^{xi/omega}, -e^{-xi/omega}), J = antidiag(1,1).
 */
std::tuple<Mat, Mat, Mat> daniele_khrapkov_split(const MonodromyFamily& f,
                                                 cplx tau, const WeylPoint& p);

}  // namespace gravfact
