#include "gravfact/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

namespace gravfact {

AdmissibleContour::AdmissibleContour(int lambda, int N, std::string kind,
                                     double c)
    : lambda_(lambda), N_(N), kind_(std::move(kind)), c_(c) {
  if (lambda_ != 1 && lambda_ != -1)
    throw parameter_error("contour: lambda must be +1 or -1");
  if (N_ < 8 || N_ % 2 != 0)
    throw parameter_error("contour: N must be even and >= 8");
  if (kind_ == "bump" && !(std::abs(c_) < 3.0))
    throw parameter_error("bump contour: |c| < 3 required to keep the curve simple");
  nodes_.resize(static_cast<size_t>(N_));
  derivs_.resize(static_cast<size_t>(N_));
  const double h = dtheta();
  for (int j = 0; j < N_; ++j) {
    const double th = h * j;
    const cplx tau = std::exp(cplx(profile(th), th));
    nodes_[static_cast<size_t>(j)] = tau;
    derivs_[static_cast<size_t>(j)] = cplx(profile_deriv(th), 1.0) * tau;
  }
}

double AdmissibleContour::profile(double theta) const {
  if (kind_ == "circle") return 0.0;
  return lambda_ == 1 ? -c_ * std::cos(theta) : c_ * std::sin(theta);
}

double AdmissibleContour::profile_deriv(double theta) const {
  if (kind_ == "circle") return 0.0;
  return lambda_ == 1 ? c_ * std::sin(theta) : c_ * std::cos(theta);
}

AdmissibleContour AdmissibleContour::unit_circle(int lambda, int N) {
  return AdmissibleContour(lambda, N, "circle", 0.0);
}

AdmissibleContour AdmissibleContour::bump_contour(int lambda, double c, int N) {
  return AdmissibleContour(lambda, N, "bump", c);
}

AdmissibleContour AdmissibleContour::resampled(int N) const {
  return AdmissibleContour(lambda_, N, kind_, c_);
}

AdmissibleContour AdmissibleContour::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw parameter_error(std::string("contour JSON parse failure: ") + e.what());
  }
  const int lambda = j.at("lambda").get<int>();
  const std::string kind = j.value("kind", std::string("circle"));
  const int N = j.value("N", 256);
  if (kind == "circle") return unit_circle(lambda, N);
  if (kind == "bump") return bump_contour(lambda, j.at("c").get<double>(), N);
  throw parameter_error("contour JSON: kind must be \"circle\" or \"bump\"");
}

std::string AdmissibleContour::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda_;
  j["kind"] = kind_;
  j["c"] = c_;
  j["N"] = N_;
  return j.dump();
}

int AdmissibleContour::involution_index(int j) const {
  // lambda=+1: -1/tau(theta) = tau(pi - theta); lambda=-1: 1/tau(theta) = tau(-theta).
  const int half = N_ / 2;
  int k = lambda_ == 1 ? half - j : -j;
  k %= N_;
  if (k < 0) k += N_;
  return k;
}

double AdmissibleContour::on_curve_tol(int j) const {
  return 10.0 * std::abs(deriv(j)) * dtheta();
}

double AdmissibleContour::distance(cplx z) const {
  // Fine sampling; adequate against the coarse 10-local-spacings band.
  const int M = 8 * N_;
  const double h = 2.0 * kPi / M;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < M; ++k) {
    const double th = h * k;
    const cplx tau = std::exp(cplx(profile(th), th));
    best = std::min(best, std::abs(z - tau));
  }
  return best;
}

PointSide AdmissibleContour::contains(cplx z) const {
  if (z == cplx(0.0, 0.0)) return PointSide::Inside;
  // OnCurve band: distance below 10 local node spacings.
  const int M = 8 * N_;
  const double h = 2.0 * kPi / M;
  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k < M; ++k) {
    const double th = h * k;
    const cplx tau = std::exp(cplx(profile(th), th));
    const double d = std::abs(z - tau);
    if (d < best) {
      best = d;
      best_theta = th;
    }
  }
  const double local_speed =
      std::abs(cplx(profile_deriv(best_theta), 1.0)) * std::exp(profile(best_theta));
  if (best < 10.0 * local_speed * dtheta()) return PointSide::OnCurve;
  // The curve is star-shaped about 0 (arg tau = theta), so the radial
  // comparison along arg z is an exact classification.
  const double alpha = std::arg(z);
  return std::log(std::abs(z)) < profile(alpha) ? PointSide::Inside
                                                : PointSide::Outside;
}

double AdmissibleContour::arc_length() const {
  double L = 0.0;
  for (int j = 0; j < N_; ++j) L += std::abs(deriv(j));
  return L * dtheta();
}

int classify_schwarzschild_case(const AdmissibleContour& g, double tau1,
                                double tau2) {
  if (tau1 == 0.0 || tau2 == 0.0)
    throw parameter_error("classify_schwarzschild_case: roots must be nonzero");
  const cplx t1(tau1, 0.0), t2(tau2, 0.0);
  const cplx points[4] = {t1, t2, -1.0 / t1, -1.0 / t2};
  PointSide side[4];
  for (int i = 0; i < 4; ++i) {
    side[i] = g.contains(points[i]);
    if (side[i] == PointSide::OnCurve)
      throw contour_error(
          "classify_schwarzschild_case: a root or its involution image lies on "
          "the contour");
  }
  const bool in1 = side[0] == PointSide::Inside;
  const bool in2 = side[1] == PointSide::Inside;
  if (in1 && in2) return 1;
  if (!in1 && in2) return 2;
  if (!in1 && !in2) return 3;
  return 4;
}

}  // namespace gravfact
