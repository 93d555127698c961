#include "gravfact/cauchy.hpp"

#include <cmath>
#include <utility>

#include <unsupported/Eigen/FFT>

namespace gravfact {

BoundarySamples::BoundarySamples(AdmissibleContour g, VecC vals)
    : contour(std::move(g)), values(std::move(vals)) {
  if (values.size() != contour.N())
    throw parameter_error("BoundarySamples: value count must equal contour.N");
}

BoundarySamples BoundarySamples::from_function(
    const AdmissibleContour& g, const std::function<cplx(cplx)>& f) {
  VecC vals(g.N());
  for (int j = 0; j < g.N(); ++j) vals(j) = f(g.node(j));
  return BoundarySamples(g, std::move(vals));
}

cplx cauchy_integral(const BoundarySamples& f, cplx z) {
  const AdmissibleContour& g = f.contour;
  if (g.contains(z) == PointSide::OnCurve)
    throw domain_error("cauchy_integral: z lies on the contour");
  cplx acc(0.0, 0.0);
  for (int j = 0; j < g.N(); ++j)
    acc += f.values(j) * g.deriv(j) / (g.node(j) - z);
  return acc * g.dtheta() / cplx(0.0, 2.0 * kPi);
}

VecC spectral_derivative(const VecC& f) {
  const int N = static_cast<int>(f.size());
  Eigen::FFT<double> fft;
  std::vector<cplx> in(f.data(), f.data() + N), freq(N), out(N);
  fft.fwd(freq, in);
  for (int k = 0; k < N; ++k) {
    int mode = k <= N / 2 ? k : k - N;
    if (N % 2 == 0 && k == N / 2) mode = 0;  // drop the Nyquist mode
    freq[static_cast<size_t>(k)] *= cplx(0.0, static_cast<double>(mode));
  }
  fft.inv(out, freq);
  VecC d(N);
  for (int k = 0; k < N; ++k) d(k) = out[static_cast<size_t>(k)];
  return d;
}

Mat spectral_derivative_matrix(int N) {
  // Trigonometric differentiation matrix on the uniform grid (even N):
  // D_{jk} = (-1)^{j-k}/2 cot((j-k) pi / N), D_{jj} = 0.
  Mat D = Mat::Zero(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) {
      if (j == k) continue;
      const int d = j - k;
      const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
      D(j, k) = 0.5 * sgn / std::tan(d * kPi / N);
    }
  return D;
}

VecC singular_S(const BoundarySamples& f) {
  const AdmissibleContour& g = f.contour;
  const int N = g.N();
  const VecC df = spectral_derivative(f.values);
  const cplx pref = g.dtheta() / cplx(0.0, kPi);
  VecC out(N);
  for (int j = 0; j < N; ++j) {
    cplx acc = df(j);
    for (int k = 0; k < N; ++k) {
      if (k == j) continue;
      acc += (f.values(k) - f.values(j)) / (g.node(k) - g.node(j)) * g.deriv(k);
    }
    out(j) = f.values(j) + pref * acc;
  }
  return out;
}

Mat singular_S_matrix(const AdmissibleContour& g) {
  const int N = g.N();
  const cplx pref = g.dtheta() / cplx(0.0, kPi);
  Mat S = spectral_derivative_matrix(N) * pref;
  for (int j = 0; j < N; ++j) {
    cplx diag(0.0, 0.0);
    for (int k = 0; k < N; ++k) {
      if (k == j) continue;
      const cplx K = g.deriv(k) / (g.node(k) - g.node(j));
      S(j, k) += pref * K;
      diag -= pref * K;
    }
    S(j, j) += 1.0 + diag;
  }
  return S;
}

std::pair<VecC, VecC> projections(const BoundarySamples& f) {
  const VecC Sf = singular_S(f);
  return {(f.values + Sf) / 2.0, (f.values - Sf) / 2.0};
}

std::pair<VecC, int> continuous_log(const BoundarySamples& f) {
  const int N = f.contour.N();
  double maxmod = 0.0;
  for (int j = 0; j < N; ++j) maxmod = std::max(maxmod, std::abs(f.values(j)));
  VecC lg(N);
  double arg = std::arg(f.values(0));
  for (int j = 0; j < N; ++j) {
    const cplx val = f.values(j);
    if (!(std::abs(val) > 1e-13 * std::max(1.0, maxmod)))
      throw numerical_error("continuous_log: symbol vanishes at a node");
    if (j > 0) {
      const double jump = std::arg(val / f.values(j - 1));
      if (std::abs(jump) > 3.0)
        throw numerical_error(
            "continuous_log: argument jump too large (contour under-resolved)");
      arg += jump;
    }
    lg(j) = cplx(std::log(std::abs(val)), arg);
  }
  const double closing = std::arg(f.values(0) / f.values(N - 1));
  if (std::abs(closing) > 3.0)
    throw numerical_error(
        "continuous_log: argument jump too large (contour under-resolved)");
  const double total = arg + closing - std::arg(f.values(0));
  const int winding = static_cast<int>(std::lround(total / (2.0 * kPi)));
  return {std::move(lg), winding};
}

int winding_number(const BoundarySamples& f) { return continuous_log(f).second; }

VecC ScalarFactorization::plus_boundary() const {
  return projections(logdensity).first.array().exp();
}

VecC ScalarFactorization::minus_boundary() const {
  return projections(logdensity).second.array().exp();
}

cplx ScalarFactorization::plus_at(cplx z) const {
  if (logdensity.contour.contains(z) != PointSide::Inside)
    throw domain_error("ScalarFactorization::plus_at: z must lie inside");
  return std::exp(cauchy_integral(logdensity, z));
}

cplx ScalarFactorization::minus_at(cplx z) const {
  if (logdensity.contour.contains(z) != PointSide::Outside)
    throw domain_error("ScalarFactorization::minus_at: z must lie outside");
  return std::exp(-cauchy_integral(logdensity, z));
}

double ScalarFactorization::reconstruction_residual() const {
  const auto [pl, mi] = projections(logdensity);
  double res = 0.0;
  for (int j = 0; j < logdensity.contour.N(); ++j) {
    const cplx rec = std::exp(pl(j)) * std::exp(mi(j));
    res = std::max(res, std::abs(std::exp(logdensity.values(j)) - rec));
  }
  return res;
}

ScalarFactorization scalar_factorize(const BoundarySamples& g) {
  auto [lg, winding] = continuous_log(g);
  if (winding != 0)
    throw no_canonical_error(
        "scalar_factorize: nonzero winding (scalar index != 0), no canonical "
        "factorisation");
  BoundarySamples logdensity(g.contour, std::move(lg));
  const cplx pz = std::exp(cauchy_integral(logdensity, cplx(0.0, 0.0)));
  return ScalarFactorization{std::move(logdensity), pz, winding};
}

}  // namespace gravfact
