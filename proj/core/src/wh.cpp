#include "gravfact/wh.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace gravfact {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_samples(const AdmissibleContour& g, const std::vector<Mat>& symbol) {
  if (static_cast<int>(symbol.size()) != g.N())
    throw parameter_error("factorize: sample count must equal contour.N");
  const int n = static_cast<int>(symbol.front().rows());
  for (const Mat& M : symbol)
    if (M.rows() != n || M.cols() != n)
      throw parameter_error("factorize: ragged symbol samples");
}

// S gamma at the nodes, entrywise over the matrix components.
std::vector<Mat> apply_S(const AdmissibleContour& g, const std::vector<Mat>& gamma) {
  const int N = g.N();
  const int n = static_cast<int>(gamma.front().rows());
  Mat G(N, n * n);
  for (int j = 0; j < N; ++j)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) G(j, r * n + s) = gamma[static_cast<size_t>(j)](r, s);
  const Mat SG = singular_S_matrix(g) * G;
  std::vector<Mat> out(static_cast<size_t>(N), Mat(n, n));
  for (int j = 0; j < N; ++j)
    for (int r = 0; r < n; ++r)
      for (int s = 0; s < n; ++s) out[static_cast<size_t>(j)](r, s) = SG(j, r * n + s);
  return out;
}

/*
 * Collocation matrix of the jump problem. With P+- = (Id +- S)/2 acting
 * entrywise, the equation at node j reads
 *
 *   -(P- gamma)(tau_j) - Msym_j (P+ gamma)(tau_j) = Msym_j - I ,
 *
 * which decouples over the columns of gamma: one LU of size N*n serves all n
 * right-hand-side columns.
 */
Mat assemble(const AdmissibleContour& g, const std::vector<Mat>& symbol) {
  const int N = g.N();
  const int n = static_cast<int>(symbol.front().rows());
  const Mat S = singular_S_matrix(g);
  Mat A(N * n, N * n);
  for (int j = 0; j < N; ++j) {
    const Mat& Mj = symbol[static_cast<size_t>(j)];
    for (int k = 0; k < N; ++k) {
      const cplx s = S(j, k);
      const cplx id = j == k ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
      const cplx pp = (s + id) / 2.0;  // P+
      const cplx pm = (id - s) / 2.0;  // P-
      A.block(j * n, k * n, n, n) = -pp * Mj;
      A.block(j * n, k * n, n, n).diagonal().array() -= pm;
    }
  }
  return A;
}

// Deterministic power iterations for the extreme singular values, reusing the
// LU factors: inverse iteration on A^H A for sigma_min, forward for sigma_max.
std::pair<double, double> singular_extremes(const Mat& A,
                                            const Eigen::PartialPivLU<Mat>& lu) {
  const int dim = static_cast<int>(A.rows());
  VecC x(dim);
  for (int i = 0; i < dim; ++i)
    x(i) = cplx(std::cos(1.0 + i), std::sin(0.7 * i + 0.3));
  x /= x.norm();

  double inv_ratio = 0.0;
  for (int it = 0; it < 200; ++it) {
    const VecC z = lu.solve(lu.adjoint().solve(x).eval());
    const double r = z.norm();
    if (!std::isfinite(r) || r == 0.0) break;
    const bool done = it > 4 && std::abs(r - inv_ratio) < 1e-8 * r;
    inv_ratio = r;
    x = z / r;
    if (done) break;
  }
  // Rayleigh quotient of the converged vector: stable on (numerically)
  // singular matrices, where 1/sqrt(inv_ratio) is dominated by LU roundoff.
  const double sigma_min = (A * x).norm();

  VecC y(dim);
  for (int i = 0; i < dim; ++i)
    y(i) = cplx(std::sin(0.3 * i + 1.0), std::cos(1.3 * i));
  y /= y.norm();
  double ratio = 0.0;
  for (int it = 0; it < 100; ++it) {
    const VecC z = A.adjoint() * (A * y).eval();
    const double r = z.norm();
    const bool done = it > 4 && std::abs(r - ratio) < 1e-8 * r;
    ratio = r;
    y = z / r;
    if (done) break;
  }
  const double sigma_max = std::sqrt(ratio);
  return {sigma_min, sigma_max};
}

// Sign fix and symmetrisation of the strict representative; the field
// equations are invariant under M -> -M, and the reported 2x2 representative
// is taken with positive trace (the Delta > 0 branch).
void finalize(FactorizationResult& r, InvolutionRule rule) {
  const Mat& Ms = r.Mstrict;
  const int n = static_cast<int>(Ms.rows());
  double sign = 1.0;
  if (n == 2 && Ms.trace().real() < 0.0) sign = -1.0;
  Mat fixed = sign * Ms;
  double asym = fixed.imag().cwiseAbs().maxCoeff();
  if (rule == InvolutionRule::Transpose) {
    asym = std::max(asym, (fixed - fixed.transpose()).cwiseAbs().maxCoeff() / 2.0);
    fixed = (fixed + fixed.transpose()).eval() / 2.0;
  }
  r.sign = sign;
  r.asymmetry = asym;
  r.M = fixed.real();
}

double collocation_sigma_min(const MonodromyFamily& f, const WeylPoint& p,
                             const AdmissibleContour& g) {
  const std::vector<Mat> symbol = eval_on_contour(f, p, g);
  const Mat A = assemble(g, symbol);
  Eigen::PartialPivLU<Mat> lu(A);
  return singular_extremes(A, lu).first;
}

double max_jump_residual(const FactorizationResult& r) {
  const std::vector<Mat> mp = r.plus_boundary();
  const std::vector<Mat> mm = r.minus_boundary();
  double res = 0.0;
  for (size_t j = 0; j < r.symbol.size(); ++j)
    res = std::max(res,
                   (r.symbol[j] - mm[j] * mp[j]).cwiseAbs().maxCoeff());
  return res;
}

}  // namespace

Mat FactorizationResult::cauchy_density(cplx z) const {
  if (contour.contains(z) == PointSide::OnCurve)
    throw domain_error("cauchy_density: z lies on the contour");
  const int n = dims();
  Mat acc = Mat::Zero(n, n);
  for (int k = 0; k < contour.N(); ++k)
    acc += density[static_cast<size_t>(k)] * (contour.deriv(k) / (contour.node(k) - z));
  return acc * (contour.dtheta() / cplx(0.0, 2.0 * kPi));
}

Mat FactorizationResult::plus_at(cplx z) const {
  if (contour.contains(z) == PointSide::Outside)
    throw domain_error("FactorizationResult::plus_at: z must lie inside");
  const int n = dims();
  const Mat phi = Mat::Identity(n, n) + cauchy_density(z);
  return Mstrict.inverse() * phi.inverse();
}

Mat FactorizationResult::minus_at(cplx z) const {
  if (contour.contains(z) == PointSide::Inside)
    throw domain_error("FactorizationResult::minus_at: z must lie outside");
  const int n = dims();
  const Mat phi = Mat::Identity(n, n) + cauchy_density(z);
  return phi * Mstrict;
}

std::vector<Mat> FactorizationResult::plus_boundary() const {
  const int n = dims();
  const std::vector<Mat> Sg = apply_S(contour, density);
  const Mat phi0inv = Mstrict.inverse();  // Phi_+(0)
  std::vector<Mat> out(density.size());
  for (size_t j = 0; j < density.size(); ++j) {
    const Mat phi = Mat::Identity(n, n) + (density[j] + Sg[j]) / 2.0;
    out[j] = phi0inv * phi.inverse();
  }
  return out;
}

std::vector<Mat> FactorizationResult::minus_boundary() const {
  const int n = dims();
  const std::vector<Mat> Sg = apply_S(contour, density);
  std::vector<Mat> out(density.size());
  for (size_t j = 0; j < density.size(); ++j) {
    const Mat phi = Mat::Identity(n, n) - (density[j] - Sg[j]) / 2.0;
    out[j] = phi * Mstrict;
  }
  return out;
}

FactorizationResult factorize_samples(const AdmissibleContour& g,
                                      const std::vector<Mat>& symbol,
                                      InvolutionRule rule) {
  check_samples(g, symbol);
  const int N = g.N();
  const int n = static_cast<int>(symbol.front().rows());

  const Mat A = assemble(g, symbol);
  Eigen::PartialPivLU<Mat> lu(A);

  Mat rhs(N * n, n);
  for (int j = 0; j < N; ++j)
    rhs.middleRows(j * n, n) =
        symbol[static_cast<size_t>(j)] - Mat::Identity(n, n);
  const Mat U = lu.solve(rhs);
  if (!U.allFinite())
    throw numerical_error("factorize: collocation solve produced non-finite density");

  FactorizationResult r{g, symbol, {}, Mat(), MatR(), 1.0, 0.0, 0.0, kNan, kNan};
  r.density.resize(static_cast<size_t>(N));
  for (int j = 0; j < N; ++j) r.density[static_cast<size_t>(j)] = U.middleRows(j * n, n);

  const Mat phi0 = Mat::Identity(n, n) + r.cauchy_density(cplx(0.0, 0.0));
  r.Mstrict = phi0.inverse();

  const auto [smin, smax] = singular_extremes(A, lu);
  r.sigma_min = smin;
  r.cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  r.jump_residual = max_jump_residual(r);
  finalize(r, rule);
  return r;
}

FactorizationResult factorize_general(const MonodromyFamily& f, const WeylPoint& p,
                                      const AdmissibleContour& g, int N) {
  const AdmissibleContour gN = g.N() == N ? g : g.resampled(N);
  FactorizationResult r =
      factorize_samples(gN, eval_on_contour(f, p, gN), f.natural_involution);
  if (r.sigma_min < 1e-6) {
    const AdmissibleContour g2 = gN.resampled(2 * N);
    FactorizationResult r2 =
        factorize_samples(g2, eval_on_contour(f, p, g2), f.natural_involution);
    // Spectral quadrature collapses sigma_min of a genuinely non-injective
    // operator to numerical zero already at moderate N; treat that saturation
    // as fully decayed.
    if (r2.sigma_min < r.sigma_min / 2.0 || r2.sigma_min < 1e-12)
      throw no_canonical_error(
          "factorize_general: collocation operator loses injectivity under "
          "refinement (no canonical factorisation at this point)");
    return r2;
  }
  return r;
}

FactorizationResult factorize_diagonal(const MonodromyFamily& f, const WeylPoint& p,
                                       const AdmissibleContour& g) {
  const std::vector<Mat> symbol = eval_on_contour(f, p, g);
  const int N = g.N();
  const int n = static_cast<int>(symbol.front().rows());
  double scale = 0.0;
  for (const Mat& M : symbol) scale = std::max(scale, M.cwiseAbs().maxCoeff());
  for (const Mat& M : symbol) {
    Mat off = M;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw parameter_error("factorize_diagonal: symbol is not diagonal on the contour");
  }

  FactorizationResult r{g, symbol, {}, Mat(), MatR(), 1.0, 0.0, 0.0, kNan, kNan};
  r.density.assign(static_cast<size_t>(N), Mat::Zero(n, n));
  r.Mstrict = Mat::Zero(n, n);

  double jump = 0.0;
  for (int i = 0; i < n; ++i) {
    VecC vals(N);
    for (int j = 0; j < N; ++j) vals(j) = symbol[static_cast<size_t>(j)](i, i);
    const ScalarFactorization sf =
        scalar_factorize(BoundarySamples(g, std::move(vals)));
    const VecC gp = sf.plus_boundary();
    const VecC gm = sf.minus_boundary();
    for (int j = 0; j < N; ++j) {
      r.density[static_cast<size_t>(j)](i, i) = 1.0 / gp(j) - gm(j);
      jump = std::max(jump,
                      std::abs(symbol[static_cast<size_t>(j)](i, i) - gm(j) * gp(j)));
    }
    r.Mstrict(i, i) = sf.plus_at_zero;
  }

  // det M = 1 renormalisation (the entry product is the plus factor of
  // det Msym = 1 at zero, so this is a roundoff-level correction).
  cplx prod(1.0, 0.0);
  for (int i = 0; i < n; ++i) prod *= r.Mstrict(i, i);
  const cplx s = std::pow(prod, 1.0 / n);
  for (int i = 0; i < n; ++i) r.Mstrict(i, i) /= s;

  r.jump_residual = jump;
  finalize(r, f.natural_involution);
  return r;
}

double verify_factorization(const FactorizationResult& r, const MonodromyFamily& f,
                            const WeylPoint& p) {
  const std::vector<Mat> fresh = eval_on_contour(f, p, r.contour);
  const std::vector<Mat> mp = r.plus_boundary();
  const std::vector<Mat> mm = r.minus_boundary();
  double res = 0.0;
  for (size_t j = 0; j < fresh.size(); ++j)
    res = std::max(res, (fresh[j] - mm[j] * mp[j]).cwiseAbs().maxCoeff());
  const int n = r.dims();
  const Mat at0 = r.plus_at(cplx(0.0, 0.0)) - Mat::Identity(n, n);
  res = std::max(res, at0.cwiseAbs().maxCoeff());
  return res;
}

double symmetric_form_check(const FactorizationResult& r, const MonodromyFamily& f,
                            const WeylPoint& p) {
  if (r.dims() != 2 || f.natural_involution != InvolutionRule::Transpose)
    throw parameter_error(
        "symmetric_form_check: requires a 2x2 family with transpose involution");
  const std::vector<Mat> fresh = eval_on_contour(f, p, r.contour);
  const std::vector<Mat> X = r.plus_boundary();
  double res = 0.0;
  for (int j = 0; j < r.contour.N(); ++j) {
    const int k = r.contour.involution_index(j);
    const Mat rec = X[static_cast<size_t>(k)].transpose() * r.Mstrict *
                    X[static_cast<size_t>(j)];
    res = std::max(res, (fresh[static_cast<size_t>(j)] - rec).cwiseAbs().maxCoeff());
  }
  return res;
}

ExistenceReport injectivity_diagnostic(const MonodromyFamily& f, const WeylPoint& p,
                                       const AdmissibleContour& g, int N) {
  const AdmissibleContour g1 = g.N() == N ? g : g.resampled(N);
  const AdmissibleContour g2 = g1.resampled(2 * N);
  const double s1 = collocation_sigma_min(f, p, g1);
  const double s2 = collocation_sigma_min(f, p, g2);
  ExistenceReport rep{ExistenceVerdict::Borderline, s2, s1, std::nullopt};
  if (f.degrees) rep.criterion = degree_criterion(*f.degrees);
  if (s2 < 1e-6 && (s2 < s1 / 2.0 || s2 < 1e-12))
    rep.verdict = ExistenceVerdict::NoCanonical;
  else if (std::min(s1, s2) >= 1e-6)
    rep.verdict = ExistenceVerdict::Canonical;
  return rep;
}

double kerr_ergosurface_residual(const WeylPoint& p, double m, double a) {
  if (!(m > a && a > 0.0))
    throw parameter_error("kerr_ergosurface_residual: m > a > 0 required");
  const double c = std::sqrt(m * m - a * a);
  const cplx t1c = phi_roots(cplx(c, 0.0), p).second;
  const cplx t2c = phi_roots(cplx(-c, 0.0), p).second;
  const double t1 = t1c.real();
  const double t2 = t2c.real();
  const double rho = p.rho, v = p.v;
  const double t12 = t1 * t2;
  return -16.0 * (m - v) * (m - v) * t12 * t12 +
         rho * rho *
             (1.0 + 4.0 * t1 * t1 * t1 * t2 + 6.0 * t12 * t12 +
              4.0 * t1 * t2 * t2 * t2 + t12 * t12 * t12 * t12) -
         8.0 * rho * (m - v) * t12 * (-t1 - t2 + t1 * t1 * t2 + t1 * t2 * t2);
}

std::vector<ErgoSample> ergosurface_trace(double m, double a, int samples) {
  if (!(m > a && a > 0.0))
    throw parameter_error("ergosurface_trace: m > a > 0 required");
  if (samples < 2) throw parameter_error("ergosurface_trace: samples >= 2 required");
  const double c = std::sqrt(m * m - a * a);
  std::vector<ErgoSample> out;
  out.reserve(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double y = -1.0 + 2.0 * k / (samples - 1);
    if (std::abs(std::abs(y) - 1.0) < 1e-14) {
      // Axis endpoints: the curve meets rho = 0 at u = c.
      out.push_back(ErgoSample{y, c, 0.0, c * y});
      continue;
    }
    auto resid = [&](double u) {
      return kerr_ergosurface_residual(weyl_from_prolate(u, y, c), m, a);
    };
    // Bracket the outermost sign change along the prolate ray, then bisect.
    const double lo0 = c * (1.0 + 1e-12) + 1e-12;
    const double hi0 = m + a;
    const int scan = 512;
    double lo = 0.0, hi = 0.0;
    bool found = false;
    double uprev = hi0, fprev = resid(hi0);
    for (int i = scan - 1; i >= 0; --i) {
      const double u = lo0 + (hi0 - lo0) * i / scan;
      const double fu = resid(u);
      if (fu == 0.0) {
        lo = hi = u;
        found = true;
        break;
      }
      if (fu * fprev < 0.0) {
        lo = u;
        hi = uprev;
        found = true;
        break;
      }
      uprev = u;
      fprev = fu;
    }
    if (!found)
      throw numerical_error("ergosurface_trace: no sign change along the ray at y=" +
                            std::to_string(y));
    double flo = resid(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = (lo + hi) / 2.0;
      const double fm = resid(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (fm * flo < 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    const double u = (lo + hi) / 2.0;
    const WeylPoint p = weyl_from_prolate(u, y, c);
    out.push_back(ErgoSample{y, u, p.rho, p.v});
  }
  return out;
}

}  // namespace gravfact
