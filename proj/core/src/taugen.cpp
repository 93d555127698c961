#include "gravfact/taugen.hpp"

#include <cmath>

#include "gravfact/spacetime.hpp"

namespace gravfact {

namespace {

double getp(const std::map<std::string, double>& params, const std::string& key,
            double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Richardson-extrapolated central difference in a real coordinate.
template <typename F>
Mat fd_real_h(const F& f, double x0, double rel) {
  const double h = rel * std::max(1.0, std::abs(x0));
  auto D = [&](double step) -> Mat { return (f(x0 + step) - f(x0 - step)) / (2.0 * step); };
  return (4.0 * D(h / 2.0) - D(h)) / 3.0;
}

// Default step for the rho/v partials entering G: the integrand is smooth in
// both coordinates, so the Richardson truncation at 1e-4 is far below the
// 1e-8 targets while the rounding amplification eps/h stays near 1e-12.
template <typename F>
Mat fd_real(const F& f, double x0) {
  return fd_real_h(f, x0, 1e-4);
}

// Same in the complex tau-plane, along a given unit direction. The step is
// kept large relative to the evaluation noise of f (f may itself contain
// finite differences).
template <typename F>
Mat fd_tau(const F& f, cplx tau, cplx dir, double rel) {
  const cplx h = rel * std::max(1.0, std::abs(tau)) * dir;
  auto D = [&](cplx step) -> Mat { return (f(tau + step) - f(tau - step)) / (2.0 * step); };
  return (4.0 * D(h / 2.0) - D(h)) / 3.0;
}

double real_root(cplx omega, const WeylPoint& p, int branch) {
  const auto roots = phi_roots(omega, p);
  const cplx t = branch > 0 ? roots.first : roots.second;
  if (std::abs(t.imag()) > 1e-10 * (1.0 + std::abs(t.real())))
    throw domain_error("spectral-curve root is complex at this Weyl point");
  return t.real();
}

MatR require_real(const Mat& m, const char* what) {
  if (m.imag().cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw numerical_error(std::string(what) + ": non-real matrix (branch mismatch)");
  return m.real();
}

struct GParts {
  Mat M, dMr, dMv;    // coset field and its derivatives
  Mat X, Xinv;
  Mat Yt, Yr, Yv;     // (dX/dtau) X^-1, (dX/drho) X^-1, (dX/dv) X^-1
  Mat dXt;            // dX/dtau
};

GParts compute_parts(const LaxPair& pair, cplx tau, const WeylPoint& p) {
  GParts g;
  g.M = pair.M(p.rho, p.v).cast<cplx>();
  g.dMr = fd_real([&](double r) { return Mat(pair.M(r, p.v).cast<cplx>()); }, p.rho);
  g.dMv = fd_real([&](double w) { return Mat(pair.M(p.rho, w).cast<cplx>()); }, p.v);
  g.X = pair.X(tau, p.rho, p.v);
  g.Xinv = g.X.inverse();
  g.dXt = pair.dX_tau ? pair.dX_tau(tau, p.rho, p.v)
                      : fd_tau([&](cplx t) { return pair.X(t, p.rho, p.v); }, tau,
                               cplx(1.0, 0.0), 1e-5);
  g.Yt = g.dXt * g.Xinv;
  g.Yr = fd_real([&](double r) { return pair.X(tau, r, p.v); }, p.rho) * g.Xinv;
  g.Yv = fd_real([&](double w) { return pair.X(tau, p.rho, w); }, p.v) * g.Xinv;
  return g;
}

}  // namespace

std::pair<Mat, Mat> G_expression(const LaxPair& pair, cplx tau, const WeylPoint& p) {
  if (tau == cplx(0.0, 0.0))
    throw domain_error("G_expression: tau = 0 (explicit 1/tau term)");
  const GParts g = compute_parts(pair, tau, p);
  const double lam = p.lambda;
  const cplx c = (tau * tau + lam) / tau;
  const Mat Gr = tau * g.dMr + ((lam - tau * tau) / p.rho) * (g.M * g.Yt) +
                 c * (g.M * g.Yr);
  const Mat Gv = tau * g.dMv + (2.0 * lam * tau / p.rho) * (g.M * g.Yt) +
                 c * (g.M * g.Yv);
  return {Gr, Gv};
}

double tau_invariance_residual(const LaxPair& pair, const AdmissibleContour& g,
                               const WeylPoint& p) {
  if (g.lambda() != pair.lambda || p.lambda != pair.lambda)
    throw parameter_error("tau_invariance_residual: lambda mismatch");
  const int samples = 32;
  const int step = std::max(1, g.N() / samples);
  const double lam = p.lambda;
  double worst = 0.0;

  for (int j = 0; j < g.N(); j += step) {
    const cplx tau = g.node(j);
    const cplx dir = g.deriv(j) / std::abs(g.deriv(j));
    Mat dGr, dGv;
    if (pair.dX_tau) {
      /*
       * Product-rule form of d/dtau G, using the analytic dX/dtau: with
       * Yt = (d_tau X) X^-1 etc.,
       *   d_tau Yt = (d_tau^2 X) X^-1 - Yt^2 ,
       *   d_tau Yr = (d_rho d_tau X) X^-1 - Yr Yt ,
       * where d_tau^2 X is a tau-difference of the analytic dX_tau and the
       * mixed partial a rho-difference of it. This keeps the finite-difference
       * noise out of the small-step tau-derivative.
       */
      const GParts q = compute_parts(pair, tau, p);
      const Mat d2Xt =
          fd_tau([&](cplx t) { return pair.dX_tau(t, p.rho, p.v); }, tau, dir, 1e-4);
      // Wider step for the mixed partials: dX_tau may be a high-order series
      // whose evaluation jitter (~1e-14) would be amplified by a 1e-5 step,
      // while its Richardson truncation at 1e-3 is still ~1e-12.
      const Mat dXtr =
          fd_real_h([&](double r) { return pair.dX_tau(tau, r, p.v); }, p.rho, 1e-3);
      const Mat dXtv =
          fd_real_h([&](double w) { return pair.dX_tau(tau, p.rho, w); }, p.v, 1e-3);
      const Mat dYt = d2Xt * q.Xinv - q.Yt * q.Yt;
      const Mat dYr = dXtr * q.Xinv - q.Yr * q.Yt;
      const Mat dYv = dXtv * q.Xinv - q.Yv * q.Yt;
      const cplx dc = 1.0 - lam / (tau * tau);
      dGr = q.dMr +
            (1.0 / p.rho) * (-2.0 * tau * (q.M * q.Yt) +
                             (lam - tau * tau) * (q.M * dYt)) +
            dc * (q.M * q.Yr) + ((tau * tau + lam) / tau) * (q.M * dYr);
      dGv = q.dMv +
            (1.0 / p.rho) * (2.0 * lam * (q.M * q.Yt) +
                             2.0 * lam * tau * (q.M * dYt)) +
            dc * (q.M * q.Yv) + ((tau * tau + lam) / tau) * (q.M * dYv);
    } else {
      dGr = fd_tau([&](cplx t) { return G_expression(pair, t, p).first; }, tau, dir,
                   1e-3);
      dGv = fd_tau([&](cplx t) { return G_expression(pair, t, p).second; }, tau, dir,
                   1e-3);
    }
    worst = std::max({worst, dGr.cwiseAbs().maxCoeff(), dGv.cwiseAbs().maxCoeff()});
  }
  return worst;
}

LaxPair generator_RN(const std::vector<double>& omegas, double alpha,
                     const WeylPoint& p, int branch) {
  if (omegas.empty()) throw parameter_error("generator_RN: empty omega list");
  for (double om : omegas)
    if (om == p.v)
      throw domain_error("generator_RN: omega_i = v is degenerate (root at 0/inf)");
  const int lambda = p.lambda;
  const int sig = p.sigma, eps = p.epsilon;

  auto roots_at = [omegas, lambda, sig, eps, branch](double r, double w) {
    const WeylPoint q(r, w, lambda, sig, eps);
    std::vector<double> ts;
    ts.reserve(omegas.size());
    for (double om : omegas) ts.push_back(real_root(cplx(om, 0.0), q, branch));
    return ts;
  };

  LaxPair out;
  out.lambda = lambda;
  out.diagonal_flag = true;
  out.M = [roots_at, alpha, lambda](double r, double w) {
    cplx e(1.0, 0.0);
    for (double t : roots_at(r, w)) e *= std::pow(cplx(-lambda / (t * t), 0.0), alpha);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = e;
    m(1, 1) = 1.0 / e;
    return require_real(m, "generator_RN N");
  };
  out.X = [roots_at, alpha, lambda](cplx tau, double r, double w) {
    cplx e(1.0, 0.0);
    for (double t : roots_at(r, w)) {
      const double tt = -lambda / t;  // involution image
      e *= std::pow((t / tt) * (tau - tt) / (tau - t), alpha);
    }
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = e;
    m(1, 1) = 1.0 / e;
    return m;
  };
  out.dX_tau = [roots_at, alpha, lambda, X = out.X](cplx tau, double r, double w) {
    cplx s(0.0, 0.0);
    for (double t : roots_at(r, w)) {
      const double tt = -lambda / t;
      s += alpha * (1.0 / (tau - tt) - 1.0 / (tau - t));
    }
    const Mat x = X(tau, r, w);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = s * x(0, 0);
    m(1, 1) = -s * x(1, 1);
    return m;
  };
  return out;
}

LaxPair product_solution(const LaxPair& a, const LaxPair& b) {
  if (a.lambda != b.lambda)
    throw parameter_error("product_solution: lambda mismatch");
  if (!(a.diagonal_flag && b.diagonal_flag)) {
    // Sampled commutation hypotheses at fixed probe points.
    const std::pair<double, double> pts[] = {
        {1.0, 0.25}, {1.5, -0.5}, {2.0, 0.75}, {0.75, 0.5}};
    int checked = 0;
    for (const auto& [r, w] : pts) {
      try {
        const Mat Ma = a.M(r, w).cast<cplx>(), Mb = b.M(r, w).cast<cplx>();
        for (int k = 0; k < 8; ++k) {
          const cplx tau = std::exp(cplx(0.0, 2.0 * kPi * k / 8.0 + 0.37));
          const Mat Xa = a.X(tau, r, w), Xb = b.X(tau, r, w);
          const Mat pairs[][2] = {{Ma, Mb}, {Xa, Xb}, {Ma, Xb}, {Xa, Mb}};
          for (const auto& pq : pairs) {
            const double comm = (pq[0] * pq[1] - pq[1] * pq[0]).cwiseAbs().maxCoeff();
            const double scale =
                pq[0].cwiseAbs().maxCoeff() * pq[1].cwiseAbs().maxCoeff() + 1.0;
            if (comm > 1e-9 * scale)
              throw parameter_error(
                  "product_solution: commutation hypotheses fail at sampled points");
          }
        }
        ++checked;
      } catch (const domain_error&) {
        // probe outside the pair's domain; try the next one
      }
    }
    if (checked == 0)
      throw parameter_error(
          "product_solution: could not verify commutation (no probe point in "
          "the common domain)");
  }
  LaxPair out;
  out.lambda = a.lambda;
  out.diagonal_flag = a.diagonal_flag && b.diagonal_flag;
  out.M = [ma = a.M, mb = b.M](double r, double w) { return MatR(ma(r, w) * mb(r, w)); };
  out.X = [xa = a.X, xb = b.X](cplx t, double r, double w) {
    return Mat(xb(t, r, w) * xa(t, r, w));
  };
  if (a.dX_tau && b.dX_tau)
    out.dX_tau = [xa = a.X, xb = b.X, da = a.dX_tau, db = b.dX_tau](cplx t, double r,
                                                                   double w) {
      return Mat(db(t, r, w) * xa(t, r, w) + xb(t, r, w) * da(t, r, w));
    };
  return out;
}

LaxPair catalog_pair(const std::string& name,
                     const std::map<std::string, double>& params) {
  LaxPair out;
  out.lambda = -1;
  out.diagonal_flag = true;

  auto diag2 = [](cplx e) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = e;
    m(1, 1) = 1.0 / e;
    return m;
  };

  if (name == "kasner") {
    out.M = [](double r, double) {
      MatR m = MatR::Zero(2, 2);
      m(0, 0) = std::pow(r / 2.0, 4.0);
      m(1, 1) = 1.0 / m(0, 0);
      return m;
    };
    out.X = [diag2](cplx t, double r, double w) {
      const cplx q = t * t + 2.0 * (w / r) * t + 1.0;
      return diag2(q * q);
    };
    out.dX_tau = [](cplx t, double r, double w) {
      const cplx q = t * t + 2.0 * (w / r) * t + 1.0;
      const cplx dq = 2.0 * t + 2.0 * (w / r);
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = 2.0 * q * dq;
      m(1, 1) = -2.0 * dq / (q * q * q);
      return m;
    };
    return out;
  }

  if (name == "kasner_canonical") {
    auto tau0 = [](double r, double w) {
      return real_root(cplx(0.0, 0.0), WeylPoint(r, w, -1), -1);
    };
    out.M = [tau0](double r, double w) {
      MatR m = MatR::Zero(2, 2);
      m(0, 0) = std::pow(r / 2.0 * tau0(r, w), 4.0);
      m(1, 1) = 1.0 / m(0, 0);
      return m;
    };
    out.X = [tau0, diag2](cplx t, double r, double w) {
      const double t0 = tau0(r, w);
      const cplx q = (t - t0) / t0;
      return diag2(q * q * q * q);
    };
    out.dX_tau = [tau0](cplx t, double r, double w) {
      const double t0 = tau0(r, w);
      const cplx q = (t - t0) / t0;
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = 4.0 * q * q * q / t0;
      m(1, 1) = -4.0 / (q * q * q * q * q) / t0;
      return m;
    };
    return out;
  }

  if (name == "interior_schwarzschild" || name == "interior_flattener_1" ||
      name == "interior_flattener_2") {
    const double m = getp(params, "m", 1.0);
    auto t1 = [m](double r, double w) {
      return real_root(cplx(m, 0.0), WeylPoint(r, w, -1), +1);
    };
    auto t2 = [m](double r, double w) {
      return real_root(cplx(-m, 0.0), WeylPoint(r, w, -1), +1);
    };
    if (name == "interior_schwarzschild") {
      out.M = [t1, t2](double r, double w) {
        MatR out2 = MatR::Zero(2, 2);
        out2(0, 0) = -t2(r, w) / t1(r, w);
        out2(1, 1) = 1.0 / out2(0, 0);
        return out2;
      };
      out.X = [t1, t2, diag2](cplx t, double r, double w) {
        return diag2((1.0 - t1(r, w) * t) / (1.0 - t2(r, w) * t));
      };
      out.dX_tau = [t1, t2](cplx t, double r, double w) {
        const double a = t1(r, w), b = t2(r, w);
        const cplx den = 1.0 - b * t;
        const cplx dq = (b - a) / (den * den);
        const cplx q = (1.0 - a * t) / den;
        Mat out2 = Mat::Zero(2, 2);
        out2(0, 0) = dq;
        out2(1, 1) = -dq / (q * q);
        return out2;
      };
      return out;
    }
    // Flatteners: alpha = 1/2 generators at omega = -m and omega = +m with the
    // branch signs that make the interior product collapse to the identity.
    const bool first = name == "interior_flattener_1";
    out.M = [t1, t2, first](double r, double w) {
      MatR out2 = MatR::Zero(2, 2);
      out2(0, 0) = first ? -1.0 / t2(r, w) : t1(r, w);
      out2(1, 1) = 1.0 / out2(0, 0);
      return out2;
    };
    out.X = [t1, t2, first, diag2](cplx t, double r, double w) {
      if (first) {
        const double b = t2(r, w);
        return diag2(-b * std::sqrt((t - 1.0 / b) / (t - b)));
      }
      const double a = t1(r, w);
      return diag2(std::sqrt((t - a) / (t - 1.0 / a)) / a);
    };
    return out;
  }

  if (name == "einstein_rosen") {
    const double a = getp(params, "a", 1.0);
    const double k = getp(params, "k", 1.0);
    const double b = getp(params, "b", std::exp(a * k) / 2.0);
    const double amp = 4.0 * b * std::exp(-a * k);
    const int nmax = 64;
    auto logx = [amp, k, nmax](cplx t, double r, double w) {
      cplx L(0.0, 0.0), tp = t;
      for (int n = 1; n <= nmax; ++n, tp *= t)
        L += amp * bessel_Jn(n, k * r) * std::cos(k * w + n * kPi / 2.0) * tp;
      return L;
    };
    auto dlogx = [amp, k, nmax](cplx t, double r, double w) {
      cplx L(0.0, 0.0), tp(1.0, 0.0);
      for (int n = 1; n <= nmax; ++n, tp *= t)
        L += static_cast<double>(n) * amp * bessel_Jn(n, k * r) *
             std::cos(k * w + n * kPi / 2.0) * tp;
      return L;
    };
    out.M = [amp, k](double r, double w) {
      MatR m = MatR::Zero(2, 2);
      m(0, 0) = std::exp(amp * std::cos(k * w) * bessel_Jn(0, k * r));
      m(1, 1) = 1.0 / m(0, 0);
      return m;
    };
    out.X = [logx, diag2](cplx t, double r, double w) {
      return diag2(std::exp(logx(t, r, w)));
    };
    out.dX_tau = [logx, dlogx](cplx t, double r, double w) {
      const cplx L = logx(t, r, w), dL = dlogx(t, r, w);
      Mat m = Mat::Zero(2, 2);
      m(0, 0) = dL * std::exp(L);
      m(1, 1) = -dL * std::exp(-L);
      return m;
    };
    return out;
  }

  throw parameter_error("catalog_pair: unknown name \"" + name + "\"");
}

Mat kasner_general_X(double c1, double c2, double c3, double c4, cplx tau,
                     const WeylPoint& p) {
  if (c1 * c4 - c2 * c3 == 0.0)
    throw parameter_error("kasner_general_X: singular constant matrix");
  if (tau == cplx(0.0, 0.0))
    throw domain_error("kasner_general_X: singular at tau = 0");
  const cplx up = tau * tau / (p.rho * p.rho);
  const cplx dn = 1.0 / up;
  Mat X(2, 2);
  X << up * c1, up * c2, dn * c3, dn * c4;
  return X;
}

}  // namespace gravfact
