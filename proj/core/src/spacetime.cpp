#include "gravfact/spacetime.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace gravfact {

namespace {

double getp(const std::map<std::string, double>& params, const std::string& key,
            double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double getp(const std::map<std::string, double>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw parameter_error("reference_solution: missing parameter " + key);
  return it->second;
}

/*
 * Path integration of a discrete 1-form P drho + Q dv given at the nodes:
 * trapezoid along the base rho-row, then along each v-column. The closure
 * residual is the largest loop integral around a grid cell.
 */
MatR path_integrate(const GridSpec& g, const MatR& P, const MatR& Q,
                    std::pair<int, int> base, double* closure) {
  const auto [ib, jb] = base;
  if (ib < 0 || ib >= g.n_rho || jb < 0 || jb >= g.n_v)
    throw parameter_error("path_integrate: base point off grid");
  const double hr = g.h_rho(), hv = g.h_v();
  MatR F(g.n_rho, g.n_v);
  F(ib, jb) = 0.0;
  for (int i = ib + 1; i < g.n_rho; ++i)
    F(i, jb) = F(i - 1, jb) + hr / 2.0 * (P(i - 1, jb) + P(i, jb));
  for (int i = ib - 1; i >= 0; --i)
    F(i, jb) = F(i + 1, jb) - hr / 2.0 * (P(i + 1, jb) + P(i, jb));
  for (int i = 0; i < g.n_rho; ++i) {
    for (int j = jb + 1; j < g.n_v; ++j)
      F(i, j) = F(i, j - 1) + hv / 2.0 * (Q(i, j - 1) + Q(i, j));
    for (int j = jb - 1; j >= 0; --j)
      F(i, j) = F(i, j + 1) - hv / 2.0 * (Q(i, j + 1) + Q(i, j));
  }
  double worst = 0.0;
  for (int i = 0; i + 1 < g.n_rho; ++i)
    for (int j = 0; j + 1 < g.n_v; ++j) {
      const double circ = hr / 2.0 * (P(i, j) + P(i + 1, j)) +
                          hv / 2.0 * (Q(i + 1, j) + Q(i + 1, j + 1)) -
                          hr / 2.0 * (P(i, j + 1) + P(i + 1, j + 1)) -
                          hv / 2.0 * (Q(i, j) + Q(i, j + 1));
      worst = std::max(worst, std::abs(circ));
    }
  if (closure) *closure = worst;
  return F;
}

double deriv_scale(const MatR& P, const MatR& Q) {
  return std::max(1.0, std::max(P.cwiseAbs().maxCoeff(), Q.cwiseAbs().maxCoeff()));
}

// Composite Simpson over [a, b] with an even number of subintervals.
double simpson(const std::function<double(double)>& f, double a, double b,
               int subintervals) {
  const int m = subintervals % 2 == 0 ? subintervals : subintervals + 1;
  const double h = (b - a) / m;
  double acc = f(a) + f(b);
  for (int k = 1; k < m; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

// Centered differences of a scalar grid, one-sided at the ends.
void grid_gradient(const GridSpec& g, const MatR& F, MatR& dFr, MatR& dFv) {
  const double hr = g.h_rho(), hv = g.h_v();
  dFr.resize(g.n_rho, g.n_v);
  dFv.resize(g.n_rho, g.n_v);
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      if (i > 0 && i < g.n_rho - 1)
        dFr(i, j) = (F(i + 1, j) - F(i - 1, j)) / (2.0 * hr);
      else if (i == 0)
        dFr(i, j) = (-3.0 * F(0, j) + 4.0 * F(1, j) - F(2, j)) / (2.0 * hr);
      else
        dFr(i, j) = (3.0 * F(i, j) - 4.0 * F(i - 1, j) + F(i - 2, j)) / (2.0 * hr);
      if (j > 0 && j < g.n_v - 1)
        dFv(i, j) = (F(i, j + 1) - F(i, j - 1)) / (2.0 * hv);
      else if (j == 0)
        dFv(i, j) = (-3.0 * F(i, 0) + 4.0 * F(i, 1) - F(i, 2)) / (2.0 * hv);
      else
        dFv(i, j) = (3.0 * F(i, j) - 4.0 * F(i, j - 1) + F(i, j - 2)) / (2.0 * hv);
    }
}

}  // namespace

std::pair<MatR, MatR> fields_from_M(const CosetGrid& Mg) {
  const GridSpec& g = Mg.grid;
  g.validate();
  if (static_cast<int>(Mg.M.size()) != g.size())
    throw parameter_error("fields_from_M: sample count does not match grid");
  MatR Delta(g.n_rho, g.n_v), Btilde(g.n_rho, g.n_v);
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const MatR& M = Mg.M[static_cast<size_t>(g.index(i, j))];
      if (M.rows() != 2)
        throw parameter_error("fields_from_M: 2x2 coset representatives required");
      if (!(M(1, 1) > 0.0))
        throw signature_error("fields_from_M: M22 <= 0 (wrong signature branch)");
      Delta(i, j) = 1.0 / M(1, 1);
      Btilde(i, j) = M(0, 1) / M(1, 1);
    }
  return {Delta, Btilde};
}

MatR integrate_B(const GridSpec& g, const MatR& Delta, const MatR& Btilde,
                 int lambda, std::pair<int, int> base, double* closure) {
  g.validate();
  MatR dBtr, dBtv;
  grid_gradient(g, Btilde, dBtr, dBtv);
  MatR P(g.n_rho, g.n_v), Q(g.n_rho, g.n_v);
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const double pref = g.rho(i) / (Delta(i, j) * Delta(i, j));
      P(i, j) = pref * dBtv(i, j);
      Q(i, j) = -lambda * pref * dBtr(i, j);
    }
  double worst = 0.0;
  const MatR B = path_integrate(g, P, Q, base, &worst);
  if (closure) *closure = worst;
  if (worst > 1e-3 * std::max(1.0, Btilde.cwiseAbs().maxCoeff()))
    throw numerical_error("integrate_B: closure residual too large (fields "
                          "inconsistent with the field equations)");
  return B;
}

MatR integrate_psi(const ConnectionGrids& A, int lambda, std::pair<int, int> base,
                   double* closure) {
  const GridSpec& g = A.grid;
  MatR P(g.n_rho, g.n_v), Q(g.n_rho, g.n_v);
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const MatR& Ar = A.A_rho[static_cast<size_t>(g.index(i, j))];
      const MatR& Av = A.A_v[static_cast<size_t>(g.index(i, j))];
      P(i, j) = 0.25 * g.rho(i) *
                ((Ar * Ar).trace() - lambda * (Av * Av).trace());
      Q(i, j) = 0.5 * g.rho(i) * (Ar * Av).trace();
    }
  double worst = 0.0;
  const MatR psi = path_integrate(g, P, Q, base, &worst);
  if (closure) *closure = worst;
  if (worst > 1e-3 * deriv_scale(P, Q))
    throw numerical_error("integrate_psi: mixed-partial residual too large "
                          "(M is not a solution on this grid)");
  return psi;
}

MatR integrate_form(const GridSpec& g,
                    const std::function<double(double, double)>& w_rho,
                    const std::function<double(double, double)>& w_v,
                    std::pair<int, int> base, int panels) {
  g.validate();
  const auto [ib, jb] = base;
  if (ib < 0 || ib >= g.n_rho || jb < 0 || jb >= g.n_v)
    throw parameter_error("integrate_form: base point off grid");
  const double vb = g.v(jb);
  MatR F(g.n_rho, g.n_v);
  F(ib, jb) = 0.0;
  auto seg_r = [&](int i0, int i1) {
    return simpson([&](double r) { return w_rho(r, vb); }, g.rho(i0), g.rho(i1),
                   panels);
  };
  for (int i = ib + 1; i < g.n_rho; ++i) F(i, jb) = F(i - 1, jb) + seg_r(i - 1, i);
  for (int i = ib - 1; i >= 0; --i) F(i, jb) = F(i + 1, jb) - seg_r(i, i + 1);
  for (int i = 0; i < g.n_rho; ++i) {
    const double r = g.rho(i);
    auto seg_v = [&](int j0, int j1) {
      return simpson([&](double w) { return w_v(r, w); }, g.v(j0), g.v(j1), panels);
    };
    for (int j = jb + 1; j < g.n_v; ++j) F(i, j) = F(i, j - 1) + seg_v(j - 1, j);
    for (int j = jb - 1; j >= 0; --j) F(i, j) = F(i, j + 1) - seg_v(j, j + 1);
  }
  return F;
}

MatR integrate_psi(const GridSpec& g,
                   const std::function<MatR(double, double)>& A_rho,
                   const std::function<MatR(double, double)>& A_v, int lambda,
                   std::pair<int, int> base, int panels) {
  auto w_rho = [&, lambda](double r, double w) {
    const MatR Ar = A_rho(r, w);
    const MatR Av = A_v(r, w);
    return 0.25 * r * ((Ar * Ar).trace() - lambda * (Av * Av).trace());
  };
  auto w_v = [&](double r, double w) {
    return 0.5 * r * (A_rho(r, w) * A_v(r, w)).trace();
  };
  return integrate_form(g, w_rho, w_v, base, panels);
}

MetricSample metric_components(const SpacetimeFields& f, int i, int j) {
  if (i < 0 || i >= f.grid.n_rho || j < 0 || j >= f.grid.n_v)
    throw parameter_error("metric_components: index off grid");
  const double rho = f.grid.rho(i);
  const double D = f.Delta(i, j), B = f.B(i, j), ep = std::exp(f.psi(i, j));
  MetricSample s{};
  s.g_tt = -f.lambda * D;
  s.g_tphi = -f.lambda * D * B;
  s.g_phiphi = -f.lambda * D * B * B + rho * rho / D;
  s.g_rhorho = f.sigma * ep / D;
  s.g_vv = f.epsilon * ep / D;
  return s;
}

double bessel_Jn(int order, double x) {
  if (order < 0) throw parameter_error("bessel_Jn: order >= 0 required");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (order > std::abs(x)) {
    /*
     * Beyond the turning point J_n decays superexponentially; the quadrature's
     * ~1e-15 absolute noise would swamp it. Miller's downward recurrence
     * J_{k-1} = (2k/x) J_k - J_{k+1} with the normalisation
     * J_0 + 2 sum_m J_{2m} = 1 keeps uniform relative accuracy there.
     */
    const double ax = std::abs(x);
    const int start =
        order + 16 + static_cast<int>(std::ceil(2.0 * std::sqrt(40.0 + order)));
    double jp = 0.0, jc = 1e-300, target = 0.0, norm = 0.0;
    for (int k = start; k >= 0; --k) {
      const double jm = (2.0 * (k + 1) / ax) * jc - jp;
      jp = jc;
      jc = jm;
      if (k == order) target = jc;
      if (k > 0 && k % 2 == 0) norm += 2.0 * jc;
      // rescale to avoid overflow of the unnormalised recurrence
      if (std::abs(jc) > 1e250) {
        jc *= 1e-250;
        jp *= 1e-250;
        target *= 1e-250;
        norm *= 1e-250;
      }
    }
    norm += jc;
    const double val = target / norm;
    return (x < 0.0 && order % 2 == 1) ? -val : val;
  }
  // J_n(x) = (1/2 pi) int_0^{2 pi} cos(n t - x sin t) dt ; the trapezoid rule
  // is spectrally accurate for this periodic analytic integrand.
  const int N = 256;
  double acc = 0.0;
  for (int k = 0; k < N; ++k) {
    const double t = 2.0 * kPi * k / N;
    acc += std::cos(order * t - x * std::sin(t));
  }
  return acc / N;
}

double bessel_J(int order, double x) {
  if (order != 0 && order != 1)
    throw parameter_error("bessel_J: order must be 0 or 1");
  if (!(std::abs(x) < 50.0))
    throw domain_error("bessel_J: |x| < 50 supported");
  if (order == 1 && x < 0.0) return -bessel_Jn(1, -x);
  return bessel_Jn(order, std::abs(x));
}

MatR ward_g_matrix(double Delta, double rho) {
  if (!(Delta > 0.0) || !(rho > 0.0))
    throw parameter_error("ward_g_matrix: Delta > 0 and rho > 0 required");
  MatR g = MatR::Zero(2, 2);
  g(0, 0) = -Delta / rho;
  g(1, 1) = rho / Delta;
  return g;
}

SpacetimeFields reference_solution(const std::string& name,
                                   const std::map<std::string, double>& params,
                                   const GridSpec& g) {
  g.validate();
  SpacetimeFields f;
  f.grid = g;
  f.Delta = MatR::Zero(g.n_rho, g.n_v);
  f.Btilde = MatR::Zero(g.n_rho, g.n_v);
  f.B = MatR::Zero(g.n_rho, g.n_v);
  f.psi = MatR::Zero(g.n_rho, g.n_v);

  if (name == "schwarzschild_exterior") {
    const double m = getp(params, "m");
    f.lambda = f.sigma = f.epsilon = 1;
    for (int i = 0; i < g.n_rho; ++i)
      for (int j = 0; j < g.n_v; ++j) {
        const double rho = g.rho(i), v = g.v(j);
        const double d1 = std::hypot(rho, v - m), d2 = std::hypot(rho, v + m);
        f.Delta(i, j) = (d1 + d2 - 2.0 * m) / (d1 + d2 + 2.0 * m);
        f.psi(i, j) =
            std::log(((d1 + d2) * (d1 + d2) - 4.0 * m * m) / (4.0 * d1 * d2));
      }
    return f;
  }

  if (name == "kasner") {
    f.lambda = -1;
    f.sigma = -1;
    f.epsilon = 1;
    for (int i = 0; i < g.n_rho; ++i) {
      const double rho = g.rho(i);
      const double d = std::pow(rho / 2.0, 4.0);
      for (int j = 0; j < g.n_v; ++j) {
        f.Delta(i, j) = d;
        f.psi(i, j) = 8.0 * std::log(rho);
      }
    }
    return f;
  }

  if (name == "einstein_rosen") {
    const double a = getp(params, "a", 1.0);
    const double k = getp(params, "k", 1.0);
    const double b = getp(params, "b", std::exp(a * k) / 2.0);
    const double bt = 2.0 * b * std::exp(-a * k);
    f.lambda = -1;
    f.sigma = 1;
    f.epsilon = -1;
    for (int i = 0; i < g.n_rho; ++i) {
      const double rho = g.rho(i);
      const double J0 = bessel_Jn(0, k * rho), J1 = bessel_Jn(1, k * rho);
      for (int j = 0; j < g.n_v; ++j) {
        const double cv = std::cos(k * g.v(j));
        f.Delta(i, j) = std::exp(2.0 * bt * cv * J0);
        f.psi(i, j) = bt * bt *
                      (k * k * rho * rho * (J0 * J0 + J1 * J1) -
                       2.0 * k * cv * cv * rho * J0 * J1);
      }
    }
    return f;
  }

  if (name == "deformed_kasner") {
    const double a = getp(params, "a", 1.0);
    const double b = getp(params, "b", std::exp(a) / 2.0);
    const double bt = 2.0 * b * std::exp(-a);
    f.lambda = -1;
    f.sigma = 1;
    f.epsilon = -1;
    /*
     * With L = log Delta = 4 log(rho/2) + 2 bt cos(v) J_0(rho) the quadratures
     * partial_rho psi = (rho/2)(L_rho^2 + L_v^2), partial_v psi = rho L_rho L_v
     * integrate in closed form: the Kasner part 8 log rho, a cross term
     * 8 bt cos(v) J_0, and the wave part bt^2 (rho^2 (J_0^2 + J_1^2)
     * - 2 rho J_0 J_1 cos^2 v).
     */
    for (int i = 0; i < g.n_rho; ++i) {
      const double rho = g.rho(i);
      const double J0 = bessel_Jn(0, rho), J1 = bessel_Jn(1, rho);
      const double d0 = std::pow(rho / 2.0, 4.0);
      for (int j = 0; j < g.n_v; ++j) {
        const double cv = std::cos(g.v(j));
        f.Delta(i, j) = d0 * std::exp(2.0 * bt * cv * J0);
        f.psi(i, j) = 8.0 * std::log(rho) + 8.0 * bt * cv * J0 +
                      bt * bt *
                          (rho * rho * (J0 * J0 + J1 * J1) -
                           2.0 * rho * J0 * J1 * cv * cv);
      }
    }
    return f;
  }

  if (name == "deformed_schwarzschild_first_order") {
    const double m = getp(params, "m");
    const double xi = getp(params, "xi");
    f.lambda = f.sigma = f.epsilon = 1;
    for (int i = 0; i < g.n_rho; ++i)
      for (int j = 0; j < g.n_v; ++j) {
        const double rho = g.rho(i), v = g.v(j);
        const double t0p = (v + std::hypot(v, rho)) / rho;
        const double t0m = (v - std::hypot(v, rho)) / rho;
        const double t1 = (v - m + std::hypot(v - m, rho)) / rho;
        const double t2 = (v + m + std::hypot(v + m, rho)) / rho;
        f.Delta(i, j) = t2 / t1;
        const double pref = 2.0 * xi * t2 /
                            (rho * (t0p - t0m) * t1 * (1.0 + t1 * t2) *
                             (t1 - t0m) * (t2 - t0m));
        const double bracket =
            t2 * t0m - t0m * t0m + t1 * (t2 + t0m) * (1.0 + t2 * t0m) -
            t2 * t2 * (1.0 + t0m * t0m) -
            t1 * t1 * (1.0 + t2 * t2 - t2 * t0m + t0m * t0m);
        f.B(i, j) = pref * bracket;
        // psi is undeformed at first order; invariant under Delta -> 1/Delta,
        // so the exterior closed form applies here too.
        const double d1 = std::hypot(rho, v - m), d2 = std::hypot(rho, v + m);
        f.psi(i, j) =
            std::log(((d1 + d2) * (d1 + d2) - 4.0 * m * m) / (4.0 * d1 * d2));
      }
    return f;
  }

  throw parameter_error("reference_solution: unknown name \"" + name + "\"");
}

void write_fields_csv(const std::string& path, const SpacetimeFields& f) {
  const std::string tmp = path + ".tmp";
  std::FILE* fp = std::fopen(tmp.c_str(), "w");
  if (!fp) throw numerical_error("write_fields_csv: cannot open " + tmp);
  std::fputs("rho,v,Delta,Btilde,B,psi\n", fp);
  for (int j = 0; j < f.grid.n_v; ++j)
    for (int i = 0; i < f.grid.n_rho; ++i)
      std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", f.grid.rho(i),
                   f.grid.v(j), f.Delta(i, j), f.Btilde(i, j), f.B(i, j),
                   f.psi(i, j));
  if (std::fclose(fp) != 0 || std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw numerical_error("write_fields_csv: write failed for " + path);
  }
}

}  // namespace gravfact
