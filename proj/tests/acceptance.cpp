// Acceptance gate: one line per criterion, nonzero exit on any failure.
//
// Runtime budgets are stated for a 4-core machine; on hosts with fewer cores
// the budget is scaled by 4/cores and both numbers are printed.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "gravfact/catalog.hpp"
#include "gravfact/cauchy.hpp"
#include "gravfact/contour.hpp"
#include "gravfact/spacetime.hpp"
#include "gravfact/taugen.hpp"
#include "gravfact/verify.hpp"
#include "gravfact/weyl.hpp"
#include "gravfact/wh.hpp"

using namespace gravfact;

namespace {

int worker_count() {
  if (const char* env = std::getenv("GRAVFACT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int T = std::min(worker_count(), n);
  if (T <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(static_cast<size_t>(T));
  for (int t = 0; t < T; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errs[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

double budget_scale() {
  const unsigned hc = std::thread::hardware_concurrency();
  const double cores = static_cast<double>(hc ? hc : 1);
  return 4.0 / std::min(4.0, cores);
}

// Independent J0/J1 oracle: plain power series in long double.
double series_J(int n, double x) {
  long double t = 1.0L;
  for (int k = 1; k <= n; ++k) t *= static_cast<long double>(x) / (2 * k);
  long double s = t, term = t;
  const long double q = static_cast<long double>(x) * x / 4.0L;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + n));
    s += term;
    if (std::abs(static_cast<double>(term)) < 1e-25 && k > 6) break;
  }
  return static_cast<double>(s);
}

struct Outcome {
  bool ok = true;
  std::string detail;
  double seconds = 0.0;
};

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Schwarzschild four-case grid: Delta equals the closed-form root ratios.

Outcome crit1() {
  const double m = 1.0;
  auto fam = builtin("schwarzschild", {{"m", m}});
  struct Job {
    WeylPoint p;
    double c;       // bump profile amplitude
    double target;  // closed-form Delta
  };
  std::vector<Job> jobs;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double rho = 0.5 + 1.5 * i / 4.0;
      const double v = -0.8 + 1.6 * j / 4.0;
      WeylPoint p(rho, v, 1);
      auto [t1, t2] = schwarzschild_tau12(p, m);
      const double l1 = std::log(std::abs(t1)), l2 = std::log(std::abs(t2));
      // The mixed-class contour is offset from the mid-band position: at
      // v = 0 the perfectly symmetric profile (c = 0, the unit circle) makes
      // the collocation matrix exactly rank-deficient even though the
      // factorisation exists; any asymmetric contour in the same class is
      // healthy. The band half-width is >= 0.45 on this grid.
      jobs.push_back({p, std::max(l1, l2) + 0.6, t2 / t1});
      jobs.push_back({p, 0.5 * (l1 + l2) + 0.15, t1 * t2});
      jobs.push_back({p, std::min(l1, l2) - 0.6, t1 / t2});
      // case (iv): one root in, the other out, with the roles swapped
      // relative to case (ii) -- realised at the reflected point, where the
      // roots are 1/t2, 1/t1; Delta there is 1/(t1 t2).
      WeylPoint q(rho, -v, 1);
      jobs.push_back({q, -0.5 * (l1 + l2) + 0.15, 1.0 / (t1 * t2)});
    }
  std::vector<double> rel(jobs.size(), 0.0);
  parallel_for(static_cast<int>(jobs.size()), [&](int k) {
    const Job& jb = jobs[static_cast<size_t>(k)];
    auto g = AdmissibleContour::bump_contour(1, jb.c, 256);
    auto r = factorize_general(fam, jb.p, g);
    const double delta = 1.0 / r.M(1, 1);
    rel[static_cast<size_t>(k)] =
        std::abs(delta - jb.target) / std::abs(jb.target);
  });
  double mx = 0.0;
  for (double e : rel) mx = std::max(mx, e);
  Outcome o;
  o.ok = mx <= 1e-8;
  o.detail = fmt("max rel %.2e (tol 1e-8)", mx);
  return o;
}

// ---------------------------------------------------------------------------
// 2. Exterior map: g_tt = -(1 - 2m/r) at ten (r, theta) samples.

Outcome crit2() {
  const double m = 1.0;
  auto fam = builtin("schwarzschild", {{"m", m}});
  std::vector<std::pair<double, double>> pts;
  for (double r : {2.5, 3.0, 4.0, 5.5, 8.0})
    for (double th : {0.6, 1.3}) pts.emplace_back(r, th);
  std::vector<double> dev(pts.size(), 0.0);
  parallel_for(static_cast<int>(pts.size()), [&](int k) {
    const auto [r, th] = pts[static_cast<size_t>(k)];
    WeylPoint p = schwarzschild_coords(r, th, m, SchwarzschildBranch::Exterior);
    auto [t1, t2] = schwarzschild_tau12(p, m);
    const double c =
        std::log(std::max(std::abs(t1), std::abs(t2))) + 0.6;
    auto res =
        factorize_general(fam, p, AdmissibleContour::bump_contour(1, c, 256));
    const double g_tt = -1.0 / res.M(1, 1);  // -lambda Delta, lambda = +1
    dev[static_cast<size_t>(k)] = std::abs(g_tt + (1.0 - 2.0 * m / r));
  });
  double mx = 0.0;
  for (double e : dev) mx = std::max(mx, e);
  Outcome o;
  o.ok = mx <= 1e-7;
  o.detail = fmt("max |g_tt + (1-2m/r)| %.2e (tol 1e-7)", mx);
  return o;
}

// ---------------------------------------------------------------------------
// 3. Kerr ergosurface: traced curve, verdict flip, sigma_min decay.

Outcome crit3() {
  const double m = 2.0, a = 1.0, c = std::sqrt(m * m - a * a);
  auto fam = builtin("kerr", {{"m", m}, {"a", a}});
  auto curve = ergosurface_trace(m, a, 50);
  double mx = 0.0;
  for (const auto& s : curve)
    mx = std::max(mx, std::abs(s.u - std::sqrt(m * m - a * a * s.y * s.y)));

  auto diag_at = [&](const WeylPoint& p, int N) {
    std::vector<cplx> poles = fam.poles(p);
    double r = 0.0;
    for (const cplx& q : poles) r = std::max(r, std::abs(q));
    auto g = AdmissibleContour::bump_contour(1, std::log(r) + 0.6, 256);
    return injectivity_diagnostic(fam, p, g, N);
  };
  const double y = 0.4, u_on = std::sqrt(m * m - a * a * y * y);
  WeylPoint p_on = weyl_from_prolate(u_on, y, c);
  WeylPoint p_off = weyl_from_prolate(u_on + 0.4, y, c);
  auto on = diag_at(p_on, 256);
  auto off = diag_at(p_off, 256);
  const bool flip = on.verdict == ExistenceVerdict::NoCanonical &&
                    off.verdict == ExistenceVerdict::Canonical;
  // decay across a doubling (128 -> 256): at least halves, or fully
  // saturated at numerical zero.
  auto dec = diag_at(p_on, 128);
  const bool decays =
      dec.sigma_min <= 0.5 * dec.sigma_min_coarse || dec.sigma_min < 1e-12;

  Outcome o;
  o.ok = mx <= 1e-8 && flip && decays;
  o.detail = fmt("max |u dev| %.2e, sigma on/off %.1e/%.1e", mx, on.sigma_min,
                 off.sigma_min) +
             (flip ? ", verdict flips" : ", VERDICT DOES NOT FLIP") +
             (decays ? "" : ", NO SIGMA DECAY");
  return o;
}

// ---------------------------------------------------------------------------
// 4. Einstein-Rosen: Delta vs series oracle, psi quadrature, contour homotopy.

Outcome crit4() {
  const double a = 1.0, b = 0.9, k = 1.0;
  const double amp = 4.0 * b * std::exp(-a * k);
  auto fam = builtin("einstein_rosen", {{"a", a}, {"b", b}, {"k", k}});
  auto circ = AdmissibleContour::unit_circle(-1, 256);

  GridSpec gs{0.3, 3.0, 0.0, 2.0, 10, 10};
  std::vector<double> rel(static_cast<size_t>(gs.size()), 0.0);
  parallel_for(gs.size(), [&](int idx) {
    const int i = idx / gs.n_v, j = idx % gs.n_v;
    WeylPoint p(gs.rho(i), gs.v(j), -1);
    auto r = factorize_diagonal(fam, p, circ);
    const double oracle =
        std::exp(amp * std::cos(k * gs.v(j)) * series_J(0, k * gs.rho(i)));
    rel[static_cast<size_t>(idx)] = std::abs(1.0 / r.M(1, 1) - oracle) / oracle;
  });
  double mxd = 0.0;
  for (double e : rel) mxd = std::max(mxd, e);

  // contour homotopy: same Delta on the unit circle and a bump contour
  auto bump = AdmissibleContour::bump_contour(-1, 0.5, 256);
  double mxh = 0.0;
  for (auto [rho, v] :
       {std::pair{0.5, 0.2}, std::pair{1.2, 1.0}, std::pair{2.4, 1.8},
        std::pair{0.9, 0.0}, std::pair{1.8, 0.7}}) {
    WeylPoint p(rho, v, -1);
    const double d1 = 1.0 / factorize_diagonal(fam, p, circ).M(1, 1);
    const double d2 = 1.0 / factorize_diagonal(fam, p, bump).M(1, 1);
    mxh = std::max(mxh, std::abs(d1 - d2));
  }

  // psi from integrate_psi with the connection of the *factorised* Delta
  GridSpec gp{0.5, 2.0, 0.0, 1.5, 6, 6};
  auto logDelta = [&](double rho, double v) {
    WeylPoint p(rho, v, -1);
    return std::log(1.0 / factorize_diagonal(fam, p, circ).M(1, 1));
  };
  auto dlog = [&](double rho, double v, bool wrt_rho) {
    const double h = 1e-3;
    auto at = [&](double d) {
      return wrt_rho ? logDelta(rho + d, v) : logDelta(rho, v + d);
    };
    const double c1 = (at(h) - at(-h)) / (2.0 * h);
    const double c2 = (at(h / 2) - at(-h / 2)) / h;
    return (4.0 * c2 - c1) / 3.0;
  };
  auto Ar = [&](double rho, double v) {
    MatR m2 = MatR::Zero(2, 2);
    m2(0, 0) = dlog(rho, v, true);
    m2(1, 1) = -m2(0, 0);
    return m2;
  };
  auto Av = [&](double rho, double v) {
    MatR m2 = MatR::Zero(2, 2);
    m2(0, 0) = dlog(rho, v, false);
    m2(1, 1) = -m2(0, 0);
    return m2;
  };
  MatR psi = integrate_psi(gp, Ar, Av, -1, {gp.n_rho - 1, 0}, 8);
  auto ref = reference_solution("einstein_rosen",
                                {{"a", a}, {"b", b}, {"k", k}}, gp);
  const double anchor =
      ref.psi(gp.n_rho - 1, 0) - psi(gp.n_rho - 1, 0);
  double mxp = 0.0;
  for (int i = 0; i < gp.n_rho; ++i)
    for (int j = 0; j < gp.n_v; ++j)
      mxp = std::max(mxp, std::abs(psi(i, j) + anchor - ref.psi(i, j)));

  Outcome o;
  o.ok = mxd <= 1e-8 && mxp <= 1e-6 && mxh <= 1e-8;
  o.detail = fmt("Delta rel %.2e, psi dev %.2e, homotopy %.2e", mxd, mxp, mxh);
  return o;
}

// ---------------------------------------------------------------------------
// 5. Kasner chain: canonical factor, renormalisation, pair residuals.

Outcome crit5() {
  auto fam = builtin("kasner_power");
  auto circ = AdmissibleContour::unit_circle(-1, 256);
  double mx_c = 0.0, mx_r = 0.0;
  for (auto [rho, v] : {std::pair{0.7, 2.0}, std::pair{1.1, 2.8}}) {
    WeylPoint p(rho, v, -1);
    const double tau0 = (-v - std::sqrt(v * v - rho * rho)) / rho;
    const double mc = std::pow(rho / 2.0 * tau0, 4.0);
    auto r = factorize_diagonal(fam, p, circ);
    mx_c = std::max(mx_c, std::abs(r.M(0, 0) - mc) / mc);
    mx_c = std::max(mx_c, std::abs(r.M(1, 1) - 1.0 / mc) * mc);
    // renormalise by diag(tau0^-4, tau0^4): the cosmological Kasner matrix
    const double kas = std::pow(rho / 2.0, 4.0);
    mx_r = std::max(mx_r,
                    std::abs(r.M(0, 0) / std::pow(tau0, 4.0) - kas) / kas);
    mx_r = std::max(mx_r,
                    std::abs(r.M(1, 1) * std::pow(tau0, 4.0) - 1.0 / kas) * kas);
  }
  auto pair = catalog_pair("kasner");
  const double inv = tau_invariance_residual(
      pair, AdmissibleContour::unit_circle(-1, 64), WeylPoint(0.7, 2.0, -1));
  auto Arho = [](double r, double) {
    MatR m2 = MatR::Zero(2, 2);
    m2(0, 0) = 4.0 / r;
    m2(1, 1) = -m2(0, 0);
    return m2;
  };
  auto Avv = [](double, double) { return MatR(MatR::Zero(2, 2)); };
  const double lax =
      lax_residual(pair.X, Arho, Avv, 0.25, -1, WeylPoint(1.5, 2.0, -1));
  Outcome o;
  o.ok = mx_c <= 1e-8 && mx_r <= 1e-10 && inv < 1e-8 && lax < 1e-8;
  o.detail =
      fmt("M_c rel %.2e, renorm %.2e, ", mx_c, mx_r) +
      fmt("inv %.2e, lax %.2e", inv, lax);
  return o;
}

// ---------------------------------------------------------------------------
// 6. Generation: ER x Kasner product; interior flattening chain + metric.

Outcome crit6() {
  auto prod =
      product_solution(catalog_pair("einstein_rosen"), catalog_pair("kasner"));
  const double bt = 1.0;  // catalog default: b = e^a/2, k = 1
  double mxd = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double rho = 0.5 + 0.5 * i, v = 0.25 + 0.25 * j;
      const double closed = std::pow(rho / 2.0, 4.0) *
                            std::exp(2.0 * bt * std::cos(v) * series_J(0, rho));
      const double got = 1.0 / prod.M(rho, v)(1, 1);
      mxd = std::max(mxd, std::abs(got - closed) / closed);
    }
  const double fe = field_equation_residual_at(prod.M, 3.0, 0.5, -1, 1e-3);

  const std::map<std::string, double> m1{{"m", 1.0}};
  auto chain = product_solution(
      product_solution(catalog_pair("interior_schwarzschild", m1),
                       catalog_pair("interior_flattener_1", m1)),
      catalog_pair("interior_flattener_2", m1));
  double mxi = 0.0;
  for (auto [r, v] : {std::pair{0.2, 0.1}, std::pair{0.35, 0.25},
                      std::pair{0.5, 0.05}, std::pair{0.4, 0.3}})
    mxi = std::max(mxi, (chain.M(r, v) - MatR::Identity(2, 2)).norm());

  // the flattened solution is -drho^2 + dv^2 + rho^2 dphi^2 + dy^2
  GridSpec g2{0.7, 1.4, 0.0, 1.0, 2, 2};
  SpacetimeFields flat;
  flat.grid = g2;
  flat.lambda = -1;
  flat.sigma = -1;
  flat.epsilon = 1;
  flat.Delta = MatR::Ones(2, 2);
  flat.Btilde = MatR::Zero(2, 2);
  flat.B = MatR::Zero(2, 2);
  flat.psi = MatR::Zero(2, 2);
  auto s = metric_components(flat, 1, 0);
  const double mg =
      std::abs(s.g_tt - 1.0) + std::abs(s.g_tphi) + std::abs(s.g_rhorho + 1.0) +
      std::abs(s.g_vv - 1.0) + std::abs(s.g_phiphi - 1.4 * 1.4);

  Outcome o;
  o.ok = mxd <= 1e-8 && fe < 1e-6 && mxi <= 1e-12 && mg < 1e-12;
  o.detail = fmt("Delta rel %.2e, field eq %.2e, chain %.2e", mxd, fe, mxi) +
             fmt(", metric %.1e", mg);
  return o;
}

// ---------------------------------------------------------------------------
// 7. Deformed Schwarzschild: first-order formulas, quadratic deviation in xi.

struct DeformedSolver {
  double m = 1.0;
  // factorise the deformed symbol at (rho, v). In the sampled strip the
  // plus-branch singularities sit well inside the unit circle and the
  // minus-branch ones well outside, which is exactly the contour class whose
  // Delta matches the first-order reference convention.
  MatR operator()(double xi, double rho, double v) const {
    auto fam = builtin("schwarzschild_deformed", {{"m", m}, {"xi", xi}});
    WeylPoint p(rho, v, 1);
    auto g = AdmissibleContour::unit_circle(1, 256);
    return factorize_general(fam, p, g).M;
  }
};

Outcome crit7() {
  const DeformedSolver solve;
  const double rho0 = 1.0, v0 = -2.5, v1 = -2.2;
  const std::vector<double> xis{1e-3, 2e-3, 4e-3};

  // reference first-order fields along the integration path
  const int nv = 9;
  GridSpec gref{rho0, rho0 + 0.5, v0, v1, 2, nv};

  struct PerXi {
    double dev_delta, dev_B, dev_psi;
  };
  std::vector<PerXi> res(xis.size());

  // flatten all factorisations into one parallel job list:
  //   per xi: 9 sample nodes (Delta and B read directly off the
  //           representative: Delta = 1/M(1,1), B = M(0,1)/M(1,1))
  //         + 2 psi points x (1 center + 4 rho + 4 v offsets)
  const std::vector<std::pair<double, double>> psi_pts{{1.0, -2.5},
                                                       {1.3, -2.3}};
  struct Slot {
    double xi, rho, v;
    MatR M;
  };
  std::vector<Slot> slots;
  for (double xi : xis) {
    for (int j = 0; j < nv; ++j) slots.push_back({xi, rho0, gref.v(j), {}});
    for (auto [pr, pv] : psi_pts) {
      const double h = 1e-3;
      slots.push_back({xi, pr, pv, {}});
      for (double d : {h, -h, h / 2, -h / 2}) {
        slots.push_back({xi, pr + d, pv, {}});
        slots.push_back({xi, pr, pv + d, {}});
      }
    }
  }
  parallel_for(static_cast<int>(slots.size()), [&](int k) {
    Slot& s = slots[static_cast<size_t>(k)];
    s.M = solve(s.xi, s.rho, s.v);
  });
  size_t cursor = 0;
  auto take = [&]() -> const MatR& { return slots[cursor++].M; };

  for (size_t xi_i = 0; xi_i < xis.size(); ++xi_i) {
    const double xi = xis[xi_i];
    auto ref = reference_solution("deformed_schwarzschild_first_order",
                                  {{"m", 1.0}, {"xi", xi}}, gref);
    // Delta and B at the sample nodes vs the first-order closed forms;
    // both deviations are the pure second-order deformation remainder
    double dev_delta = 0.0, dev_B = 0.0;
    for (int j = 0; j < nv; ++j) {
      const MatR& C = take();
      const double delta = 1.0 / C(1, 1);
      const double B = C(0, 1) / C(1, 1);
      dev_delta = std::max(dev_delta, std::abs(delta - ref.Delta(0, j)));
      dev_B = std::max(dev_B, std::abs(B - ref.B(0, j)));
    }

    // psi derivatives vs the undeformed closed form, pointwise
    double dev_psi = 0.0;
    auto psi_undef = [&](double rho, double v) {
      const double d1 = std::hypot(rho, v - 1.0), d2 = std::hypot(rho, v + 1.0);
      return std::log(((d1 + d2) * (d1 + d2) - 4.0) / (4.0 * d1 * d2));
    };
    for (auto [pr, pv] : psi_pts) {
      const double h = 1e-3;
      const MatR C = take();
      MatR Prho[4], Pv[4];
      for (int q = 0; q < 4; ++q) {
        Prho[q] = take();
        Pv[q] = take();
      }
      auto rich = [&](const MatR* P) {
        const MatR c1 = (P[0] - P[1]) / (2.0 * h);
        const MatR c2 = (P[2] - P[3]) / h;
        return MatR((4.0 * c2 - c1) / 3.0);
      };
      const MatR Ci = C.inverse();
      const MatR Arho = Ci * rich(Prho), Av = Ci * rich(Pv);
      const double dpsi_r =
          0.25 * pr * ((Arho * Arho).trace() - (Av * Av).trace());
      const double dpsi_v = 0.5 * pr * (Arho * Av).trace();
      const double hh = 1e-5;
      const double ref_r =
          (psi_undef(pr + hh, pv) - psi_undef(pr - hh, pv)) / (2.0 * hh);
      const double ref_v =
          (psi_undef(pr, pv + hh) - psi_undef(pr, pv - hh)) / (2.0 * hh);
      dev_psi = std::max(dev_psi, std::abs(dpsi_r - ref_r));
      dev_psi = std::max(dev_psi, std::abs(dpsi_v - ref_v));
    }
    res[xi_i] = {dev_delta, dev_B, dev_psi};
  }

  // at-least-quadratic scaling: halving xi shrinks the deviation by >= ~4x
  // (the B remainder is cubic by parity, which passes the one-sided test).
  // An absolute floor absorbs solver and finite-difference noise.
  auto quadratic = [&](auto pick, double floor_abs) {
    for (size_t i = 0; i + 1 < xis.size(); ++i)
      if (pick(res[i]) > pick(res[i + 1]) / 3.0 + floor_abs) return false;
    return true;
  };
  const bool qd = quadratic([](const PerXi& r) { return r.dev_delta; }, 1e-12);
  const bool qb = quadratic([](const PerXi& r) { return r.dev_B; }, 1e-11);
  const bool qp = quadratic([](const PerXi& r) { return r.dev_psi; }, 2e-8);
  // and the xi = 1e-3 deviations are themselves first-order small
  const bool small = res[0].dev_delta < 1e-6 && res[0].dev_B < 1e-6 &&
                     res[0].dev_psi < 1e-4;

  Outcome o;
  o.ok = qd && qb && qp && small;
  o.detail =
      fmt("dev(1e-3): Delta %.2e, B %.2e, psi %.2e", res[0].dev_delta,
          res[0].dev_B, res[0].dev_psi) +
      (qd ? "" : "; DELTA NOT QUADRATIC") + (qb ? "" : "; B NOT QUADRATIC") +
      (qp ? "" : "; PSI NOT QUADRATIC");
  return o;
}

// ---------------------------------------------------------------------------
// 8. Attractor 3x3: factorisation on a grid, det 1, field-equation residual.

Outcome crit8() {
  auto fam = builtin("attractor",
                     {{"h1", 1.0}, {"h2", 1.5}, {"Q", 2.0}, {"P", 1.0}});
  auto solve = [&](double rho, double v) {
    WeylPoint p(rho, v, 1);
    double r = 0.0;
    for (const cplx& q : fam.poles(p)) r = std::max(r, std::abs(q));
    auto g = AdmissibleContour::bump_contour(1, std::log(r) + 0.6, 128);
    return factorize_general(fam, p, g).M;
  };
  GridSpec gs{1.0, 2.0, 0.5, 2.0, 4, 4};
  std::vector<double> dets(static_cast<size_t>(gs.size()), 0.0);
  parallel_for(gs.size(), [&](int idx) {
    const MatR M = solve(gs.rho(idx / gs.n_v), gs.v(idx % gs.n_v));
    dets[static_cast<size_t>(idx)] = std::abs(M.determinant() - 1.0);
  });
  double mxdet = 0.0;
  for (double d : dets) mxdet = std::max(mxdet, d);
  const double fe = field_equation_residual_at(solve, 1.5, 1.25, 1, 1e-3);
  Outcome o;
  o.ok = mxdet <= 1e-8 && fe < 1e-5;
  o.detail = fmt("max |det-1| %.2e, field eq %.2e", mxdet, fe);
  return o;
}

// ---------------------------------------------------------------------------
// 9. Operator and property suite (condensed re-run of the key invariants).

Outcome crit9() {
  std::string bad;
  // S^2 = Id and Plemelj jump on a bump contour
  {
    auto g = AdmissibleContour::bump_contour(1, 0.916, 256);
    auto f = BoundarySamples::from_function(
        g, [](cplx z) { return std::exp(z) + 0.5 / z; });
    BoundarySamples sf(g, singular_S(f));
    const double mx = (singular_S(sf) - f.values).cwiseAbs().maxCoeff();
    if (mx > 1e-10) bad += fmt("; S^2 %.1e", mx);
    auto [fp, fm] = projections(f);
    double jp = 0.0;
    for (int j = 0; j < g.N(); ++j) {
      const cplx t = g.node(j);
      jp = std::max(jp, std::abs(fp[j] - std::exp(t)));
      jp = std::max(jp, std::abs(fm[j] - 0.5 / t));
    }
    if (jp > 1e-10) bad += fmt("; Plemelj %.1e", jp);
  }
  // winding numbers
  {
    auto g = AdmissibleContour::unit_circle(1, 256);
    auto wind = [&](const std::function<cplx(cplx)>& h) {
      return winding_number(BoundarySamples::from_function(g, h));
    };
    if (wind([](cplx) { return cplx(1.0, 0.0); }) != 0) bad += "; wind(1)";
    if (wind([](cplx z) { return (z - 0.3) * (z - 0.1) / (z * z * z); }) != -1)
      bad += "; wind(rational)";
  }
  // symbol-perturbation stability: O(eps) response
  {
    auto f = builtin("schwarzschild", {{"m", 1.0}});
    WeylPoint p(1.0, 0.2, 1);
    auto [t1, t2] = schwarzschild_tau12(p, 1.0);
    auto g = AdmissibleContour::bump_contour(
        1, std::log(std::max(std::abs(t1), std::abs(t2))) + 0.6, 256);
    auto samples = eval_on_contour(f, p, g);
    auto base = factorize_samples(g, samples);
    auto shift = [&](double eps) {
      auto s = samples;
      for (int j = 0; j < g.N(); ++j) {
        const cplx t = g.node(j);
        Mat d(2, 2);
        d << 1.0 + eps * (t + 1.0 / t), eps, eps,
            (1.0 - eps * eps) / (1.0 + eps * (t + 1.0 / t));
        s[static_cast<size_t>(j)] = s[static_cast<size_t>(j)] * d;
      }
      return (factorize_samples(g, s).Mstrict - base.Mstrict).norm();
    };
    const double d6 = shift(1e-6), d8 = shift(1e-8);
    if (!(d6 < 1e-4 && d6 / std::max(d8, 1e-300) > 50.0 &&
          d6 / std::max(d8, 1e-300) < 200.0))
      bad += fmt("; perturbation d6 %.1e ratio %.0f", d6, d6 / d8);
  }
  // det/symmetry invariants across the catalog
  {
    const std::vector<MonodromyFamily> fams = {
        builtin("schwarzschild", {{"m", 1.0}}),
        builtin("kerr", {{"m", 2.0}, {"a", 1.0}}),
        builtin("kasner_power"),
        builtin("einstein_rosen", {{"a", 1.0}, {"b", 0.7}, {"k", 1.0}}),
        builtin("schwarzschild_deformed", {{"m", 1.0}, {"xi", 1e-3}}),
    };
    double mx = 0.0;
    for (const auto& f : fams)
      for (cplx om : {cplx(2.7, 0.4), cplx(-3.0, 1.0)}) {
        const Mat M = f.eval(om);
        mx = std::max(mx, std::abs(M.determinant() - 1.0));
        mx = std::max(
            mx, (M - generalized_transpose(M, f.natural_involution)).norm());
      }
    if (mx > 1e-12) bad += fmt("; det/symmetry %.1e", mx);
  }
  Outcome o;
  o.ok = bad.empty();
  o.detail = bad.empty() ? "all operator invariants hold" : bad.substr(2);
  return o;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    Outcome (*run)();
    double budget;  // seconds, 4-core reference
  };
  const Entry entries[] = {
      {"Schwarzschild four-case grid", crit1, 30.0},
      {"exterior metric map", crit2, 0.0},
      {"Kerr ergosurface + existence verdict", crit3, 120.0},
      {"Einstein-Rosen Delta/psi/homotopy", crit4, 0.0},
      {"Kasner canonical chain", crit5, 0.0},
      {"generation: products and flattening", crit6, 0.0},
      {"deformed Schwarzschild xi-scaling", crit7, 0.0},
      {"attractor 3x3 grid", crit8, 0.0},
      {"operator/property suite", crit9, 0.0},
  };
  const double scale = budget_scale();
  int failures = 0;
  double total = 0.0;
  for (size_t i = 0; i < sizeof(entries) / sizeof(entries[0]); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = entries[i].run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    total += o.seconds;
    bool ok = o.ok;
    std::string extra;
    if (entries[i].budget > 0.0) {
      const double allowed = entries[i].budget * scale;
      extra = fmt(" [%.1f s / %.0f s]", o.seconds, allowed);
      if (o.seconds > allowed) {
        ok = false;
        extra += " OVER BUDGET";
      }
    } else {
      extra = fmt(" [%.1f s]", o.seconds);
    }
    std::printf("[%2zu] %s  %-38s %s%s\n", i + 1, ok ? "PASS" : "FAIL",
                entries[i].label, o.detail.c_str(), extra.c_str());
    if (!ok) ++failures;
  }
  // criterion 10: whole-suite wall clock
  const double allowed = 600.0 * scale;
  const bool t_ok = total < allowed;
  std::printf("[10] %s  %-38s %.1f s of %.0f s allowed (%.2gx 4-core budget)\n",
              t_ok ? "PASS" : "FAIL", "whole-suite wall clock", total, allowed,
              scale);
  if (!t_ok) ++failures;
  return failures;
}
