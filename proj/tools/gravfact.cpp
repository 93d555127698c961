/*
 * gravfact CLI: factorisation sweeps, verification suites, ergosurface
 * traces, and generation pipelines over the builtin model catalog.
 *
 * Exit codes: 0 success, 1 parameter/usage error, 2 no canonical
 * factorisation, 3 numerical failure, 4 verification failure.
 */
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gravfact/catalog.hpp"
#include "gravfact/contour.hpp"
#include "gravfact/spacetime.hpp"
#include "gravfact/taugen.hpp"
#include "gravfact/types.hpp"
#include "gravfact/verify.hpp"
#include "gravfact/wh.hpp"

using nlohmann::json;
using namespace gravfact;

namespace {

int worker_count() {
  if (const char* env = std::getenv("GRAVFACT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Deterministic sweep: results land at their own indices regardless of
// completion order.
template <typename F>
void parallel_for(int count, const F& body) {
  const int nw = std::min(worker_count(), std::max(1, count));
  if (nw == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void atomic_write(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw parameter_error("cannot open output file: " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw parameter_error("cannot rename output file to: " + path);
}

void emit(const std::string& path, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    atomic_write(path, text);
}

std::pair<double, double> parse_at(const std::string& s) {
  double r, v;
  char comma;
  std::istringstream in(s);
  if (!(in >> r >> comma >> v) || comma != ',')
    throw parameter_error("--at expects \"rho,v\"");
  return {r, v};
}

GridSpec parse_grid(const std::string& s) {
  GridSpec g{};
  char c[5];
  std::istringstream in(s);
  if (!(in >> g.rho_min >> c[0] >> g.rho_max >> c[1] >> g.v_min >> c[2] >>
        g.v_max >> c[3] >> g.n_rho >> c[4] >> g.n_v))
    throw parameter_error(
        "--grid expects \"rho_min,rho_max,v_min,v_max,n_rho,n_v\"");
  g.validate();
  return g;
}

AdmissibleContour parse_contour(const std::string& spec, int lambda, int N) {
  if (spec == "unit" || spec == "circle")
    return AdmissibleContour::unit_circle(lambda, N);
  if (spec.rfind("bump:", 0) == 0)
    return AdmissibleContour::bump_contour(lambda, std::stod(spec.substr(5)), N);
  if (!spec.empty() && spec.front() == '{')
    return AdmissibleContour::from_json(spec).resampled(N);
  throw parameter_error("unknown contour spec \"" + spec +
                        "\" (unit | bump:C | JSON)");
}

struct CommonOpts {
  std::string model, contour, grid, at, out, report, config, reference, pipeline;
  int N = 256;
  int samples = 50;
  double tol = 1e-6;
  std::map<std::string, double> params;
};

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
  static const char* keys[] = {"m", "a",  "b",  "k", "xi",
                               "h1", "h2", "Q", "P", "exponent", "lambda"};
  for (const char* key : keys) {
    cmd->add_option_function<double>(
        std::string("--") + key,
        [&o, key](double val) { o.params[key] = val; });
  }
}

void apply_config(CommonOpts& o) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw parameter_error("cannot read config file: " + o.config);
  json j = json::parse(in);
  if (j.contains("model")) {
    const auto& m = j["model"];
    if (m.is_string()) {
      o.model = m.get<std::string>();
    } else {
      o.model = m.at("name").get<std::string>();
      if (m.contains("params"))
        for (const auto& [key, val] : m["params"].items())
          o.params[key] = val.get<double>();
    }
  }
  if (j.contains("contour")) {
    const auto& c = j["contour"];
    o.contour = c.is_string() ? c.get<std::string>() : c.dump();
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    std::ostringstream s;
    s << g.at("rho_min").get<double>() << ',' << g.at("rho_max").get<double>()
      << ',' << g.at("v_min").get<double>() << ',' << g.at("v_max").get<double>()
      << ',' << g.at("n_rho").get<int>() << ',' << g.at("n_v").get<int>();
    o.grid = s.str();
  }
  if (j.contains("at"))
    o.at = std::to_string(j["at"][0].get<double>()) + "," +
           std::to_string(j["at"][1].get<double>());
  if (j.contains("N")) o.N = j["N"].get<int>();
  if (j.contains("out")) o.out = j["out"].get<std::string>();
  if (j.contains("report")) o.report = j["report"].get<std::string>();
  if (j.contains("tol")) o.tol = j["tol"].get<double>();
  if (j.contains("pipeline")) {
    std::string s;
    for (const auto& name : j["pipeline"]) {
      if (!s.empty()) s += ",";
      s += name.get<std::string>();
    }
    o.pipeline = s;
  }
}

FactorizationResult factorize_point(const MonodromyFamily& f, const WeylPoint& p,
                                    const AdmissibleContour& g) {
  return f.diagonal ? factorize_diagonal(f, p, g) : factorize_general(f, p, g, g.N());
}

/*
 * Contour for a factorisation job. Default is the unit circle, except for
 * kerr, where the physical (exterior) configuration needs both minus-branch
 * poles inside: a per-point bump with 0.6 log-clearance beyond the outer pole.
 */
AdmissibleContour contour_for(const CommonOpts& o, const MonodromyFamily& fam,
                              const WeylPoint& p) {
  if (!o.contour.empty()) return parse_contour(o.contour, fam.lambda, o.N);
  if (fam.name == "kerr") {
    const double c = std::sqrt(fam.params.at("m") * fam.params.at("m") -
                               fam.params.at("a") * fam.params.at("a"));
    const double t1 = std::abs(phi_roots(cplx(c, 0.0), p).second);
    const double t2 = std::abs(phi_roots(cplx(-c, 0.0), p).second);
    return AdmissibleContour::bump_contour(
        fam.lambda, std::log(std::max(t1, t2)) + 0.6, o.N);
  }
  return AdmissibleContour::unit_circle(fam.lambda, o.N);
}

// ---------------------------------------------------------------------------
// factorize

int cmd_factorize(CommonOpts& o) {
  if (o.model.empty()) throw parameter_error("factorize: --model is required");
  MonodromyFamily fam = builtin(o.model, o.params);

  json report{{"schema", 1}, {"model", fam.name}, {"lambda", fam.lambda}};
  for (const auto& [key, val] : fam.params) report["params"][key] = val;

  if (!o.at.empty()) {
    const auto [r, v] = parse_at(o.at);
    const WeylPoint p = fam.point(r, v);
    const AdmissibleContour g0 = contour_for(o, fam, p);
    report["contour"] = json::parse(g0.to_json());
    const FactorizationResult res = factorize_point(fam, p, g0);
    const double ver = verify_factorization(res, fam, p);
    report["at"] = {r, v};
    report["sigma_min"] = res.sigma_min;
    report["cond"] = res.cond;
    report["sign"] = res.sign;
    report["residuals"] = {{"jump", res.jump_residual},
                           {"asymmetry", res.asymmetry},
                           {"factorization", ver}};
    if (res.dims() == 2) {
      report["Delta"] = 1.0 / res.M(1, 1);
      report["Btilde"] = res.M(0, 1) / res.M(1, 1);
    }
    if (fam.name == "schwarzschild") {
      const auto [t1, t2] = schwarzschild_tau12(p, fam.params.at("m"));
      report["case"] = classify_schwarzschild_case(g0, t1, t2);
    }
    emit(o.report.empty() ? o.out : o.report, report);
    return 0;
  }

  if (o.grid.empty())
    throw parameter_error("factorize: --at or --grid is required");
  const GridSpec gs = parse_grid(o.grid);

  CosetGrid Mg{gs, std::vector<MatR>(static_cast<size_t>(gs.size()))};
  std::vector<double> sig(static_cast<size_t>(gs.size())),
      jmp(static_cast<size_t>(gs.size()));
  parallel_for(gs.size(), [&](int idx) {
    const int i = idx / gs.n_v, j = idx % gs.n_v;
    const WeylPoint p = fam.point(gs.rho(i), gs.v(j));
    const FactorizationResult res = factorize_point(fam, p, contour_for(o, fam, p));
    Mg.M[static_cast<size_t>(idx)] = res.M;
    sig[static_cast<size_t>(idx)] = res.sigma_min;
    jmp[static_cast<size_t>(idx)] = res.jump_residual;
  });

  SpacetimeFields f;
  f.grid = gs;
  f.lambda = fam.lambda;
  f.sigma = 1;
  f.epsilon = fam.lambda;
  std::tie(f.Delta, f.Btilde) = fields_from_M(Mg);
  const std::pair<int, int> base{gs.n_rho - 1, 0};
  f.B = integrate_B(gs, f.Delta, f.Btilde, fam.lambda, base, &f.b_closure);
  f.psi = integrate_psi(connection_A(Mg), fam.lambda, base, &f.psi_closure);

  if (o.out.empty()) throw parameter_error("factorize --grid: --out is required");
  write_fields_csv(o.out, f);

  double sig_min = sig[0], jmp_max = 0.0;
  for (size_t k = 0; k < sig.size(); ++k) {
    if (!(sig[k] != sig[k]))  // skip NaN from the diagonal fast path
      sig_min = std::min(sig_min, sig[k]);
    jmp_max = std::max(jmp_max, jmp[k]);
  }
  report["grid"] = {{"rho_min", gs.rho_min}, {"rho_max", gs.rho_max},
                    {"v_min", gs.v_min},     {"v_max", gs.v_max},
                    {"n_rho", gs.n_rho},     {"n_v", gs.n_v}};
  report["fields_csv"] = o.out;
  report["sigma_min"] = sig_min;
  report["residuals"] = {{"jump_max", jmp_max},
                         {"b_closure", f.b_closure},
                         {"psi_closure", f.psi_closure}};
  if (fam.name == "schwarzschild") {
    const WeylPoint p = fam.point(gs.rho(0), gs.v(0));
    const auto [t1, t2] = schwarzschild_tau12(p, fam.params.at("m"));
    report["case"] = classify_schwarzschild_case(contour_for(o, fam, p), t1, t2);
  }
  emit(o.report, report);
  return 0;
}

// ---------------------------------------------------------------------------
// ergosurface

int cmd_ergosurface(CommonOpts& o) {
  const double m = o.params.count("m") ? o.params.at("m") : 2.0;
  const double a = o.params.count("a") ? o.params.at("a") : 1.0;
  if (!(m > a && a > 0.0))
    throw parameter_error("ergosurface: m > a > 0 required");
  const auto trace = ergosurface_trace(m, a, o.samples);
  std::ostringstream csv;
  csv << "y,u,rho,v\n";
  char buf[160];
  for (const auto& s : trace) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.y, s.u, s.rho,
                  s.v);
    csv << buf;
  }
  if (o.out.empty())
    std::cout << csv.str();
  else
    atomic_write(o.out, csv.str());
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct RefConnection {
  int lambda;
  std::function<double(double, double)> a_rho, a_v;  // A = diag(a, -a)
  std::optional<LaxPair> pair;                        // tau-invariance check
};

RefConnection reference_connection(const std::string& name,
                                   const std::map<std::string, double>& params) {
  auto getp = [&params](const char* key, double fb) {
    auto it = params.find(key);
    return it == params.end() ? fb : it->second;
  };
  if (name == "kasner") {
    RefConnection rc;
    rc.lambda = -1;
    rc.a_rho = [](double r, double) { return 4.0 / r; };
    rc.a_v = [](double, double) { return 0.0; };
    rc.pair = catalog_pair("kasner");
    return rc;
  }
  if (name == "einstein_rosen") {
    const double a = getp("a", 1.0), k = getp("k", 1.0);
    const double b = getp("b", std::exp(a * k) / 2.0);
    const double amp = 4.0 * b * std::exp(-a * k);
    RefConnection rc;
    rc.lambda = -1;
    rc.a_rho = [amp, k](double r, double w) {
      return -amp * std::cos(k * w) * k * bessel_Jn(1, k * r);
    };
    rc.a_v = [amp, k](double r, double w) {
      return -amp * k * std::sin(k * w) * bessel_Jn(0, k * r);
    };
    rc.pair = catalog_pair("einstein_rosen", {{"a", a}, {"b", b}, {"k", k}});
    return rc;
  }
  if (name == "schwarzschild_exterior") {
    const double m = getp("m", 1.0);
    RefConnection rc;
    rc.lambda = 1;
    auto dists = [m](double r, double w) {
      return std::pair<double, double>{std::hypot(r, w - m), std::hypot(r, w + m)};
    };
    rc.a_rho = [m, dists](double r, double w) {
      const auto [d1, d2] = dists(r, w);
      const double s = d1 + d2;
      return (r / d1 + r / d2) * (1.0 / (s - 2.0 * m) - 1.0 / (s + 2.0 * m));
    };
    rc.a_v = [m, dists](double r, double w) {
      const auto [d1, d2] = dists(r, w);
      const double s = d1 + d2;
      return ((w - m) / d1 + (w + m) / d2) *
             (1.0 / (s - 2.0 * m) - 1.0 / (s + 2.0 * m));
    };
    return rc;
  }
  if (name == "deformed_kasner") {
    const double a = getp("a", 1.0);
    const double b = getp("b", std::exp(a) / 2.0);
    const double bt = 2.0 * b * std::exp(-a);
    RefConnection rc;
    rc.lambda = -1;
    rc.a_rho = [bt](double r, double w) {
      return 4.0 / r - 2.0 * bt * std::cos(w) * bessel_Jn(1, r);
    };
    rc.a_v = [bt](double r, double w) {
      return -2.0 * bt * std::sin(w) * bessel_Jn(0, r);
    };
    rc.pair = product_solution(
        catalog_pair("einstein_rosen", {{"a", a}, {"b", b}, {"k", 1.0}}),
        catalog_pair("kasner"));
    return rc;
  }
  throw parameter_error("verify: unknown reference \"" + name + "\"");
}

int cmd_verify(CommonOpts& o) {
  json report{{"schema", 1}};
  std::string failed;

  if (!o.reference.empty()) {
    RefConnection rc = reference_connection(o.reference, o.params);
    if (std::getenv("GRAVFACT_TEST_CORRUPT")) {
      auto base = rc.a_rho;
      rc.a_rho = [base](double r, double w) { return base(r, w) + 1e-3; };
    }
    GridSpec gs = o.grid.empty()
                      ? GridSpec{0.5, 2.5, 0.25, 1.25, 6, 6}
                      : parse_grid(o.grid);
    if (o.grid.empty() && o.reference == "schwarzschild_exterior")
      gs = GridSpec{0.5, 2.5, 2.5, 4.0, 6, 6};
    // The Kasner Lax solution degenerates on the unit circle for |v| < rho
    // (its tau-zeros have modulus 1 there); keep the default strip above it.
    if (o.grid.empty() &&
        (o.reference == "kasner" || o.reference == "deformed_kasner"))
      gs = GridSpec{0.5, 1.5, 2.0, 3.0, 6, 6};

    // Richardson-extrapolated derivative of a scalar evaluator.
    auto D = [](const std::function<double(double)>& f, double x0) {
      const double h = 1e-5 * std::max(1.0, std::abs(x0));
      auto c = [&](double s) { return (f(x0 + s) - f(x0 - s)) / (2.0 * s); };
      return (4.0 * c(h / 2.0) - c(h)) / 3.0;
    };
    double field_eq = 0.0, curvature = 0.0;
    for (int i = 0; i < gs.n_rho; ++i)
      for (int j = 0; j < gs.n_v; ++j) {
        const double r = gs.rho(i), w = gs.v(j);
        const double dr =
            D([&](double x) { return x * rc.a_rho(x, w); }, r);
        const double dv = D([&](double x) { return rc.a_v(r, x); }, w);
        field_eq = std::max(field_eq, std::abs(rc.lambda * dr + r * dv));
        const double mixed =
            D([&](double x) { return rc.a_v(x, w); }, r) -
            D([&](double x) { return rc.a_rho(r, x); }, w);
        curvature = std::max(curvature, std::abs(mixed));
      }
    report["reference"] = o.reference;
    report["residuals"]["field_equation"] = field_eq;
    report["residuals"]["zero_curvature"] = curvature;
    if (field_eq > o.tol) failed = "field_equation";
    if (failed.empty() && curvature > o.tol) failed = "zero_curvature";

    if (rc.pair) {
      const WeylPoint mid(0.5 * (gs.rho_min + gs.rho_max),
                          0.5 * (gs.v_min + gs.v_max), rc.lambda);
      const auto circle = AdmissibleContour::unit_circle(rc.lambda, 64);
      const double inv = tau_invariance_residual(*rc.pair, circle, mid);
      report["residuals"]["tau_invariance"] = inv;
      if (failed.empty() && inv > o.tol) failed = "tau_invariance";

      auto Ar = [&rc](double r, double w) {
        MatR m = MatR::Zero(2, 2);
        m(0, 0) = rc.a_rho(r, w);
        m(1, 1) = -m(0, 0);
        return m;
      };
      auto Av = [&rc](double r, double w) {
        MatR m = MatR::Zero(2, 2);
        m(0, 0) = rc.a_v(r, w);
        m(1, 1) = -m(0, 0);
        return m;
      };
      const double lax =
          lax_residual(rc.pair->X, Ar, Av, /*omega=*/0.25, /*branch=*/-1, mid);
      report["residuals"]["lax"] = lax;
      if (failed.empty() && lax > std::max(o.tol, 1e-6)) failed = "lax";

      // psi from the connection against the closed-form reference, both
      // measured from the same anchor corner.
      try {
        const SpacetimeFields ref = reference_solution(o.reference, o.params, gs);
        const MatR psi_num =
            integrate_psi(gs, Ar, Av, rc.lambda, {gs.n_rho - 1, 0}, 128);
        const double anchor = ref.psi(gs.n_rho - 1, 0);
        double dev = 0.0;
        for (int i = 0; i < gs.n_rho; ++i)
          for (int j = 0; j < gs.n_v; ++j)
            dev = std::max(dev,
                           std::abs(psi_num(i, j) - (ref.psi(i, j) - anchor)));
        report["residuals"]["psi_deviation"] = dev;
        if (failed.empty() && dev > std::max(o.tol, 1e-6)) failed = "psi";
      } catch (const parameter_error&) {
        // reference catalog has no psi for this name/grid; skip
      }
    }

    // Convergence order of the field-equation stencil residual at h and h/2
    // (meaningful only above rounding level).
    {
      const double rmid = 0.5 * (gs.rho_min + gs.rho_max);
      const double vmid = 0.5 * (gs.v_min + gs.v_max);
      auto stencil = [&](double h) {
        auto d = [&](const std::function<double(double)>& f, double x0) {
          return (f(x0 + h) - f(x0 - h)) / (2.0 * h);
        };
        const double dr =
            d([&](double x) { return x * rc.a_rho(x, vmid); }, rmid);
        const double dv = d([&](double x) { return rc.a_v(rmid, x); }, vmid);
        return std::abs(rc.lambda * dr + rmid * dv);
      };
      const double r1 = stencil(2e-3), r2 = stencil(1e-3);
      if (r1 > 1e-12 && r2 > 1e-13)
        report["convergence_order"] = std::log2(r1 / r2);
    }
  } else if (!o.model.empty()) {
    MonodromyFamily fam = builtin(o.model, o.params);
    if (o.at.empty()) throw parameter_error("verify --model: --at is required");
    const auto [r, v] = parse_at(o.at);
    const WeylPoint p = fam.point(r, v);
    const AdmissibleContour g = contour_for(o, fam, p);
    const FactorizationResult res = factorize_point(fam, p, g);
    const double ver = verify_factorization(res, fam, p);
    report["model"] = fam.name;
    report["residuals"]["factorization"] = ver;
    if (ver > std::max(o.tol, 1e-8)) failed = "factorization";
    if (res.dims() == 2 &&
        fam.natural_involution == InvolutionRule::Transpose && !fam.diagonal) {
      const double sym = symmetric_form_check(res, fam, p);
      report["residuals"]["symmetric_form"] = sym;
      if (failed.empty() && sym > std::max(o.tol, 1e-8)) failed = "symmetric_form";
    }
  } else {
    throw parameter_error("verify: --reference or --model is required");
  }

  report["passed"] = failed.empty();
  if (!failed.empty()) report["failed_check"] = failed;
  emit(o.report.empty() ? o.out : o.report, report);
  if (!failed.empty()) {
    std::cerr << "verification failed: " << failed << "\n";
    return 4;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// generate

int cmd_generate(CommonOpts& o) {
  if (o.pipeline.empty())
    throw parameter_error("generate: --pipeline is required and non-empty");
  std::vector<std::string> names;
  std::stringstream ss(o.pipeline);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) names.push_back(item);
  if (names.empty()) throw parameter_error("generate: empty pipeline");

  LaxPair pair = catalog_pair(names[0], o.params);
  for (size_t i = 1; i < names.size(); ++i)
    pair = product_solution(pair, catalog_pair(names[i], o.params));

  const GridSpec gs = o.grid.empty() ? GridSpec{0.5, 2.5, 0.25, 1.25, 9, 9}
                                     : parse_grid(o.grid);
  CosetGrid Mg{gs, {}};
  Mg.M.resize(static_cast<size_t>(gs.size()));
  for (int i = 0; i < gs.n_rho; ++i)
    for (int j = 0; j < gs.n_v; ++j)
      Mg.M[static_cast<size_t>(gs.index(i, j))] = pair.M(gs.rho(i), gs.v(j));

  SpacetimeFields f;
  f.grid = gs;
  f.lambda = pair.lambda;
  f.sigma = 1;
  f.epsilon = pair.lambda;
  std::tie(f.Delta, f.Btilde) = fields_from_M(Mg);
  const std::pair<int, int> base{gs.n_rho - 1, 0};
  f.B = integrate_B(gs, f.Delta, f.Btilde, pair.lambda, base, &f.b_closure);
  // Connection by Richardson-extrapolated differences of the analytic product
  // M; the coarse output grid would otherwise dominate the psi error.
  auto Dm = [&pair](double r, double w, bool wrt_rho) {
    const double x0 = wrt_rho ? r : w;
    const double h = 1e-5 * std::max(1.0, std::abs(x0));
    auto at = [&](double x) { return wrt_rho ? pair.M(x, w) : pair.M(r, x); };
    auto c = [&](double s) -> MatR {
      return (at(x0 + s) - at(x0 - s)) / (2.0 * s);
    };
    return ((4.0 * c(h / 2.0) - c(h)) / 3.0).eval();
  };
  auto Ar = [&](double r, double w) -> MatR {
    return pair.M(r, w).inverse() * Dm(r, w, true);
  };
  auto Av = [&](double r, double w) -> MatR {
    return pair.M(r, w).inverse() * Dm(r, w, false);
  };
  f.psi = integrate_psi(gs, Ar, Av, pair.lambda, base, 64);
  f.psi_closure = 0.0;
  if (!o.out.empty()) write_fields_csv(o.out, f);

  // Spot-check at the small-rho / large-v grid corner: several catalog Lax
  // solutions (Kasner among them) degenerate on the unit circle when |v| < rho.
  const WeylPoint corner(gs.rho_min, gs.v_max, pair.lambda);
  const auto circle = AdmissibleContour::unit_circle(pair.lambda, 64);
  json report{{"schema", 1}, {"pipeline", names}};
  report["residuals"]["tau_invariance"] =
      tau_invariance_residual(pair, circle, corner);
  report["residuals"]["field_equation"] = field_equation_residual_at(
      pair.M, 0.5 * (gs.rho_min + gs.rho_max), 0.5 * (gs.v_min + gs.v_max),
      pair.lambda, 1e-3);
  if (!o.out.empty()) report["fields_csv"] = o.out;
  report["Delta_center"] = f.Delta(gs.n_rho / 2, gs.n_v / 2);
  emit(o.report, report);
  return 0;
}

// ---------------------------------------------------------------------------
// catalog

int cmd_catalog() {
  std::cout << "monodromy families:\n";
  for (const auto& name : builtin_names()) std::cout << "  " << name << "\n";
  std::cout << "lax pairs:\n";
  for (const char* name :
       {"kasner", "kasner_canonical", "interior_schwarzschild",
        "interior_flattener_1", "interior_flattener_2", "einstein_rosen"})
    std::cout << "  " << name << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical factorisation toolkit for reduced gravitational "
               "field equations"};
  app.require_subcommand(1);
  CommonOpts o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--contour", o.contour, "unit | bump:C | JSON spec");
    cmd->add_option("--N", o.N, "contour nodes (even)");
    cmd->add_option("--grid", o.grid,
                    "rho_min,rho_max,v_min,v_max,n_rho,n_v");
    cmd->add_option("--at", o.at, "single Weyl point \"rho,v\"");
    cmd->add_option("--out", o.out, "output file (CSV for field sweeps)");
    cmd->add_option("--report", o.report, "JSON report file (default stdout)");
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--tol", o.tol, "verification tolerance");
    add_param_flags(cmd, o);
  };

  CLI::App* fac = app.add_subcommand("factorize", "factorise a monodromy model");
  fac->add_option("--model", o.model, "builtin family name");
  add_common(fac);

  CLI::App* ver = app.add_subcommand("verify", "run residual verification");
  ver->add_option("--reference", o.reference, "closed-form reference name");
  ver->add_option("--model", o.model, "factorise-then-verify a family");
  add_common(ver);

  CLI::App* erg = app.add_subcommand("ergosurface", "trace the existence boundary");
  erg->add_option("--samples", o.samples, "number of y samples");
  add_common(erg);

  CLI::App* gen = app.add_subcommand("generate", "build a product solution");
  gen->add_option("--pipeline", o.pipeline, "comma-separated pair names");
  add_common(gen);

  app.add_subcommand("catalog", "list builtin models and pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_config(o);
    if (app.got_subcommand("factorize")) return cmd_factorize(o);
    if (app.got_subcommand("verify")) return cmd_verify(o);
    if (app.got_subcommand("ergosurface")) return cmd_ergosurface(o);
    if (app.got_subcommand("generate")) return cmd_generate(o);
    if (app.got_subcommand("catalog")) return cmd_catalog();
  } catch (const parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const no_canonical_error& e) {
    std::cerr << "no canonical factorisation: " << e.what() << "\n";
    return 2;
  } catch (const verification_error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 4;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
