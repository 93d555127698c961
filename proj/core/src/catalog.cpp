#include "gravfact/catalog.hpp"

#include <cmath>

#include <json.hpp>

namespace gravfact {

namespace {

double getp(const std::map<std::string, double>& params, const std::string& key,
            std::optional<double> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback) return *fallback;
  throw parameter_error("missing family parameter: " + key);
}

cplx ipow(cplx z, int e) {
  if (e < 0) return 1.0 / ipow(z, -e);
  cplx r(1.0, 0.0);
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

// Pole pair {phi^+, phi^-} of a given singular omega value.
void push_phi_pair(std::vector<cplx>& out, cplx omega, const WeylPoint& p) {
  auto [plus, minus] = phi_roots(omega, p);
  out.push_back(plus);
  out.push_back(minus);
}

std::vector<Mat> tracked_cbrt_eval(
    const std::vector<cplx>& omegas,
    const std::function<cplx(cplx)>& ratio,      // H2/H1
    const std::function<Mat(cplx, cplx)>& core)  // (omega, cbrt) -> matrix
{
  std::vector<Mat> out;
  out.reserve(omegas.size());
  const cplx rot = std::exp(cplx(0.0, 2.0 * kPi / 3.0));
  cplx prev(0.0, 0.0);
  bool have_prev = false;
  cplx first(0.0, 0.0);
  for (const cplx& om : omegas) {
    const cplx r = ratio(om);
    cplx w = std::pow(r, 1.0 / 3.0);
    if (have_prev) {
      // continue the branch: nearest of the three cube roots
      cplx best = w;
      double bestd = std::abs(w - prev);
      for (int k = 1; k < 3; ++k) {
        w *= rot;
        const double d = std::abs(w - prev);
        if (d < bestd) {
          bestd = d;
          best = w;
        }
      }
      w = best;
    } else {
      first = w;
      have_prev = true;
    }
    prev = w;
    out.push_back(core(om, w));
  }
  // The tracked branch must close up (total winding of the ratio is zero on
  // a contour with all three poles inside).
  if (!omegas.empty()) {
    const cplx r0 = ratio(omegas.front());
    cplx w = std::pow(r0, 1.0 / 3.0);
    cplx best = w;
    double bestd = std::abs(w - prev);
    for (int k = 1; k < 3; ++k) {
      w *= rot;
      if (std::abs(w - prev) < bestd) {
        bestd = std::abs(w - prev);
        best = w;
      }
    }
    if (std::abs(best - first) > 1e-8 * std::max(1.0, std::abs(first)))
      throw numerical_error(
          "attractor symbol: cube-root branch does not close along the contour "
          "(pole configuration invalid for this contour)");
  }
  return out;
}

}  // namespace

DegreeVerdict degree_criterion(const DegreeData& d) {
  const int total = d.N1() + d.N2();
  if (total < 2 * d.n) return DegreeVerdict::CanonicalAlways;
  if (total == 2 * d.n) return DegreeVerdict::CurveExceptional;
  return DegreeVerdict::Reducible;
}

Mat generalized_transpose(const Mat& m, InvolutionRule rule) {
  switch (rule) {
    case InvolutionRule::Transpose:
      return m.transpose();
    case InvolutionRule::Identity:
      return m;
  }
  throw parameter_error("generalized_transpose: unknown rule");
}

std::pair<double, double> schwarzschild_tau12(const WeylPoint& p, double m) {
  const auto r1 = phi_roots(cplx(m, 0.0), p);
  const auto r2 = phi_roots(cplx(-m, 0.0), p);
  const cplx t1 = p.lambda == 1 ? r1.second : r1.first;
  const cplx t2 = p.lambda == 1 ? r2.second : r2.first;
  if (std::abs(t1.imag()) > 1e-12 || std::abs(t2.imag()) > 1e-12)
    throw domain_error(
        "schwarzschild_tau12: roots are complex at this Weyl point (outside "
        "the real-root region)");
  return {t1.real(), t2.real()};
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "identity",       "schwarzschild",          "kerr",
      "kasner_power",   "einstein_rosen",         "schwarzschild_deformed",
      "attractor"};
  return names;
}

MonodromyFamily builtin(const std::string& name,
                        const std::map<std::string, double>& params) {
  MonodromyFamily f;
  f.name = name;
  f.params = params;

  if (name == "identity") {
    const int n = static_cast<int>(getp(params, "n", 2.0));
    f.dims = n;
    f.lambda = static_cast<int>(getp(params, "lambda", 1.0));
    f.diagonal = true;
    f.eval = [n](cplx) { return Mat(Mat::Identity(n, n)); };
    f.poles = [](const WeylPoint&) { return std::vector<cplx>{}; };
    return f;
  }

  if (name == "schwarzschild") {
    const double m = getp(params, "m");
    const int lam = static_cast<int>(getp(params, "lambda", 1.0));
    if (!(m > 0.0)) throw parameter_error("schwarzschild: m > 0 required");
    f.lambda = lam;
    f.diagonal = true;
    f.degrees = DegreeData{2, 2, 0, 2};
    f.eval = [m, lam](cplx om) {
      Mat M = Mat::Zero(2, 2);
      M(0, 0) = static_cast<double>(lam) * (om - m) / (om + m);
      M(1, 1) = static_cast<double>(lam) * (om + m) / (om - m);
      return M;
    };
    f.poles = [m](const WeylPoint& p) {
      std::vector<cplx> out;
      push_phi_pair(out, cplx(m, 0.0), p);
      push_phi_pair(out, cplx(-m, 0.0), p);
      return out;
    };
    return f;
  }

  if (name == "kerr") {
    const double m = getp(params, "m");
    const double a = getp(params, "a");
    if (!(m > a && a > 0.0))
      throw parameter_error("kerr: m > a > 0 required (c = sqrt(m^2-a^2) real)");
    const double c = std::sqrt(m * m - a * a);
    f.lambda = 1;
    f.degrees = DegreeData{2, 2, 0, 2};
    f.eval = [m, a, c](cplx om) {
      Mat M(2, 2);
      const cplx q = om * om - c * c;
      M(0, 0) = ((om - m) * (om - m) + a * a) / q;
      M(0, 1) = 2.0 * a * m / q;
      M(1, 0) = M(0, 1);
      M(1, 1) = ((om + m) * (om + m) + a * a) / q;
      return M;
    };
    f.poles = [c](const WeylPoint& p) {
      std::vector<cplx> out;
      push_phi_pair(out, cplx(c, 0.0), p);
      push_phi_pair(out, cplx(-c, 0.0), p);
      return out;
    };
    return f;
  }

  if (name == "kasner_power") {
    const int e = static_cast<int>(getp(params, "exponent", 4.0));
    f.lambda = static_cast<int>(getp(params, "lambda", -1.0));
    f.diagonal = true;
    f.eval = [e](cplx om) {
      Mat M = Mat::Zero(2, 2);
      M(0, 0) = ipow(om, e);
      M(1, 1) = ipow(om, -e);
      return M;
    };
    f.poles = [](const WeylPoint& p) {
      std::vector<cplx> out;
      push_phi_pair(out, cplx(0.0, 0.0), p);
      return out;
    };
    return f;
  }

  if (name == "einstein_rosen") {
    const double a = getp(params, "a");
    const double b = getp(params, "b");
    const double k = getp(params, "k", 1.0);
    if (!(a > 0.0)) throw parameter_error("einstein_rosen: a > 0 required");
    if (!(k >= 0.0)) throw parameter_error("einstein_rosen: k >= 0 required");
    f.lambda = -1;
    f.diagonal = true;
    const double amp = 4.0 * b * std::exp(-a * k);
    f.eval = [amp, k](cplx om) {
      Mat M = Mat::Zero(2, 2);
      const cplx fo = amp * std::cos(k * om);
      M(0, 0) = std::exp(fo);
      M(1, 1) = std::exp(-fo);
      return M;
    };
    // Essential singularities only at tau = 0 and infinity; analytic on any
    // admissible contour.
    f.poles = [](const WeylPoint&) { return std::vector<cplx>{}; };
    return f;
  }

  if (name == "schwarzschild_deformed") {
    const double m = getp(params, "m");
    const double xi = getp(params, "xi");
    if (!(m > 0.0))
      throw parameter_error("schwarzschild_deformed: m > 0 required");
    f.lambda = 1;
    f.eval = [m, xi](cplx om) {
      Mat M(2, 2);
      const cplx ch = std::cosh(xi / om);
      const cplx sh = std::sinh(xi / om);
      M(0, 0) = (om - m) / (om + m) * ch;
      M(0, 1) = sh;
      M(1, 0) = sh;
      M(1, 1) = (om + m) / (om - m) * ch;
      return M;
    };
    f.poles = [m](const WeylPoint& p) {
      std::vector<cplx> out;
      push_phi_pair(out, cplx(m, 0.0), p);
      push_phi_pair(out, cplx(-m, 0.0), p);
      push_phi_pair(out, cplx(0.0, 0.0), p);  // essential point xi/omega
      return out;
    };
    return f;
  }

  if (name == "attractor") {
    const double h1 = getp(params, "h1");
    const double h2 = getp(params, "h2");
    const double Q = getp(params, "Q");
    const double P = getp(params, "P");
    if (!(h1 > 0.0 && h2 > 0.0 && Q > 0.0 && P > 0.0))
      throw parameter_error("attractor: h1, h2, Q, P > 0 required");
    f.lambda = 1;
    f.dims = 3;
    f.natural_involution = InvolutionRule::Identity;
    auto H1 = [h1, Q](cplx om) { return h1 + Q / om; };
    auto H2 = [h2, P](cplx om) { return h2 + P / om; };
    auto core = [H1, H2](cplx om, cplx w) {
      const cplx v1 = H1(om), v2 = H2(om);
      Mat M(3, 3);
      M << v1 * v2, std::sqrt(2.0) * v1, cplx(-1.0, 0.0),
          -std::sqrt(2.0) * v1, -v1 / v2, cplx(0.0, 0.0),
          cplx(-1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0);
      return Mat(w * M);
    };
    auto ratio = [H1, H2](cplx om) { return H2(om) / H1(om); };
    f.eval = [core, ratio](cplx om) {
      return core(om, std::pow(ratio(om), 1.0 / 3.0));
    };
    f.eval_path = [core, ratio](const std::vector<cplx>& omegas) {
      return tracked_cbrt_eval(omegas, ratio, core);
    };
    f.poles = [Q, P, h1, h2](const WeylPoint& p) {
      std::vector<cplx> out;
      push_phi_pair(out, cplx(0.0, 0.0), p);
      push_phi_pair(out, cplx(-Q / h1, 0.0), p);
      push_phi_pair(out, cplx(-P / h2, 0.0), p);
      return out;
    };
    return f;
  }

  std::string known;
  for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
  throw parameter_error("unknown monodromy family \"" + name +
                        "\"; builtins: " + known);
}

MonodromyFamily family_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw parameter_error(std::string("family JSON parse failure: ") + e.what());
  }
  const std::string name = j.at("name").get<std::string>();
  std::map<std::string, double> params;
  if (j.contains("params"))
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      params[it.key()] = it.value().get<double>();
  return builtin(name, params);
}

std::vector<Mat> eval_on_contour(const MonodromyFamily& f, const WeylPoint& p,
                                 const AdmissibleContour& g) {
  if (p.lambda != f.lambda)
    throw parameter_error("eval_on_contour: WeylPoint lambda does not match family");
  if (g.lambda() != f.lambda)
    throw parameter_error("eval_on_contour: contour lambda does not match family");
  for (const cplx& pole : f.poles(p))
    if (g.contains(pole) == PointSide::OnCurve)
      throw contour_error(
          "eval_on_contour: contour passes through a singularity of the "
          "composed symbol");

  std::vector<cplx> omegas(static_cast<size_t>(g.N()));
  for (int j = 0; j < g.N(); ++j)
    omegas[static_cast<size_t>(j)] = spectral_omega(g.node(j), p);

  std::vector<Mat> samples;
  if (f.eval_path) {
    samples = f.eval_path(omegas);
  } else {
    samples.reserve(omegas.size());
    for (const cplx& om : omegas) samples.push_back(f.eval(om));
  }

  for (const Mat& M : samples) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    double scale_n = 1.0;
    for (int i = 0; i < f.dims; ++i) scale_n *= scale;
    if (std::abs(M.determinant() - cplx(1.0, 0.0)) > 1e-10 * scale_n)
      throw numerical_error("eval_on_contour: det != 1 at a node");
  }
  return samples;
}

std::tuple<Mat, Mat, Mat> daniele_khrapkov_split(const MonodromyFamily& f,
                                                 cplx tau, const WeylPoint& p) {
  if (f.name != "schwarzschild_deformed")
    throw parameter_error(
        "daniele_khrapkov_split: defined for the schwarzschild_deformed family");
  const double m = f.params.at("m");
  const double xi = f.params.at("xi");
  const cplx om = spectral_omega(tau, p);
  if (std::abs(om - m) < 1e-14 || std::abs(om) < 1e-14)
    throw domain_error("daniele_khrapkov_split: tau at a pole of R or 1/omega");
  const cplx R = (om + m) / (om - m);
  Mat Sigma(2, 2), D = Mat::Zero(2, 2), J = Mat::Zero(2, 2);
  Sigma << cplx(1.0, 0.0), cplx(1.0, 0.0), R, -R;
  D(0, 0) = std::exp(xi / om);
  D(1, 1) = -std::exp(-xi / om);
  J(0, 1) = 1.0;
  J(1, 0) = 1.0;
  return {Sigma, D, J};
}

}  // namespace gravfact
