#include "gravfact/verify.hpp"

#include <cmath>

#include <Eigen/LU>

namespace gravfact {

namespace {

// d/dx of a grid line: centered inside, one-sided second-order at the ends.
MatR line_deriv(const std::vector<MatR>& f, int k, int count, double h) {
  if (k > 0 && k < count - 1) return (f[k + 1] - f[k - 1]) / (2.0 * h);
  if (k == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  return (3.0 * f[count - 1] - 4.0 * f[count - 2] + f[count - 3]) / (2.0 * h);
}

}  // namespace

ConnectionGrids connection_A(const CosetGrid& Mg) {
  const GridSpec& g = Mg.grid;
  g.validate();
  if (static_cast<int>(Mg.M.size()) != g.size())
    throw parameter_error("connection_A: sample count does not match grid");
  ConnectionGrids out{g, {}, {}};
  out.A_rho.resize(Mg.M.size());
  out.A_v.resize(Mg.M.size());
  std::vector<MatR> line;
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const MatR& M = Mg.M[static_cast<size_t>(g.index(i, j))];
      Eigen::PartialPivLU<MatR> lu(M);
      if (std::abs(lu.determinant()) < 1e-14)
        throw numerical_error("connection_A: singular M on grid");
      // rho-line through (i, j)
      line.clear();
      for (int k = 0; k < g.n_rho; ++k) line.push_back(Mg.M[static_cast<size_t>(g.index(k, j))]);
      out.A_rho[static_cast<size_t>(g.index(i, j))] =
          lu.solve(line_deriv(line, i, g.n_rho, g.h_rho()));
      line.clear();
      for (int k = 0; k < g.n_v; ++k) line.push_back(Mg.M[static_cast<size_t>(g.index(i, k))]);
      out.A_v[static_cast<size_t>(g.index(i, j))] =
          lu.solve(line_deriv(line, j, g.n_v, g.h_v()));
    }
  return out;
}

ConnectionGrids connection_A(const GridSpec& g,
                             const std::function<MatR(double, double)>& M,
                             const std::function<MatR(double, double)>& dM_rho,
                             const std::function<MatR(double, double)>& dM_v) {
  g.validate();
  ConnectionGrids out{g, {}, {}};
  out.A_rho.resize(static_cast<size_t>(g.size()));
  out.A_v.resize(static_cast<size_t>(g.size()));
  for (int i = 0; i < g.n_rho; ++i)
    for (int j = 0; j < g.n_v; ++j) {
      const double r = g.rho(i), w = g.v(j);
      Eigen::PartialPivLU<MatR> lu(M(r, w));
      out.A_rho[static_cast<size_t>(g.index(i, j))] = lu.solve(dM_rho(r, w));
      out.A_v[static_cast<size_t>(g.index(i, j))] = lu.solve(dM_v(r, w));
    }
  return out;
}

MatR field_equation_residual(const CosetGrid& Mg, int lambda) {
  const ConnectionGrids A = connection_A(Mg);
  const GridSpec& g = Mg.grid;
  MatR res = MatR::Zero(g.n_rho, g.n_v);
  for (int i = 1; i < g.n_rho - 1; ++i)
    for (int j = 1; j < g.n_v - 1; ++j) {
      const MatR drho = (g.rho(i + 1) * A.A_rho[static_cast<size_t>(g.index(i + 1, j))] -
                         g.rho(i - 1) * A.A_rho[static_cast<size_t>(g.index(i - 1, j))]) /
                        (2.0 * g.h_rho());
      const MatR dv = (A.A_v[static_cast<size_t>(g.index(i, j + 1))] -
                       A.A_v[static_cast<size_t>(g.index(i, j - 1))]) /
                      (2.0 * g.h_v());
      res(i, j) = (lambda * drho + g.rho(i) * dv).cwiseAbs().maxCoeff();
    }
  return res;
}

double field_equation_residual_at(const std::function<MatR(double, double)>& M,
                                  double rho, double v, int lambda, double h) {
  auto A_rho = [&](double r, double w) {
    return MatR(M(r, w).partialPivLu().solve((M(r + h, w) - M(r - h, w)) / (2.0 * h)));
  };
  auto A_v = [&](double r, double w) {
    return MatR(M(r, w).partialPivLu().solve((M(r, w + h) - M(r, w - h)) / (2.0 * h)));
  };
  const MatR drho =
      ((rho + h) * A_rho(rho + h, v) - (rho - h) * A_rho(rho - h, v)) / (2.0 * h);
  const MatR dv = (A_v(rho, v + h) - A_v(rho, v - h)) / (2.0 * h);
  return (lambda * drho + rho * dv).cwiseAbs().maxCoeff();
}

MatR zero_curvature_residual(const ConnectionGrids& A) {
  const GridSpec& g = A.grid;
  MatR res = MatR::Zero(g.n_rho, g.n_v);
  for (int i = 1; i < g.n_rho - 1; ++i)
    for (int j = 1; j < g.n_v - 1; ++j) {
      const MatR dAv = (A.A_v[static_cast<size_t>(g.index(i + 1, j))] -
                        A.A_v[static_cast<size_t>(g.index(i - 1, j))]) /
                       (2.0 * g.h_rho());
      const MatR dAr = (A.A_rho[static_cast<size_t>(g.index(i, j + 1))] -
                        A.A_rho[static_cast<size_t>(g.index(i, j - 1))]) /
                       (2.0 * g.h_v());
      const MatR& Ar = A.A_rho[static_cast<size_t>(g.index(i, j))];
      const MatR& Av = A.A_v[static_cast<size_t>(g.index(i, j))];
      res(i, j) = (dAv - dAr + Ar * Av - Av * Ar).cwiseAbs().maxCoeff();
    }
  return res;
}

double lax_residual(const std::function<Mat(cplx, double, double)>& X,
                    const std::function<MatR(double, double)>& A_rho,
                    const std::function<MatR(double, double)>& A_v, double omega,
                    int branch, const WeylPoint& p) {
  auto F = [&](double r, double w) -> Mat {
    const WeylPoint q(r, w, p.lambda, p.sigma, p.epsilon);
    const auto roots = phi_roots(cplx(omega, 0.0), q);
    return X(branch > 0 ? roots.first : roots.second, r, w);
  };
  // Richardson-extrapolated central total derivatives.
  auto total = [&](bool in_rho) -> Mat {
    const double x0 = in_rho ? p.rho : p.v;
    const double h = 1e-5 * std::max(1.0, std::abs(x0));
    auto D = [&](double step) -> Mat {
      const Mat fp = in_rho ? F(p.rho + step, p.v) : F(p.rho, p.v + step);
      const Mat fm = in_rho ? F(p.rho - step, p.v) : F(p.rho, p.v - step);
      return (fp - fm) / (2.0 * step);
    };
    return (4.0 * D(h / 2.0) - D(h)) / 3.0;
  };

  const auto roots = phi_roots(cplx(omega, 0.0), p);
  const cplx tau = branch > 0 ? roots.first : roots.second;
  const Mat F0 = F(p.rho, p.v);
  const Mat Dr = total(true);
  const Mat Dv = total(false);
  const Mat Ar = A_rho(p.rho, p.v).cast<cplx>();
  const Mat Av = A_v(p.rho, p.v).cast<cplx>();
  const Mat r_rho = tau * (Dr + Ar * F0) - Dv;
  const Mat r_v = tau * (Dv + Av * F0) + static_cast<double>(p.lambda) * Dr;
  return std::max(r_rho.cwiseAbs().maxCoeff(), r_v.cwiseAbs().maxCoeff());
}

}  // namespace gravfact
