#pragma once

#include <vector>

#include "gravfact/types.hpp"

namespace gravfact {

// Rectangular (rho, v) lattice, nodes inclusive of both ends.
struct GridSpec {
  double rho_min, rho_max, v_min, v_max;
  int n_rho, n_v;

  void validate() const {
    if (!(rho_min > 0.0)) throw parameter_error("grid: rho_min > 0 required");
    if (!(rho_max > rho_min) || !(v_max > v_min))
      throw parameter_error("grid: empty coordinate range");
    if (n_rho < 2 || n_v < 2) throw parameter_error("grid: counts >= 2 required");
  }

  double h_rho() const { return (rho_max - rho_min) / (n_rho - 1); }
  double h_v() const { return (v_max - v_min) / (n_v - 1); }
  double rho(int i) const { return rho_min + i * h_rho(); }
  double v(int j) const { return v_min + j * h_v(); }
  int index(int i, int j) const { return i * n_v + j; }
  int size() const { return n_rho * n_v; }
};

// Coset representatives M(rho, v) sampled on a grid; index i * n_v + j.
struct CosetGrid {
  GridSpec grid;
  std::vector<MatR> M;
};

}  // namespace gravfact
