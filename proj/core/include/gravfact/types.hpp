#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gravfact {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;

// Error taxonomy. The CLI maps these onto its exit codes:
//   parameter_error -> 1, no_canonical_error -> 2,
//   numerical_error (and derived) -> 3, verification_error -> 4.
struct gravfact_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct parameter_error : gravfact_error {
  using gravfact_error::gravfact_error;
};

// Evaluation outside an operation's mathematical domain (tau = 0, point
// outside a coordinate patch, ...). A usage error, same exit class as
// parameter_error.
struct domain_error : parameter_error {
  using parameter_error::parameter_error;
};

struct no_canonical_error : gravfact_error {
  using gravfact_error::gravfact_error;
};

struct numerical_error : gravfact_error {
  using gravfact_error::gravfact_error;
};

// Contour geometry conflicts: singularity on the curve, self-intersection,
// forbidden pole configuration.
struct contour_error : numerical_error {
  using numerical_error::numerical_error;
};

struct signature_error : numerical_error {
  using numerical_error::numerical_error;
};

// A residual check failed: the data do not describe a solution.
struct verification_error : gravfact_error {
  using gravfact_error::gravfact_error;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace gravfact
