// Shared scalar/matrix aliases, tolerance knobs and error taxonomy.
//
// All covariance matrices in this library live in the interleaved ladder
// basis (a1, a1+, a2, a2+, ...) unless explicitly tagged as quadrature.
// Vacuum is normalised to the identity matrix in both bases.

#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gio {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Which operator basis a covariance matrix / channel is expressed in.
enum class Basis { Ladder, Quadrature };

// Sentinel for "evolve forever": the stationary branch of time integrals.
inline constexpr double t_infinity = std::numeric_limits<double>::infinity();

// Central tolerance record.  Every module takes these defaults; no other
// hard-coded epsilons are allowed in library code.
struct Tolerances {
    double stab = 1e-9;   // relative stability margin on Re(eig)
    double psd = 1e-9;    // relative floor for positive-semidefinite checks
    double herm = 1e-9;   // relative Hermiticity/symmetry slack on inputs
};

inline const Tolerances default_tols{};

// Bad or inconsistent user input (CLI / config / JSON).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Model violates a physical precondition (instability, unphysical
// covariance, lossless mode used as an output port, ...).
struct PhysicsError : std::runtime_error {
    explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: singular or near-degenerate solve, non-finite data.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gio
