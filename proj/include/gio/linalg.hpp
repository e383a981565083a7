// Dense complex linear-algebra kernel used by every other module:
// matrix exponentials, small Sylvester solves, integrated white-noise
// covariances and positive-semidefiniteness checks.
//
// Everything here targets the small dense matrices of few-mode bosonic
// networks (dimension 2n with n <= ~10); robustness is preferred over
// asymptotic cost throughout.

#pragma once

#include "gio/types.hpp"

namespace gio {

// Eigenvalues plus the two scalar summaries most callers need.
// condition_estimate is the 2-norm condition number of the matrix itself
// (singular value ratio), +inf when numerically singular.
struct SpectralReport {
    CVec eigenvalues;
    double max_real_part = 0.0;
    double condition_estimate = 0.0;

    double spectral_radius() const { return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0; }
};

struct PsdReport {
    bool ok = false;
    double min_eigenvalue = 0.0;
};

// Throws NumericalError if any entry is NaN/Inf.  `what` names the matrix
// in the error message.
void require_finite(const CMat& m, const char* what);
void require_finite(const CVec& v, const char* what);

// (m + m^dagger)/2.
CMat hermitize(const CMat& m);

// Eigenvalues, dominant real part and condition estimate of a square matrix.
SpectralReport spectral_report(const CMat& m);

// Strict stability: max Re(eig) below zero by a margin relative to the
// spectral radius.  A nilpotent/zero matrix is not considered stable.
bool is_stable(const SpectralReport& rep, const Tolerances& tols = default_tols);

// e^{m t} by scaling-and-squaring with a Pade rational approximant.
// t defaults to 1; m must be square and finite, t finite.
CMat expm(const CMat& m, double t = 1.0);

// Unique X with a X + X b = c.  Solved directly through the vectorised
// (Kronecker-structured) linear system; sizes here never exceed a few
// hundred unknowns.  Throws NumericalError when spectra of a and -b
// overlap within tolerance (no unique solution), reporting the gap.
CMat solve_sylvester(const CMat& a, const CMat& b, const CMat& c,
                     const Tolerances& tols = default_tols);

// integral_0^t e^{a s} sigma e^{a^dagger s} ds for a strictly stable drift a.
// Accepts t > 0, t == 0 (zero matrix) or the explicit t_infinity sentinel;
// the result is the unique solution of a X + X a^dagger = e^{at} sigma e^{a^dagger t} - sigma
// (right-hand side -sigma at t = infinity), re-Hermitised before return.
CMat noise_integral(const CMat& a, const CMat& sigma, double t,
                    const Tolerances& tols = default_tols);

// Hermiticity is enforced first (NumericalError beyond tols.herm relative
// slack); then the smallest eigenvalue is compared against
// -tol * max(1, ||m||_F).
PsdReport psd_check(const CMat& m, double tol = default_tols.psd,
                    const Tolerances& tols = default_tols);

}  // namespace gio
