#include "gio/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace gio {

namespace {

void require_square(const CMat& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw NumericalError(os.str());
    }
}

}  // namespace

void require_finite(const CMat& m, const char* what) {
    if (!m.allFinite()) throw NumericalError(std::string(what) + " contains NaN/Inf entries");
}

void require_finite(const CVec& v, const char* what) {
    if (!v.allFinite()) throw NumericalError(std::string(what) + " contains NaN/Inf entries");
}

CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

SpectralReport spectral_report(const CMat& m) {
    require_square(m, "spectral_report input");
    require_finite(m, "spectral_report input");

    SpectralReport rep;
    Eigen::ComplexEigenSolver<CMat> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration failed to converge");
    rep.eigenvalues = es.eigenvalues();
    rep.max_real_part = rep.eigenvalues.real().maxCoeff();

    Eigen::JacobiSVD<CMat> svd(m);
    const double smax = svd.singularValues().maxCoeff();
    const double smin = svd.singularValues().minCoeff();
    rep.condition_estimate = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
    return rep;
}

bool is_stable(const SpectralReport& rep, const Tolerances& tols) {
    const double radius = rep.spectral_radius();
    return rep.max_real_part < 0.0 && rep.max_real_part < -tols.stab * radius;
}

CMat expm(const CMat& m, double t) {
    require_square(m, "expm input");
    require_finite(m, "expm input");
    if (!std::isfinite(t)) throw NumericalError("expm: time factor must be finite");
    return CMat(m * Complex(t, 0.0)).exp();
}

CMat solve_sylvester(const CMat& a, const CMat& b, const CMat& c, const Tolerances& tols) {
    require_square(a, "sylvester a");
    require_square(b, "sylvester b");
    require_finite(a, "sylvester a");
    require_finite(b, "sylvester b");
    require_finite(c, "sylvester c");
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.rows();
    if (c.rows() != n || c.cols() != m) {
        std::ostringstream os;
        os << "sylvester right-hand side has shape " << c.rows() << "x" << c.cols()
           << ", expected " << n << "x" << m;
        throw NumericalError(os.str());
    }

    // Unique solution iff spec(a) and spec(-b) are disjoint.
    const SpectralReport ra = spectral_report(a);
    const SpectralReport rb = spectral_report(b);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            gap = std::min(gap, std::abs(ra.eigenvalues(i) + rb.eigenvalues(j)));
    const double scale = std::max({1.0, ra.spectral_radius(), rb.spectral_radius()});
    if (gap < tols.stab * scale) {
        std::ostringstream os;
        os << "sylvester equation has no unique solution: min |eig(a) + eig(b)| = "
           << gap << " below tolerance " << tols.stab * scale;
        throw NumericalError(os.str());
    }

    // vec(a X + X b) = (I (x) a + b^T (x) I) vec(X), column-major vec.
    const Eigen::Index nm = n * m;
    CMat big = CMat::Zero(nm, nm);
    for (Eigen::Index j = 0; j < m; ++j) big.block(j * n, j * n, n, n) = a;
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index col = 0; col < m; ++col)
            big.block(r * n, col * n, n, n).diagonal().array() += b(col, r);

    const CVec rhs = Eigen::Map<const CVec>(c.data(), nm);
    Eigen::PartialPivLU<CMat> lu(big);
    const CVec xv = lu.solve(rhs);
    CMat x = Eigen::Map<const CMat>(xv.data(), n, m);

    const double resid = (a * x + x * b - c).norm();
    const double ref = (a.norm() + b.norm()) * x.norm() + c.norm();
    if (!(resid <= 1e-6 * std::max(1.0, ref)))
        throw NumericalError("sylvester solve residual unexpectedly large");
    return x;
}

CMat noise_integral(const CMat& a, const CMat& sigma, double t, const Tolerances& tols) {
    require_square(a, "noise_integral drift");
    require_finite(a, "noise_integral drift");
    require_finite(sigma, "noise_integral sigma");
    if (sigma.rows() != a.rows() || sigma.cols() != a.cols())
        throw NumericalError("noise_integral: sigma shape must match the drift");
    if (std::isnan(t) || t < 0.0) throw NumericalError("noise_integral: t must be >= 0 or t_infinity");

    const double sscale = std::max(1.0, sigma.norm());
    if ((sigma - sigma.adjoint()).norm() > tols.herm * sscale)
        throw NumericalError("noise_integral: sigma is not Hermitian within tolerance");

    const SpectralReport rep = spectral_report(a);
    if (!is_stable(rep, tols)) {
        std::ostringstream os;
        os << "noise_integral requires a strictly stable drift (max Re eig = "
           << rep.max_real_part << ")";
        throw PhysicsError(os.str());
    }

    if (t == 0.0) return CMat::Zero(a.rows(), a.cols());

    const CMat sig = hermitize(sigma);
    CMat rhs;
    if (std::isinf(t)) {
        rhs = -sig;
    } else {
        const CMat e = expm(a, t);
        rhs = e * sig * e.adjoint() - sig;
    }
    return hermitize(solve_sylvester(a, a.adjoint(), rhs, tols));
}

PsdReport psd_check(const CMat& m, double tol, const Tolerances& tols) {
    require_square(m, "psd_check input");
    require_finite(m, "psd_check input");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > tols.herm * scale)
        throw NumericalError("psd_check: matrix is not Hermitian within tolerance");

    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("psd_check: eigenvalue iteration failed");
    PsdReport rep;
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    rep.ok = rep.min_eigenvalue >= -tol * scale;
    return rep;
}

}  // namespace gio
