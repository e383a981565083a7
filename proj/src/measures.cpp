#include "gio/measures.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gio/linalg.hpp"
#include "fmt.hpp"

namespace gio {

namespace {

void require_physical(const CovState& state, const Tolerances& tols) {
    const PhysicalityReport rep = state_physicality(state, tols);
    if (!rep.ok)
        throw PhysicsError("state violates the uncertainty bound (min eig sigma + i Omega = " +
                           std::to_string(rep.min_eigenvalue) + "); refusing to evaluate measures on it");
}

CovState as_ladder(const CovState& state) {
    return state.basis == Basis::Ladder ? state : from_quadrature(state);
}

CovState as_quadrature(const CovState& state) {
    return state.basis == Basis::Quadrature ? state : to_quadrature(state);
}

// diag(+1, -1) per mode.  For a ladder-basis CM the Williamson spectrum is
// |eig(Z sigma)|: Z sigma is similar to -i Omega sigma_quadrature, whose
// eigenvalues are the +-i nu pairs.  (Sigma sigma is *not* similar to it.)
CMat z_pattern(int n) {
    CMat z = CMat::Zero(2 * n, 2 * n);
    for (int j = 0; j < n; ++j) {
        z(2 * j, 2 * j) = 1.0;
        z(2 * j + 1, 2 * j + 1) = -1.0;
    }
    return z;
}

}  // namespace

double squeezing_db(const CovState& state, const Tolerances& tols) {
    require_physical(state, tols);
    const CovState q = as_quadrature(state);
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(q.sigma), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo <= 0.0)
        throw PhysicsError("covariance matrix is not positive definite");
    return std::max(0.0, -10.0 * std::log10(lo));
}

double purity(const CovState& state, const Tolerances& tols) {
    require_physical(state, tols);
    const double det = std::abs(state.sigma.determinant());
    if (det <= 0.0)
        throw PhysicsError("covariance matrix is singular");
    return 1.0 / std::sqrt(det);
}

double log_negativity(const CovState& state, const Tolerances& tols) {
    if (state.n_modes() != 2)
        throw std::invalid_argument("log_negativity is defined for exactly two modes");
    require_physical(state, tols);
    const CovState l = as_ladder(state);

    // Partial transpose of mode 2 swaps a_2 and its adjoint.
    CMat t = CMat::Identity(4, 4);
    t(2, 2) = 0.0;
    t(3, 3) = 0.0;
    t(2, 3) = 1.0;
    t(3, 2) = 1.0;

    const CMat prod = z_pattern(2) * t * l.sigma * t;
    Eigen::ComplexEigenSolver<CMat> es(prod, /*computeEigenvectors=*/false);
    const double nu_minus = es.eigenvalues().cwiseAbs().minCoeff();
    if (nu_minus <= 0.0)
        throw NumericalError("partial-transpose spectrum collapsed to zero");
    return std::max(0.0, -std::log2(nu_minus));
}

double mean_occupation(const CovState& state, int mode, const Tolerances& tols) {
    if (mode < 0 || mode >= state.n_modes())
        throw std::invalid_argument("mean_occupation: mode index out of range");
    require_physical(state, tols);
    const CovState l = as_ladder(state);
    const double n = 0.5 * (l.sigma(2 * mode, 2 * mode).real() - 1.0) + std::norm(l.mean(2 * mode));
    return std::max(0.0, n);
}

RVec symplectic_eigenvalues(const CovState& state, const Tolerances& tols) {
    require_physical(state, tols);
    const CovState l = as_ladder(state);
    const int n = l.n_modes();
    Eigen::ComplexEigenSolver<CMat> es(CMat(z_pattern(n) * l.sigma),
                                       /*computeEigenvectors=*/false);
    std::vector<double> mods(static_cast<size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) mods[static_cast<size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(mods.begin(), mods.end());
    // Moduli come in equal pairs (+nu, -nu); keep one per pair.
    RVec out(n);
    for (int j = 0; j < n; ++j) out(j) = 0.5 * (mods[static_cast<size_t>(2 * j)] + mods[static_cast<size_t>(2 * j + 1)]);
    return out;
}

MeasureReport measure_state(const CovState& state, const Tolerances& tols) {
    MeasureReport r;
    r.squeezing_db = squeezing_db(state, tols);
    r.purity = purity(state, tols);
    if (state.n_modes() == 2) r.logneg_ebits = log_negativity(state, tols);
    r.sympl_eigs = symplectic_eigenvalues(state, tols);
    r.mean_occupation = RVec(state.n_modes());
    for (int j = 0; j < state.n_modes(); ++j) r.mean_occupation(j) = mean_occupation(state, j, tols);
    return r;
}

std::string measure_csv_row(const MeasureReport& report, const std::string& state_id) {
    std::string row = state_id;
    row += ',' + detail::g12(report.squeezing_db);
    row += ',' + detail::g12(report.purity);
    row += ',';
    if (report.logneg_ebits) row += detail::g12(*report.logneg_ebits);
    for (Eigen::Index j = 0; j < report.mean_occupation.size(); ++j)
        row += ',' + detail::g12(report.mean_occupation(j));
    return row;
}

}  // namespace gio
