#pragma once

#include <optional>
#include <string>

#include "gio/system_model.hpp"

namespace gio {

// Scalar figures of merit on covariance states. Every entry point checks
// physicality first and throws PhysicsError instead of clamping: a state
// that violates the uncertainty bound signals a channel bug upstream.

struct MeasureReport {
    double squeezing_db = 0.0;
    double purity = 1.0;
    std::optional<double> logneg_ebits;  // present only for two-mode states
    RVec sympl_eigs;                     // one per mode, each >= 1 - tol when physical
    RVec mean_occupation;                // one per mode
};

// max(0, -10 log10 of the smallest quadrature-basis CM eigenvalue).
// 0 for vacuum and thermal states.
double squeezing_db(const CovState& state, const Tolerances& tols = default_tols);

// 1 / sqrt(det sigma). Basis-independent; 1 iff pure. Not clamped.
double purity(const CovState& state, const Tolerances& tols = default_tols);

// Logarithmic negativity in ebits, max(0, -log2(nu_minus)) with nu_minus
// the smallest Williamson eigenvalue of T sigma T, T the partial transpose
// of the second mode. Defined for exactly two modes.
double log_negativity(const CovState& state, const Tolerances& tols = default_tols);

// <a_j' a_j> for 0-based mode j, including the first-moment contribution.
double mean_occupation(const CovState& state, int mode, const Tolerances& tols = default_tols);

// Williamson eigenvalues, one per mode, ascending. All equal to 1 iff the
// state is pure.
RVec symplectic_eigenvalues(const CovState& state, const Tolerances& tols = default_tols);

MeasureReport measure_state(const CovState& state, const Tolerances& tols = default_tols);

// One CSV data row: id, squeezing_db, purity, logneg_ebits (blank when
// undefined), then the per-mode occupations.
std::string measure_csv_row(const MeasureReport& report, const std::string& state_id);

}  // namespace gio
