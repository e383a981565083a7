#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gio/config.hpp"
#include "gio/measures.hpp"
#include "gio/scenarios.hpp"

namespace gio {

// Everything a run needs that does not change across sweep points.
struct PreparedScenario {
    SystemSpec spec;
    DriftModel model;
    double nu_eff = 0.0;     // matched-profile center frequency
    double kappa_eff = 0.0;  // matched-profile decay, also the occupancy rescale rate
    int monitor_mode = 0;    // mode tracked by "actual_occupation"
    std::optional<IonCavityParams> ion;
    std::optional<EffectiveParams> eff;
};

PreparedScenario prepare_scenario(const RunConfig& cfg, const Tolerances& tols = default_tols);

ModeProfile build_profile(const RunConfig& cfg, const PreparedScenario& sc);

// All modes start in vacuum except the one the config singles out.
CovState build_initial_state(const InitialStateSpec& init, int n_modes);

struct RunRow {
    double sweep_value = 0.0;
    std::vector<double> values;  // aligned with RunResult::columns
    std::vector<bool> present;   // false renders as an empty CSV cell
    std::vector<std::string> warnings;
};

struct RunResult {
    std::string sweep_label;           // first CSV column header
    std::vector<std::string> columns;  // remaining column headers
    std::vector<RunRow> rows;
    std::vector<std::string> warnings;  // deduplicated across rows
};

// One sweep point, fully self-contained; the round-trip tests call this
// directly to recompute CSV rows.
RunRow evaluate_point(const RunConfig& cfg, const PreparedScenario& sc, double sweep_value,
                      const Tolerances& tols = default_tols);

// Whole sweep; points evaluate in parallel (capped by GIO_THREADS), rows
// keep ascending sweep order.
RunResult execute_run(const RunConfig& cfg, const Tolerances& tols = default_tols);

// CSV with a '#' header block. Lines starting with "# generated:" and
// "# wall-time-ms:" vary between runs; everything else is deterministic.
std::string render_csv(const RunConfig& cfg, const RunResult& res,
                       const std::string& fingerprint, double wall_ms);

// Writes via a temp file plus rename: readers never observe a partial file.
void write_atomic(const std::string& path, const std::string& content);

// Human-readable validation: drift spectrum, stability margin, physicality,
// effective parameters with regime ratios, resolved profile, sweep summary.
std::string validate_report(const RunConfig& cfg);

int thread_cap();  // GIO_THREADS, default hardware concurrency

}  // namespace gio
