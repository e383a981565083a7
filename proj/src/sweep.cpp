#include "gio/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "fmt.hpp"

namespace gio {

namespace {

std::string fmt_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0.0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

// Final-state mode count after restriction and the optional split.
int final_mode_count(const RunConfig& cfg) {
    if (cfg.two_sided.enabled) return cfg.two_sided.keep_both ? 2 : 1;
    return static_cast<int>(cfg.profile.size());
}

struct ColumnPlan {
    std::vector<std::string> names;
    bool wants_measures = false;
    bool wants_inferred = false;
    bool wants_actual = false;
};

ColumnPlan plan_columns(const RunConfig& cfg) {
    ColumnPlan plan;
    const int m = final_mode_count(cfg);
    for (const auto& name : cfg.outputs) {
        if (name == "occupations") {
            for (int k = 1; k <= m; ++k) plan.names.push_back("occupation_" + std::to_string(k));
            plan.wants_measures = true;
        } else if (name == "inferred_occupation") {
            plan.names.push_back(name);
            plan.wants_inferred = true;
        } else if (name == "actual_occupation") {
            plan.names.push_back(name);
            plan.wants_actual = true;
        } else {
            plan.names.push_back(name);
            plan.wants_measures = true;
        }
    }
    if (plan.wants_inferred || plan.wants_actual) {
        if (cfg.channel != ChannelKind::Detector)
            throw ConfigError("occupation tracking outputs need the detector channel");
        if (cfg.profile.size() != 1)
            throw ConfigError("occupation tracking outputs need exactly one accessible mode");
    }
    return plan;
}

}  // namespace

PreparedScenario prepare_scenario(const RunConfig& cfg, const Tolerances& tols) {
    PreparedScenario sc;
    if (cfg.inline_system) {
        sc.spec = *cfg.inline_system;
        if (sc.spec.n == 1) {
            sc.nu_eff = sc.spec.H(0, 1).real();
            sc.kappa_eff = sc.spec.kappa(0);
        }
    } else if (cfg.scenario_preset == "indium_table1") {
        sc.ion = indium_table1();
    } else if (cfg.scenario_preset == "raw_indium") {
        sc.ion = derive_experimental(raw_indium());
    } else {
        throw ConfigError("unknown preset '" + cfg.scenario_preset + "'");
    }
    if (sc.ion) {
        sc.spec = ion_cavity_system(*sc.ion);
        sc.eff = effective_params(*sc.ion);
        sc.nu_eff = sc.ion->nu;
        sc.kappa_eff = sc.eff->kappa_eff;
    }
    sc.monitor_mode = 0;
    sc.model = build_drift(sc.spec, tols);
    const PhysicalityReport rep = validate_physicality(sc.spec, tols);
    if (!rep.ok)
        throw PhysicsError("input bath covariance violates the uncertainty bound (min eig " +
                           std::to_string(rep.min_eigenvalue) + ")");
    return sc;
}

ModeProfile build_profile(const RunConfig& cfg, const PreparedScenario& sc) {
    std::vector<int> accessible;
    std::vector<std::pair<int, Complex>> overrides;
    for (const auto& e : cfg.profile) {
        if (e.mode >= sc.spec.n)
            throw ConfigError("profile: mode " + std::to_string(e.mode + 1) + " exceeds the system size");
        accessible.push_back(e.mode);
        Complex mu;
        switch (e.kind) {
            case ProfileEntry::Kind::Matched:
                if (!(sc.kappa_eff > 0.0))
                    throw ConfigError("matched profile needs a preset scenario or a single-mode system");
                mu = Complex(-0.5 * sc.kappa_eff, sc.nu_eff);
                break;
            case ProfileEntry::Kind::Detector:
                // Filter centered on the signal line at -nu_eff in this frame.
                mu = Complex(-0.5 * e.bandwidth, -sc.nu_eff);
                break;
            case ProfileEntry::Kind::Explicit:
                mu = e.mu;
                break;
        }
        overrides.emplace_back(e.mode, mu);
    }
    return make_profile(sc.spec.kappa, std::move(accessible), overrides);
}

CovState build_initial_state(const InitialStateSpec& init, int n_modes) {
    if (init.mode < 0 || init.mode >= n_modes)
        throw ConfigError("initial_state: mode " + std::to_string(init.mode + 1) +
                          " exceeds the system size");
    CovState state = CovState::vacuum(n_modes);
    switch (init.kind) {
        case InitialStateSpec::Kind::Vacuum:
            break;
        case InitialStateSpec::Kind::Thermal:
            state.sigma.block<2, 2>(2 * init.mode, 2 * init.mode) =
                (2.0 * init.nbar + 1.0) * CMat::Identity(2, 2);
            break;
        case InitialStateSpec::Kind::Squeezed:
            state.sigma.block<2, 2>(2 * init.mode, 2 * init.mode) =
                CovState::squeezed_db(init.db, init.axis).sigma;
            break;
    }
    return state;
}

RunRow evaluate_point(const RunConfig& cfg, const PreparedScenario& sc, double sweep_value,
                      const Tolerances& tols) {
    InitialStateSpec init = cfg.initial_state;
    double t = cfg.time;
    if (cfg.sweep) {
        if (cfg.sweep->variable == "input_squeezing_db") {
            init.kind = InitialStateSpec::Kind::Squeezed;
            init.db = sweep_value;
        } else if (cfg.sweep->variable == "nbar") {
            init.kind = InitialStateSpec::Kind::Thermal;
            init.nbar = sweep_value;
        } else if (cfg.sweep->variable == "time") {
            t = sweep_value;
        }
    }

    const ModeProfile profile = build_profile(cfg, sc);
    GaussianChannel ch;
    switch (cfg.channel) {
        case ChannelKind::Pulse:
            ch = pulse_channel(sc.model, sc.spec.sigma_in, profile, tols);
            break;
        case ChannelKind::Detector:
            ch = detector_channel(sc.model, sc.spec.sigma_in, profile, t, tols);
            break;
        case ChannelKind::Stationary:
            ch = stationary_spectrum(sc.model, sc.spec.sigma_in, profile, tols);
            break;
    }

    const CovState state0 = build_initial_state(init, sc.spec.n);
    const CovState out_all = apply_channel(ch, state0);
    const CovState accessible = restrict_modes(out_all, ch.accessible);

    CovState final_state = accessible;
    if (cfg.two_sided.enabled) {
        if (accessible.n_modes() != 1)
            throw ConfigError("two_sided needs exactly one accessible mode");
        TwoSidedSplit split{cfg.two_sided.kappaL, cfg.two_sided.kappaR};
        final_state = two_sided_transform(split, accessible);
        if (!cfg.two_sided.keep_both) final_state = restrict_modes(final_state, {0});
    }

    const ColumnPlan plan = plan_columns(cfg);
    std::optional<MeasureReport> report;
    if (plan.wants_measures) report = measure_state(final_state, tols);

    RunRow row;
    row.sweep_value = sweep_value;
    row.warnings = ch.warnings;
    const int m = final_state.n_modes();
    for (const auto& name : plan.names) {
        double value = 0.0;
        bool present = true;
        if (name == "squeezing_db") {
            value = report->squeezing_db;
        } else if (name == "purity") {
            value = report->purity;
        } else if (name == "logneg_ebits") {
            present = report->logneg_ebits.has_value();
            if (present) value = *report->logneg_ebits;
        } else if (name.rfind("occupation_", 0) == 0) {
            const int k = std::stoi(name.substr(11)) - 1;
            present = k < m;
            if (present) value = report->mean_occupation(k);
        } else if (name == "inferred_occupation") {
            // Photon-rate inference: the filtered output power divided by the
            // occupancy relaxation rate of the monitored normal mode.  Using
            // the exact rate (rather than an effective-theory expression for
            // it) keeps the estimate consistent for coupled systems, where
            // the two differ noticeably.
            const double gamma = std::abs(2.0 * ch.lambda(2 * cfg.profile[0].mode).real());
            value = mean_occupation(accessible, 0, tols) * gamma /
                    (4.0 * slowest_relaxation_rate(sc.model));
        } else if (name == "actual_occupation") {
            const CovState at_t = propagate_state(sc.model, sc.spec.sigma_in, state0, t, tols);
            value = mean_occupation(at_t, sc.monitor_mode, tols);
        }
        row.values.push_back(value);
        row.present.push_back(present);
    }
    return row;
}

int thread_cap() {
    if (const char* env = std::getenv("GIO_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

RunResult execute_run(const RunConfig& cfg, const Tolerances& tols) {
    const PreparedScenario sc = prepare_scenario(cfg, tols);
    const ColumnPlan plan = plan_columns(cfg);

    std::vector<double> grid;
    if (cfg.sweep) {
        grid = cfg.sweep->grid();
    } else {
        grid.push_back(cfg.channel == ChannelKind::Detector ? cfg.time : 0.0);
    }

    RunResult res;
    res.sweep_label = cfg.sweep ? cfg.sweep->variable : "sweep_value";
    res.columns = plan.names;
    res.rows.resize(grid.size());

    const int workers = std::min<int>(thread_cap(), static_cast<int>(grid.size()));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                res.rows[i] = evaluate_point(cfg, sc, grid[i], tols);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (const auto& row : res.rows)
        for (const auto& warning : row.warnings)
            if (std::find(res.warnings.begin(), res.warnings.end(), warning) == res.warnings.end())
                res.warnings.push_back(warning);
    return res;
}

std::string render_csv(const RunConfig& cfg, const RunResult& res,
                       const std::string& fingerprint, double wall_ms) {
    std::string out;
    out += "# gio-run/1\n";
    out += "# config: " + fingerprint + "\n";
    out += "# scenario: " + (cfg.inline_system ? std::string("inline") : cfg.scenario_preset) + "\n";
    out += "# channel: " + std::string(to_string(cfg.channel)) + "\n";
    for (const auto& warning : res.warnings) out += "# warning: " + warning + "\n";

    char stamp[64] = "unknown";
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    if (gmtime_r(&now, &tm_utc)) std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    out += "# generated: " + std::string(stamp) + "\n";
    out += "# wall-time-ms: " + detail::g12(wall_ms) + "\n";

    std::string header = res.sweep_label;
    for (const auto& c : res.columns) header += "," + c;
    out += "# columns: " + header + "\n";
    out += header + "\n";
    for (const auto& row : res.rows) {
        out += detail::g12(row.sweep_value);
        for (size_t k = 0; k < row.values.size(); ++k) {
            out += ',';
            if (row.present[k]) out += detail::g12(row.values[k]);
        }
        out += '\n';
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write to '" + tmp + "'");
        f << content;
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw ConfigError("write failed for '" + tmp + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ConfigError("cannot move result into place at '" + path + "'");
    }
}

std::string validate_report(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(6);
    const PreparedScenario sc = prepare_scenario(cfg);

    os << "scenario: " << (cfg.inline_system ? "inline" : cfg.scenario_preset)
       << " (" << sc.spec.n << (sc.spec.n == 1 ? " mode" : " modes");
    if (!sc.spec.labels.empty()) {
        os << ": ";
        for (int j = 0; j < sc.spec.n; ++j) os << (j ? ", " : "") << sc.spec.labels[static_cast<size_t>(j)];
    }
    os << ")\n";

    os << "drift spectrum (rad/s):\n";
    for (Eigen::Index i = 0; i < sc.model.spectral.eigenvalues.size(); ++i)
        os << "  " << fmt_complex(sc.model.spectral.eigenvalues(i)) << "\n";
    if (sc.model.stable)
        os << "stability: stable, slowest decay |Re| = "
           << std::abs(sc.model.spectral.max_real_part) << "\n";
    else
        os << "stability: NOT STABLE (max Re = " << sc.model.spectral.max_real_part << ")\n";

    const PhysicalityReport rep = validate_physicality(sc.spec);
    os << "input physicality: min eig = " << rep.min_eigenvalue << (rep.ok ? " (ok)" : " (VIOLATED)") << "\n";

    if (sc.eff) {
        os << "effective parameters: J = " << sc.eff->J << ", delta' = " << sc.eff->delta_prime
           << ", kappa_eff = " << sc.eff->kappa_eff << "\n";
        os << "regime ratios: nu/kappa2 = " << sc.eff->ratio_nu_kappa2
           << ", kappa2/J = " << sc.eff->ratio_kappa2_J
           << ", J/(nbar kappa1) = " << sc.eff->ratio_J_heating << "\n";
        if (!large_detuning_ok(*sc.ion))
            os << "warning: Delta is below the large-detuning threshold 5*max(g0, Omega, kappa3)\n";
    }

    const ModeProfile profile = build_profile(cfg, sc);
    os << "profile:\n";
    for (int m : profile.accessible)
        os << "  mode " << (m + 1) << ": mu = " << fmt_complex(profile.lambda(2 * m)) << "\n";

    // Build the channel once so profile and model preconditions all fire here.
    double t_probe = cfg.time;
    if (cfg.sweep && cfg.sweep->variable == "time") t_probe = cfg.sweep->grid().front();
    GaussianChannel ch;
    switch (cfg.channel) {
        case ChannelKind::Pulse: ch = pulse_channel(sc.model, sc.spec.sigma_in, profile); break;
        case ChannelKind::Detector: ch = detector_channel(sc.model, sc.spec.sigma_in, profile, t_probe); break;
        case ChannelKind::Stationary: ch = stationary_spectrum(sc.model, sc.spec.sigma_in, profile); break;
    }
    os << "channel: " << to_string(cfg.channel) << " ok, defined modes:";
    for (int m : ch.defined_modes) os << " " << (m + 1);
    os << "\n";
    for (const auto& warning : ch.warnings) os << "warning: " << warning << "\n";

    if (cfg.sweep)
        os << "sweep: " << cfg.sweep->variable << ", " << cfg.sweep->grid().size()
           << " points in [" << cfg.sweep->from << ", " << cfg.sweep->to << "]\n";
    else
        os << "sweep: none (single point)\n";
    return os.str();
}

}  // namespace gio
