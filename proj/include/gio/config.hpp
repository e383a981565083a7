#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gio/channels.hpp"
#include "gio/system_model.hpp"

namespace gio {

// Parsed run configuration. Mode indices are 0-based here; the JSON schema
// and every printed message use 1-based mode numbers.

struct SweepSpec {
    std::string variable;  // registered name, see sweep_variables()
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;   // linear spacing when > 0
    int points = 0;      // alternative point count (required for log spacing)
    bool log_spacing = false;

    std::vector<double> grid() const;  // materialized ascending grid
};

struct InitialStateSpec {
    enum class Kind { Vacuum, Thermal, Squeezed };
    Kind kind = Kind::Vacuum;
    int mode = 0;       // the non-vacuum mode; all others start in vacuum
    double nbar = 0.0;  // Thermal
    double db = 0.0;    // Squeezed
    char axis = 'q';    // Squeezed
};

struct ProfileEntry {
    enum class Kind { Matched, Detector, Explicit };
    int mode = 0;
    Kind kind = Kind::Matched;
    double bandwidth = 0.0;  // Detector
    Complex mu{0.0, 0.0};    // Explicit
};

struct TwoSidedSpec {
    bool enabled = false;
    double kappaL = 0.0;
    double kappaR = 0.0;
    bool keep_both = true;  // false drops the right port (loss model)
};

struct RunConfig {
    std::string scenario_preset;              // empty when inline_system is set
    std::optional<SystemSpec> inline_system;
    ChannelKind channel = ChannelKind::Pulse;
    double time = 0.0;                        // detector readout time, s
    std::vector<ProfileEntry> profile;        // one entry per accessible mode
    InitialStateSpec initial_state;
    std::optional<SweepSpec> sweep;
    TwoSidedSpec two_sided;
    std::vector<std::string> outputs;
    std::string output_path;
};

const std::vector<std::string>& sweep_variables();
const std::vector<std::string>& output_names();
const std::vector<std::string>& preset_names();

// Throws ConfigError on schema violations; PhysicsError surfaces untouched
// when an inline system parses but describes an invalid model.
RunConfig parse_run_config(const std::string& json_text);

RunConfig load_run_config(const std::string& path);  // reads the file, then parses

// FNV-1a fingerprint of the raw config bytes, 16 hex digits.
std::string config_fingerprint(const std::string& raw_bytes);

}  // namespace gio
