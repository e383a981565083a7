#include "gio/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace gio {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(std::string(where) + ": missing required field '" + key + "'");
    return *it;
}

int mode_index(const json& j, const char* where) {
    if (!j.is_number_integer() || j.get<int>() < 1)
        throw ConfigError(std::string(where) + ": 'mode' must be a positive 1-based integer");
    return j.get<int>() - 1;
}

SweepSpec parse_sweep(const json& j) {
    SweepSpec s;
    s.variable = need(j, "variable", "sweep").get<std::string>();
    const auto& names = sweep_variables();
    if (std::find(names.begin(), names.end(), s.variable) == names.end()) {
        std::string known;
        for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("sweep: unknown variable '" + s.variable + "' (known: " + known + ")");
    }
    s.from = codec::real_from_json(need(j, "from", "sweep"), "sweep.from");
    s.to = codec::real_from_json(need(j, "to", "sweep"), "sweep.to");
    if (!(s.from <= s.to)) throw ConfigError("sweep: need from <= to");
    s.log_spacing = j.value("spacing", "linear") == std::string("log");
    if (j.contains("points")) {
        s.points = j.at("points").get<int>();
        if (s.points < 2) throw ConfigError("sweep: 'points' must be at least 2");
    }
    if (j.contains("step")) {
        s.step = codec::real_from_json(j.at("step"), "sweep.step");
        if (!(s.step > 0.0)) throw ConfigError("sweep: 'step' must be positive");
    }
    if (s.log_spacing) {
        if (s.points == 0) throw ConfigError("sweep: log spacing requires 'points'");
        if (!(s.from > 0.0)) throw ConfigError("sweep: log spacing requires from > 0");
    } else if (s.step == 0.0 && s.points == 0) {
        throw ConfigError("sweep: give either 'step' or 'points'");
    }
    return s;
}

InitialStateSpec parse_initial_state(const json& j) {
    InitialStateSpec s;
    const std::string type = need(j, "type", "initial_state").get<std::string>();
    if (j.contains("mode")) s.mode = mode_index(j.at("mode"), "initial_state");
    if (type == "vacuum") {
        s.kind = InitialStateSpec::Kind::Vacuum;
    } else if (type == "thermal") {
        s.kind = InitialStateSpec::Kind::Thermal;
        s.nbar = codec::real_from_json(need(j, "nbar", "initial_state"), "initial_state.nbar");
        if (s.nbar < 0.0) throw ConfigError("initial_state: 'nbar' must be nonnegative");
    } else if (type == "squeezed") {
        s.kind = InitialStateSpec::Kind::Squeezed;
        s.db = codec::real_from_json(need(j, "db", "initial_state"), "initial_state.db");
        if (s.db < 0.0) throw ConfigError("initial_state: 'db' must be nonnegative");
        const std::string axis = j.value("axis", "q");
        if (axis != "q" && axis != "p") throw ConfigError("initial_state: 'axis' must be \"q\" or \"p\"");
        s.axis = axis[0];
    } else {
        throw ConfigError("initial_state: unknown type '" + type + "'");
    }
    return s;
}

std::vector<ProfileEntry> parse_profile(const json& j) {
    const json& modes = need(j, "modes", "profile");
    if (!modes.is_array() || modes.empty())
        throw ConfigError("profile: 'modes' must be a nonempty array");
    std::vector<ProfileEntry> out;
    for (const auto& m : modes) {
        ProfileEntry e;
        e.mode = mode_index(need(m, "mode", "profile.modes"), "profile.modes");
        const json& mu = need(m, "mu", "profile.modes");
        if (mu.is_string()) {
            const std::string kind = mu.get<std::string>();
            if (kind == "matched") {
                e.kind = ProfileEntry::Kind::Matched;
            } else if (kind == "detector") {
                e.kind = ProfileEntry::Kind::Detector;
                e.bandwidth = codec::real_from_json(need(m, "bandwidth", "profile.modes"),
                                                    "profile.modes.bandwidth");
                if (!(e.bandwidth > 0.0)) throw ConfigError("profile: 'bandwidth' must be positive");
            } else {
                throw ConfigError("profile: 'mu' string must be \"matched\" or \"detector\"");
            }
        } else if (mu.is_array() && mu.size() == 2) {
            e.kind = ProfileEntry::Kind::Explicit;
            e.mu = Complex(codec::real_from_json(mu[0], "profile.modes.mu[0]"),
                           codec::real_from_json(mu[1], "profile.modes.mu[1]"));
            if (!(e.mu.real() < 0.0))
                throw ConfigError("profile: explicit mu must have a strictly negative real part");
        } else {
            throw ConfigError("profile: 'mu' must be \"matched\", \"detector\", or [re, im]");
        }
        for (const auto& prev : out)
            if (prev.mode == e.mode) throw ConfigError("profile: duplicate mode entry");
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const ProfileEntry& a, const ProfileEntry& b) {
        return a.mode < b.mode;
    });
    return out;
}

TwoSidedSpec parse_two_sided(const json& j) {
    TwoSidedSpec t;
    t.enabled = true;
    t.kappaL = codec::real_from_json(need(j, "kappaL", "two_sided"), "two_sided.kappaL");
    t.kappaR = codec::real_from_json(need(j, "kappaR", "two_sided"), "two_sided.kappaR");
    if (t.kappaL < 0.0 || t.kappaR < 0.0 || !(t.kappaL + t.kappaR > 0.0))
        throw ConfigError("two_sided: rates must be nonnegative with a positive sum");
    const std::string keep = j.value("keep", "both");
    if (keep == "both") t.keep_both = true;
    else if (keep == "left") t.keep_both = false;
    else throw ConfigError("two_sided: 'keep' must be \"both\" or \"left\"");
    return t;
}

}  // namespace

const std::vector<std::string>& sweep_variables() {
    static const std::vector<std::string> v = {"input_squeezing_db", "time", "nbar"};
    return v;
}

const std::vector<std::string>& output_names() {
    static const std::vector<std::string> v = {"squeezing_db", "purity", "logneg_ebits",
                                               "occupations", "inferred_occupation",
                                               "actual_occupation"};
    return v;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> v = {"indium_table1", "raw_indium"};
    return v;
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g;
    if (log_spacing) {
        const double lf = std::log(from), lt = std::log(to);
        for (int i = 0; i < points; ++i)
            g.push_back(std::exp(lf + (lt - lf) * i / (points - 1)));
    } else if (points > 1) {
        for (int i = 0; i < points; ++i)
            g.push_back(from + (to - from) * i / (points - 1));
    } else {
        // from + i*step rather than accumulation: a step that divides the
        // range then lands exactly on 'to'.  The epsilon forgives the
        // division's own rounding; it cannot add a point half a step out.
        const double count = (to - from) / step;
        if (count > 1e6) throw ConfigError("sweep: step yields more than 1e6 points");
        const int n = static_cast<int>(std::floor(count * (1.0 + 1e-12) + 1e-12));
        for (int i = 0; i <= n; ++i) g.push_back(std::min(from + i * step, to));
    }
    return g;
}

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (j.value("schema", "") != std::string("gio-run/1"))
        throw ConfigError("config: expected \"schema\": \"gio-run/1\"");

    RunConfig cfg;

    const json& sc = need(j, "scenario", "config");
    if (sc.is_string()) {
        cfg.scenario_preset = sc.get<std::string>();
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), cfg.scenario_preset) == names.end())
            throw ConfigError("config: unknown preset '" + cfg.scenario_preset + "'");
    } else if (sc.is_object()) {
        cfg.inline_system = system_from_json_text(sc.dump());
    } else {
        throw ConfigError("config: 'scenario' must be a preset name or an inline system object");
    }

    const std::string ch = need(j, "channel", "config").get<std::string>();
    if (ch == "pulse") cfg.channel = ChannelKind::Pulse;
    else if (ch == "detector") cfg.channel = ChannelKind::Detector;
    else if (ch == "stationary") cfg.channel = ChannelKind::Stationary;
    else throw ConfigError("config: 'channel' must be pulse, detector, or stationary");

    cfg.profile = parse_profile(need(j, "profile", "config"));
    if (j.contains("initial_state")) cfg.initial_state = parse_initial_state(j.at("initial_state"));
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep"));
    if (j.contains("two_sided")) cfg.two_sided = parse_two_sided(j.at("two_sided"));

    if (j.contains("time")) {
        cfg.time = codec::real_from_json(j.at("time"), "time");
        if (!(cfg.time > 0.0)) throw ConfigError("config: 'time' must be positive");
    }
    const bool sweeps_time = cfg.sweep && cfg.sweep->variable == "time";
    if (cfg.channel == ChannelKind::Detector && cfg.time == 0.0 && !sweeps_time)
        throw ConfigError("config: detector channel needs 'time' or a time sweep");
    if (sweeps_time && cfg.channel != ChannelKind::Detector)
        throw ConfigError("config: a time sweep only applies to the detector channel");

    if (j.contains("outputs")) {
        for (const auto& o : j.at("outputs")) {
            const std::string name = o.get<std::string>();
            const auto& names = output_names();
            if (std::find(names.begin(), names.end(), name) == names.end())
                throw ConfigError("config: unknown output '" + name + "'");
            cfg.outputs.push_back(name);
        }
        if (cfg.outputs.empty()) throw ConfigError("config: 'outputs' must not be empty");
    } else {
        cfg.outputs = {"squeezing_db", "purity", "logneg_ebits", "occupations"};
    }

    cfg.output_path = j.value("output_path", "");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string config_fingerprint(const std::string& raw_bytes) {
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a offset basis
    for (unsigned char c : raw_bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gio
