#include "gio/units.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "gio/types.hpp"

namespace gio {

double parse_frequency(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s.empty()) throw ConfigError("empty frequency value");

    bool two_pi = false;
    if (s.rfind("2pi*", 0) == 0) {
        two_pi = true;
        s.erase(0, 4);
    }

    bool has_suffix = false;
    double unit = 1.0;
    auto strip_suffix = [&](const char* suf, double mult) {
        const size_t len = std::char_traits<char>::length(suf);
        if (!has_suffix && s.size() > len && s.compare(s.size() - len, len, suf) == 0) {
            has_suffix = true;
            unit = mult;
            s.erase(s.size() - len);
        }
    };
    strip_suffix("ghz", 1e9);
    strip_suffix("mhz", 1e6);
    strip_suffix("khz", 1e3);
    strip_suffix("hz", 1.0);

    if (has_suffix && !two_pi)
        throw ConfigError("ambiguous frequency '" + text +
                          "': unit suffixes require the 2pi* prefix, or give a raw rad/s number");

    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(value))
        throw ConfigError("cannot parse frequency '" + text + "'");

    return value * unit * (two_pi ? 2.0 * M_PI : 1.0);
}

}  // namespace gio
