#pragma once

#include <cstdio>
#include <string>

namespace gio::detail {

// Deterministic numeric formatting for CSV output: fixed precision,
// locale-independent, same bytes for the same double on every run.
inline std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace gio::detail
