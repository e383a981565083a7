// Frequency parsing for config files and CLI input.
//
// Accepted forms (whitespace-insensitive):
//   "2pi*5MHz"  -> 2*pi * 5e6  rad/s
//   "2pi*24Hz"  -> 2*pi * 24   rad/s
//   "1.25e4"    -> 1.25e4      rad/s (raw angular rate)
// A unit suffix (Hz/kHz/MHz/GHz) is only legal together with the "2pi*"
// prefix; a bare "5MHz" is rejected as ambiguous.

#pragma once

#include <string>

namespace gio {

double parse_frequency(const std::string& text);

}  // namespace gio
