#pragma once

#include "handles.hpp"

#include <complex>
#include <string_view>

namespace cvtele::cli {

enum class StateRole { input, resource };

// Parses "1+0.5i", "-2i", "0.3", "i" and similar.
std::complex<double> parse_complex(std::string_view text);

// Accepts a preset ("vacuum", "coherent:1+0.5i", "coherent:1,0.5", "svs:0.8",
// "thermal:0.3") or a path to a JSON state document. Inputs are single-mode,
// resources two-mode; a thermal resource is a product of two thermal modes.
// Malformed specifications raise CliError with kExitUsage; a well-formed but
// unphysical JSON state raises kExitFailure.
StatePtr load_state(std::string_view text, StateRole role);

}  // namespace cvtele::cli
