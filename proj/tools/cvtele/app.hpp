#pragma once

#include <iosfwd>

namespace cvtele::cli {

// Runs the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cvtele::cli
