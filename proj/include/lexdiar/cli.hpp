#pragma once

#include <iosfwd>

namespace lexdiar {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Subcommands: diarize, score, synth, report.
int cli_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lexdiar
