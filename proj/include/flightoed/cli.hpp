#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace flightoed {

// Exit statuses of the command-line front end.
enum ExitStatus : int { kExitSuccess = 0, kExitFailure = 1, kExitValidation = 2, kExitNonConvergence = 3 };

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

// "<axis>_<subcommand>_<16 hex digits of fnv1a64(content)>.<extension>"
std::string artifact_name(std::string_view axis, std::string_view subcommand, std::string_view content,
                          std::string_view extension);

// One invocation; `args` excludes the program name. Artifact paths are printed
// to `out`, one per line, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flightoed
