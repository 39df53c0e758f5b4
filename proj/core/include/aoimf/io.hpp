#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace aoimf {

/// Shortest decimal form that round-trips a double exactly (17 significant
/// digits via %.17g, trimmed).
std::string format_double(double value);

/// Standard comment preamble for every emitted data file: seed, config
/// digest, tool version.
void write_file_preamble(std::ostream& os, std::uint64_t seed, const std::string& cfg_digest);

}  // namespace aoimf
