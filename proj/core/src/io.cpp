#include "aoimf/io.hpp"

#include <cstdio>
#include <cstdlib>

#include "aoimf/version.hpp"

namespace aoimf {

std::string format_double(double value) {
  char buf[64];
  // Shortest precision that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_file_preamble(std::ostream& os, std::uint64_t seed, const std::string& cfg_digest) {
  os << "# seed=" << seed << "\n";
  os << "# cfg_digest=" << cfg_digest << "\n";
  os << "# version=" << kVersion << "\n";
}

}  // namespace aoimf
