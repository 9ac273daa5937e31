#pragma once

#include "metriclab/tangent.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace metriclab {

/// Decimal, "p/q" or "2^-k" (any base). Malformed text is a malformed-input error.
double parse_real(std::string_view text);

/// Comma list of reals, or "2^-a..2^-b" expanding to 2^-a, 2^-(a+1), ..., 2^-b.
std::vector<double> parse_scales(std::string_view text);

std::vector<double> parse_real_list(std::string_view text);

/// kind[:key=value;key=value...], e.g. "slit-carpet:r=harmonic;levels=3".
struct SpaceSpec {
    std::string kind;
    std::map<std::string, std::string> params;
};

SpaceSpec parse_space_spec(std::string_view text);

/// Generator for a parsed space spec. Unknown keys are a malformed-input error.
std::unique_ptr<SpaceGenerator> make_generator(const SpaceSpec& spec);

/// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Runs one subcommand (args excludes the program name). Returns the exit
/// status: 0 ok, 1 domain error, 2 usage or malformed input.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metriclab
