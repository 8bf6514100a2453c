#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

// Command-line front end. `run` parses arguments, runs one subcommand and
// writes its results; it never calls exit().

namespace bufstarv::cli {

enum ExitCode : int { ok = 0, usage_error = 1, domain_error = 2, verdict_failure = 3 };

/// start:end:step with an inclusive end. Throws ParameterError on bad syntax.
std::vector<double> parse_sweep(std::string_view text);

/// One positive integer per line, optional `file_size_packets` header.
std::vector<double> read_sizes_csv(const std::string& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

/// %.17g, with integral values printed without a decimal point.
std::string format_number(double x);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace bufstarv::cli
