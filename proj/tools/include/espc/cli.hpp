#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "espc/frequent.hpp"

namespace espc::cli {

enum ExitCode : int { kOk = 0, kIoError = 2, kPrecondition = 3 };

struct Config {
  std::string input = "-";
  std::optional<std::string> output;
  double alpha = 0.8;
  std::uint64_t min_len = 1;
  std::size_t top_k = 100;
  Oracle oracle = Oracle::SuffixArray;
  std::optional<std::uint64_t> prefix_bytes;
  bool progress = false;

  // Throws PreconditionError on out-of-range values.
  void validate() const;
};

// Standard streams used by a command; tests substitute string streams.
struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

int cmd_compress(const Config& cfg, Streams io);
int cmd_decompress(const Config& cfg, Streams io);
int cmd_discover(const Config& cfg, Streams io);
int cmd_evaluate(const Config& cfg, Streams io);
int cmd_stats(const Config& cfg, Streams io);

// Parses `args` (without the program name), dispatches to a subcommand and
// maps exceptions to exit codes.
int run(const std::vector<std::string>& args, Streams io);

// Peak resident set size of this process in bytes (approximate).
std::uint64_t peak_rss_bytes();

}  // namespace espc::cli
