#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace espc {

// Terminals occupy [0, sigma), variables [sigma, sigma + n) in creation order.
using Symbol = std::uint64_t;
using LevelString = std::vector<Symbol>;

inline constexpr Symbol kNoSymbol = std::numeric_limits<Symbol>::max();

// Byte alphabet used by the command-line front end.
inline constexpr std::uint64_t kByteAlphabet = 256;

// A caller broke a documented precondition (bad argument, empty input, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed serialized grammar or bit skeleton. `offset` is the bit (or byte)
// offset at which the problem was detected.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : std::runtime_error(what), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

// Symbol space or memory exhausted while growing the grammar.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace espc
