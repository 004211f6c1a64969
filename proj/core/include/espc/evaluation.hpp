#pragma once

// Joins reported cores with exact frequent patterns and summarizes cover
// ratios |val(X)| / |P| as min/max/mean tables.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "espc/compressor.hpp"
#include "espc/frequent.hpp"
#include "espc/parse_tree.hpp"

namespace espc {

struct CoverReport {
  FrequentPattern pattern;
  std::optional<Symbol> core;
  std::uint64_t core_length = 0;
  double ratio = 0.0;  // core_length / |P|
};

// Membership set over reported core variables.
class CoreSet {
 public:
  CoreSet(std::span<const CoreEvent> events, std::uint64_t sigma);
  bool contains(Symbol s) const noexcept;

 private:
  std::uint64_t sigma_;
  std::vector<bool> bits_;
};

// True iff every occurrence of P contains a node labeled x deriving a
// subinterval of it. Throws PreconditionError if x is not in the tree.
bool verify_core(const ParseTree& tree, Symbol x, const FrequentPattern& p);

// Longest reported core of P (ties: smallest id), or none.
CoverReport best_core(const ParseTree& tree, const CoreSet& cores, const FrequentPattern& p);
CoverReport best_core(const ParseTree& tree, std::span<const CoreEvent> cores, const FrequentPattern& p);

struct SummaryRow {
  double pattern_length = 0;
  double core_length = 0;
  double ratio = 0;  // fraction in [0, 1]
};

// Independent rows take min/max/mean of each column separately; aligned rows
// come from the reports with the minimum and maximum ratio, and the mean row
// divides mean core length by mean pattern length.
struct CoverSummary {
  SummaryRow min, max, mean;
  SummaryRow aligned_min, aligned_max, aligned_mean;
};

// Throws PreconditionError on an empty report set.
CoverSummary report_table(std::span<const CoverReport> reports);

// Per-pattern TSV followed by the summary block; an empty report set prints
// the header and a "no frequent patterns" line.
void write_report_tsv(std::ostream& os, std::span<const CoverReport> reports);

}  // namespace espc
