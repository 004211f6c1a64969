#include "espc/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <unordered_set>

namespace espc {

CoreSet::CoreSet(std::span<const CoreEvent> events, std::uint64_t sigma) : sigma_(sigma) {
  for (const CoreEvent& e : events) {
    if (e.variable < sigma) continue;
    const std::uint64_t k = e.variable - sigma;
    if (k >= bits_.size()) bits_.resize(k + 1, false);
    bits_[k] = true;
  }
}

bool CoreSet::contains(Symbol s) const noexcept {
  return s >= sigma_ && s - sigma_ < bits_.size() && bits_[s - sigma_];
}

bool verify_core(const ParseTree& tree, Symbol x, const FrequentPattern& p) {
  for (std::uint64_t start : p.occurrences) {
    if (!tree.has_node_within(x, start, start + p.length)) return false;
  }
  return true;
}

CoverReport best_core(const ParseTree& tree, const CoreSet& cores, const FrequentPattern& p) {
  CoverReport report{p, std::nullopt, 0, 0.0};
  if (p.occurrences.empty()) return report;

  // Core variables under the first occurrence, narrowed by every other one.
  std::unordered_set<Symbol> common;
  tree.nodes_within(p.first(), p.first() + p.length, [&](Symbol s, std::uint64_t) {
    if (cores.contains(s)) common.insert(s);
  });
  std::unordered_set<Symbol> seen;
  for (std::size_t k = 1; k < p.occurrences.size() && !common.empty(); ++k) {
    seen.clear();
    const std::uint64_t start = p.occurrences[k];
    tree.nodes_within(start, start + p.length, [&](Symbol s, std::uint64_t) {
      if (common.count(s) != 0) seen.insert(s);
    });
    common.swap(seen);
  }

  const RuleStore& store = tree.store();
  for (Symbol s : common) {
    const std::uint64_t len = store.length(s);
    if (!report.core || len > report.core_length || (len == report.core_length && s < *report.core)) {
      report.core = s;
      report.core_length = len;
    }
  }
  if (report.core) report.ratio = static_cast<double>(report.core_length) / static_cast<double>(p.length);
  return report;
}

CoverReport best_core(const ParseTree& tree, std::span<const CoreEvent> cores, const FrequentPattern& p) {
  return best_core(tree, CoreSet(cores, tree.store().sigma()), p);
}

CoverSummary report_table(std::span<const CoverReport> reports) {
  if (reports.empty()) throw PreconditionError("report_table: no frequent patterns");
  CoverSummary s;
  auto row = [](const CoverReport& r) {
    return SummaryRow{static_cast<double>(r.pattern.length), static_cast<double>(r.core_length), r.ratio};
  };
  s.min = s.max = row(reports.front());
  SummaryRow sum{};
  const CoverReport* lo = &reports.front();
  const CoverReport* hi = &reports.front();
  for (const CoverReport& r : reports) {
    const SummaryRow x = row(r);
    s.min.pattern_length = std::min(s.min.pattern_length, x.pattern_length);
    s.min.core_length = std::min(s.min.core_length, x.core_length);
    s.min.ratio = std::min(s.min.ratio, x.ratio);
    s.max.pattern_length = std::max(s.max.pattern_length, x.pattern_length);
    s.max.core_length = std::max(s.max.core_length, x.core_length);
    s.max.ratio = std::max(s.max.ratio, x.ratio);
    sum.pattern_length += x.pattern_length;
    sum.core_length += x.core_length;
    sum.ratio += x.ratio;
    if (r.ratio < lo->ratio) lo = &r;
    if (r.ratio > hi->ratio) hi = &r;
  }
  const auto n = static_cast<double>(reports.size());
  s.mean = {sum.pattern_length / n, sum.core_length / n, sum.ratio / n};
  s.aligned_min = row(*lo);
  s.aligned_max = row(*hi);
  s.aligned_mean = {s.mean.pattern_length, s.mean.core_length,
                    s.mean.pattern_length > 0 ? s.mean.core_length / s.mean.pattern_length : 0.0};
  return s;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void summary_line(std::ostream& os, const char* name, const SummaryRow& r) {
  os << name << '\t' << fixed(r.pattern_length, 1) << '\t' << fixed(r.core_length, 1) << '\t'
     << fixed(100.0 * r.ratio, 2) << '\n';
}

}  // namespace

void write_report_tsv(std::ostream& os, std::span<const CoverReport> reports) {
  os << "pattern_rank\tpattern_len\tpattern_freq\tcore_id\tcore_len\tratio_percent\n";
  if (reports.empty()) {
    os << "# no frequent patterns\n";
    return;
  }
  std::size_t rank = 0;
  for (const CoverReport& r : reports) {
    os << ++rank << '\t' << r.pattern.length << '\t' << r.pattern.frequency() << '\t';
    if (r.core) {
      os << *r.core;
    } else {
      os << '-';
    }
    os << '\t' << r.core_length << '\t' << fixed(100.0 * r.ratio, 2) << '\n';
  }
  const CoverSummary s = report_table(reports);
  os << "\nsummary\tpattern_len\tcore_len\tratio_percent\n";
  summary_line(os, "min", s.min);
  summary_line(os, "max", s.max);
  summary_line(os, "mean", s.mean);
  summary_line(os, "aligned_min", s.aligned_min);
  summary_line(os, "aligned_max", s.aligned_max);
  summary_line(os, "aligned_mean", s.aligned_mean);
}

}  // namespace espc
