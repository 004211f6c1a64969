#include <sys/resource.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "espc/cli.hpp"
#include "espc/compressor.hpp"
#include "espc/evaluation.hpp"
#include "espc/poslp.hpp"

namespace espc::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::uint64_t kProgressEvery = std::uint64_t{16} << 20;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input from a path or "-" (the provided stream).
class Source {
 public:
  Source(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open input '" + path + "'");
    stream_ = file_.get();
  }

  std::istream& stream() { return *stream_; }

  // Calls sink(bytes) chunk by chunk, stopping after `limit` bytes.
  template <typename Sink>
  std::uint64_t each_chunk(Sink&& sink, std::uint64_t limit = ~std::uint64_t{0}) {
    std::vector<char> buf(kChunk);
    std::uint64_t total = 0;
    while (total < limit) {
      const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(kChunk, limit - total));
      stream_->read(buf.data(), want);
      const std::streamsize got = stream_->gcount();
      if (got <= 0) break;
      sink(std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(buf.data()),
                                          static_cast<std::size_t>(got)));
      total += static_cast<std::uint64_t>(got);
    }
    if (stream_->bad()) throw IoError("read error on input");
    return total;
  }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

// Writes to a temporary sibling and renames it over the target on commit;
// an uncommitted file is removed.
class AtomicFile {
 public:
  explicit AtomicFile(const std::string& path) : target_(path) {
    std::random_device rd;
    tmp_ = target_;
    tmp_ += ".tmp" + std::to_string(rd());
    os_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!os_) throw IoError("cannot create '" + tmp_.string() + "'");
  }
  ~AtomicFile() {
    if (!committed_) {
      os_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return os_; }

  void commit() {
    os_.flush();
    if (!os_) throw IoError("write failed on '" + tmp_.string() + "'");
    os_.close();
    std::error_code ec;
    fs::rename(tmp_, target_, ec);
    if (ec) throw IoError("cannot rename to '" + target_.string() + "': " + ec.message());
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  std::ofstream os_;
  bool committed_ = false;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string mb(std::uint64_t bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(bytes) / (1024.0 * 1024.0));
  return buf;
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

struct Compressed {
  StreamingCompressor compressor;
  std::uint64_t bytes = 0;
};

Compressed compress_source(const Config& cfg, Source& src, std::ostream& err,
                           StreamingCompressor::CoreCallback on_core = {}) {
  Compressed c{StreamingCompressor(kByteAlphabet, cfg.alpha, ReductionConfig{}, std::move(on_core))};
  std::uint64_t next_report = kProgressEvery;
  const std::uint64_t limit = cfg.prefix_bytes.value_or(~std::uint64_t{0});
  c.bytes = src.each_chunk(
      [&](std::span<const unsigned char> chunk) {
        c.compressor.push(chunk);
        if (cfg.progress && c.compressor.offset() >= next_report) {
          err << "progress: " << mb(c.compressor.offset()) << " MB, n=" << c.compressor.store().size() << '\n';
          next_report += kProgressEvery;
        }
      },
      limit);
  if (c.bytes > 0) c.compressor.finalize();
  return c;
}

Poslp poslp_of(const Compressed& c) {
  if (c.bytes == 0) return empty_poslp();
  return to_poslp(c.compressor.store(), c.compressor.root());
}

std::uint64_t write_poslp(const Poslp& p, const std::string& path) {
  AtomicFile f(path);
  serialize(p, f.stream());
  const auto size = static_cast<std::uint64_t>(f.stream().tellp());
  f.commit();
  return size;
}

}  // namespace

void Config::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("--alpha must lie in (0, 1)");
  if (min_len < 1) throw PreconditionError("--min-len must be at least 1");
  if (top_k < 1) throw PreconditionError("--top must be at least 1");
}

std::uint64_t peak_rss_bytes() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024;
}

int cmd_compress(const Config& cfg, Streams io) {
  cfg.validate();
  if (cfg.input == "-" && !cfg.output) throw PreconditionError("compress: reading stdin requires -o/--output");
  const std::string out_path = cfg.output.value_or(cfg.input + ".poslp");
  const Stopwatch clock;
  Source src(cfg.input, io.in);
  const Compressed c = compress_source(cfg, src, io.err);
  const Poslp p = poslp_of(c);
  const std::uint64_t out_bytes = write_poslp(p, out_path);
  io.err << "n=" << p.n << " |B|=" << p.bits.size() << " |L|=" << p.leaves.size() << " input_bytes=" << c.bytes
         << " output_bytes=" << out_bytes << " elapsed_s=" << secs(clock.seconds())
         << " peak_rss_mb=" << mb(peak_rss_bytes()) << '\n';
  return kOk;
}

int cmd_decompress(const Config& cfg, Streams io) {
  Source src(cfg.input, io.in);
  const Poslp p = deserialize(src.stream());
  const std::string out_path = cfg.output.value_or(cfg.input == "-" ? "-" : cfg.input + ".out");

  auto emit = [&](std::ostream& os) {
    if (p.empty()) return;
    const DecodedGrammar g = from_poslp(p);
    std::string buf;
    buf.reserve(kChunk);
    g.store.expand(g.root, [&](Symbol s) {
      buf.push_back(static_cast<char>(s));
      if (buf.size() == kChunk) {
        os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
      }
    });
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  };

  if (out_path == "-") {
    emit(io.out);
    io.out.flush();
    if (!io.out) throw IoError("write failed on standard output");
  } else {
    AtomicFile f(out_path);
    emit(f.stream());
    f.commit();
  }
  return kOk;
}

int cmd_discover(const Config& cfg, Streams io) {
  cfg.validate();
  io.out << "variable_id\tval_length\tdetection_offset\n";
  io.out.flush();
  Source src(cfg.input, io.in);
  const Compressed c = compress_source(cfg, src, io.err, [&](const CoreEvent& e) {
    if (e.val_length < cfg.min_len) return;
    io.out << e.variable << '\t' << e.val_length << '\t' << e.detection_offset << '\n';
    io.out.flush();
  });
  if (cfg.output) write_poslp(poslp_of(c), *cfg.output);
  io.err << "cores=" << c.compressor.core_count() << " n=" << c.compressor.store().size()
         << " input_bytes=" << c.bytes << '\n';
  return kOk;
}

int cmd_evaluate(const Config& cfg, Streams io) {
  cfg.validate();
  Source src(cfg.input, io.in);
  std::string text;
  const std::uint64_t limit = cfg.prefix_bytes.value_or(kOracleMaxBytes + 1);
  src.each_chunk([&](std::span<const unsigned char> chunk) { text.append(chunk.begin(), chunk.end()); }, limit);
  if (text.size() > kOracleMaxBytes) {
    throw PreconditionError("input exceeds the oracle bound of " + std::to_string(kOracleMaxBytes) +
                            " bytes; rerun with --prefix-bytes " + std::to_string(kOracleMaxBytes));
  }
  if (cfg.oracle == Oracle::BruteForce && text.size() > kBruteForceMaxBytes) {
    throw PreconditionError("--oracle bruteforce is limited to " + std::to_string(kBruteForceMaxBytes) +
                            " bytes; use --prefix-bytes or --oracle suffixarray");
  }
  std::vector<CoverReport> reports;
  if (!text.empty()) {
    std::vector<CoreEvent> events;
    StreamingCompressor c(kByteAlphabet, cfg.alpha, ReductionConfig{},
                          [&](const CoreEvent& e) { events.push_back(e); });
    for (unsigned char b : text) c.push(b);
    c.finalize();

    std::vector<FrequentPattern> top;
    if (cfg.oracle == Oracle::BruteForce) {
      top = top_k_non_inclusive(exact_frequent(text, cfg.min_len, Oracle::BruteForce), cfg.top_k);
    } else {
      top = top_k_non_inclusive(FrequentIndex(text), cfg.min_len, cfg.top_k);
    }
    const ParseTree tree(c.store(), c.root());
    const CoreSet cores(events, c.store().sigma());
    for (const FrequentPattern& p : top) reports.push_back(best_core(tree, cores, p));
  }
  write_report_tsv(io.out, reports);
  return kOk;
}

int cmd_stats(const Config& cfg, Streams io) {
  cfg.validate();
  const Stopwatch clock;
  Source src(cfg.input, io.in);
  const Compressed c = compress_source(cfg, src, io.err);
  const Poslp p = poslp_of(c);
  std::ostringstream encoded;
  serialize(p, encoded);
  const auto encoded_bytes = static_cast<std::uint64_t>(encoded.tellp());
  const double elapsed = clock.seconds();
  char ratio[32];
  std::snprintf(ratio, sizeof ratio, "%.4f",
                c.bytes == 0 ? 0.0 : static_cast<double>(encoded_bytes) / static_cast<double>(c.bytes));
  io.out << "input_bytes\t" << c.bytes << '\n'
         << "grammar_size\t" << p.n << '\n'
         << "height\t" << (c.bytes == 0 ? 0 : c.compressor.store().height(c.compressor.root())) << '\n'
         << "cores\t" << c.compressor.core_count() << '\n'
         << "encoded_bytes\t" << encoded_bytes << '\n'
         << "compression_ratio\t" << ratio << '\n'
         << "elapsed_seconds\t" << secs(elapsed) << '\n'
         << "peak_rss_mb\t" << mb(peak_rss_bytes()) << '\n';
  return kOk;
}

int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Streaming ESP grammar compression and approximate frequent patterns", "espc"};
  app.require_subcommand(1);
  Config cfg;
  std::string oracle = "suffixarray";
  std::string output;
  std::uint64_t prefix = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-i,--input", cfg.input, "Input path, or - for standard input")->required();
    sub->add_option("-o,--output", output, "Output path");
    sub->add_option("--alpha", cfg.alpha, "Hash table load factor in (0, 1)");
    sub->add_flag("--progress", cfg.progress, "Report progress on standard error");
  };
  CLI::App* compress = app.add_subcommand("compress", "Compress to a POSLP file");
  common(compress);
  CLI::App* decompress = app.add_subcommand("decompress", "Expand a POSLP file (-o - for standard output)");
  common(decompress);
  CLI::App* discover = app.add_subcommand("discover", "Stream core variables as TSV");
  common(discover);
  discover->add_option("--min-len", cfg.min_len, "Minimum expansion length of reported cores");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare cores with exact frequent patterns");
  common(evaluate);
  evaluate->add_option("--min-len", cfg.min_len, "Minimum pattern length");
  evaluate->add_option("--top", cfg.top_k, "Number of non-inclusive longest patterns");
  evaluate->add_option("--oracle", oracle, "Exact oracle")->check(CLI::IsMember({"bruteforce", "suffixarray"}));
  evaluate->add_option("--prefix-bytes", prefix, "Evaluate only this many leading bytes");
  CLI::App* stats = app.add_subcommand("stats", "Compression statistics");
  common(stats);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kPrecondition;
  }
  if (!output.empty()) cfg.output = output;
  if (prefix > 0) cfg.prefix_bytes = prefix;
  cfg.oracle = oracle == "bruteforce" ? Oracle::BruteForce : Oracle::SuffixArray;

  try {
    if (compress->parsed()) return cmd_compress(cfg, io);
    if (decompress->parsed()) return cmd_decompress(cfg, io);
    if (discover->parsed()) return cmd_discover(cfg, io);
    if (evaluate->parsed()) return cmd_evaluate(cfg, io);
    return cmd_stats(cfg, io);
  } catch (const FormatError& e) {
    io.err << "espc: format error: " << e.what() << '\n';
    return kIoError;
  } catch (const IoError& e) {
    io.err << "espc: " << e.what() << '\n';
    return kIoError;
  } catch (const PreconditionError& e) {
    io.err << "espc: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::ios_base::failure& e) {
    io.err << "espc: I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::runtime_error& e) {
    io.err << "espc: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace espc::cli
