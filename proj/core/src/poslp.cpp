#include "espc/poslp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace espc {

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'O', 'S', 'L', 'P', '1', '\n', '\0'};
constexpr std::size_t kMagicPrefix = 5;  // "POSLP"

std::string at_bit(std::uint64_t pos) { return " at bit " + std::to_string(pos); }

}  // namespace

Symbol Poslp::leaf_at(std::uint64_t pos) const {
  if (bits.access(pos)) throw PreconditionError("leaf_at: position " + std::to_string(pos) + " is not a leaf");
  return leaves.at(bits.rank(false, pos) - 1);
}

unsigned Poslp::label_width() const noexcept {
  const std::uint64_t range = n + sigma;
  return range <= 1 ? 0 : static_cast<unsigned>(std::bit_width(range - 1));
}

Poslp empty_poslp(std::uint64_t sigma) {
  Poslp p;
  p.sigma = sigma;
  return p;
}

Poslp to_poslp(const RuleStore& store, Symbol root) {
  if (!store.is_defined(root)) {
    throw PreconditionError("to_poslp: undefined root " + std::to_string(root));
  }
  Poslp p;
  p.sigma = store.sigma();

  const std::uint64_t sigma = store.sigma();
  std::vector<Symbol> renamed(store.size(), kNoSymbol);
  std::uint64_t next = sigma;

  struct Frame {
    Symbol s;
    bool children_done;
  };
  std::vector<Frame> stack{{root, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (store.is_terminal(f.s) || (!f.children_done && renamed[f.s - sigma] != kNoSymbol)) {
      p.bits.push_back(false);
      p.leaves.push_back(store.is_terminal(f.s) ? f.s : renamed[f.s - sigma]);
      continue;
    }
    if (f.children_done) {
      renamed[f.s - sigma] = next++;
      p.bits.push_back(true);
      continue;
    }
    const Rule& r = store.rule(f.s);
    stack.push_back({f.s, true});
    stack.push_back({r.right, false});
    stack.push_back({r.left, false});
  }
  p.bits.push_back(true);  // super root
  p.n = next - sigma;
  p.root = store.is_terminal(root) ? root : renamed[root - sigma];
  return p;
}

DecodedGrammar from_poslp(const Poslp& p, double alpha) {
  DecodedGrammar g{RuleStore(p.sigma, alpha), kNoSymbol};
  if (p.empty()) {
    if (!p.bits.empty() || !p.leaves.empty() || p.n != 0) {
      throw FormatError("empty grammar must have no bits or leaves", 0);
    }
    return g;
  }
  const std::uint64_t nbits = p.bits.size();
  if (nbits != 2 * p.n + 2) {
    throw FormatError("skeleton length " + std::to_string(nbits) + " != 2n+2 = " + std::to_string(2 * p.n + 2), 0);
  }
  if (p.leaves.size() != p.n + 1) {
    throw FormatError("leaf count " + std::to_string(p.leaves.size()) + " != n+1 = " + std::to_string(p.n + 1), 0);
  }
  if (!p.bits.access(nbits)) throw FormatError("missing super-root bit" + at_bit(nbits), nbits);

  std::vector<Symbol> stack;
  std::uint64_t leaf = 0;
  for (std::uint64_t pos = 1; pos < nbits; ++pos) {
    if (!p.bits.access(pos)) {
      if (leaf >= p.leaves.size()) throw FormatError("leaf labels exhausted" + at_bit(pos), pos);
      const Symbol label = p.leaves[leaf++];
      if (!g.store.is_defined(label)) {
        throw FormatError("leaf label " + std::to_string(label) + " references an undefined symbol" + at_bit(pos),
                          pos);
      }
      stack.push_back(label);
      continue;
    }
    if (stack.size() < 2) throw FormatError("stack underflow" + at_bit(pos), pos);
    const Symbol right = stack.back();
    stack.pop_back();
    const Symbol left = stack.back();
    stack.pop_back();
    const InternResult r = g.store.intern(left, right);
    if (!r.fresh) throw FormatError("duplicate production" + at_bit(pos), pos);
    stack.push_back(r.symbol);
  }
  if (stack.size() != 1) {
    throw FormatError(std::to_string(stack.size()) + " subtrees left under the super root" + at_bit(nbits), nbits);
  }
  if (g.store.size() != p.n) throw FormatError("variable count mismatch", nbits);
  g.root = stack.back();
  if (g.root != p.root) {
    throw FormatError("root field " + std::to_string(p.root) + " disagrees with skeleton root " +
                          std::to_string(g.root),
                      nbits);
  }
  return g;
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), 8);
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  std::uint64_t offset() const noexcept { return offset_; }

  std::size_t read(char* dst, std::size_t n) {
    is_.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(is_.gcount());
    offset_ += got;
    return got;
  }

  std::uint64_t u64(const char* field) {
    std::array<unsigned char, 8> b{};
    if (read(reinterpret_cast<char*>(b.data()), 8) != 8) {
      throw FormatError(std::string("truncated header: missing ") + field, offset_);
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  // Reads `n` bytes in bounded chunks so a corrupt length cannot force a
  // huge up-front allocation.
  std::vector<unsigned char> bytes(std::uint64_t n, std::uint64_t& got) {
    std::vector<unsigned char> out;
    got = 0;
    constexpr std::uint64_t kChunk = 1 << 20;
    while (got < n) {
      const std::uint64_t want = std::min(kChunk, n - got);
      out.resize(got + want);
      const std::size_t r = read(reinterpret_cast<char*>(out.data() + got), want);
      got += r;
      if (r < want) {
        out.resize(got);
        break;
      }
    }
    return out;
  }

 private:
  std::istream& is_;
  std::uint64_t offset_ = 0;
};

}  // namespace

void serialize(const Poslp& p, std::ostream& os) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, p.sigma);
  put_u64(os, p.n);
  put_u64(os, p.root);

  put_u64(os, p.bits.size());
  const std::uint64_t bbytes = (p.bits.size() + 7) / 8;
  std::string buf;
  buf.reserve(bbytes);
  for (std::uint64_t i = 0; i < bbytes; ++i) {
    buf.push_back(static_cast<char>((p.bits.words()[i / 8] >> (8 * (i % 8))) & 0xFF));
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));

  put_u64(os, p.leaves.size());
  const unsigned width = p.label_width();
  buf.clear();
  std::uint64_t acc = 0;
  unsigned filled = 0;
  for (Symbol label : p.leaves) {
    for (unsigned b = 0; b < width; ++b) {
      acc |= ((label >> b) & 1U) << filled;
      if (++filled == 8) {
        buf.push_back(static_cast<char>(acc));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) buf.push_back(static_cast<char>(acc));
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("serialize: write failed");
}

Poslp deserialize(std::istream& is) {
  Reader in(is);
  std::array<char, 8> magic{};
  const std::size_t got_magic = in.read(magic.data(), magic.size());
  if (got_magic < kMagicPrefix || std::memcmp(magic.data(), kMagic.data(), kMagicPrefix) != 0) {
    throw FormatError("bad magic", 0);
  }
  if (got_magic < magic.size() || magic != kMagic) {
    throw FormatError("version mismatch: expected POSLP1", kMagicPrefix);
  }

  Poslp p;
  p.sigma = in.u64("sigma");
  p.n = in.u64("variable count");
  p.root = in.u64("root");
  if (p.sigma == 0) throw FormatError("invariant violation: sigma must be positive", 8);

  const std::uint64_t nbits = in.u64("skeleton length");
  const std::uint64_t bbytes = nbits / 8 + (nbits % 8 != 0);
  std::uint64_t got = 0;
  const std::vector<unsigned char> braw = in.bytes(bbytes, got);
  if (got != bbytes) {
    throw FormatError("truncated skeleton: expected " + std::to_string(bbytes) + " bytes, got " + std::to_string(got),
                      in.offset());
  }
  for (std::uint64_t i = 0; i < nbits; ++i) p.bits.push_back((braw[i / 8] >> (i % 8)) & 1U);

  const std::uint64_t count = in.u64("leaf count");
  const unsigned width = p.label_width();
  const std::uint64_t lbits = count * width;
  if (width != 0 && lbits / width != count) throw FormatError("invariant violation: leaf count overflow", in.offset());
  const std::uint64_t lbytes = lbits / 8 + (lbits % 8 != 0);
  const std::vector<unsigned char> lraw = in.bytes(lbytes, got);
  if (got != lbytes) {
    const std::uint64_t entries = width == 0 ? count : got * 8 / width;
    throw FormatError("truncated leaf labels: expected " + std::to_string(count) + " entries, got " +
                          std::to_string(entries),
                      in.offset());
  }
  p.leaves.reserve(count);
  std::uint64_t bit = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    Symbol label = 0;
    for (unsigned b = 0; b < width; ++b, ++bit) {
      label |= static_cast<Symbol>((lraw[bit / 8] >> (bit % 8)) & 1U) << b;
    }
    p.leaves.push_back(label);
  }

  if (p.root == kNoSymbol) {
    if (p.n != 0 || nbits != 0 || count != 0) {
      throw FormatError("invariant violation: empty grammar with non-empty body", in.offset());
    }
    return p;
  }
  if (nbits != 2 * p.n + 2) {
    throw FormatError("invariant violation: |B| = " + std::to_string(nbits) + " but 2n+2 = " +
                          std::to_string(2 * p.n + 2),
                      in.offset());
  }
  if (count != p.n + 1) {
    throw FormatError("invariant violation: |L| = " + std::to_string(count) + " but n+1 = " +
                          std::to_string(p.n + 1),
                      in.offset());
  }
  return p;
}

}  // namespace espc
