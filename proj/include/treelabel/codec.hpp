#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "treelabel/bigint.hpp"
#include "treelabel/bits.hpp"

namespace treelabel {

// ---------------------------------------------------------------------------
// bound exponents: value = floor(2^(t/b))

struct BoundExp {
  std::uint64_t t = 0;
  unsigned b = 1;
  BigUint value() const { return pow2_frac_floor(t, b); }
};

// Smallest t with floor(2^(t/b)) >= x.
inline BoundExp round_pow(const BigUint& x, unsigned b) {
  if (x == 0) throw std::domain_error("round_pow: x == 0");
  if (b == 0) throw std::domain_error("round_pow: b == 0");
  std::uint64_t lo = static_cast<std::uint64_t>(b) * (bit_length(x) - 1);  // value(lo) <= x
  if (pow2_frac_floor(lo, b) >= x) return {lo, b};
  std::uint64_t hi = lo + b;  // value(hi) = 2^bitlen > x
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (pow2_frac_floor(mid, b) >= x) hi = mid;
    else lo = mid;
  }
  return {hi, b};
}

inline BoundExp round_pow(std::uint64_t x, unsigned b) { return round_pow(BigUint(x), b); }

// ---------------------------------------------------------------------------
// two-parts representation: value = m * 2^e, m kept on mbits bits

struct TwoParts {
  std::uint64_t m = 0;
  unsigned e = 0;
  unsigned mbits = 2;

  BigUint value() const { return BigUint(m) << e; }
  // e padded to ewidth bits, then m; order-preserving for canonical forms
  std::uint64_t key() const { return (static_cast<std::uint64_t>(e) << mbits) | m; }
  static TwoParts from_key(std::uint64_t key, unsigned mbits) {
    return {key & ((std::uint64_t(1) << mbits) - 1), static_cast<unsigned>(key >> mbits), mbits};
  }
};

enum class Rounding { Up, Down };

// Keeps the mbits most significant bits of x. Up rounds when a dropped bit is set.
inline TwoParts two_parts_round(const BigUint& x, unsigned mbits, Rounding mode = Rounding::Up) {
  if (mbits < 2 || mbits > 62) throw std::invalid_argument("two_parts_round: mbits out of range");
  unsigned bl = bit_length(x);
  if (bl <= mbits) return {x.convert_to<std::uint64_t>(), 0, mbits};
  unsigned e = bl - mbits;
  BigUint top = x >> e;
  std::uint64_t m = top.convert_to<std::uint64_t>();
  if (mode == Rounding::Up && (top << e) != x) {
    ++m;
    if (m == (std::uint64_t(1) << mbits)) {
      m >>= 1;
      ++e;
    }
  }
  return {m, e, mbits};
}

inline TwoParts two_parts_round(std::uint64_t x, unsigned mbits, Rounding mode = Rounding::Up) {
  return two_parts_round(BigUint(x), mbits, mode);
}

// ---------------------------------------------------------------------------
// monotone sequence codec: counter starts at z, 0 decrements, 1 emits counter

inline Bits encode_monotone(const std::vector<std::uint64_t>& seq, std::uint64_t z) {
  if (seq.size() > z) throw std::invalid_argument("encode_monotone: sequence longer than z");
  Bits out;
  std::uint64_t counter = z;
  for (std::uint64_t v : seq) {
    if (v > counter) throw std::invalid_argument("encode_monotone: not nonincreasing or out of range");
    for (; counter > v; --counter) out.push(false);
    out.push(true);
  }
  return out;
}

// Reads up to count elements; a stream ending early yields a shorter sequence.
inline std::vector<std::uint64_t> decode_monotone(const Bits& bits, std::uint64_t z, std::size_t count) {
  std::vector<std::uint64_t> seq;
  std::uint64_t counter = z;
  for (std::size_t i = 0; i < bits.size() && seq.size() < count; ++i) {
    if (bits[i]) {
      seq.push_back(counter);
    } else {
      if (counter == 0) throw std::invalid_argument("decode_monotone: counter underflow");
      --counter;
    }
  }
  return seq;
}

// ---------------------------------------------------------------------------
// broadword rank dictionary

struct OpCounter {
  std::uint64_t ops = 0;
  void add(std::uint64_t k = 1) { ops += k; }
};

class RankDict {
 public:
  RankDict() = default;

  static RankDict build(const std::vector<std::uint64_t>& keys, unsigned width) {
    if (width == 0 || width > 62) throw std::invalid_argument("RankDict: width out of range");
    RankDict d;
    d.k_ = keys.size();
    d.w_ = width;
    // the popcount multiply needs the block count to fit one block
    d.per_block_ = std::min<std::size_t>(64 / (width + 1), (std::size_t(1) << (width + 1)) - 1);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (keys[i] >> width) throw std::invalid_argument("RankDict: key too wide");
      if (i && keys[i] < keys[i - 1]) throw std::invalid_argument("RankDict: keys not sorted");
    }
    for (std::size_t i = 0; i < keys.size(); i += d.per_block_) {
      std::uint64_t word = 0;
      std::size_t cnt = std::min<std::size_t>(d.per_block_, keys.size() - i);
      // block j of the word holds key i+j, with its separator 1 on top
      for (std::size_t j = 0; j < cnt; ++j)
        word |= ((std::uint64_t(1) << width) | keys[i + j]) << (j * (width + 1));
      d.words_.push_back(word);
      d.counts_.push_back(static_cast<unsigned>(cnt));
    }
    return d;
  }

  std::size_t size() const { return k_; }
  unsigned width() const { return w_; }
  std::size_t blocks() const { return words_.size(); }

  // |{i : a_i < x}|
  std::size_t rank(std::uint64_t x, OpCounter* ops = nullptr) const {
    if (ops) ops->add(2);
    if (k_ == 0) return 0;
    if (bit_length(x) > w_) return k_;  // longer than every key
    std::size_t ge = 0;
    for (std::size_t bi = 0; bi < words_.size(); ++bi) {
      const unsigned k = counts_[bi];
      const unsigned stride = w_ + 1;
      const std::uint64_t ones = repeat_low(k, stride);  // (0^w 1)^k
      const std::uint64_t highs = ones << w_;            // (1 0^w)^k
      std::uint64_t diff = words_[bi] - x * ones;
      std::uint64_t flags = (diff & highs) >> w_;
      // all flags collide in the top block
      std::uint64_t sum = (flags * ones) >> ((k - 1) * stride);
      sum &= (stride >= 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << stride) - 1);
      ge += sum;
      if (ops) ops->add(9);
    }
    if (ops) ops->add(1);
    return k_ - ge;
  }

  // s = 1 a_1 1 a_2 ... 1 a_k
  Bits to_bits() const {
    Bits b;
    for (std::size_t bi = 0; bi < words_.size(); ++bi)
      for (unsigned j = 0; j < counts_[bi]; ++j) {
        b.push(true);
        b.append(key_at(bi, j), w_);
      }
    return b;
  }

  static RankDict from_bits(const Bits& bits, std::size_t k, unsigned width) {
    if (bits.size() != k * (width + 1)) throw std::invalid_argument("RankDict: bit length mismatch");
    std::vector<std::uint64_t> keys;
    BitReader r(bits);
    for (std::size_t i = 0; i < k; ++i) {
      if (!r.bit()) throw std::invalid_argument("RankDict: missing separator");
      keys.push_back(r.read(width));
    }
    return build(keys, width);
  }

  std::uint64_t key(std::size_t i) const { return key_at(i / per_block_, i % per_block_); }

 private:
  static std::uint64_t repeat_low(unsigned k, unsigned stride) {
    // ((1 << k*stride) - 1) / ((1 << stride) - 1), in 128 bits so k*stride == 64 is fine
    unsigned __int128 top = static_cast<unsigned __int128>(1) << (k * stride);
    return static_cast<std::uint64_t>((top - 1) / ((static_cast<unsigned __int128>(1) << stride) - 1));
  }

  std::uint64_t key_at(std::size_t block, unsigned j) const {
    return (words_[block] >> (j * (w_ + 1))) & ((std::uint64_t(1) << w_) - 1);
  }

  std::size_t k_ = 0;
  unsigned w_ = 1;
  std::size_t per_block_ = 1;
  std::vector<std::uint64_t> words_;
  std::vector<unsigned> counts_;
};

inline std::size_t naive_rank(const std::vector<std::uint64_t>& keys, std::uint64_t x) {
  std::size_t r = 0;
  for (auto a : keys) r += a < x;
  return r;
}

// ---------------------------------------------------------------------------
// label part packing: 0^|l| 1 l s per part, l = minimal binary of |s| ("0" for empty)

inline Bits pack_parts(const std::vector<Bits>& parts) {
  Bits out;
  for (const auto& s : parts) {
    Bits l = s.empty() ? Bits::from_string("0") : minimal_binary(static_cast<std::uint64_t>(s.size()));
    for (std::size_t i = 0; i < l.size(); ++i) out.push(false);
    out.push(true);
    out.append(l);
    out.append(s);
  }
  return out;
}

inline std::vector<Bits> unpack_parts(const Bits& packed) {
  std::vector<Bits> parts;
  BitReader r(packed);
  while (!r.at_end()) {
    unsigned ll = 0;
    while (!r.bit()) {
      if (++ll > 64) throw std::invalid_argument("unpack_parts: length field too long");
    }
    if (ll == 0) throw std::invalid_argument("unpack_parts: empty length field");
    std::uint64_t len = r.read(ll);
    if (r.remaining() < len) throw std::out_of_range("unpack_parts: truncated part");
    Bits s;
    for (std::uint64_t i = 0; i < len; ++i) s.push(r.bit());
    parts.push_back(std::move(s));
  }
  return parts;
}

}  // namespace treelabel
