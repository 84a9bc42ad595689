#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace treelabel {

// Arbitrary width, but values up to 512 bits live inline (no allocation);
// final-scheme IDs stay near 300 bits at practical n.
using BigUint = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<
    512, 0, boost::multiprecision::signed_magnitude, boost::multiprecision::unchecked,
    std::allocator<boost::multiprecision::limb_type>>>;

inline unsigned bit_length(std::uint64_t x) {
  return x == 0 ? 0u : 64u - static_cast<unsigned>(__builtin_clzll(x));
}

inline unsigned bit_length(const BigUint& x) {
  return x == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(x)) + 1u;
}

// floor(log2 x), x >= 1
inline unsigned floor_log2(std::uint64_t x) {
  if (x == 0) throw std::domain_error("floor_log2(0)");
  return bit_length(x) - 1;
}

// ceil(log2 x), x >= 1; ceil_log2(1) == 0
inline unsigned ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::domain_error("ceil_log2(0)");
  return x == 1 ? 0u : bit_length(x - 1);
}

inline unsigned floor_log2(const BigUint& x) {
  if (x == 0) throw std::domain_error("floor_log2(0)");
  return bit_length(x) - 1;
}

inline unsigned ceil_log2(const BigUint& x) {
  if (x == 0) throw std::domain_error("ceil_log2(0)");
  return x == 1 ? 0u : bit_length(BigUint(x - 1));
}

inline unsigned trailing_zeros(const BigUint& x) {
  if (x == 0) return 0;
  return static_cast<unsigned>(boost::multiprecision::lsb(x));
}

inline std::uint64_t to_u64(const BigUint& x) {
  if (bit_length(x) > 64) throw std::overflow_error("value exceeds 64 bits");
  return x.convert_to<std::uint64_t>();
}

inline BigUint pow2(unsigned e) {
  BigUint r = 1;
  r <<= e;
  return r;
}

inline BigUint ceil_shift(const BigUint& x, unsigned s) {
  BigUint q = x >> s;
  if ((q << s) != x) ++q;
  return q;
}

// floor(n^(1/k)) by Newton iteration; seed must be >= the root.
inline BigUint integer_root(const BigUint& n, unsigned k, BigUint seed = 0) {
  if (k == 0) throw std::domain_error("integer_root: k == 0");
  if (n == 0 || k == 1) return n;
  unsigned bl = bit_length(n);
  BigUint x = seed != 0 ? seed : pow2((bl + k - 1) / k);
  while (true) {
    BigUint xk1 = boost::multiprecision::pow(x, k - 1);
    BigUint y = (BigUint(k - 1) * x + n / xk1) / k;
    if (y >= x) break;
    x = y;
  }
  return x;
}

namespace detail {

// table[r] = floor(2^(P + r/b)), r = 0..b-1
struct Pow2Table {
  unsigned b = 1;
  unsigned P = 0;
  std::vector<BigUint> table;

  void build(unsigned precision) {
    P = precision;
    table.assign(b, BigUint());
    for (unsigned r = 0; r < b; ++r) {
      if (r == 0) {
        table[r] = pow2(P);
        continue;
      }
      // seed just above the root from a double estimate; Newton then converges quadratically
      BigUint n = pow2(P * b + r);
      double f = std::ldexp(std::exp2(static_cast<double>(r) / b), 52);
      BigUint seed = (BigUint(static_cast<std::uint64_t>(f)) + 4) << (P - 52);
      table[r] = integer_root(n, b, seed);
    }
  }
};

inline std::shared_ptr<const Pow2Table> pow2_table_shared(unsigned b, unsigned min_precision) {
  static std::mutex mu;
  static std::map<unsigned, std::shared_ptr<const Pow2Table>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(b);
  if (it != cache.end() && it->second->P >= min_precision) return it->second;
  unsigned p = 64;
  if (it != cache.end()) p = it->second->P * 2;
  while (p < min_precision) p *= 2;
  auto t = std::make_shared<Pow2Table>();
  t->b = b;
  t->build(p);
  cache[b] = t;
  return t;
}

inline const Pow2Table* pow2_table(unsigned b, unsigned min_precision) {
  // shared tables are never freed while referenced here
  thread_local std::map<unsigned, std::shared_ptr<const Pow2Table>> local;
  auto& slot = local[b];
  if (!slot || slot->P < min_precision) slot = pow2_table_shared(b, min_precision);
  return slot.get();
}

}  // namespace detail

// floor(2^(t/b)), exact.
inline BigUint pow2_frac_floor(std::uint64_t t, unsigned b) {
  if (b == 0) throw std::domain_error("pow2_frac_floor: b == 0");
  std::uint64_t q = t / b;
  unsigned r = static_cast<unsigned>(t % b);
  if (r == 0) return pow2(static_cast<unsigned>(q));
  auto tab = detail::pow2_table(b, static_cast<unsigned>(q) + 1);
  return tab->table[r] >> (tab->P - static_cast<unsigned>(q));
}

// Real number 2^(sum num_i/den_i) bracketed by lo/2^P <= v <= hi/2^P.
class Pow2Bracket {
 public:
  void add(std::uint64_t num, unsigned den) {
    if (den == 0) throw std::domain_error("Pow2Bracket: den == 0");
    if (num == 0) return;
    terms_.push_back({num, den});
    // exact running sum; 2^(p/q) is irrational unless q divides p
    std::uint64_t g = std::gcd(sum_den_, static_cast<std::uint64_t>(den));
    std::uint64_t l = sum_den_ / g * den;
    sum_num_ = sum_num_ * (l / sum_den_) + num * (l / den);
    sum_den_ = l;
    std::uint64_t r = std::gcd(sum_num_, sum_den_);
    sum_num_ /= r;
    sum_den_ /= r;
  }

  // ceil(x * v) exactly (or floor when want_floor).
  BigUint apply(const BigUint& x, bool want_floor = false) const {
    if (x == 0) return 0;
    if (sum_den_ == 1) return x << static_cast<unsigned>(sum_num_);
    unsigned P = 64 + bit_length(x);
    for (int attempt = 0; attempt < 12; ++attempt, P *= 2) {
      BigUint lo = pow2(P), hi = pow2(P);
      unsigned shift = 0;
      bracket(P, lo, hi, shift);
      BigUint a, c;
      if (want_floor) {
        a = (x * lo << shift) >> P;
        c = (x * hi << shift) >> P;
      } else {
        a = ceil_shift(x * lo << shift, P);
        c = ceil_shift(x * hi << shift, P);
      }
      if (a == c) return a;
    }
    throw std::runtime_error("Pow2Bracket: precision exhausted");
  }

  bool empty() const { return terms_.empty(); }

  // true when the exponent sum is an integer; *shift receives it
  bool exact_shift(unsigned* shift) const {
    if (sum_den_ != 1) return false;
    *shift = static_cast<unsigned>(sum_num_);
    return true;
  }

  // lo/2^P <= v / 2^shift <= hi/2^P; lo and hi enter as 2^P
  void bracket(unsigned P, BigUint& lo, BigUint& hi, unsigned& shift) const {
    shift = 0;
    for (const auto& [num, den] : terms_) {
      shift += static_cast<unsigned>(num / den);
      unsigned r = static_cast<unsigned>(num % den);
      if (r == 0) continue;
      auto tab = detail::pow2_table(den, P);
      BigUint f = tab->table[r] >> (tab->P - P);
      lo = (lo * f) >> P;
      hi = ceil_shift(hi * (f + 1), P);
    }
  }

 private:
  struct Term {
    std::uint64_t num;
    unsigned den;
  };
  std::vector<Term> terms_;
  std::uint64_t sum_num_ = 0;
  std::uint64_t sum_den_ = 1;
};

// Pow2Bracket with lo/hi cached at a fixed precision; falls back to the exact
// bracket only when the cached pair disagrees.
class Pow2Factor {
 public:
  Pow2Factor() = default;
  explicit Pow2Factor(Pow2Bracket br, unsigned precision = 256) : br_(std::move(br)), P_(precision) {
    if (br_.exact_shift(&shift_)) {
      exact_ = true;
      return;
    }
    lo_ = pow2(P_);
    hi_ = pow2(P_);
    br_.bracket(P_, lo_, hi_, shift_);
  }

  BigUint ceil(const BigUint& x) const { return apply(x, false); }
  BigUint floor(const BigUint& x) const { return apply(x, true); }

 private:
  BigUint apply(const BigUint& x, bool want_floor) const {
    if (exact_) return x << shift_;
    if (bit_length(x) + 64 <= P_) {
      BigUint a = (x * lo_) << shift_, c = (x * hi_) << shift_;
      if (want_floor) {
        a >>= P_;
        c >>= P_;
      } else {
        a = ceil_shift(a, P_);
        c = ceil_shift(c, P_);
      }
      if (a == c) return a;
    }
    return br_.apply(x, want_floor);
  }

  Pow2Bracket br_;
  unsigned P_ = 256;
  bool exact_ = false;
  unsigned shift_ = 0;
  BigUint lo_, hi_;
};

// ceil(x * 2^(num/den)), exact.
inline BigUint mul_pow2_frac_ceil(const BigUint& x, std::uint64_t num, unsigned den) {
  if (num % den == 0) return x << static_cast<unsigned>(num / den);
  Pow2Bracket br;
  br.add(num, den);
  return br.apply(x, false);
}

// floor(x * 2^(num/den)), exact.
inline BigUint mul_pow2_frac_floor(const BigUint& x, std::uint64_t num, unsigned den) {
  if (num % den == 0) return x << static_cast<unsigned>(num / den);
  Pow2Bracket br;
  br.add(num, den);
  return br.apply(x, true);
}

inline std::string to_string(const BigUint& x) { return x.str(); }

}  // namespace treelabel
