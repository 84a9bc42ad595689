#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treelabel/bigint.hpp"

namespace treelabel {

// MSB-first bit string.
class Bits {
 public:
  Bits() = default;

  static Bits from_string(std::string_view s) {
    Bits b;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("Bits: expected 0/1");
      b.push(c == '1');
    }
    return b;
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  void flip(std::size_t i) { bits_[i] = !bits_[i]; }

  void push(bool v) { bits_.push_back(v); }

  // width low bits of v, most significant first
  void append(std::uint64_t v, unsigned width) {
    if (width < 64 && (v >> width) != 0) throw std::overflow_error("Bits::append: value too wide");
    for (unsigned i = width; i-- > 0;) bits_.push_back((v >> i) & 1u);
  }

  void append(const BigUint& v, unsigned width) {
    if (bit_length(v) > width) throw std::overflow_error("Bits::append: value too wide");
    for (unsigned i = width; i-- > 0;) bits_.push_back(boost::multiprecision::bit_test(v, i));
  }

  void append(const Bits& o) { bits_.insert(bits_.end(), o.bits_.begin(), o.bits_.end()); }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  // lowercase hex, zero-padded on the right to a nibble boundary
  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
      unsigned nib = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        nib <<= 1;
        if (i + j < bits_.size() && bits_[i + j]) nib |= 1;
      }
      s.push_back(digits[nib]);
    }
    return s;
  }

  static Bits from_hex(std::string_view hex, std::size_t len) {
    if (hex.size() * 4 < len || hex.size() > (len + 3) / 4)
      throw std::invalid_argument("Bits::from_hex: length mismatch");
    Bits b;
    for (char c : hex) {
      unsigned nib;
      if (c >= '0' && c <= '9') nib = c - '0';
      else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
      else throw std::invalid_argument("Bits::from_hex: bad digit");
      for (int j = 3; j >= 0; --j) {
        if (b.size() == len) break;
        b.push((nib >> j) & 1u);
      }
    }
    return b;
  }

  // "len:<bits> <hex>"
  std::string serialize() const { return "len:" + std::to_string(size()) + " " + to_hex(); }

  friend bool operator==(const Bits& a, const Bits& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<bool> bits_;
};

class BitReader {
 public:
  explicit BitReader(const Bits& b, std::size_t pos = 0, std::size_t end = SIZE_MAX)
      : b_(b), pos_(pos), end_(end == SIZE_MAX ? b.size() : end) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return end_ - pos_; }
  bool at_end() const { return pos_ >= end_; }

  bool bit() {
    if (pos_ >= end_) throw std::out_of_range("BitReader: truncated");
    return b_[pos_++];
  }

  std::uint64_t read(unsigned width) {
    if (width > 64) throw std::invalid_argument("BitReader::read: width > 64");
    if (remaining() < width) throw std::out_of_range("BitReader: truncated");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (b_[pos_++] ? 1u : 0u);
    return v;
  }

  BigUint read_big(std::size_t width) {
    if (remaining() < width) throw std::out_of_range("BitReader: truncated");
    BigUint v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v <<= 1;
      if (b_[pos_++]) v |= 1;
    }
    return v;
  }

 private:
  const Bits& b_;
  std::size_t pos_;
  std::size_t end_;
};

// Minimal binary representation; zero is the empty string.
inline Bits minimal_binary(const BigUint& v) {
  Bits b;
  b.append(v, bit_length(v));
  return b;
}

inline Bits minimal_binary(std::uint64_t v) {
  Bits b;
  b.append(v, bit_length(v));
  return b;
}

inline BigUint bits_value(const Bits& b) {
  BitReader r(b);
  return r.read_big(b.size());
}

inline std::uint64_t bits_value_u64(const Bits& b) {
  if (b.size() > 64) {
    BigUint v = bits_value(b);
    return to_u64(v);
  }
  BitReader r(b);
  return r.read(static_cast<unsigned>(b.size()));
}

}  // namespace treelabel
