#include <gtest/gtest.h>

#include <random>

#include "treelabel/codec.hpp"

using namespace treelabel;

namespace {

// largest x with x^b <= 2^t, by bisection on exact powers
BigUint oracle_floor_root_pow2(std::uint64_t t, unsigned b) {
  BigUint target = pow2(static_cast<unsigned>(t));
  BigUint lo = 1, hi = pow2(static_cast<unsigned>(t / b + 1));
  while (hi - lo > 1) {
    BigUint mid = (lo + hi) / 2;
    if (boost::multiprecision::pow(mid, b) <= target) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

TEST(Bigint, Logs) {
  EXPECT_EQ(floor_log2(std::uint64_t(1)), 0u);
  EXPECT_EQ(floor_log2(std::uint64_t(5)), 2u);
  EXPECT_EQ(ceil_log2(std::uint64_t(1)), 0u);
  EXPECT_EQ(ceil_log2(std::uint64_t(5)), 3u);
  EXPECT_EQ(ceil_log2(std::uint64_t(8)), 3u);
  EXPECT_EQ(ceil_log2(BigUint(9)), 4u);
}

TEST(Bigint, Pow2FracMatchesOracle) {
  for (unsigned b : {1u, 2u, 3u, 6u, 7u, 26u, 64u})
    for (std::uint64_t t = 0; t < 40ull * b; t += 1 + t / 17) EXPECT_EQ(pow2_frac_floor(t, b), oracle_floor_root_pow2(t, b)) << t << "/" << b;
}

TEST(Bigint, BracketExactForRationalProducts) {
  Pow2Bracket br;
  br.add(1, 4);
  br.add(3, 4);  // 2^(1/4) * 2^(3/4) = 2
  EXPECT_EQ(br.apply(BigUint(5)), BigUint(10));
  EXPECT_EQ(mul_pow2_frac_ceil(BigUint(3), 1, 2), BigUint(5));   // 4.24..
  EXPECT_EQ(mul_pow2_frac_floor(BigUint(3), 1, 2), BigUint(4));
  EXPECT_EQ(mul_pow2_frac_ceil(BigUint(7), 6, 3), BigUint(28));  // integer exponent
}

TEST(RoundPow, SpecExamples) {
  EXPECT_EQ(round_pow(std::uint64_t(1), 5).t, 0u);
  auto r = round_pow(std::uint64_t(5), 1);
  EXPECT_EQ(r.t, 3u);
  EXPECT_EQ(r.value(), 8);
  r = round_pow(std::uint64_t(6), 2);
  EXPECT_EQ(r.t, 6u);
  EXPECT_EQ(r.value(), 8);
  EXPECT_THROW(round_pow(std::uint64_t(0), 2), std::domain_error);
}

TEST(RoundPow, MinimalAgainstBruteForce) {
  // every x <= 20000, all b <= 64; the full 10^6 sweep lives in the acceptance binary
  for (unsigned b = 1; b <= 64; ++b) {
    std::uint64_t t = 0;
    BigUint hi = oracle_floor_root_pow2(0, b);  // x in (prev, hi] -> t
    for (std::uint64_t x = 1; x <= 20000; ++x) {
      while (hi < x) hi = oracle_floor_root_pow2(++t, b);
      ASSERT_EQ(round_pow(x, b).t, t) << "x=" << x << " b=" << b;
    }
  }
}

TEST(RoundPow, ValueWithinOneStep) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 2000; ++i) {
    BigUint x = BigUint(rng()) * rng() + 1;
    unsigned b = 1 + rng() % 40;
    auto r = round_pow(x, b);
    EXPECT_GE(r.value(), x);
    EXPECT_LE(r.value(), mul_pow2_frac_ceil(x, 1, b));
  }
}

TEST(TwoParts, SpecExamples) {
  auto z = two_parts_round(std::uint64_t(0), 3);
  EXPECT_EQ(z.value(), 0);
  auto a = two_parts_round(std::uint64_t(8), 3);
  EXPECT_EQ(a.m, 4u);
  EXPECT_EQ(a.e, 1u);
  EXPECT_EQ(a.value(), 8);
  auto c = two_parts_round(std::uint64_t(13), 3);
  EXPECT_EQ(c.m, 7u);
  EXPECT_EQ(c.e, 1u);
  EXPECT_EQ(c.value(), 14);
  auto d = two_parts_round(std::uint64_t(13), 3, Rounding::Down);
  EXPECT_EQ(d.value(), 12);
}

TEST(TwoParts, FactorAndOrder) {
  std::mt19937_64 rng(11);
  for (unsigned b = 1; b <= 64; ++b) {
    unsigned mbits = ceil_log2(std::uint64_t(b)) + 2;
    for (int i = 0; i < 500; ++i) {
      std::uint64_t x = (rng() >> (rng() % 60)) + 1;
      auto up = two_parts_round(x, mbits);
      auto down = two_parts_round(x, mbits, Rounding::Down);
      BigUint v = up.value();
      ASSERT_GE(v, x);
      ASSERT_LE(v * 2 * b, BigUint(x) * (2 * b + 1));
      ASSERT_LE(down.value(), x);
      // order of keys equals numeric order
      std::uint64_t y = (rng() >> (rng() % 60)) + 1;
      auto uy = two_parts_round(y, mbits);
      ASSERT_EQ(up.key() < uy.key(), up.value() < uy.value());
      ASSERT_EQ(up.key() == uy.key(), up.value() == uy.value());
    }
  }
}

TEST(Monotone, SpecExamples) {
  EXPECT_EQ(encode_monotone({}, 3).to_string(), "");
  EXPECT_EQ(encode_monotone({3, 3, 1}, 3).to_string(), "11001");
  EXPECT_EQ(encode_monotone({0}, 1).to_string(), "01");
  EXPECT_THROW(encode_monotone({1, 2}, 3), std::invalid_argument);
  EXPECT_THROW(encode_monotone({4}, 3), std::invalid_argument);
}

TEST(Monotone, RoundTripAndLength) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 5000; ++it) {
    std::uint64_t z = 1 + rng() % 60;
    std::size_t len = rng() % (z + 1);
    std::vector<std::uint64_t> seq(len);
    for (auto& v : seq) v = rng() % (z + 1);
    std::sort(seq.rbegin(), seq.rend());
    Bits enc = encode_monotone(seq, z);
    ASSERT_LE(enc.size(), 2 * z);
    ASSERT_EQ(decode_monotone(enc, z, len), seq);
  }
}

TEST(RankDict, SpecExamples) {
  auto e = RankDict::build({}, 3);
  EXPECT_EQ(e.rank(5), 0u);
  auto d = RankDict::build({2, 5, 7}, 3);
  EXPECT_EQ(d.to_bits().to_string(), "1010" "1101" "1111");
  EXPECT_EQ(d.rank(5), 1u);
  EXPECT_EQ(d.rank(9), 3u);
  EXPECT_EQ(d.rank(0), 0u);
  EXPECT_EQ(d.rank(8), 3u);
  auto dup = RankDict::build({0, 0}, 2);
  EXPECT_EQ(dup.rank(1), 2u);
  EXPECT_THROW(RankDict::build({3, 1}, 3), std::invalid_argument);
  EXPECT_THROW(RankDict::build({9}, 3), std::invalid_argument);
}

TEST(RankDict, MatchesNaive) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 100000; ++it) {
    unsigned w = 1 + rng() % 20;
    std::size_t k = rng() % 24;
    std::vector<std::uint64_t> keys(k);
    for (auto& a : keys) a = rng() & ((1ull << w) - 1);
    std::sort(keys.begin(), keys.end());
    auto d = RankDict::build(keys, w);
    std::uint64_t x = rng() % 3 == 0 ? rng() : (rng() & ((2ull << w) - 1));
    ASSERT_EQ(d.rank(x), naive_rank(keys, x));
    ASSERT_EQ(RankDict::from_bits(d.to_bits(), k, w).rank(x), naive_rank(keys, x));
  }
}

TEST(Pack, SpecExamples) {
  EXPECT_EQ(pack_parts({Bits()}).to_string(), "010");
  EXPECT_EQ(pack_parts({Bits::from_string("101")}).to_string(), "00111101");
  EXPECT_THROW(unpack_parts(Bits::from_string("0011110")), std::out_of_range);
}

TEST(Pack, RoundTrip) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 1000; ++it) {
    std::vector<Bits> parts(rng() % 8);
    for (auto& p : parts) {
      std::size_t len = rng() % 3 == 0 ? 0 : rng() % 200;
      for (std::size_t i = 0; i < len; ++i) p.push(rng() & 1);
    }
    ASSERT_EQ(unpack_parts(pack_parts(parts)), parts);
  }
}

TEST(Bits, HexRoundTrip) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 500; ++it) {
    Bits b;
    std::size_t len = rng() % 90;
    for (std::size_t i = 0; i < len; ++i) b.push(rng() & 1);
    ASSERT_EQ(Bits::from_hex(b.to_hex(), b.size()), b);
  }
  EXPECT_EQ(Bits::from_string("1010").to_hex(), "a");
  EXPECT_EQ(Bits::from_string("1").to_hex(), "8");
  EXPECT_EQ(Bits::from_string("00111101").serialize(), "len:8 3d");
}
