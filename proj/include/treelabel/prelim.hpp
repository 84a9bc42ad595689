#pragma once

#include <stdexcept>
#include <vector>

#include "treelabel/ancestry.hpp"

namespace treelabel {

namespace prelim {

// F(x) = floor(x * 2^(2l/b) * (2 logn)^floor(l/c)), l = floor(log x): the size-only ceiling on a head's span.
inline BigUint span_ceiling(std::uint64_t x, unsigned b, unsigned c, unsigned logn) {
  unsigned l = floor_log2(x);
  BigUint v = BigUint(x) * boost::multiprecision::pow(BigUint(2 * logn), l / c);
  return mul_pow2_frac_floor(v, 2 * l, b);
}

// largest t with floor(2^(t/b)) <= x, x >= 1
inline std::uint64_t floor_exp(const BigUint& x, unsigned b) { return round_pow(BigUint(x + 1), b).t - 1; }

// Span exponents a big child of a level-L node can have.
struct Window {
  std::uint64_t lo = 0, hi = 0;
  bool empty = true;
  std::size_t size() const { return empty ? 0 : hi - lo + 1; }
};

inline Window window(unsigned L, unsigned b, unsigned c, unsigned logn) {
  Window w;
  if (L == 0) return w;
  unsigned lmin = L >= c ? L - c + 1 : 0, lmax = L - 1;
  if (lmin > lmax) return w;
  w.lo = floor_exp(span_ceiling(std::uint64_t(1) << lmin, b, c, logn), b);
  w.hi = floor_exp(span_ceiling((std::uint64_t(2) << lmax) - 1, b, c, logn), b);
  w.empty = false;
  return w;
}

// H(j) = sum_{i<=j} floor(S/i)
inline BigUint harmonic_prefix(const BigUint& S, std::uint64_t j) {
  BigUint acc = 0;
  std::uint64_t i = 1;
  while (i <= j) {
    BigUint v = S / i;
    if (v == 0) break;
    BigUint last_big = S / v;
    std::uint64_t last = last_big > j ? j : to_u64(last_big);
    acc += v * (last - i + 1);
    i = last + 1;
  }
  return acc;
}

// Smallest j >= 1 with H(j) > x, walking the blocks where floor(S/i) is constant; 0 if none.
inline std::uint64_t harmonic_index(const BigUint& S, const BigUint& x) {
  BigUint acc = 0;
  BigUint i = 1;
  while (i <= S) {
    BigUint v = S / i;
    BigUint last = S / v;
    BigUint block = v * (last - i + 1);
    if (acc + block > x) return to_u64(BigUint(i + (x - acc) / v));
    acc += block;
    i = last + 1;
  }
  return 0;
}

inline BigUint small_interval(const BigUint& sp) { return sp * (ceil_log2(sp) + 1); }

}  // namespace prelim

struct PrelimLabel {
  BigUint start;
  std::uint64_t t = 0;
  bool has_small = false;
  std::uint64_t small_t = 0;
  std::vector<std::uint64_t> counts;  // big children per span exponent, ascending exponent
  unsigned level = 0;

  Bits pack(unsigned c) const {
    Bits small;
    if (has_small) {
      small.push(true);
      small.append(minimal_binary(small_t));
    } else {
      small.push(false);
    }
    Bits rt;
    for (auto v : counts) rt.append(v, c);
    return pack_parts({minimal_binary(start), minimal_binary(t), small, rt, minimal_binary(std::uint64_t(level))});
  }

  static PrelimLabel unpack(const Bits& bits, unsigned c) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 5) throw std::invalid_argument("prelim label: expected 5 parts");
    PrelimLabel l;
    l.start = bits_value(parts[0]);
    l.t = bits_value_u64(parts[1]);
    if (parts[2].empty()) throw std::invalid_argument("prelim label: empty small part");
    l.has_small = parts[2][0];
    if (l.has_small) {
      Bits rest;
      for (std::size_t i = 1; i < parts[2].size(); ++i) rest.push(parts[2][i]);
      l.small_t = bits_value_u64(rest);
    }
    if (parts[3].size() % c) throw std::invalid_argument("prelim label: ragged counters");
    BitReader r(parts[3]);
    while (!r.at_end()) l.counts.push_back(r.read(c));
    l.level = static_cast<unsigned>(bits_value_u64(parts[4]));
    return l;
  }
};

struct PrelimEncoding {
  Params params;
  std::vector<PrelimLabel> labels;
};

// Light children split into big ones (level within c of the parent), laid out by span,
// and small ones, each given a harmonic share of a rounded interval.
inline PrelimEncoding encode_prelim(const Tree& t, const HeavyDecomposition& h, unsigned b, unsigned c, AssertionLog* log = nullptr) {
  if (b == 0 || c == 0) throw std::invalid_argument("prelim: b and c must be positive");
  if (c > 62) throw std::invalid_argument("prelim: c too large");
  const Node n = t.n;
  const unsigned logn = ceil_log2(static_cast<std::uint64_t>(n));
  PrelimEncoding enc;
  enc.params = {"prelim", logn, b, c};
  enc.labels.resize(n);
  std::vector<BigUint> span(n), off(n), rel(n);
  std::vector<std::uint64_t> span_t(n);

  std::vector<Node> path;
  for (auto it = h.heads.rbegin(); it != h.heads.rend(); ++it) {
    Node head = *it;
    path.clear();
    for (Node u = head; u != kNone; u = h.heavy_child[u]) path.push_back(u);
    BigUint A = 0;
    for (Node u : path) {
      auto& lab = enc.labels[u];
      const unsigned L = static_cast<unsigned>(h.level[u]);
      lab.level = L;
      rel[u] = A;
      A += 1;
      const auto& ch = h.ordered[u];
      auto win = prelim::window(L, b, c, logn);
      lab.counts.assign(win.size(), 0);
      std::size_t j = 1;
      // big children, already in non-increasing span order
      for (; j < ch.size() && static_cast<unsigned>(h.level[ch[j]]) + c > L; ++j) {
        Node v = ch[j];
        if (win.empty || span_t[v] < win.lo || span_t[v] > win.hi) throw std::logic_error("prelim: big child outside span window");
        auto& cnt = lab.counts[span_t[v] - win.lo];
        if (++cnt >> c) throw std::logic_error("prelim: counter overflow");
        off[v] = A;
        A += span[v];
      }
      BigUint small = 0;
      for (std::size_t k = j; k < ch.size(); ++k) small += span[ch[k]];
      if (small > 0) {
        auto sp = round_pow(small, b);
        lab.has_small = true;
        lab.small_t = sp.t;
        BigUint spv = sp.value();
        BigUint H = 0;
        for (std::size_t k = j; k < ch.size(); ++k) {
          std::uint64_t idx = k - j + 1;
          BigUint share = spv / idx;
          if (span[ch[k]] > share) {
            if (log) log->record(anchor::kHarmonicFit, std::to_string(ch[k]), span[ch[k]].str(), share.str(), false, false);
            throw std::logic_error("prelim: small child does not fit its harmonic share");
          }
          off[ch[k]] = A + H;
          H += share;
        }
        BigUint len = prelim::small_interval(spv);
        if (log) log->check_le(anchor::kHarmonicFit, std::to_string(u), H, len);
        A += len;
      }
    }
    BigUint sp = 0;
    for (Node u : path) {
      auto be = round_pow(BigUint(A - rel[u]), b);
      enc.labels[u].t = be.t;
      BigUint end = rel[u] + be.value();
      if (end > sp) sp = end;
    }
    // inflate to the size-only ceiling so spans are monotone in subtree size
    auto rounded = round_pow(sp, b);
    std::uint64_t ft = prelim::floor_exp(prelim::span_ceiling(static_cast<std::uint64_t>(h.subtree_size[head]), b, c, logn), b);
    if (log) log->check_le(anchor::kPrelimClaim, std::to_string(head), rounded.t, ft);
    if (rounded.t > ft) throw std::logic_error("prelim: head span exceeds its size ceiling");
    enc.labels[head].t = ft;
    span_t[head] = ft;
    span[head] = pow2_frac_floor(ft, b);
  }

  for (Node head : h.heads) {
    BigUint base = head == t.root ? BigUint(0) : enc.labels[h.path_head[t.parent[head]]].start + off[head];
    for (Node u = head; u != kNone; u = h.heavy_child[u]) enc.labels[u].start = base + rel[u];
  }
  return enc;
}

inline int route_prelim(const PrelimLabel& u, const PrelimLabel& w, unsigned b, unsigned c, unsigned logn) {
  if (w.start <= u.start) return 0;
  BigUint q = w.start - u.start;
  if (q >= pow2_frac_floor(u.t, b)) return 0;
  BigUint A = 1;
  int port = 2;
  auto win = prelim::window(u.level, b, c, logn);
  if (u.counts.size() != win.size()) throw std::invalid_argument("prelim: counter count does not match level");
  for (std::size_t i = u.counts.size(); i-- > 0;) {
    std::uint64_t cnt = u.counts[i];
    if (!cnt) continue;
    BigUint v = pow2_frac_floor(win.lo + i, b);
    if (q < A + v * cnt) return port + static_cast<int>(to_u64(BigUint((q - A) / v)));
    A += v * cnt;
    port += static_cast<int>(cnt);
  }
  if (u.has_small) {
    BigUint spv = pow2_frac_floor(u.small_t, b);
    if (q < A + prelim::small_interval(spv)) {
      std::uint64_t j = prelim::harmonic_index(spv, BigUint(q - A));
      if (j) return port + static_cast<int>(j) - 1;
    }
  }
  return 1;
}

}  // namespace treelabel
