#pragma once

#include <stdexcept>
#include <vector>

#include "treelabel/ancestry.hpp"

namespace treelabel {

// Width of one routing-table entry; holds any t with floor(2^(t/b)) <= 2n.
inline unsigned bd_entry_width(unsigned b, unsigned logn) {
  std::uint64_t top = static_cast<std::uint64_t>(b) * (logn + 1) + logn + 1;
  return std::max(1u, ceil_log2(top));
}

// start, bound exponent, and the span exponents of the light children in port order.
struct BdLabel {
  BigUint start;
  std::uint64_t t = 0;
  std::vector<std::uint64_t> rt;

  Bits pack(unsigned width) const {
    Bits table;
    for (auto v : rt) table.append(v, width);
    return pack_parts({minimal_binary(start), minimal_binary(t), table});
  }

  static BdLabel unpack(const Bits& bits, unsigned width) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 3) throw std::invalid_argument("bd label: expected 3 parts");
    if (parts[2].size() % width) throw std::invalid_argument("bd label: ragged routing table");
    BdLabel l{bits_value(parts[0]), bits_value_u64(parts[1]), {}};
    BitReader r(parts[2]);
    while (!r.at_end()) l.rt.push_back(r.read(width));
    return l;
  }
};

struct BdEncoding {
  Params params;
  std::vector<BdLabel> labels;
};

inline BdEncoding encode_bd(const Tree& t, const HeavyDecomposition& h, unsigned b) {
  if (b == 0) throw std::invalid_argument("bd: b must be positive");
  const Node n = t.n;
  BdEncoding enc;
  enc.params = {"bd", ceil_log2(static_cast<std::uint64_t>(n)), b, 0};
  const unsigned width = bd_entry_width(b, enc.params.N);
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
      rel[u] = A;
      A += 1;
      const auto& ch = h.ordered[u];
      for (std::size_t j = 1; j < ch.size(); ++j) {
        off[ch[j]] = A;
        A += span[ch[j]];
        if (bit_length(span_t[ch[j]]) > width) throw std::logic_error("bd: span exponent exceeds entry width");
        enc.labels[u].rt.push_back(span_t[ch[j]]);
      }
    }
    BigUint sp = 0;
    for (Node u : path) {
      auto be = round_pow(BigUint(A - rel[u]), b);
      enc.labels[u].t = be.t;
      BigUint end = rel[u] + be.value();
      if (end > sp) sp = end;
    }
    // the head's bound becomes the whole span, so the parent can store it as an exponent
    auto hs = round_pow(sp, b);
    enc.labels[head].t = hs.t;
    span[head] = hs.value();
    span_t[head] = hs.t;
  }

  for (Node head : h.heads) {
    BigUint base = head == t.root ? BigUint(0) : enc.labels[h.path_head[t.parent[head]]].start + off[head];
    for (Node u = head; u != kNone; u = h.heavy_child[u]) enc.labels[u].start = base + rel[u];
  }
  return enc;
}

// 0 when w is not below u; otherwise the port of the first edge towards w.
inline int route_bd(const BdLabel& u, const BdLabel& w, unsigned b) {
  if (w.start <= u.start) return 0;
  BigUint q = w.start - u.start;
  if (q >= pow2_frac_floor(u.t, b)) return 0;
  BigUint A = 1;
  for (std::size_t j = 0; j < u.rt.size(); ++j) {
    A += pow2_frac_floor(u.rt[j], b);
    if (q < A) return static_cast<int>(j) + 2;
  }
  return 1;
}

}  // namespace treelabel
