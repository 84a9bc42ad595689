#pragma once

#include <stdexcept>
#include <vector>

#include "treelabel/assertions.hpp"
#include "treelabel/codec.hpp"
#include "treelabel/params.hpp"
#include "treelabel/tree.hpp"

namespace treelabel {

// Interval labels: w is a proper descendant of u iff start(w) in (start(u), start(u) + bound(u)).
struct AncestryLabel {
  BigUint start;
  std::uint64_t t = 0;  // bound = floor(2^(t/b))

  Bits pack() const { return pack_parts({minimal_binary(start), minimal_binary(t)}); }

  static AncestryLabel unpack(const Bits& bits) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 2) throw std::invalid_argument("ancestry label: expected 2 parts");
    return {bits_value(parts[0]), bits_value_u64(parts[1])};
  }
};

inline bool ancestry_is_ancestor(const AncestryLabel& u, const AncestryLabel& w, unsigned b) {
  return w.start > u.start && w.start < u.start + pow2_frac_floor(u.t, b);
}

struct AncestryEncoding {
  Params params;
  std::vector<AncestryLabel> labels;
};

// Two passes over heavy paths: spans bottom-up, absolute starts top-down.
inline AncestryEncoding encode_ancestry(const Tree& t, const HeavyDecomposition& h, unsigned b, AssertionLog* log = nullptr) {
  if (b == 0) throw std::invalid_argument("ancestry: b must be positive");
  const Node n = t.n;
  AncestryEncoding enc;
  enc.params = {"ancestry", ceil_log2(static_cast<std::uint64_t>(n)), b, 0};
  enc.labels.resize(n);
  std::vector<BigUint> span(n), off(n);  // span of each head; offset of a light head inside its parent's path
  std::vector<BigUint> rel(n);           // start relative to the path head

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
      }
    }
    BigUint sp = 0;
    for (Node u : path) {
      auto be = round_pow(BigUint(A - rel[u]), b);
      enc.labels[u].t = be.t;
      BigUint end = rel[u] + be.value();
      if (end > sp) sp = end;
    }
    span[head] = sp;
  }

  for (Node head : h.heads) {
    BigUint base = head == t.root ? BigUint(0) : enc.labels[h.path_head[t.parent[head]]].start + off[head];
    for (Node u = head; u != kNone; u = h.heavy_child[u]) enc.labels[u].start = base + rel[u];
  }

  if (log) {
    // span(root) <= n * 2^(ceil(log n)/b)
    unsigned L = ceil_log2(static_cast<std::uint64_t>(n));
    log->check_le(anchor::kAncestryRootSpan, "root", span[t.root], mul_pow2_frac_floor(BigUint(n), L, b));
  }
  return enc;
}

}  // namespace treelabel
