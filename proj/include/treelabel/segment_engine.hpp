#pragma once

#include <string>
#include <vector>

#include "treelabel/assertions.hpp"
#include "treelabel/segments.hpp"

namespace treelabel {

// Settings that distinguish the intermediate and final layouts.
struct EnginePolicy {
  SegmentKind kind = SegmentKind::Interm;
  unsigned N = 0;            // ceil(log2) of the augmented size
  unsigned fixed_b = 0;      // 0: per-node b from the light weight
  bool aligned = false;      // reserve 2 lw per node and align starts to 2^ceil(log lw)
  bool check_lemmas = true;  // lemma checks need b >= 6
};

// b_i = max(6, floor(log lw) / (2 (floor(log log lw) + 3)))
inline unsigned final_node_b(std::uint64_t lw) {
  unsigned lg = floor_log2(lw);
  unsigned llg = lg ? floor_log2(std::uint64_t(lg)) : 0;
  return std::max(6u, lg / (2 * (llg + 3)));
}

inline unsigned engine_node_b(const EnginePolicy& pol, std::uint64_t lw) { return pol.fixed_b ? pol.fixed_b : final_node_b(lw); }

// bound exponent base: b for interm, N for final
inline unsigned engine_bound_base(const EnginePolicy& pol) { return pol.kind == SegmentKind::Interm ? pol.fixed_b : pol.N; }

struct EngineNode {
  BigUint start;
  std::uint64_t t = 0;
  Bits rt;
  unsigned floor_log_lw = 0;
  unsigned level = 0;
  unsigned pcount = 0;
};

namespace detail {
struct GuaranteeTag {};

// ratio 2^(12L-1)/b for interm, 2^((L-1)/N) prod for final
inline const Pow2Factor& guarantee_factor(const EnginePolicy& pol, unsigned b, unsigned L) {
  using Key = std::tuple<int, unsigned, unsigned>;
  unsigned den = pol.kind == SegmentKind::Interm ? b : pol.N;
  return memo<GuaranteeTag, Key, Pow2Factor>(Key{static_cast<int>(pol.kind), den, L}, [&] {
    Pow2Bracket br;
    if (pol.kind == SegmentKind::Interm) {
      br.add(12ull * L - 1, b);
    } else {
      br.add(L - 1, pol.N);
      for (unsigned k = 2; k <= L; ++k) br.add(28ull * ceil_log2(std::uint64_t(k)), k);
    }
    return Pow2Factor(br);
  });
}
}  // namespace detail

inline std::vector<EngineNode> run_segment_engine(const Tree& t, const HeavyDecomposition& h, const EnginePolicy& pol, AssertionLog* log) {
  const Node n = t.n;
  const AugView aug{&t, &h};
  const unsigned N = pol.N;
  std::vector<EngineNode> out(n);
  std::vector<std::uint32_t> child_value(n, 0);
  std::vector<BigUint> light_total(n);
  const bool lemmas = log && pol.check_lemmas;
  const unsigned lemma_k = pol.kind == SegmentKind::Interm ? 3 : 6;

  auto node_b = [&](Node u) { return engine_node_b(pol, aug.light_weight(u)); };
  auto head_sl = [&](Node v) { return segment_length(pol.kind, aug.size(v), aug.level(v), node_b(v), N); };

  GroupAssignment ga;
  std::vector<std::uint32_t> real_idx;
  for (auto it = h.heads.rbegin(); it != h.heads.rend(); ++it) {
    const Node head = *it;
    BigUint r = 0;
    for (Node u = head; u != kNone; u = h.heavy_child[u]) {
      auto& nd = out[u];
      const std::uint64_t lw = aug.light_weight(u);
      const unsigned b = node_b(u);
      nd.level = aug.level(u);
      nd.floor_log_lw = floor_log2(lw);
      const unsigned l = class_depth(lw, nd.level);
      const ValueSet& vs = value_set(pol.kind, b, l, N);
      const auto& ch = h.ordered[u];
      real_idx.clear();
      for (std::size_t j = 1; j < ch.size(); ++j) real_idx.push_back(vs.index(class_x2(b, l, aug.size(ch[j]), aug.level(ch[j]))));
      const std::uint32_t art_idx = vs.index(class_x2(b, l, 1, 0));
      nd.pcount = pregroup_count(aug.light_count(u));
      const GroupLayout& gl = group_layout(b, nd.pcount);
      assign_groups(gl, vs, real_idx, aug.art_light(u), art_idx, ga);
      for (std::size_t j = 1; j < ch.size(); ++j) child_value[ch[j]] = ga.child_value[j - 1];
      nd.rt = encode_monotone(ga.seq, ga.z);
      light_total[u] = ga.light_total;
      if (pol.aligned) r += 2 * lw;
      else r += 1;
      r += ga.light_total;

      if (lemmas) {
        const std::string where = std::to_string(u);
        log->check_le(anchor::kMonotone2z, where, nd.rt.size(), 2 * ga.z);
        for (std::size_t j = 1; j < ch.size(); ++j) {
          Node v = ch[j];
          unsigned k = l - aug.level(v);
          log->check_le(anchor::kClassBoundary, std::to_string(v), vs.values[real_idx[j - 1]], mul_pow2_frac_floor(head_sl(v), lemma_k * k, b));
        }
        log->check_le(anchor::kClassBoundary, where + ":art", vs.values[art_idx], mul_pow2_frac_floor(BigUint(1), lemma_k * l, b));
      }
    }
    r += 1;  // artificial heavy leaf under the path's last real node
    if (lemmas) {
      const unsigned L = aug.level(head);
      BigUint cap = pol.kind == SegmentKind::Interm ? detail::guarantee_factor(pol, node_b(head), L).floor(BigUint(aug.size(head)))
                                                      : detail::guarantee_factor(pol, 0, L).floor(BigUint(aug.size(head)) * (2ull * L));
      log->check_le(anchor::kGuaranteedR, std::to_string(head), r, cap);
    }
  }

  const unsigned base = engine_bound_base(pol);
  std::vector<BigUint> starts;
  std::vector<Node> path;
  for (Node head : h.heads) {
    path.clear();
    for (Node u = head; u != kNone; u = h.heavy_child[u]) path.push_back(u);
    const BigUint s = head == t.root ? BigUint(0) : out[head].start;
    BigUint A = s;
    for (Node u : path) {
      auto& nd = out[u];
      if (pol.aligned) {
        const std::uint64_t lw = aug.light_weight(u);
        A += 2 * lw - 1;
        unsigned lg = ceil_log2(lw);
        A = (A >> lg) << lg;
      }
      nd.start = A;
      A += 1;
      const std::uint64_t lw = aug.light_weight(u);
      const unsigned b = node_b(u);
      const ValueSet& vs = value_set(pol.kind, b, class_depth(lw, nd.level), N);
      const auto& ch = h.ordered[u];
      for (std::size_t j = 1; j < ch.size(); ++j) {
        out[ch[j]].start = A;
        A += vs.values[child_value[ch[j]]];
      }
      A = nd.start + 1 + light_total[u];
    }
    A += 1;
    BigUint end = 0;
    for (Node u : path) {
      auto& nd = out[u];
      auto be = round_pow(BigUint(A - nd.start), base);
      nd.t = be.t;
      BigUint e = nd.start + be.value();
      if (e > end) end = e;
    }
    BigUint span = end - s;
    BigUint sl = head_sl(head);
    if (log) log->check_le(anchor::kSpanLeSl, std::to_string(head), span, sl);
    if (span > sl) throw std::logic_error("segment engine: span of head " + std::to_string(head) + " exceeds its segment length");
    if (log && head == t.root && pol.kind == SegmentKind::Final) {
      // 4 n N prod_{k<=N} 2^(28 ceil(log k)/k)
      Pow2Bracket br;
      for (unsigned k = 2; k <= N; ++k) br.add(28ull * ceil_log2(std::uint64_t(k)), k);
      log->check_le(anchor::kRootSpan, "root", span, Pow2Factor(br).floor(BigUint(kAugFactor * static_cast<std::uint64_t>(n)) * (4ull * N)));
    }
  }
  return out;
}

}  // namespace treelabel
