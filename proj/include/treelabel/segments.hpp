#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "treelabel/codec.hpp"
#include "treelabel/tree.hpp"

namespace treelabel {

// Process-wide memo; each Tag gets its own table. Values are never freed.
template <class Tag, class Key, class T, class Make>
const T& memo(const Key& key, Make&& make) {
  thread_local std::map<Key, const T*> local;
  auto it = local.find(key);
  if (it != local.end()) return *it->second;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<const T>> shared;
  const T* p;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = shared[key];
    if (!slot) slot = std::make_unique<const T>(make());
    p = slot.get();
  }
  local.emplace(key, p);
  return *p;
}

// ---------------------------------------------------------------------------
// artificial leaves: every real node gets kArtLeaves extra leaf children, handled
// arithmetically instead of materialized

inline constexpr std::uint64_t kArtLeaves = 17;
inline constexpr std::uint64_t kAugFactor = kArtLeaves + 1;

struct AugView {
  const Tree* t;
  const HeavyDecomposition* h;

  std::uint64_t size(Node v) const { return kAugFactor * static_cast<std::uint64_t>(h->subtree_size[v]); }
  unsigned level(Node v) const { return floor_log2(size(v)); }
  bool has_real_children(Node u) const { return !t->children[u].empty(); }
  // a real leaf's heavy child is one of its artificial leaves
  std::uint64_t light_weight(Node u) const {
    return has_real_children(u) ? kAugFactor * static_cast<std::uint64_t>(h->light_weight[u]) + kArtLeaves : kArtLeaves - 1;
  }
  std::uint64_t real_light(Node u) const { return has_real_children(u) ? t->children[u].size() - 1 : 0; }
  std::uint64_t art_light(Node u) const { return has_real_children(u) ? kArtLeaves : kArtLeaves - 1; }
  std::uint64_t light_count(Node u) const { return real_light(u) + art_light(u); }
};

inline unsigned aug_log_n(Node n) { return ceil_log2(kAugFactor * static_cast<std::uint64_t>(n)); }

// l(u) = min(floor(log lw) + 1, level(u))
inline unsigned class_depth(std::uint64_t lw, unsigned level) { return std::min(floor_log2(lw) + 1, level); }

// ---------------------------------------------------------------------------
// classes: preclass k holds light children at level l-k; for k < b each preclass is cut
// into ceil(b/k) size ranges, for k >= b preclasses merge in doubling stages

// largest integer below 2^(y/b)
inline std::uint64_t below_pow(std::uint64_t y, unsigned b) {
  if (y % b == 0) return (std::uint64_t(1) << (y / b)) - 1;
  return to_u64(pow2_frac_floor(y, b));
}

// Largest size in the class of a child of size s and level lv, under a node with parameters (b, l).
// Nonempty classes have distinct values, so this identifies the class.
inline std::uint64_t class_x2(unsigned b, unsigned l, std::uint64_t s, unsigned lv) {
  if (lv >= l) throw std::logic_error("class_x2: child level not below l");
  unsigned k = l - lv;
  if (k < b) {
    std::uint64_t x = lv;
    std::uint64_t tau = round_pow(BigUint(s + 1), b).t;  // smallest y with 2^(y/b) > s
    std::uint64_t pmax = (b + k - 1) / k;
    std::uint64_t p = tau > x * b ? (tau - x * b + k - 1) / k : 1;
    p = std::clamp<std::uint64_t>(p, 1, pmax);
    return below_pow(x * b + std::min<std::uint64_t>(p * k, b), b);
  }
  unsigned j = b, z = 1;
  while (k > 2 * j - 1) {
    j *= 2;
    z *= 2;
  }
  unsigned mlo = j + (k - j) / z * z;
  return (std::uint64_t(1) << (l - mlo + 1)) - 1;
}

inline std::vector<std::uint64_t> all_class_x2(unsigned b, unsigned l) {
  std::vector<std::uint64_t> out;
  for (unsigned k = 1; k < b && k <= l; ++k) {
    std::uint64_t x = l - k;
    for (std::uint64_t p = 1; p <= (b + k - 1) / k; ++p) out.push_back(below_pow(x * b + std::min<std::uint64_t>(p * k, b), b));
  }
  for (unsigned j = b, z = 1; j <= l; j *= 2, z *= 2)
    for (unsigned c = 0; c < b && j + c * z <= l; ++c) out.push_back((std::uint64_t(1) << (l - (j + c * z) + 1)) - 1);
  return out;
}

// ---------------------------------------------------------------------------
// boundary values and head segment lengths

enum class SegmentKind { Interm, Final };

namespace detail {

struct InterFactorTag {};
struct FinalFactorTag {};

// 2^(12L/b)
inline const Pow2Factor& interm_factor(unsigned b, unsigned L) {
  return memo<InterFactorTag, std::pair<unsigned, unsigned>, Pow2Factor>({b, L}, [&] {
    Pow2Bracket br;
    br.add(12ull * L, b);
    return Pow2Factor(br);
  });
}

// 2^(L/N) * prod_{k<=L} 2^(28 ceil(log k)/k)
inline const Pow2Factor& final_factor(unsigned N, unsigned L) {
  return memo<FinalFactorTag, std::pair<unsigned, unsigned>, Pow2Factor>({N, L}, [&] {
    Pow2Bracket br;
    br.add(L, N);
    for (unsigned k = 2; k <= L; ++k) br.add(28ull * ceil_log2(std::uint64_t(k)), k);
    return Pow2Factor(br);
  });
}

}  // namespace detail

// interm: ceil(T * 2^(12L/b)); final: ceil(2 T L 2^(L/N) prod); both at least 1
inline BigUint segment_length(SegmentKind kind, std::uint64_t T, unsigned L, unsigned b, unsigned N) {
  BigUint v;
  if (kind == SegmentKind::Interm) v = detail::interm_factor(b, L).ceil(BigUint(T));
  else v = detail::final_factor(N, L).ceil(BigUint(T) * (2ull * L));
  return v == 0 ? BigUint(1) : v;
}

// boundary of a class whose largest size is x2: the segment length of a head of size x2, level floor(log x2)
inline BigUint boundary_value(SegmentKind kind, std::uint64_t x2, unsigned b, unsigned N) {
  return segment_length(kind, x2, floor_log2(x2), b, N);
}

// Ascending distinct boundaries, preceded by 0 for dummy-only groups.
struct ValueSet {
  std::vector<BigUint> values;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> by_x2;  // sorted

  std::uint32_t index(std::uint64_t x2) const {
    auto it = std::lower_bound(by_x2.begin(), by_x2.end(), std::make_pair(x2, std::uint32_t(0)));
    if (it == by_x2.end() || it->first != x2) throw std::logic_error("ValueSet: unknown class");
    return it->second;
  }
  std::uint64_t z() const { return values.size() - 1; }
};

namespace detail {
struct ValueSetTag {};
}  // namespace detail

inline const ValueSet& value_set(SegmentKind kind, unsigned b, unsigned l, unsigned N) {
  using Key = std::tuple<int, unsigned, unsigned, unsigned>;
  return memo<detail::ValueSetTag, Key, ValueSet>(Key{static_cast<int>(kind), b, l, kind == SegmentKind::Final ? N : 0}, [&] {
    ValueSet vs;
    auto xs = all_class_x2(b, l);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<BigUint> bv;
    for (auto x : xs) bv.push_back(boundary_value(kind, x, b, N));
    vs.values = bv;
    vs.values.push_back(0);
    std::sort(vs.values.begin(), vs.values.end());
    vs.values.erase(std::unique(vs.values.begin(), vs.values.end()), vs.values.end());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto idx = std::lower_bound(vs.values.begin(), vs.values.end(), bv[i]) - vs.values.begin();
      vs.by_x2.push_back({xs[i], static_cast<std::uint32_t>(idx)});
    }
    return vs;
  });
}

// ---------------------------------------------------------------------------
// groups: pregroup c takes the next 2^c light children (the last one padded with dummies);
// pregroup c < b splits into ceil(b/c) near-equal groups, later ones merge in doubling stages

struct GroupLayout {
  std::vector<std::uint64_t> slots;
  std::vector<std::uint64_t> first;  // slot index of each group's first member
  std::uint64_t total = 0;
};

inline unsigned pregroup_count(std::uint64_t d) { return floor_log2(d + 1); }

namespace detail {
struct GroupTag {};
}  // namespace detail

inline const GroupLayout& group_layout(unsigned b, unsigned P) {
  if (P > 62) throw std::invalid_argument("group_layout: too many pregroups");
  return memo<detail::GroupTag, std::pair<unsigned, unsigned>, GroupLayout>({b, P}, [&] {
    GroupLayout g;
    auto push = [&](std::uint64_t m) {
      g.first.push_back(g.total);
      g.slots.push_back(m);
      g.total += m;
    };
    for (unsigned c = 1; c < b && c <= P; ++c) {
      std::uint64_t m = std::uint64_t(1) << c, cnt = (b + c - 1) / c;
      for (std::uint64_t i = 0; i < cnt; ++i) push(m * (i + 1) / cnt - m * i / cnt);
    }
    for (unsigned j = b, z = 1; j <= P; j *= 2, z *= 2)
      for (unsigned k = 0; k < b && j + k * z <= P; ++k) {
        std::uint64_t m = 0;
        for (unsigned c = j + k * z; c <= std::min(j + (k + 1) * z - 1, P); ++c) m += std::uint64_t(1) << c;
        push(m);
      }
    return g;
  });
}

// Per-node result of laying the light children out in groups.
struct GroupAssignment {
  std::vector<std::uint32_t> child_value;  // value index used by each real light child
  BigUint light_total;                     // sum over groups of slots * value
  std::vector<std::uint64_t> seq;          // value index per nonempty group, trailing zeros dropped
  std::uint64_t z = 0;                     // counter start for the monotone code
};

// The monotone code's counter starts at max(|V|-1, #groups) so every group fits.
inline std::uint64_t monotone_z(const ValueSet& vs, const GroupLayout& g) {
  return std::max<std::uint64_t>(vs.z(), g.slots.size());
}

// real_idx: value index of each real light child in port order (non-increasing);
// art children follow and all use art_idx.
inline void assign_groups(const GroupLayout& g, const ValueSet& vs, const std::vector<std::uint32_t>& real_idx, std::uint64_t nart, std::uint32_t art_idx,
                          GroupAssignment& out) {
  const std::uint64_t nreal = real_idx.size(), d = nreal + nart;
  out.child_value.assign(nreal, 0);
  out.light_total = 0;
  out.seq.clear();
  out.z = monotone_z(vs, g);
  std::uint64_t art_slots = 0;
  for (std::size_t gi = 0; gi < g.slots.size(); ++gi) {
    const std::uint64_t s = g.first[gi], m = g.slots[gi];
    if (m == 0) continue;
    if (s >= d) {
      out.seq.push_back(0);
    } else if (s < nreal) {
      std::uint32_t idx = real_idx[s];
      for (std::uint64_t k = s; k < std::min(s + m, nreal); ++k) out.child_value[k] = idx;
      out.light_total += vs.values[idx] * m;
      out.seq.push_back(idx);
    } else {
      art_slots += m;
      out.seq.push_back(art_idx);
    }
  }
  if (art_slots) out.light_total += vs.values[art_idx] * art_slots;
  while (!out.seq.empty() && out.seq.back() == 0) out.seq.pop_back();
}

// Port of the light child at offset q0 (counted from the slot after the node itself);
// 1 when q0 lies past every light child.
inline int locate_in_groups(const GroupLayout& g, const ValueSet& vs, const std::vector<std::uint64_t>& seq, const BigUint& q0) {
  BigUint cum = 0;
  std::uint64_t before = 0;
  std::size_t si = 0;
  for (std::size_t gi = 0; gi < g.slots.size(); ++gi) {
    const std::uint64_t m = g.slots[gi];
    if (m == 0) continue;
    if (si >= seq.size()) break;  // stripped tail: dummy-only groups
    const BigUint& v = vs.values[seq[si++]];
    if (v == 0) break;
    BigUint end = cum + v * m;
    if (q0 < end) return 2 + static_cast<int>(before + to_u64(BigUint((q0 - cum) / v)));
    cum = end;
    before += m;
  }
  return 1;
}

}  // namespace treelabel
