#pragma once

#include <stdexcept>
#include <vector>

#include "treelabel/params.hpp"
#include "treelabel/segment_engine.hpp"

namespace treelabel {

// start = start_hi * 2^tz; bound = floor(2^(t/N))
struct FinalLabel {
  BigUint start_hi;
  unsigned tz = 0;
  std::uint64_t t = 0;
  Bits rt;
  unsigned floor_log_lw = 0;
  unsigned level = 0;
  unsigned pcount = 0;
  bool has_children = false;
  std::vector<std::uint64_t> seq;

  BigUint start() const { return start_hi << tz; }
  unsigned b() const { return final_node_b(std::uint64_t(1) << floor_log_lw); }

  Bits pack() const {
    Bits hc;
    hc.push(has_children);
    return pack_parts({minimal_binary(start_hi), minimal_binary(std::uint64_t(tz)), minimal_binary(t), rt, minimal_binary(std::uint64_t(floor_log_lw)),
                       minimal_binary(std::uint64_t(level)), minimal_binary(std::uint64_t(pcount)), hc});
  }

  static FinalLabel unpack(const Bits& bits, const Params& p) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 8) throw std::invalid_argument("final label: expected 8 parts");
    if (parts[7].size() != 1) throw std::invalid_argument("final label: bad has_children flag");
    FinalLabel l;
    l.start_hi = bits_value(parts[0]);
    l.tz = static_cast<unsigned>(bits_value_u64(parts[1]));
    l.t = bits_value_u64(parts[2]);
    l.rt = parts[3];
    l.floor_log_lw = static_cast<unsigned>(bits_value_u64(parts[4]));
    l.level = static_cast<unsigned>(bits_value_u64(parts[5]));
    l.pcount = static_cast<unsigned>(bits_value_u64(parts[6]));
    l.has_children = parts[7][0];
    l.decode_rt(p);
    return l;
  }

  void decode_rt(const Params& p) {
    seq.clear();
    if (!has_children) return;
    const unsigned bb = b();
    const ValueSet& vs = value_set(SegmentKind::Final, bb, std::min(floor_log_lw + 1, level), p.N);
    const GroupLayout& g = group_layout(bb, pcount);
    seq = decode_monotone(rt, monotone_z(vs, g), g.slots.size());
  }
};

struct FinalEncoding {
  Params params;
  std::vector<FinalLabel> labels;
};

inline void split_start(const BigUint& start, BigUint& hi, unsigned& tz) {
  if (start == 0) {
    hi = 0;
    tz = 0;
    return;
  }
  tz = trailing_zeros(start);
  hi = start >> tz;
}

inline FinalEncoding encode_final(const Tree& t, const HeavyDecomposition& h, AssertionLog* log = nullptr) {
  EnginePolicy pol;
  pol.kind = SegmentKind::Final;
  pol.N = aug_log_n(t.n);
  pol.aligned = true;
  auto nodes = run_segment_engine(t, h, pol, log);
  const AugView aug{&t, &h};
  FinalEncoding enc;
  enc.params = {"final", pol.N, 0, 0};
  enc.labels.resize(t.n);
  for (Node u = 0; u < t.n; ++u) {
    auto& nd = nodes[u];
    auto& l = enc.labels[u];
    split_start(nd.start, l.start_hi, l.tz);
    l.t = nd.t;
    l.floor_log_lw = nd.floor_log_lw;
    l.level = nd.level;
    l.pcount = nd.pcount;
    l.has_children = aug.has_real_children(u);
    if (l.has_children) l.rt = std::move(nd.rt);
    l.decode_rt(enc.params);
    if (log) {
      const unsigned need = ceil_log2(aug.light_weight(u));
      const std::string where = std::to_string(u);
      log->check_ge(anchor::kTzBudget, where, nd.start == 0 ? need : trailing_zeros(nd.start), need);
      if (l.has_children) log->check_le(anchor::kRtBudget, where, l.rt.size(), std::size_t(need), true);
    }
  }
  return enc;
}

inline int route_final(const FinalLabel& u, const BigUint& w_start, const Params& p) {
  if (!u.has_children) return 0;
  const BigUint us = u.start();
  if (w_start <= us) return 0;
  BigUint q = w_start - us;
  if (q >= pow2_frac_floor(u.t, p.N)) return 0;
  const unsigned bb = u.b();
  const ValueSet& vs = value_set(SegmentKind::Final, bb, std::min(u.floor_log_lw + 1, u.level), p.N);
  return locate_in_groups(group_layout(bb, u.pcount), vs, u.seq, q - 1);
}

inline int route_final(const FinalLabel& u, const FinalLabel& w, const Params& p) { return route_final(u, w.start(), p); }

}  // namespace treelabel
