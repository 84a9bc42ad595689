#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "treelabel/params.hpp"
#include "treelabel/segment_engine.hpp"

namespace treelabel {

// b = max(6, ceil(sqrt(N / ceil(log N))))
inline unsigned interm_default_b(unsigned N) {
  unsigned lg = std::max(1u, ceil_log2(std::uint64_t(std::max(2u, N))));
  return std::max(6u, static_cast<unsigned>(std::ceil(std::sqrt(static_cast<double>(N) / lg))));
}

struct IntermLabel {
  BigUint start;
  std::uint64_t t = 0;
  Bits rt;
  unsigned floor_log_lw = 0;
  unsigned level = 0;
  unsigned pcount = 0;
  std::vector<std::uint64_t> seq;  // decoded rt, filled by unpack

  Bits pack() const {
    return pack_parts({minimal_binary(start), minimal_binary(t), rt, minimal_binary(std::uint64_t(floor_log_lw)), minimal_binary(std::uint64_t(level)),
                       minimal_binary(std::uint64_t(pcount))});
  }

  static IntermLabel unpack(const Bits& bits, const Params& p) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 6) throw std::invalid_argument("interm label: expected 6 parts");
    IntermLabel l;
    l.start = bits_value(parts[0]);
    l.t = bits_value_u64(parts[1]);
    l.rt = parts[2];
    l.floor_log_lw = static_cast<unsigned>(bits_value_u64(parts[3]));
    l.level = static_cast<unsigned>(bits_value_u64(parts[4]));
    l.pcount = static_cast<unsigned>(bits_value_u64(parts[5]));
    l.decode_rt(p);
    return l;
  }

  void decode_rt(const Params& p) {
    const ValueSet& vs = value_set(SegmentKind::Interm, p.b, std::min(floor_log_lw + 1, level), p.N);
    const GroupLayout& g = group_layout(p.b, pcount);
    seq = decode_monotone(rt, monotone_z(vs, g), g.slots.size());
  }
};

struct IntermEncoding {
  Params params;
  std::vector<IntermLabel> labels;
};

inline IntermLabel to_interm_label(const EngineNode& nd) { return {nd.start, nd.t, nd.rt, nd.floor_log_lw, nd.level, nd.pcount, {}}; }

// b = 0 picks the default; lemma checks run only when b >= 6
inline IntermEncoding encode_interm(const Tree& t, const HeavyDecomposition& h, unsigned b = 0, AssertionLog* log = nullptr, const std::string& name = "interm") {
  EnginePolicy pol;
  pol.kind = SegmentKind::Interm;
  pol.N = aug_log_n(t.n);
  pol.fixed_b = b ? b : interm_default_b(pol.N);
  pol.check_lemmas = pol.fixed_b >= 6;
  auto nodes = run_segment_engine(t, h, pol, log);
  IntermEncoding enc;
  enc.params = {name, pol.N, pol.fixed_b, 0};
  enc.labels.reserve(t.n);
  for (auto& nd : nodes) {
    enc.labels.push_back(to_interm_label(nd));
    enc.labels.back().decode_rt(enc.params);
  }
  return enc;
}

inline int route_interm(const IntermLabel& u, const BigUint& w_start, const Params& p) {
  if (w_start <= u.start) return 0;
  BigUint q = w_start - u.start;
  if (q >= pow2_frac_floor(u.t, p.b)) return 0;
  const ValueSet& vs = value_set(SegmentKind::Interm, p.b, std::min(u.floor_log_lw + 1, u.level), p.N);
  return locate_in_groups(group_layout(p.b, u.pcount), vs, u.seq, q - 1);
}

inline int route_interm(const IntermLabel& u, const IntermLabel& w, const Params& p) { return route_interm(u, w.start, p); }

// ---------------------------------------------------------------------------
// local-table variants: the label is the start alone, the node's own table holds the rest

enum class LocalVariant { V1, V2 };

inline unsigned local_b(LocalVariant v, unsigned N) {
  if (v == LocalVariant::V2) return std::max(6u, N);
  unsigned lg = std::max(1u, ceil_log2(std::uint64_t(std::max(2u, N))));
  return std::max(6u, (N + lg - 1) / lg);
}

inline IntermEncoding encode_local(const Tree& t, const HeavyDecomposition& h, LocalVariant v, AssertionLog* log = nullptr) {
  return encode_interm(t, h, local_b(v, aug_log_n(t.n)), log, v == LocalVariant::V1 ? "local:v1" : "local:v2");
}

inline Bits local_label(const IntermLabel& l) { return minimal_binary(l.start); }

// ---------------------------------------------------------------------------
// bounded-depth variant: the interm layout with b = 1

inline IntermEncoding encode_depth(const Tree& t, const HeavyDecomposition& h, AssertionLog* log = nullptr) { return encode_interm(t, h, 1, log, "depth"); }

}  // namespace treelabel
