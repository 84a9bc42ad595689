#pragma once

#include <stdexcept>
#include <vector>

#include "treelabel/final.hpp"

namespace treelabel {

inline constexpr unsigned kCtC = 1;

// b_i = max(6, floor(log lw) / (c (floor(log log lw) + 3)^2))
inline unsigned ct_node_b(std::uint64_t lw) {
  unsigned lg = floor_log2(lw);
  unsigned llg = lg ? floor_log2(std::uint64_t(lg)) : 0;
  return std::max(6u, lg / (kCtC * (llg + 3) * (llg + 3)));
}

inline unsigned ct_mbits(unsigned b) { return ceil_log2(std::uint64_t(b)) + 2; }

struct CtGroup {
  TwoParts C;  // light children before the group
  TwoParts L;  // slot length inside the group
};

struct CtLabel {
  BigUint start_hi;
  unsigned tz = 0;
  std::uint64_t t = 0;
  unsigned floor_log_lw = 0;
  unsigned level = 0;
  bool has_children = false;
  std::vector<TwoParts> keys;  // S_1 .. S_{g+1}
  std::vector<CtGroup> groups;
  // filled by unpack / finish
  RankDict dict;
  BigUint bound;
  unsigned ew_s = 0;

  BigUint start() const { return start_hi << tz; }
  unsigned mbits() const { return ct_mbits(ct_node_b(std::uint64_t(1) << floor_log_lw)); }

  void finish(const Params& p) {
    bound = pow2_frac_floor(t, p.N);
    ew_s = 0;
    for (auto& k : keys) ew_s = std::max(ew_s, bit_length(std::uint64_t(k.e)));
    std::vector<std::uint64_t> ks;
    for (auto& k : keys) ks.push_back(k.key());
    dict = keys.empty() ? RankDict() : RankDict::build(ks, ew_s + mbits());
  }

  unsigned ew_c() const {
    unsigned w = 0;
    for (auto& g : groups) w = std::max(w, bit_length(std::uint64_t(g.C.e)));
    return w;
  }
  unsigned ew_l() const {
    unsigned w = 0;
    for (auto& g : groups) w = std::max(w, bit_length(std::uint64_t(g.L.e)));
    return w;
  }

  Bits dict_bits() const { return keys.empty() ? Bits() : dict.to_bits(); }
  Bits tuple_bits() const {
    Bits b;
    const unsigned mb = mbits(), wc = ew_c(), wl = ew_l();
    for (auto& g : groups) {
      b.append(std::uint64_t(g.C.e), wc);
      b.append(g.C.m, mb);
      b.append(std::uint64_t(g.L.e), wl);
      b.append(g.L.m, mb);
    }
    return b;
  }

  Bits pack() const {
    Bits hc, meta;
    hc.push(has_children);
    if (has_children) {
      for (unsigned v : {static_cast<unsigned>(groups.size()), ew_s, ew_c(), ew_l()}) gamma(meta, v + 1);
    }
    return pack_parts({minimal_binary(start_hi), minimal_binary(std::uint64_t(tz)), minimal_binary(t), minimal_binary(std::uint64_t(floor_log_lw)),
                       minimal_binary(std::uint64_t(level)), hc, meta, dict_bits(), tuple_bits()});
  }

  static CtLabel unpack(const Bits& bits, const Params& p) {
    auto parts = unpack_parts(bits);
    if (parts.size() != 9) throw std::invalid_argument("ct label: expected 9 parts");
    CtLabel l;
    l.start_hi = bits_value(parts[0]);
    l.tz = static_cast<unsigned>(bits_value_u64(parts[1]));
    l.t = bits_value_u64(parts[2]);
    l.floor_log_lw = static_cast<unsigned>(bits_value_u64(parts[3]));
    l.level = static_cast<unsigned>(bits_value_u64(parts[4]));
    if (parts[5].size() != 1) throw std::invalid_argument("ct label: bad has_children flag");
    l.has_children = parts[5][0];
    if (l.has_children) {
      BitReader m(parts[6]);
      std::uint64_t g = ungamma(m) - 1, ws = ungamma(m) - 1, wc = ungamma(m) - 1, wl = ungamma(m) - 1;
      const unsigned mb = l.mbits();
      auto d = RankDict::from_bits(parts[7], g + 1, static_cast<unsigned>(ws + mb));
      for (std::size_t i = 0; i <= g; ++i) l.keys.push_back(TwoParts::from_key(d.key(i), mb));
      BitReader r(parts[8]);
      for (std::size_t i = 0; i < g; ++i) {
        CtGroup gr;
        gr.C.e = static_cast<unsigned>(r.read(static_cast<unsigned>(wc)));
        gr.C.m = r.read(mb);
        gr.C.mbits = mb;
        gr.L.e = static_cast<unsigned>(r.read(static_cast<unsigned>(wl)));
        gr.L.m = r.read(mb);
        gr.L.mbits = mb;
        l.groups.push_back(gr);
      }
      if (!r.at_end()) throw std::invalid_argument("ct label: trailing tuple bits");
    }
    l.finish(p);
    return l;
  }

 private:
  static void gamma(Bits& out, std::uint64_t x) {
    unsigned bl = bit_length(x);
    for (unsigned i = 1; i < bl; ++i) out.push(false);
    out.append(x, bl);
  }
  static std::uint64_t ungamma(BitReader& r) {
    unsigned z = 0;
    while (!r.bit()) ++z;
    return (std::uint64_t(1) << z) | (z ? r.read(z) : 0);
  }
};

struct CtEncoding {
  Params params;
  std::vector<CtLabel> labels;
};

// Walks the nominal group sizes, rounding each running child count up to two-parts form
// and pulling the difference in from later groups. Returns S_{g+1}.
template <class MaxSl>
BigUint ct_build_groups(const std::vector<std::uint64_t>& nominal, std::uint64_t d, MaxSl&& max_sl, unsigned mb, std::vector<TwoParts>& keys,
                        std::vector<CtGroup>& groups) {
  std::uint64_t pos = 0;
  BigUint S = 0;
  for (std::size_t gi = 0; gi < nominal.size() && pos < d; ++gi) {
    const std::uint64_t m = nominal[gi];
    if (m == 0) continue;
    std::uint64_t take = to_u64(two_parts_round(pos + m, mb).value()) - pos;
    if (d - pos <= take) take = d - pos;  // last group: no dummies needed
    CtGroup g{two_parts_round(pos, mb), two_parts_round(max_sl(pos, pos + take), mb)};
    keys.push_back(two_parts_round(S, mb));
    groups.push_back(g);
    S = two_parts_round(BigUint(S + g.L.value() * take), mb).value();
    pos += take;
  }
  keys.push_back(two_parts_round(S, mb));
  return S;
}

namespace detail {
struct CtFactorTag {};
inline const Pow2Factor& root_n_factor(unsigned N) {
  return memo<CtFactorTag, unsigned, Pow2Factor>(N, [&] {
    Pow2Bracket br;
    br.add(1, N);
    return Pow2Factor(br);
  });
}
}  // namespace detail

// Classes use the largest actual segment length among their members; groups then
// migrate children forward so that every count, offset and slot length has two-parts form.
inline CtEncoding encode_ct(const Tree& t, const HeavyDecomposition& h, AssertionLog* log = nullptr) {
  const Node n = t.n;
  const AugView aug{&t, &h};
  const unsigned N = aug_log_n(n);
  CtEncoding enc;
  enc.params = {"ct", N, 0, kCtC};
  enc.labels.resize(n);
  std::vector<BigUint> sl(n), rel_end(n);

  std::vector<std::pair<std::uint64_t, BigUint>> cls;  // class x2 -> largest member sl
  std::vector<BigUint> slp;                            // sl' of each real light child
  for (auto it = h.heads.rbegin(); it != h.heads.rend(); ++it) {
    const Node head = *it;
    BigUint r = 0;
    for (Node u = head; u != kNone; u = h.heavy_child[u]) {
      auto& lab = enc.labels[u];
      const std::uint64_t lw = aug.light_weight(u);
      const unsigned b = ct_node_b(lw), mb = ct_mbits(b);
      lab.level = aug.level(u);
      lab.floor_log_lw = floor_log2(lw);
      lab.has_children = aug.has_real_children(u);
      const unsigned l = class_depth(lw, lab.level);
      const auto& ch = h.ordered[u];
      const std::uint64_t nreal = ch.empty() ? 0 : ch.size() - 1, d = aug.light_count(u);

      cls.clear();
      auto bump = [&](std::uint64_t x2, const BigUint& v) -> BigUint& {
        for (auto& [k, m] : cls)
          if (k == x2) {
            if (v > m) m = v;
            return m;
          }
        cls.push_back({x2, v});
        return cls.back().second;
      };
      std::vector<std::uint64_t> child_x2(nreal);
      for (std::uint64_t j = 0; j < nreal; ++j) {
        Node v = ch[j + 1];
        child_x2[j] = class_x2(b, l, aug.size(v), aug.level(v));
        bump(child_x2[j], sl[v]);
      }
      const std::uint64_t art_x2 = class_x2(b, l, 1, 0);
      bump(art_x2, BigUint(1));
      slp.assign(nreal, 0);
      for (std::uint64_t j = 0; j < nreal; ++j) slp[j] = bump(child_x2[j], 0);
      const BigUint art_slp = bump(art_x2, 0);

      auto max_sl = [&](std::uint64_t lo, std::uint64_t hi) {
        BigUint mx = 0;
        for (std::uint64_t k = lo; k < std::min(hi, nreal); ++k) mx = std::max(mx, slp[k]);
        if (hi > nreal) mx = std::max(mx, art_slp);
        return mx;
      };
      BigUint S = ct_build_groups(group_layout(b, pregroup_count(d)).slots, d, max_sl, mb, lab.keys, lab.groups);
      rel_end[u] = S;
      r += 2 * lw + S;
    }
    r += 1;
    sl[head] = detail::root_n_factor(N).ceil(r);
  }

  for (Node head : h.heads) {
    const BigUint s = head == t.root ? BigUint(0) : enc.labels[head].start_hi;  // holds the raw start until split
    BigUint A = s;
    std::vector<Node> path;
    for (Node u = head; u != kNone; u = h.heavy_child[u]) path.push_back(u);
    std::vector<BigUint> starts;
    for (Node u : path) {
      auto& lab = enc.labels[u];
      const std::uint64_t lw = aug.light_weight(u);
      A += 2 * lw - 1;
      unsigned lg = ceil_log2(lw);
      A = (A >> lg) << lg;
      const BigUint st = A;
      starts.push_back(st);
      const BigUint A0 = st + 1;
      const auto& ch = h.ordered[u];
      std::size_t gi = 0;
      for (std::size_t j = 1; j < ch.size(); ++j) {
        const std::uint64_t i = j - 1;
        while (gi + 1 < lab.groups.size() && to_u64(lab.groups[gi + 1].C.value()) <= i) ++gi;
        const auto& g = lab.groups[gi];
        enc.labels[ch[j]].start_hi = A0 + lab.keys[gi].value() + g.L.value() * (i - to_u64(g.C.value()));
      }
      A = A0 + rel_end[u];
    }
    A += 1;
    BigUint end = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      auto& lab = enc.labels[path[i]];
      auto be = round_pow(BigUint(A - starts[i]), N);
      lab.t = be.t;
      end = std::max(end, BigUint(starts[i] + be.value()));
      split_start(starts[i], lab.start_hi, lab.tz);
    }
    BigUint span = end - s;
    if (log) log->check_le(anchor::kSpanLeSl, std::to_string(head), span, sl[head]);
    if (span > sl[head]) throw std::logic_error("ct: span of head " + std::to_string(head) + " exceeds its segment length");
  }

  for (Node u = 0; u < n; ++u) {
    auto& lab = enc.labels[u];
    if (!lab.has_children) {
      lab.keys.clear();
      lab.groups.clear();
    }
    lab.finish(enc.params);
    if (log && lab.has_children) {
      const std::string where = std::to_string(u);
      const std::uint64_t need = ceil_log2(aug.light_weight(u));
      log->check_le(anchor::kCtBudget, where, lab.dict_bits().size() + lab.tuple_bits().size(), need, true);
      bool sorted = std::is_sorted(lab.keys.begin(), lab.keys.end(), [](const TwoParts& a, const TwoParts& b) { return a.value() < b.value(); });
      log->record(anchor::kCtKeyOrder, where, sorted ? "sorted" : "unsorted", "sorted", sorted, false);
    }
  }
  return enc;
}

// Primitive-step budget for one query: fixed steps plus the rank dictionary's per-block cost.
inline std::uint64_t ct_ops_budget(unsigned b) {
  const GroupLayout& g = group_layout(b, 62);
  std::uint64_t groups = 0;
  for (auto m : g.slots) groups += m != 0;
  const unsigned w = 10 + ct_mbits(b);  // exponents of values below 2^1024
  const std::uint64_t per = std::min<std::uint64_t>(64 / (w + 1), (std::uint64_t(1) << (w + 1)) - 1);
  const std::uint64_t blocks = (groups + 1 + per - 1) / per;
  return 24 + 9 * blocks;
}

inline int route_ct(const CtLabel& u, const BigUint& w_start, OpCounter* ops = nullptr) {
  auto step = [&](std::uint64_t k = 1) {
    if (ops) ops->add(k);
  };
  step();
  if (!u.has_children) return 0;
  const BigUint us = u.start();
  step(2);
  if (w_start <= us) return 0;
  BigUint q = w_start - us;
  step(2);
  if (q >= u.bound) return 0;
  BigUint q0 = q - 1;
  const unsigned mb = u.mbits();
  TwoParts tp = two_parts_round(q0, mb, Rounding::Down);
  step(4);
  std::size_t rank;
  if (bit_length(std::uint64_t(tp.e)) > u.ew_s) {
    rank = u.keys.size();
  } else {
    rank = u.dict.rank(tp.key() + 1, ops);
  }
  step();
  if (rank >= u.keys.size()) return 1;
  const auto& g = u.groups[rank - 1];
  step(6);
  BigUint k = (q0 - u.keys[rank - 1].value()) / g.L.value();
  return 2 + static_cast<int>(to_u64(g.C.value()) + to_u64(k));
}

inline int route_ct(const CtLabel& u, const CtLabel& w, OpCounter* ops = nullptr) { return route_ct(u, w.start(), ops); }

}  // namespace treelabel
