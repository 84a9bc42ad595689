#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treelabel/bounded_degree.hpp"
#include "treelabel/consttime.hpp"
#include "treelabel/final.hpp"
#include "treelabel/interm.hpp"
#include "treelabel/prelim.hpp"

namespace treelabel {

inline const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names = {"ancestry", "bd", "prelim", "interm", "final", "ct", "local:v1", "local:v2", "depth"};
  return names;
}

inline bool is_scheme(const std::string& s) {
  const auto& v = scheme_names();
  return std::find(v.begin(), v.end(), s) != v.end();
}

// b, c = 0 select each scheme's default
struct SchemeOptions {
  unsigned b = 0;
  unsigned c = 0;
};

// b = log^(1/4) n / sqrt(log log n), c = log^(1/4) n * sqrt(log log n), rounded up, at least 1
inline std::pair<unsigned, unsigned> prelim_default_bc(Node n) {
  double lg = std::max(1u, ceil_log2(static_cast<std::uint64_t>(n)));
  double llg = std::max(1u, ceil_log2(static_cast<std::uint64_t>(lg)));
  double q = std::pow(lg, 0.25);
  return {std::max(1u, static_cast<unsigned>(std::ceil(q / std::sqrt(llg)))), std::max(1u, static_cast<unsigned>(std::ceil(q * std::sqrt(llg))))};
}

struct Encoding {
  Params params;
  std::vector<Bits> labels;
  std::vector<Bits> locals;  // local-table variants only
  PortAssignment ports;
  std::vector<BigUint> starts;

  bool has_locals() const { return !locals.empty(); }
};

// Encodes with the canonical port assignment. The log, when given, collects lemma checks.
inline Encoding encode_scheme(const std::string& scheme, const Tree& t, const SchemeOptions& opt = {}, AssertionLog* log = nullptr) {
  auto h = decompose(t);
  Encoding e;
  e.ports = canonical_ports(t, h);
  const unsigned logn = std::max(1u, ceil_log2(static_cast<std::uint64_t>(t.n)));
  auto take = [&](auto& enc, auto&& packer, auto&& start_of) {
    e.params = enc.params;
    e.labels.reserve(t.n);
    e.starts.reserve(t.n);
    for (auto& l : enc.labels) {
      e.labels.push_back(packer(l));
      e.starts.push_back(start_of(l));
    }
  };
  if (scheme == "ancestry") {
    auto enc = encode_ancestry(t, h, opt.b ? opt.b : logn, log);
    take(enc, [](auto& l) { return l.pack(); }, [](auto& l) { return l.start; });
  } else if (scheme == "bd") {
    auto enc = encode_bd(t, h, opt.b ? opt.b : logn);
    const unsigned w = bd_entry_width(enc.params.b, enc.params.N);
    take(enc, [&](auto& l) { return l.pack(w); }, [](auto& l) { return l.start; });
  } else if (scheme == "prelim") {
    auto [db, dc] = prelim_default_bc(t.n);
    auto enc = encode_prelim(t, h, opt.b ? opt.b : db, opt.c ? opt.c : dc, log);
    const unsigned c = enc.params.c;
    take(enc, [&](auto& l) { return l.pack(c); }, [](auto& l) { return l.start; });
  } else if (scheme == "interm" || scheme == "depth") {
    auto enc = scheme == "depth" ? encode_depth(t, h, log) : encode_interm(t, h, opt.b, log);
    take(enc, [](auto& l) { return l.pack(); }, [](auto& l) { return l.start; });
    if (scheme == "depth" && log) {
      // advisory: log n + K_d log log n with K_d = 12 (d + 1), only for shallow trees
      const int d = t.depth();
      if (d <= 8) {
        std::size_t mx = 0;
        for (auto& b : e.labels) mx = std::max(mx, b.size());
        const std::size_t cap = logn + 12 * std::size_t(d + 1) * std::max(1u, ceil_log2(std::uint64_t(logn)));
        log->check_le(anchor::kDepthLength, "d=" + std::to_string(d), mx, cap, true);
      }
    }
  } else if (scheme == "local:v1" || scheme == "local:v2") {
    auto enc = encode_local(t, h, scheme == "local:v1" ? LocalVariant::V1 : LocalVariant::V2, log);
    take(enc, [](auto& l) { return local_label(l); }, [](auto& l) { return l.start; });
    for (auto& l : enc.labels) e.locals.push_back(l.pack());
  } else if (scheme == "final") {
    auto enc = encode_final(t, h, log);
    take(enc, [](auto& l) { return l.pack(); }, [](auto& l) { return l.start(); });
  } else if (scheme == "ct") {
    auto enc = encode_ct(t, h, log);
    take(enc, [](auto& l) { return l.pack(); }, [](auto& l) { return l.start(); });
  } else {
    throw std::invalid_argument("unknown scheme: " + scheme);
  }
  return e;
}

// ---------------------------------------------------------------------------
// routing over decoded labels

class Router {
 public:
  virtual ~Router() = default;
  // ancestry: 1 iff u is a proper ancestor of w; routing schemes: first-hop port or 0
  virtual int route(Node u, Node w) const = 0;
  virtual Node size() const = 0;
  bool ancestry_only = false;
};

namespace detail {

template <class Label, class Fn>
class RouterImpl : public Router {
 public:
  RouterImpl(std::vector<Label> labels, Fn fn) : labels_(std::move(labels)), fn_(std::move(fn)) {}
  int route(Node u, Node w) const override { return fn_(labels_[u], labels_[w]); }
  Node size() const override { return static_cast<Node>(labels_.size()); }

 private:
  std::vector<Label> labels_;
  Fn fn_;
};

template <class Label, class Fn>
std::unique_ptr<Router> make_impl(std::vector<Label> labels, Fn fn) {
  return std::make_unique<RouterImpl<Label, Fn>>(std::move(labels), std::move(fn));
}

class LocalRouter : public Router {
 public:
  LocalRouter(std::vector<IntermLabel> locals, std::vector<BigUint> starts, Params p) : locals_(std::move(locals)), starts_(std::move(starts)), p_(std::move(p)) {}
  int route(Node u, Node w) const override { return route_interm(locals_[u], starts_[w], p_); }
  Node size() const override { return static_cast<Node>(starts_.size()); }

 private:
  std::vector<IntermLabel> locals_;
  std::vector<BigUint> starts_;
  Params p_;
};

template <class Label, class Dec>
std::vector<Label> decode_all(const std::vector<Bits>& bits, Dec&& dec) {
  std::vector<Label> out;
  out.reserve(bits.size());
  for (auto& b : bits) out.push_back(dec(b));
  return out;
}

}  // namespace detail

inline std::unique_ptr<Router> make_router(const Params& p, const std::vector<Bits>& labels, const std::vector<Bits>& locals = {}) {
  const std::string& s = p.scheme;
  if (s == "ancestry") {
    auto r = detail::make_impl(detail::decode_all<AncestryLabel>(labels, [](const Bits& b) { return AncestryLabel::unpack(b); }),
                               [b = p.b](const AncestryLabel& u, const AncestryLabel& w) { return ancestry_is_ancestor(u, w, b) ? 1 : 0; });
    r->ancestry_only = true;
    return r;
  }
  if (s == "bd") {
    const unsigned w = bd_entry_width(p.b, p.N);
    return detail::make_impl(detail::decode_all<BdLabel>(labels, [w](const Bits& b) { return BdLabel::unpack(b, w); }),
                             [b = p.b](const BdLabel& u, const BdLabel& x) { return route_bd(u, x, b); });
  }
  if (s == "prelim")
    return detail::make_impl(detail::decode_all<PrelimLabel>(labels, [c = p.c](const Bits& b) { return PrelimLabel::unpack(b, c); }),
                             [p](const PrelimLabel& u, const PrelimLabel& x) { return route_prelim(u, x, p.b, p.c, p.N); });
  if (s == "interm" || s == "depth")
    return detail::make_impl(detail::decode_all<IntermLabel>(labels, [&p](const Bits& b) { return IntermLabel::unpack(b, p); }),
                             [p](const IntermLabel& u, const IntermLabel& x) { return route_interm(u, x, p); });
  if (s == "local:v1" || s == "local:v2") {
    if (locals.size() != labels.size()) throw std::invalid_argument("local scheme needs one local table per label");
    auto loc = detail::decode_all<IntermLabel>(locals, [&p](const Bits& b) { return IntermLabel::unpack(b, p); });
    auto st = detail::decode_all<BigUint>(labels, [](const Bits& b) { return bits_value(b); });
    return std::make_unique<detail::LocalRouter>(std::move(loc), std::move(st), p);
  }
  if (s == "final")
    return detail::make_impl(detail::decode_all<FinalLabel>(labels, [&p](const Bits& b) { return FinalLabel::unpack(b, p); }),
                             [p](const FinalLabel& u, const FinalLabel& x) { return route_final(u, x, p); });
  if (s == "ct")
    return detail::make_impl(detail::decode_all<CtLabel>(labels, [&p](const Bits& b) { return CtLabel::unpack(b, p); }),
                             [](const CtLabel& u, const CtLabel& x) { return route_ct(u, x); });
  throw std::invalid_argument("unknown scheme: " + s);
}

inline std::unique_ptr<Router> make_router(const Encoding& e) { return make_router(e.params, e.labels, e.locals); }

// Single query from raw label bits; for local variants lu is u's local table.
inline int route_labels(const Params& p, const Bits& lu, const Bits& lw) {
  return make_router(p, {lu, lw}, p.scheme.rfind("local:", 0) == 0 ? std::vector<Bits>{lu, lu} : std::vector<Bits>{})->route(0, 1);
}

// ---------------------------------------------------------------------------
// labels file: header, "node_id len:<bits> <hex>" lines, PORTS section, optional LOCAL section

inline void write_labels(std::ostream& out, const Encoding& e, const Tree& t) {
  out << e.params.header() << '\n';
  for (std::size_t i = 0; i < e.labels.size(); ++i) out << i << ' ' << e.labels[i].serialize() << '\n';
  out << "PORTS\n";
  for (Node v = 0; v < t.n; ++v)
    if (v != t.root) out << t.parent[v] << ' ' << v << ' ' << e.ports.port(v) << '\n';
  if (e.has_locals()) {
    out << "LOCAL\n";
    for (std::size_t i = 0; i < e.locals.size(); ++i) out << i << ' ' << e.locals[i].serialize() << '\n';
  }
}

struct LabelsFile {
  Params params;
  std::vector<Bits> labels;
  std::vector<Bits> locals;
  std::vector<std::array<long long, 3>> ports;  // parent, child, port
};

inline Bits parse_serialized(const std::string& len_tok, const std::string& hex) {
  if (len_tok.rfind("len:", 0) != 0) throw std::invalid_argument("labels file: expected len:<bits>");
  std::size_t len = std::stoull(len_tok.substr(4));
  return Bits::from_hex(hex, len);
}

inline LabelsFile read_labels(std::istream& in) {
  LabelsFile f;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("labels file: empty");
  f.params = Params::parse_header(line);
  enum { Labels, Ports, Local } section = Labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "PORTS") {
      section = Ports;
      continue;
    }
    if (line == "LOCAL") {
      section = Local;
      continue;
    }
    std::istringstream ls(line);
    if (section == Ports) {
      std::array<long long, 3> p{};
      if (!(ls >> p[0] >> p[1] >> p[2])) throw std::invalid_argument("labels file: bad port line: " + line);
      f.ports.push_back(p);
      continue;
    }
    std::size_t id;
    std::string len_tok, hex;
    if (!(ls >> id >> len_tok)) throw std::invalid_argument("labels file: bad label line: " + line);
    ls >> hex;  // empty labels have no hex token
    auto& vec = section == Labels ? f.labels : f.locals;
    if (id != vec.size()) throw std::invalid_argument("labels file: node ids out of order");
    vec.push_back(parse_serialized(len_tok, hex));
  }
  return f;
}

}  // namespace treelabel
