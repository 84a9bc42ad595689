#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "treelabel/bigint.hpp"

namespace treelabel {

using Node = std::int32_t;
constexpr Node kNone = -1;

// Rooted tree, root 0, topological numbering (parent < child).
struct Tree {
  Node n = 0;
  std::vector<Node> parent;                 // parent[0] == kNone
  std::vector<std::vector<Node>> children;  // input order
  Node root = 0;

  static Tree from_parents(const std::vector<Node>& par) {
    Tree t;
    t.n = static_cast<Node>(par.size());
    if (t.n == 0) throw std::invalid_argument("tree: empty");
    if (par[0] != kNone) throw std::invalid_argument("tree: node 0 must be the root");
    t.parent = par;
    t.children.assign(t.n, {});
    for (Node v = 1; v < t.n; ++v) {
      if (par[v] < 0 || par[v] >= t.n) throw std::invalid_argument("tree: parent index out of range");
      // parent < child rules out cycles
      if (par[v] >= v) throw std::invalid_argument("tree: parent index must be smaller than child index");
      t.children[par[v]].push_back(v);
    }
    return t;
  }

  std::size_t max_degree() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.size());
    return d;
  }

  int depth() const {
    std::vector<int> dep(n, 0);
    int d = 0;
    for (Node v = 1; v < n; ++v) d = std::max(d, dep[v] = dep[parent[v]] + 1);
    return d;
  }
};

inline Tree parse_tree(std::istream& in) {
  long long n;
  if (!(in >> n) || n < 1) throw std::invalid_argument("tree: malformed node count");
  if (n > (1LL << 30)) throw std::invalid_argument("tree: node count too large");
  std::vector<Node> par(static_cast<std::size_t>(n), kNone);
  for (long long v = 1; v < n; ++v) {
    long long p;
    if (!(in >> p)) throw std::invalid_argument("tree: malformed count (missing parent entries)");
    if (p < 0 || p >= n) throw std::invalid_argument("tree: parent index out of range");
    par[v] = static_cast<Node>(p);
  }
  std::string extra;
  if (in >> extra) throw std::invalid_argument("tree: malformed count (trailing data)");
  return Tree::from_parents(par);
}

inline Tree parse_tree(const std::string& text) {
  std::istringstream in(text);
  return parse_tree(in);
}

inline void write_tree(std::ostream& out, const Tree& t) {
  out << t.n << '\n';
  for (Node v = 1; v < t.n; ++v) out << t.parent[v] << (v + 1 < t.n ? ' ' : '\n');
}

inline std::string tree_to_string(const Tree& t) {
  std::ostringstream s;
  write_tree(s, t);
  return s.str();
}

// ---------------------------------------------------------------------------
// heavy path decomposition + canonical ports

struct HeavyDecomposition {
  std::vector<std::int64_t> subtree_size;
  std::vector<Node> heavy_child;  // kNone for leaves
  std::vector<Node> path_head;
  std::vector<int> level;
  std::vector<std::int64_t> light_weight;
  std::vector<int> light_depth;
  // children sorted by (size desc, index asc); ordered[u][0] is heavy
  std::vector<std::vector<Node>> ordered;
  std::vector<Node> heads;  // increasing index, so parents' paths come first
};

inline HeavyDecomposition decompose(const Tree& t) {
  HeavyDecomposition h;
  const Node n = t.n;
  h.subtree_size.assign(n, 1);
  for (Node v = n - 1; v >= 1; --v) h.subtree_size[t.parent[v]] += h.subtree_size[v];
  h.ordered.resize(n);
  h.heavy_child.assign(n, kNone);
  h.level.assign(n, 0);
  h.light_weight.assign(n, 0);
  for (Node u = 0; u < n; ++u) {
    auto& o = h.ordered[u];
    o = t.children[u];
    std::stable_sort(o.begin(), o.end(), [&](Node a, Node b) {
      if (h.subtree_size[a] != h.subtree_size[b]) return h.subtree_size[a] > h.subtree_size[b];
      return a < b;
    });
    if (!o.empty()) {
      h.heavy_child[u] = o[0];
      h.light_weight[u] = h.subtree_size[u] - 1 - h.subtree_size[o[0]];
    }
    h.level[u] = static_cast<int>(floor_log2(static_cast<std::uint64_t>(h.subtree_size[u])));
  }
  h.path_head.assign(n, 0);
  h.light_depth.assign(n, 0);
  for (Node v = 0; v < n; ++v) {
    if (v == t.root) {
      h.path_head[v] = v;
      h.heads.push_back(v);
      continue;
    }
    Node p = t.parent[v];
    if (h.heavy_child[p] == v) {
      h.path_head[v] = h.path_head[p];
      h.light_depth[v] = h.light_depth[p];
    } else {
      h.path_head[v] = v;
      h.light_depth[v] = h.light_depth[p] + 1;
      h.heads.push_back(v);
    }
  }
  return h;
}

// port_of_child[v] = port of edge parent(v) -> v; 0 for the root.
struct PortAssignment {
  std::vector<int> port_of_child;
  std::vector<std::vector<Node>> child_at;  // child_at[u][p-1]

  int port(Node child) const { return port_of_child[child]; }
};

inline PortAssignment canonical_ports(const Tree& t, const HeavyDecomposition& h) {
  PortAssignment p;
  p.port_of_child.assign(t.n, 0);
  p.child_at = h.ordered;
  for (Node u = 0; u < t.n; ++u)
    for (std::size_t i = 0; i < h.ordered[u].size(); ++i) p.port_of_child[h.ordered[u][i]] = static_cast<int>(i + 1);
  return p;
}

// Canonical iff ports are a permutation of 1..deg with non-increasing child sizes
// and the heavy child on port 1.
inline bool is_canonical(const Tree& t, const HeavyDecomposition& h, const PortAssignment& p, std::string* why = nullptr) {
  for (Node u = 0; u < t.n; ++u) {
    const auto& ch = t.children[u];
    std::vector<Node> by_port(ch.size(), kNone);
    for (Node v : ch) {
      int q = p.port(v);
      if (q < 1 || q > static_cast<int>(ch.size()) || by_port[q - 1] != kNone) {
        if (why) *why = "node " + std::to_string(u) + ": ports not a permutation";
        return false;
      }
      by_port[q - 1] = v;
    }
    for (std::size_t i = 1; i < by_port.size(); ++i)
      if (h.subtree_size[by_port[i - 1]] < h.subtree_size[by_port[i]]) {
        if (why) *why = "node " + std::to_string(u) + ": port order not by size";
        return false;
      }
    if (!ch.empty() && by_port[0] != h.heavy_child[u]) {
      if (why) *why = "node " + std::to_string(u) + ": heavy child not on port 1";
      return false;
    }
  }
  return true;
}

// Ground truth by explicit walk from w towards the root.
inline int oracle_first_hop(const Tree& t, const PortAssignment& p, Node u, Node w) {
  if (u == w) throw std::invalid_argument("oracle_first_hop: u == w");
  Node prev = w;
  for (Node x = t.parent[w]; x != kNone; prev = x, x = t.parent[x])
    if (x == u) return p.port(prev);
  return 0;
}

// Full table for all ordered pairs: table[u*n + w]; filled by walking each w's ancestor chain.
inline std::vector<std::uint32_t> oracle_table(const Tree& t, const PortAssignment& p) {
  const std::size_t n = static_cast<std::size_t>(t.n);
  std::vector<std::uint32_t> table(n * n, 0);
  for (Node w = 0; w < t.n; ++w) {
    Node prev = w;
    for (Node x = t.parent[w]; x != kNone; prev = x, x = t.parent[x])
      table[static_cast<std::size_t>(x) * n + w] = static_cast<std::uint32_t>(p.port(prev));
  }
  return table;
}

inline bool oracle_is_ancestor(const Tree& t, Node u, Node w) {
  for (Node x = t.parent[w]; x != kNone; x = t.parent[x])
    if (x == u) return true;
  return false;
}

// ---------------------------------------------------------------------------
// generators

// Marsaglia xorshift64
class XorShift64 {
 public:
  explicit XorShift64(std::uint64_t seed) : s_(seed ? seed : 0x9E3779B97F4A7C15ull) {}
  std::uint64_t next() {
    s_ ^= s_ << 13;
    s_ ^= s_ >> 7;
    s_ ^= s_ << 17;
    return s_;
  }
  // uniform in [0, k) by rejection
  std::uint64_t below(std::uint64_t k) {
    const std::uint64_t limit = (~std::uint64_t(0) / k) * k;
    std::uint64_t r;
    do r = next();
    while (r >= limit);
    return r % k;
  }

 private:
  std::uint64_t s_;
};

enum class GenKind { Path, Star, Caterpillar, CompleteBinary, RandomAttachment, LowerBound };

struct GenSpec {
  GenKind kind = GenKind::Path;
  int param = 0;  // i for lower_bound

  static GenSpec parse(const std::string& s) {
    if (s == "path") return {GenKind::Path, 0};
    if (s == "star") return {GenKind::Star, 0};
    if (s == "caterpillar") return {GenKind::Caterpillar, 0};
    if (s == "complete_binary") return {GenKind::CompleteBinary, 0};
    if (s == "random_attachment" || s == "random") return {GenKind::RandomAttachment, 0};
    const std::string lb = "lower_bound";
    if (s.rfind(lb, 0) == 0) {
      std::string rest = s.substr(lb.size());
      if (rest.size() < 2 || (rest[0] != ':' && rest[0] != '(')) throw std::invalid_argument("gen: lower_bound needs :i");
      rest = rest.substr(1);
      if (!rest.empty() && rest.back() == ')') rest.pop_back();
      std::size_t used = 0;
      int i = std::stoi(rest, &used);
      if (used != rest.size() || i < 1) throw std::invalid_argument("gen: bad lower_bound parameter");
      return {GenKind::LowerBound, i};
    }
    throw std::invalid_argument("gen: unknown kind '" + s + "'");
  }

  std::string name() const {
    switch (kind) {
      case GenKind::Path: return "path";
      case GenKind::Star: return "star";
      case GenKind::Caterpillar: return "caterpillar";
      case GenKind::CompleteBinary: return "complete_binary";
      case GenKind::RandomAttachment: return "random_attachment";
      case GenKind::LowerBound: return "lower_bound:" + std::to_string(param);
    }
    return "?";
  }
};

inline Tree gen_tree(const GenSpec& spec, Node n, std::uint64_t seed = 1) {
  if (n < 1) throw std::invalid_argument("gen: n must be >= 1");
  std::vector<Node> par(n, kNone);
  switch (spec.kind) {
    case GenKind::Path:
      for (Node v = 1; v < n; ++v) par[v] = v - 1;
      break;
    case GenKind::Star:
      for (Node v = 1; v < n; ++v) par[v] = 0;
      break;
    case GenKind::Caterpillar: {
      Node s = (n + 1) / 2;  // spine 0..s-1, spine node k gets leaf s+k
      for (Node v = 1; v < s; ++v) par[v] = v - 1;
      for (Node v = s; v < n; ++v) par[v] = v - s;
      break;
    }
    case GenKind::CompleteBinary: {
      std::uint64_t m = static_cast<std::uint64_t>(n) + 1;
      if (m & (m - 1)) throw std::invalid_argument("gen: complete_binary requires n = 2^k - 1");
      for (Node v = 1; v < n; ++v) par[v] = (v - 1) / 2;
      break;
    }
    case GenKind::RandomAttachment: {
      XorShift64 rng(seed);
      for (Node v = 1; v < n; ++v) par[v] = static_cast<Node>(rng.below(static_cast<std::uint64_t>(v)));
      break;
    }
    case GenKind::LowerBound: {
      // heap-shaped binary tree with i leaves (the path heads), each path node carries a dummy leaf
      const std::int64_t i = spec.param;
      if (static_cast<std::int64_t>(n) < 3 * i - 1)
        throw std::invalid_argument("gen: lower_bound:" + std::to_string(i) + " needs n >= " + std::to_string(3 * i - 1));
      const std::int64_t internal = i - 1;
      const std::int64_t budget = n - internal;
      const std::int64_t P = budget / 2;
      const bool extra = budget % 2;
      for (Node v = 1; v < 2 * i - 1; ++v) par[v] = (v - 1) / 2;
      Node next = static_cast<Node>(2 * i - 1);
      Node last = kNone;
      for (std::int64_t j = 0; j < i; ++j) {
        std::int64_t len = P / i + (j < P % i ? 1 : 0);
        Node cur = static_cast<Node>(internal + j);
        for (std::int64_t step = 0; step < len; ++step) {
          if (step > 0) {
            par[next] = cur;
            cur = next++;
          }
          par[next++] = cur;  // dummy leaf
        }
        last = cur;
      }
      if (extra) par[next++] = last;
      if (next != n) throw std::logic_error("gen: lower_bound node count mismatch");
      break;
    }
  }
  return Tree::from_parents(par);
}

inline Tree gen_tree(const std::string& kind, Node n, std::uint64_t seed = 1) {
  return gen_tree(GenSpec::parse(kind), n, seed);
}

}  // namespace treelabel
