#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "treelabel/schemes.hpp"

namespace treelabel {

// TREELABEL_THREADS caps fan-out; default is the hardware concurrency
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* s = std::getenv("TREELABEL_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw * 4);
  }
  return hw;
}

// Runs fn(i) for i in [0, count) over worker_count() threads.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 0) {
  if (!threads) threads = worker_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (unsigned k = 0; k < threads; ++k)
    pool.emplace_back([&] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
        next = count;
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// Euler-tour oracle: O(log deg) per query, independent of the label code.
class EulerOracle {
 public:
  EulerOracle(const Tree& t, const PortAssignment& p) : t_(&t), p_(&p), tin_(t.n), tout_(t.n) {
    std::vector<std::pair<Node, std::size_t>> st{{t.root, 0}};
    std::uint32_t clock = 0;
    tin_[t.root] = clock++;
    while (!st.empty()) {
      auto& [u, i] = st.back();
      if (i < t.children[u].size()) {
        Node v = t.children[u][i++];
        tin_[v] = clock++;
        st.push_back({v, 0});
      } else {
        tout_[u] = clock;
        st.pop_back();
      }
    }
  }

  bool is_ancestor(Node u, Node w) const { return u != w && tin_[u] < tin_[w] && tin_[w] < tout_[u]; }

  int first_hop(Node u, Node w) const {
    if (!is_ancestor(u, w)) return 0;
    const auto& ch = t_->children[u];  // input order is also tin order
    auto it = std::upper_bound(ch.begin(), ch.end(), tin_[w], [&](std::uint32_t x, Node c) { return x < tin_[c]; });
    return p_->port(*std::prev(it));
  }

 private:
  const Tree* t_;
  const PortAssignment* p_;
  std::vector<std::uint32_t> tin_, tout_;
};

struct VerifyOptions {
  bool exhaustive = true;
  std::uint64_t samples = 0;  // sample mode: number of random ordered pairs
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

// "exhaustive" or "sample:k"
inline VerifyOptions parse_verify_mode(const std::string& mode, std::uint64_t seed = 1) {
  VerifyOptions o;
  o.seed = seed;
  if (mode == "exhaustive") return o;
  if (mode.rfind("sample:", 0) == 0) {
    std::size_t used = 0;
    const std::string k = mode.substr(7);
    unsigned long long v = 0;
    try {
      v = std::stoull(k, &used);
    } catch (...) {
      used = 0;
    }
    if (used == k.size() && !k.empty() && v > 0) {
      o.exhaustive = false;
      o.samples = v;
      return o;
    }
  }
  throw std::invalid_argument("verify: mode must be exhaustive or sample:k");
}

struct Mismatch {
  Node u = 0, w = 0;
  int got = 0, want = 0;
};

struct VerifyReport {
  std::uint64_t queries = 0;
  std::uint64_t mismatches = 0;
  std::optional<Mismatch> first;  // smallest (u, w) among mismatches
  std::string error;              // decoder exception, if any

  bool ok() const { return mismatches == 0 && error.empty(); }

  std::string describe(const std::string& scheme) const {
    std::ostringstream os;
    if (ok()) {
      os << "PASS " << scheme << " queries=" << queries;
    } else {
      os << "FAIL " << scheme << " queries=" << queries << " mismatches=" << mismatches;
      if (first) os << " first: u=" << first->u << " w=" << first->w << " got=" << first->got << " want=" << first->want;
      if (!error.empty()) os << " error: " << error;
    }
    return os.str();
  }
};

// Checks the router against ground truth: first-hop port, or is_ancestor for ancestry labels.
inline VerifyReport verify_router(const Tree& t, const PortAssignment& ports, const Router& r, const VerifyOptions& opt = {}) {
  VerifyReport rep;
  const Node n = t.n;
  if (r.size() != n) {
    rep.error = "label count " + std::to_string(r.size()) + " != node count " + std::to_string(n);
    return rep;
  }
  EulerOracle oracle(t, ports);
  auto want_of = [&](Node u, Node w) { return r.ancestry_only ? (oracle.is_ancestor(u, w) ? 1 : 0) : oracle.first_hop(u, w); };

  std::mutex mu;
  auto merge = [&](std::uint64_t q, std::uint64_t bad, const std::optional<Mismatch>& f) {
    std::lock_guard<std::mutex> lock(mu);
    rep.queries += q;
    rep.mismatches += bad;
    if (f && (!rep.first || std::pair(f->u, f->w) < std::pair(rep.first->u, rep.first->w))) rep.first = f;
  };

  try {
    if (opt.exhaustive) {
      parallel_for(
          static_cast<std::size_t>(n),
          [&](std::size_t ui) {
            const Node u = static_cast<Node>(ui);
            std::uint64_t bad = 0;
            std::optional<Mismatch> f;
            for (Node w = 0; w < n; ++w) {
              if (w == u) continue;
              int got = r.route(u, w), want = want_of(u, w);
              if (got != want) {
                ++bad;
                if (!f) f = Mismatch{u, w, got, want};
              }
            }
            merge(n - 1, bad, f);
          },
          opt.threads);
    } else if (n >= 2) {
      const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(opt.samples, 64));
      parallel_for(
          chunks,
          [&](std::size_t c) {
            XorShift64 rng(opt.seed * 0x9E3779B97F4A7C15ull + c + 1);
            const std::uint64_t k = opt.samples / chunks + (c < opt.samples % chunks ? 1 : 0);
            std::uint64_t bad = 0;
            std::optional<Mismatch> f;
            for (std::uint64_t i = 0; i < k; ++i) {
              Node u = static_cast<Node>(rng.below(n));
              Node w = static_cast<Node>(rng.below(n - 1));
              if (w >= u) ++w;
              int got = r.route(u, w), want = want_of(u, w);
              if (got != want) {
                ++bad;
                if (!f || std::pair(u, w) < std::pair(f->u, f->w)) f = Mismatch{u, w, got, want};
              }
            }
            merge(k, bad, f);
          },
          opt.threads);
    }
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  return rep;
}

inline VerifyReport verify_encoding(const Tree& t, const Encoding& e, const VerifyOptions& opt = {}) { return verify_router(t, e.ports, *make_router(e), opt); }

// Returns the first pair of nodes sharing a start, if any.
inline std::optional<std::pair<Node, Node>> duplicate_start(const std::vector<BigUint>& starts) {
  std::vector<Node> idx(starts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Node>(i);
  std::sort(idx.begin(), idx.end(), [&](Node a, Node b) { return starts[a] < starts[b]; });
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (starts[idx[i - 1]] == starts[idx[i]]) return std::pair(std::min(idx[i - 1], idx[i]), std::max(idx[i - 1], idx[i]));
  return std::nullopt;
}

}  // namespace treelabel
