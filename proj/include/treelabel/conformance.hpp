#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "treelabel/verify.hpp"

namespace treelabel {

struct CorpusTree {
  std::string name;
  std::string kind;
  Tree tree;
};

// n = 1..64, 128, 256, 512 over every generator; complete_binary only at 2^k - 1,
// lower_bound:i only where n >= 3i - 1.
inline std::vector<CorpusTree> conformance_corpus(Node max_small = 64, std::vector<Node> large = {128, 256, 512}) {
  std::vector<Node> sizes;
  for (Node n = 1; n <= max_small; ++n) sizes.push_back(n);
  for (Node n : large) sizes.push_back(n);
  std::vector<CorpusTree> out;
  auto add = [&](const std::string& kind, Node n, std::uint64_t seed) {
    std::string name = kind + ":" + std::to_string(n) + (kind == "random_attachment" ? ":s" + std::to_string(seed) : "");
    out.push_back({std::move(name), kind, gen_tree(kind, n, seed)});
  };
  for (Node n : sizes) {
    for (const char* k : {"path", "star", "caterpillar"}) add(k, n, 1);
    std::uint64_t m = static_cast<std::uint64_t>(n) + 1;
    if ((m & (m - 1)) == 0) add("complete_binary", n, 1);
    for (std::uint64_t s = 1; s <= 5; ++s) add("random_attachment", n, s);
    for (int i : {1, 2, 8})
      if (n >= 3 * i - 1) add("lower_bound:" + std::to_string(i), n, 1);
  }
  return out;
}

// One encode configuration; prelim runs under several (b, c) pairs.
struct SchemeConfig {
  std::string scheme;
  SchemeOptions opt;
  enum class PrelimSet { None, Ones, TwoThree, Quarter } prelim = PrelimSet::None;

  std::string name() const {
    switch (prelim) {
      case PrelimSet::Ones: return scheme + "(b=1,c=1)";
      case PrelimSet::TwoThree: return scheme + "(b=2,c=3)";
      case PrelimSet::Quarter: return scheme + "(b=c=ceil(log^1/4 n))";
      case PrelimSet::None: break;
    }
    return scheme;
  }

  SchemeOptions options_for(Node n) const {
    switch (prelim) {
      case PrelimSet::Ones: return {1, 1};
      case PrelimSet::TwoThree: return {2, 3};
      case PrelimSet::Quarter: {
        unsigned lg = std::max(1u, ceil_log2(static_cast<std::uint64_t>(n)));
        auto q = static_cast<unsigned>(std::ceil(std::pow(static_cast<double>(lg), 0.25) - 1e-12));
        return {std::max(1u, q), std::max(1u, q)};
      }
      case PrelimSet::None: break;
    }
    return opt;
  }
};

inline std::vector<SchemeConfig> shipped_configs() {
  std::vector<SchemeConfig> out;
  for (const auto& s : scheme_names()) {
    if (s == "prelim") {
      for (auto p : {SchemeConfig::PrelimSet::Ones, SchemeConfig::PrelimSet::TwoThree, SchemeConfig::PrelimSet::Quarter}) out.push_back({s, {}, p});
    } else {
      out.push_back({s, {}, SchemeConfig::PrelimSet::None});
    }
  }
  return out;
}

struct ConformanceReport {
  std::vector<std::string> lines;  // "ANCHOR status lhs rhs [@where]"
  std::map<std::string, AssertionLog::Count> counts;
  std::size_t trees = 0;
  std::uint64_t queries = 0;
  std::size_t failures = 0;
  std::size_t warnings = 0;

  bool ok() const { return failures == 0; }

  void merge(const ConformanceReport& o) {
    lines.insert(lines.end(), o.lines.begin(), o.lines.end());
    for (auto& [k, c] : o.counts) {
      auto& d = counts[k];
      d.total += c.total;
      d.failed += c.failed;
      d.warned += c.warned;
    }
    trees += o.trees;
    queries += o.queries;
    failures += o.failures;
    warnings += o.warnings;
  }

  void count(const char* anchor, bool pass) {
    auto& c = counts[anchor];
    ++c.total;
    if (!pass) ++c.failed;
  }

  void fail(const char* anchor, const std::string& lhs, const std::string& rhs, const std::string& where) {
    lines.push_back(std::string(anchor) + " FAIL " + lhs + " " + rhs + " @" + where);
    ++failures;
  }

  // per-anchor totals, one line each
  void write_summary(std::ostream& os) const {
    for (auto& [k, c] : counts) {
      const char* st = c.failed ? "FAIL" : (c.warned ? "WARN" : "PASS");
      os << k << ' ' << st << ' ' << (c.total - c.failed - c.warned) << ' ' << c.total << '\n';
    }
  }
};

namespace anchor {
inline constexpr const char* kOracle = "conformance.oracle";
inline constexpr const char* kCanonical = "conformance.canonical";
inline constexpr const char* kUniqueStarts = "conformance.unique-starts";
inline constexpr const char* kLowerBoundDegree = "conformance.lower-bound-degree";
inline constexpr const char* kEncode = "conformance.encode";
}  // namespace anchor

inline ConformanceReport check_tree(const SchemeConfig& cfg, const CorpusTree& item) {
  ConformanceReport rep;
  rep.trees = 1;
  const Tree& t = item.tree;
  const std::string where = cfg.name() + ":" + item.name;

  if (item.kind.rfind("lower_bound", 0) == 0) {
    const std::size_t d = t.max_degree();
    rep.count(anchor::kLowerBoundDegree, d <= 2);
    if (d > 2) rep.fail(anchor::kLowerBoundDegree, std::to_string(d), "2", where);
  }

  AssertionLog log;
  Encoding e;
  try {
    e = encode_scheme(cfg.scheme, t, cfg.options_for(t.n), &log);
  } catch (const std::exception& ex) {
    rep.count(anchor::kEncode, false);
    rep.fail(anchor::kEncode, "threw", "0", where + ":" + ex.what());
    return rep;
  }
  rep.count(anchor::kEncode, true);
  for (auto& [k, c] : log.counts()) {
    auto& d = rep.counts[k];
    d.total += c.total;
    d.failed += c.failed;
    d.warned += c.warned;
  }
  for (auto& r : log.records()) {
    if (r.pass) continue;
    if (r.advisory) {
      ++rep.warnings;
    } else {
      rep.lines.push_back(r.line() + ":" + where);
      ++rep.failures;
    }
  }

  auto h = decompose(t);
  std::string why;
  bool canon = is_canonical(t, h, e.ports, &why);
  rep.count(anchor::kCanonical, canon);
  if (!canon) rep.fail(anchor::kCanonical, "violation", "0", where + ":" + why);

  auto dup = duplicate_start(e.starts);
  rep.count(anchor::kUniqueStarts, !dup);
  if (dup) rep.fail(anchor::kUniqueStarts, std::to_string(dup->first), std::to_string(dup->second), where);

  VerifyOptions vo;
  vo.threads = 1;  // items already run concurrently
  auto vr = verify_encoding(t, e, vo);
  rep.queries += vr.queries;
  rep.count(anchor::kOracle, vr.ok());
  if (!vr.ok()) rep.fail(anchor::kOracle, std::to_string(vr.mismatches), "0", where + ":" + vr.describe(cfg.scheme));
  return rep;
}

inline ConformanceReport run_conformance(const SchemeConfig& cfg, const std::vector<CorpusTree>& corpus, unsigned threads = 0) {
  std::vector<ConformanceReport> parts(corpus.size());
  parallel_for(corpus.size(), [&](std::size_t i) { parts[i] = check_tree(cfg, corpus[i]); }, threads);
  ConformanceReport rep;
  for (auto& p : parts) rep.merge(p);
  return rep;
}

}  // namespace treelabel
