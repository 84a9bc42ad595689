#include <gtest/gtest.h>

#include <chrono>
#include <iostream>
#include <set>

#include "treelabel/conformance.hpp"

using namespace treelabel;

namespace {

const std::vector<CorpusTree>& corpus() {
  static const auto c = conformance_corpus();
  return c;
}

}  // namespace

TEST(Corpus, Composition) {
  std::set<std::string> kinds;
  std::set<Node> sizes;
  for (auto& c : corpus()) {
    kinds.insert(c.kind);
    sizes.insert(c.tree.n);
  }
  EXPECT_EQ(kinds, (std::set<std::string>{"path", "star", "caterpillar", "complete_binary", "random_attachment", "lower_bound:1", "lower_bound:2", "lower_bound:8"}));
  for (Node n = 1; n <= 64; ++n) EXPECT_TRUE(sizes.count(n)) << n;
  for (Node n : {128, 256, 512}) EXPECT_TRUE(sizes.count(n)) << n;
  EXPECT_FALSE(sizes.count(65));
  for (auto& c : corpus())
    if (c.kind.rfind("lower_bound", 0) == 0) {
      EXPECT_LE(c.tree.max_degree(), 2u) << c.name;
    }
}

// The Euler-tour oracle used by verify must agree with the walk-up table.
TEST(Oracle, EulerMatchesTable) {
  for (auto& c : corpus()) {
    if (c.tree.n > 128) continue;
    const Tree& t = c.tree;
    auto p = canonical_ports(t, decompose(t));
    auto table = oracle_table(t, p);
    EulerOracle eo(t, p);
    for (Node u = 0; u < t.n; ++u)
      for (Node w = 0; w < t.n; ++w) {
        if (u == w) continue;
        ASSERT_EQ(eo.first_hop(u, w), static_cast<int>(table[std::size_t(u) * t.n + w])) << c.name << " " << u << " " << w;
        ASSERT_EQ(eo.is_ancestor(u, w), oracle_is_ancestor(t, u, w)) << c.name;
      }
  }
}

TEST(Verify, ModeParsing) {
  EXPECT_TRUE(parse_verify_mode("exhaustive").exhaustive);
  auto s = parse_verify_mode("sample:500", 3);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_EQ(s.samples, 500u);
  EXPECT_EQ(s.seed, 3u);
  EXPECT_THROW(parse_verify_mode("sample:"), std::invalid_argument);
  EXPECT_THROW(parse_verify_mode("sample:0"), std::invalid_argument);
  EXPECT_THROW(parse_verify_mode("sample:x"), std::invalid_argument);
  EXPECT_THROW(parse_verify_mode("all"), std::invalid_argument);
}

// A corrupted label must surface as a mismatch naming the pair.
TEST(Verify, FaultInjection) {
  Tree t = gen_tree("random_attachment", 100, 2);
  for (std::string s : {"final", "interm", "ancestry", "ct"}) {
    auto e = encode_scheme(s, t);
    ASSERT_TRUE(verify_encoding(t, e).ok()) << s;
    // swap two internal nodes' labels
    Node a = 0, b = t.children[0].front();
    std::swap(e.labels[a], e.labels[b]);
    auto rep = verify_encoding(t, e);
    EXPECT_FALSE(rep.ok()) << s;
    ASSERT_TRUE(rep.first.has_value() || !rep.error.empty()) << s;
    if (rep.first) {
      EXPECT_TRUE(rep.first->u == a || rep.first->u == b || rep.first->w == a || rep.first->w == b) << s;
    }
    EXPECT_NE(rep.describe(s).find("FAIL"), std::string::npos);
  }
}

TEST(Verify, SampleAgreesWithExhaustive) {
  Tree t = gen_tree("caterpillar", 300, 1);
  auto e = encode_scheme("ct", t);
  auto ex = verify_encoding(t, e);
  EXPECT_TRUE(ex.ok());
  EXPECT_EQ(ex.queries, 300u * 299u);
  auto sm = verify_encoding(t, e, parse_verify_mode("sample:5000", 9));
  EXPECT_TRUE(sm.ok());
  EXPECT_EQ(sm.queries, 5000u);
}

TEST(Verify, DuplicateStart) {
  std::vector<BigUint> s{BigUint(3), BigUint(1), BigUint(7)};
  EXPECT_FALSE(duplicate_start(s).has_value());
  s.push_back(BigUint(1));
  auto d = duplicate_start(s);
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->first, 1);
  EXPECT_EQ(d->second, 3);
}

TEST(Report, MergeIsAssociative) {
  ConformanceReport a, b, c;
  a.count("x", true);
  b.count("x", false);
  b.fail("x", "1", "0", "b");
  c.count("y", true);
  ConformanceReport ab = a, bc = b;
  ab.merge(b);
  ab.merge(c);
  bc.merge(c);
  ConformanceReport a_bc = a;
  a_bc.merge(bc);
  EXPECT_EQ(ab.lines, a_bc.lines);
  EXPECT_EQ(ab.failures, a_bc.failures);
  EXPECT_EQ(ab.counts["x"].total, a_bc.counts["x"].total);
  EXPECT_EQ(ab.counts["x"].failed, 1u);
}

class ConformanceSuite : public ::testing::TestWithParam<SchemeConfig> {};

TEST_P(ConformanceSuite, FullCorpus) {
  const SchemeConfig& cfg = GetParam();
  auto t0 = std::chrono::steady_clock::now();
  auto rep = run_conformance(cfg, corpus());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << cfg.name() << ": trees=" << rep.trees << " queries=" << rep.queries << " failures=" << rep.failures << " warnings=" << rep.warnings << " (" << secs
            << " s)\n";
  rep.write_summary(std::cout);
  for (std::size_t i = 0; i < rep.lines.size() && i < 20; ++i) std::cout << rep.lines[i] << '\n';
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.trees, corpus().size());
  EXPECT_EQ(rep.counts[anchor::kOracle].failed, 0u);
  // only the documented advisory anchors may warn
  for (auto& [k, c] : rep.counts)
    if (c.warned) {
      EXPECT_TRUE(k == anchor::kRtBudget || k == anchor::kCtBudget || k == anchor::kDepthLength) << k;
    }
  // lemma checks actually ran for the segment schemes
  if (cfg.scheme == "interm" || cfg.scheme == "final" || cfg.scheme.rfind("local", 0) == 0) {
    EXPECT_GT(rep.counts[anchor::kSpanLeSl].total, 0u);
    EXPECT_GT(rep.counts[anchor::kClassBoundary].total, 0u);
    EXPECT_GT(rep.counts[anchor::kMonotone2z].total, 0u);
  }
  if (cfg.scheme == "final") {
    EXPECT_GT(rep.counts[anchor::kTzBudget].total, 0u);
    EXPECT_GT(rep.counts[anchor::kRootSpan].total, 0u);
  }
}

INSTANTIATE_TEST_SUITE_P(Shipped, ConformanceSuite, ::testing::ValuesIn(shipped_configs()), [](const auto& info) {
  std::string s;
  for (char ch : info.param.name()) s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return s;
});
