#include <gtest/gtest.h>

#include "corpus_util.hpp"
#include "treelabel/consttime.hpp"

using namespace treelabel;

TEST(Ct, NodeB) {
  EXPECT_EQ(ct_node_b(16), 6u);
  EXPECT_EQ(ct_node_b(~std::uint64_t(0)), 6u);
  EXPECT_EQ(ct_mbits(6), 5u);
}

TEST(Ct, SingleNode) {
  auto t = gen_tree("path", 1);
  auto e = encode_ct(t, decompose(t));
  auto l = CtLabel::unpack(e.labels[0].pack(), e.params);
  EXPECT_FALSE(l.has_children);
  EXPECT_TRUE(l.keys.empty());
}

TEST(Ct, ExhaustiveAndOpBudget) {
  const std::uint64_t budget = ct_ops_budget(6);
  std::uint64_t worst = 0;
  for (const auto& [name, t] : testutil::small_corpus()) {
    auto h = decompose(t);
    AssertionLog log;
    auto e = encode_ct(t, h, &log);
    for (auto& r : log.records())
      if (!r.advisory) ADD_FAILURE() << name << " " << r.line();
    auto oracle = oracle_table(t, canonical_ports(t, h));
    std::vector<CtLabel> dec;
    for (auto& l : e.labels) dec.push_back(CtLabel::unpack(l.pack(), e.params));
    for (Node u = 0; u < t.n; ++u)
      for (Node w = 0; w < t.n; ++w) {
        if (u == w) continue;
        OpCounter ops;
        ASSERT_EQ(route_ct(dec[u], dec[w], &ops), static_cast<int>(oracle[std::size_t(u) * t.n + w])) << name << " u=" << u << " w=" << w;
        worst = std::max(worst, ops.ops);
      }
  }
  EXPECT_LE(worst, budget);
}
