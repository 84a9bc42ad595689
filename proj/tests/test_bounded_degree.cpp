#include <gtest/gtest.h>

#include "corpus_util.hpp"
#include "treelabel/bounded_degree.hpp"

using namespace treelabel;

TEST(Bd, EntryWidth) {
  EXPECT_EQ(bd_entry_width(1, 10), 5u);  // 11 + 11 = 22
  EXPECT_GE(bd_entry_width(1, 0), 1u);
}

TEST(Bd, SpansArePowerValues) {
  auto t = gen_tree("random_attachment", 300, 2);
  auto h = decompose(t);
  auto e = encode_bd(t, h, 2);
  for (Node u = 0; u < t.n; ++u)
    for (std::size_t j = 1; j < h.ordered[u].size(); ++j) EXPECT_EQ(e.labels[u].rt[j - 1], e.labels[h.ordered[u][j]].t);
}

TEST(Bd, ExhaustiveAgainstOracle) {
  for (const auto& [name, t] : testutil::small_corpus()) {
    auto h = decompose(t);
    auto ports = canonical_ports(t, h);
    auto oracle = oracle_table(t, ports);
    unsigned logn = std::max(1u, ceil_log2(static_cast<std::uint64_t>(t.n)));
    for (unsigned b : {1u, 2u, 8u, logn}) {
      auto e = encode_bd(t, h, b);
      unsigned width = bd_entry_width(b, e.params.N);
      std::vector<BdLabel> dec;
      for (auto& l : e.labels) dec.push_back(BdLabel::unpack(l.pack(width), width));
      for (Node u = 0; u < t.n; ++u)
        for (Node w = 0; w < t.n; ++w)
          if (u != w) { ASSERT_EQ(route_bd(dec[u], dec[w], b), static_cast<int>(oracle[std::size_t(u) * t.n + w])) << name << " b=" << b << " u=" << u << " w=" << w; }
    }
  }
}
