#include <gtest/gtest.h>

#include "corpus_util.hpp"
#include "treelabel/ancestry.hpp"

using namespace treelabel;

TEST(Ancestry, SingleNode) {
  auto t = gen_tree("path", 1);
  auto e = encode_ancestry(t, decompose(t), 3);
  EXPECT_EQ(e.labels[0].start, 0);
  EXPECT_EQ(pow2_frac_floor(e.labels[0].t, 3), 1);
}

TEST(Ancestry, Path3) {
  auto t = gen_tree("path", 3);
  auto e = encode_ancestry(t, decompose(t), 1);
  std::vector<int> starts, bounds;
  for (auto& l : e.labels) {
    starts.push_back(static_cast<int>(to_u64(l.start)));
    bounds.push_back(static_cast<int>(to_u64(pow2_frac_floor(l.t, 1))));
  }
  EXPECT_EQ(starts, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(bounds, (std::vector<int>{4, 2, 1}));
  EXPECT_TRUE(ancestry_is_ancestor(e.labels[0], e.labels[2], 1));
  EXPECT_FALSE(ancestry_is_ancestor(e.labels[2], e.labels[0], 1));
}

TEST(Ancestry, PackRoundTrip) {
  AncestryLabel l{BigUint(12345), 77};
  auto u = AncestryLabel::unpack(l.pack());
  EXPECT_EQ(u.start, l.start);
  EXPECT_EQ(u.t, l.t);
}

TEST(Ancestry, ExhaustiveAgainstOracle) {
  for (const auto& [name, t] : testutil::small_corpus()) {
    auto h = decompose(t);
    unsigned logn = std::max(1u, ceil_log2(static_cast<std::uint64_t>(t.n)));
    for (unsigned b : {1u, 2u, 8u, logn}) {
      AssertionLog log;
      auto e = encode_ancestry(t, h, b, &log);
      ASSERT_EQ(log.failures(), 0u) << name;
      for (Node u = 0; u < t.n; ++u) {
        auto lu = AncestryLabel::unpack(e.labels[u].pack());
        for (Node w = 0; w < t.n; ++w)
          if (u != w) { ASSERT_EQ(ancestry_is_ancestor(lu, e.labels[w], b), oracle_is_ancestor(t, u, w)) << name << " b=" << b << " u=" << u << " w=" << w; }
      }
    }
  }
}
