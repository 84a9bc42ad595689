#include <gtest/gtest.h>

#include "treelabel/tree.hpp"

using namespace treelabel;

TEST(Parse, Examples) {
  auto t1 = parse_tree("1\n");
  EXPECT_EQ(t1.n, 1);
  auto star = parse_tree("3\n0 0");
  EXPECT_EQ(star.children[0], (std::vector<Node>{1, 2}));
  auto path = parse_tree("5\n0 1 2 3");
  EXPECT_EQ(path.parent[4], 3);
  EXPECT_EQ(tree_to_string(path), "5\n0 1 2 3\n");
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_tree(""), std::invalid_argument);
  EXPECT_THROW(parse_tree("x"), std::invalid_argument);
  EXPECT_THROW(parse_tree("3\n0"), std::invalid_argument);
  EXPECT_THROW(parse_tree("3\n0 7"), std::invalid_argument);
  EXPECT_THROW(parse_tree("3\n0 2"), std::invalid_argument);  // parent not smaller
  EXPECT_THROW(parse_tree("3\n0 0 0"), std::invalid_argument);
}

TEST(Decompose, Examples) {
  auto path = gen_tree("path", 5);
  auto h = decompose(path);
  EXPECT_EQ(h.level[0], 2);
  EXPECT_EQ(h.heads, (std::vector<Node>{0}));
  for (Node v = 0; v < 5; ++v) EXPECT_EQ(h.path_head[v], 0);

  auto star = gen_tree("star", 4);
  auto hs = decompose(star);
  EXPECT_EQ(hs.heavy_child[0], 1);
  EXPECT_EQ(hs.light_weight[0], 2);

  auto cb = gen_tree("complete_binary", 7);
  auto hc = decompose(cb);
  EXPECT_EQ(hc.level[0], 2);
  // the heavy path 0-1-3 leaves 6 two light edges deep
  EXPECT_EQ(hc.light_depth[6], 2);
  EXPECT_EQ(hc.light_depth[3], 0);
}

TEST(Ports, Examples) {
  auto star = gen_tree("star", 4);
  auto h = decompose(star);
  auto p = canonical_ports(star, h);
  EXPECT_EQ(p.port(1), 1);
  EXPECT_EQ(p.port(2), 2);
  EXPECT_EQ(p.port(3), 3);
  EXPECT_TRUE(is_canonical(star, h, p));

  // child sizes (2,5,2) under root -> ports (2,1,3)
  auto t = Tree::from_parents({kNone, 0, 0, 0, 1, 2, 2, 2, 2, 3});
  auto ht = decompose(t);
  auto pt = canonical_ports(t, ht);
  EXPECT_EQ(pt.port(2), 1);
  EXPECT_EQ(pt.port(1), 2);
  EXPECT_EQ(pt.port(3), 3);
  pt.port_of_child[1] = 1;
  pt.port_of_child[2] = 2;
  EXPECT_FALSE(is_canonical(t, ht, pt));
}

TEST(Oracle, Examples) {
  auto path = gen_tree("path", 3);
  auto p = canonical_ports(path, decompose(path));
  EXPECT_EQ(oracle_first_hop(path, p, 2, 0), 0);
  EXPECT_EQ(oracle_first_hop(path, p, 0, 2), 1);
  auto star = gen_tree("star", 4);
  auto ps = canonical_ports(star, decompose(star));
  EXPECT_EQ(oracle_first_hop(star, ps, 0, 3), 3);
  EXPECT_THROW(oracle_first_hop(star, ps, 1, 1), std::invalid_argument);
  auto tab = oracle_table(star, ps);
  EXPECT_EQ(tab[0 * 4 + 3], 3u);
  EXPECT_EQ(tab[3 * 4 + 0], 0u);
}

TEST(Generators, Invariants) {
  std::vector<std::string> kinds = {"path", "star", "caterpillar", "random_attachment", "lower_bound:1", "lower_bound:2", "lower_bound:8"};
  for (const auto& k : kinds) {
    for (Node n : {1, 2, 5, 31, 64, 257}) {
      auto spec = GenSpec::parse(k);
      if (spec.kind == GenKind::LowerBound && n < 3 * spec.param - 1) {
        EXPECT_THROW(gen_tree(spec, n), std::invalid_argument);
        continue;
      }
      auto t = gen_tree(spec, n, 7);
      ASSERT_EQ(t.n, n);
      auto h = decompose(t);
      int maxld = static_cast<int>(floor_log2(static_cast<std::uint64_t>(n)));
      for (Node u = 0; u < n; ++u) {
        std::int64_t s = 1;
        for (Node c : t.children[u]) s += h.subtree_size[c];
        ASSERT_EQ(s, h.subtree_size[u]);
        ASSERT_LE(h.light_depth[u], maxld);
        ASSERT_GE(h.subtree_size[u], std::int64_t(1) << h.level[u]);
        ASSERT_LT(h.subtree_size[u], std::int64_t(2) << h.level[u]);
      }
      if (spec.kind == GenKind::LowerBound) {
        ASSERT_LE(t.max_degree(), 2u) << k << " " << n;
      }
      auto p = canonical_ports(t, h);
      ASSERT_TRUE(is_canonical(t, h, p));
    }
  }
}

TEST(Generators, Determinism) {
  EXPECT_EQ(tree_to_string(gen_tree("path", 4)), "4\n0 1 2\n");
  auto a = gen_tree("random_attachment", 100, 7);
  auto b = gen_tree("random_attachment", 100, 7);
  EXPECT_EQ(a.parent, b.parent);
  auto c = gen_tree("random_attachment", 100, 8);
  EXPECT_NE(a.parent, c.parent);
  EXPECT_THROW(gen_tree("complete_binary", 6), std::invalid_argument);
  EXPECT_THROW(GenSpec::parse("blob"), std::invalid_argument);
}

TEST(Generators, LowerBoundShape) {
  auto t = gen_tree("lower_bound:3", 64);
  auto h = decompose(t);
  EXPECT_LE(t.max_degree(), 2u);
  // three paths under a heap of two internal nodes
  std::int64_t a = h.subtree_size[2], b = h.subtree_size[3], c = h.subtree_size[4];
  EXPECT_LE(std::max({a, b, c}) - std::min({a, b, c}), 3);
}

TEST(Oracle, ZeroIffNotInSubtree) {
  auto t = gen_tree("random_attachment", 60, 3);
  auto p = canonical_ports(t, decompose(t));
  for (Node u = 0; u < t.n; ++u)
    for (Node w = 0; w < t.n; ++w)
      if (u != w) {
        EXPECT_EQ(oracle_first_hop(t, p, u, w) == 0, !oracle_is_ancestor(t, u, w));
      }
}
