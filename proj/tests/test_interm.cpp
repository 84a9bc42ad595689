#include <gtest/gtest.h>

#include "corpus_util.hpp"
#include "treelabel/interm.hpp"

using namespace treelabel;

namespace {

void check_exhaustive(const IntermEncoding& e, const Tree& t, const std::string& name) {
  auto ports = canonical_ports(t, decompose(t));
  auto oracle = oracle_table(t, ports);
  std::vector<IntermLabel> dec;
  for (auto& l : e.labels) dec.push_back(IntermLabel::unpack(l.pack(), e.params));
  for (Node u = 0; u < t.n; ++u)
    for (Node w = 0; w < t.n; ++w) {
      if (u == w) continue;
      ASSERT_EQ(route_interm(dec[u], dec[w], e.params), static_cast<int>(oracle[std::size_t(u) * t.n + w])) << name << " u=" << u << " w=" << w;
    }
}

}  // namespace

TEST(Interm, DefaultB) {
  EXPECT_EQ(interm_default_b(5), 6u);
  EXPECT_EQ(interm_default_b(64), 6u);
  EXPECT_EQ(interm_default_b(1u << 12), 19u);  // sqrt(4096/12) = 18.5
}

TEST(Interm, SingleNode) {
  auto t = gen_tree("path", 1);
  auto e = encode_interm(t, decompose(t));
  EXPECT_EQ(e.labels[0].start, 0);
}

TEST(Interm, ExhaustiveWithLemmas) {
  for (const auto& [name, t] : testutil::small_corpus()) {
    auto h = decompose(t);
    for (unsigned b : {0u, 6u, 9u}) {
      AssertionLog log;
      auto e = encode_interm(t, h, b, &log);
      for (auto& r : log.records()) ADD_FAILURE() << name << " " << r.line();
      check_exhaustive(e, t, name);
    }
  }
}

TEST(Local, BothVariantsRoute) {
  for (const auto& [name, t] : testutil::small_corpus(40)) {
    auto h = decompose(t);
    for (auto v : {LocalVariant::V1, LocalVariant::V2}) {
      auto e = encode_local(t, h, v);
      EXPECT_GE(e.params.b, 6u);
      check_exhaustive(e, t, name);
      for (auto& l : e.labels) EXPECT_EQ(bits_value(local_label(l)), l.start);
    }
  }
}

TEST(Depth, RoutesWithUnitB) {
  for (const auto& [name, t] : testutil::small_corpus(40)) {
    auto e = encode_depth(t, decompose(t));
    EXPECT_EQ(e.params.b, 1u);
    check_exhaustive(e, t, name);
  }
}
