#pragma once

#include <string>
#include <vector>

#include "treelabel/tree.hpp"

namespace testutil {

struct NamedTree {
  std::string name;
  treelabel::Tree tree;
};

// small mixed corpus used by the per-scheme tests
inline std::vector<NamedTree> small_corpus(treelabel::Node max_n = 70) {
  using namespace treelabel;
  std::vector<NamedTree> out;
  for (Node n = 1; n <= max_n; n += (n < 20 ? 1 : 7)) {
    for (std::string kind : {"path", "star", "caterpillar", "random_attachment"}) out.push_back({kind + ":" + std::to_string(n), gen_tree(kind, n, 3)});
    if (n >= 5) out.push_back({"lower_bound:2:" + std::to_string(n), gen_tree("lower_bound:2", n)});
  }
  for (Node n : {1, 3, 7, 15, 31, 63}) out.push_back({"complete_binary:" + std::to_string(n), gen_tree("complete_binary", n)});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) out.push_back({"random:200:" + std::to_string(seed), gen_tree("random_attachment", 200, seed)});
  return out;
}

}  // namespace testutil
