#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace treelabel {

// Decoder parameters shared by every label of one encoding.
// Written as the header line "SCHEME <name> N <N> B <b> C <c>".
struct Params {
  std::string scheme;
  unsigned N = 0;  // ceil(log2 n) of the tree the labels were built on
  unsigned b = 1;
  unsigned c = 0;

  std::string header() const {
    return "SCHEME " + scheme + " N " + std::to_string(N) + " B " + std::to_string(b) + " C " + std::to_string(c);
  }

  static Params parse_header(const std::string& line) {
    std::istringstream in(line);
    std::string k1, k2, k3, k4;
    Params p;
    if (!(in >> k1 >> p.scheme >> k2 >> p.N >> k3 >> p.b >> k4 >> p.c) || k1 != "SCHEME" || k2 != "N" || k3 != "B" || k4 != "C")
      throw std::invalid_argument("bad labels header: " + line);
    return p;
  }

  bool operator==(const Params&) const = default;
};

}  // namespace treelabel
