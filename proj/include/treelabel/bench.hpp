#pragma once

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treelabel/verify.hpp"

namespace treelabel {

inline constexpr const char* kBenchSchema = "treelabel-bench/1";

struct BenchRow {
  std::string scheme;
  Node n = 0;
  std::string kind;
  std::uint64_t seed = 0;
  std::size_t max_label_bits = 0;
  double mean_label_bits = 0;
  double encode_ms = 0;
  std::string verify = "skipped";  // pass, fail, skipped
  unsigned log_n = 0;
  std::string ratio_basis;
  double ratio = 0;
};

// Second-order term normalised by the scheme's claimed growth:
// ancestry loglog, interm sqrt(log * loglog), final loglog^2, ct loglog^3.
inline std::string ratio_basis(const std::string& scheme) {
  if (scheme == "ancestry") return "loglog";
  if (scheme == "interm" || scheme.rfind("local:", 0) == 0) return "sqrt(log*loglog)";
  if (scheme == "ct") return "loglog^3";
  return "loglog^2";
}

inline double second_order_ratio(const std::string& scheme, std::size_t max_bits, Node n) {
  const double lg = std::max(1u, ceil_log2(static_cast<std::uint64_t>(n)));
  const double llg = std::max(1u, ceil_log2(static_cast<std::uint64_t>(lg)));
  const double excess = static_cast<double>(max_bits) - lg;
  const std::string basis = ratio_basis(scheme);
  if (basis == "loglog") return excess / llg;
  if (basis == "sqrt(log*loglog)") return excess / std::sqrt(lg * llg);
  if (basis == "loglog^3") return excess / (llg * llg * llg);
  return excess / (llg * llg);
}

// verify_mode: "none", "exhaustive" or "sample:k"
inline BenchRow bench_one(const std::string& scheme, const std::string& kind, Node n, std::uint64_t seed, const SchemeOptions& opt = {},
                          const std::string& verify_mode = "none") {
  BenchRow row;
  row.scheme = scheme;
  row.n = n;
  row.kind = kind;
  row.seed = seed;
  Tree t = gen_tree(kind, n, seed);
  auto t0 = std::chrono::steady_clock::now();
  Encoding e = encode_scheme(scheme, t, opt);
  row.encode_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  double sum = 0;
  for (auto& l : e.labels) {
    row.max_label_bits = std::max(row.max_label_bits, l.size());
    sum += static_cast<double>(l.size());
  }
  row.mean_label_bits = sum / static_cast<double>(t.n);
  row.log_n = ceil_log2(static_cast<std::uint64_t>(n));
  row.ratio_basis = ratio_basis(scheme);
  row.ratio = second_order_ratio(scheme, row.max_label_bits, n);
  if (verify_mode != "none") {
    VerifyOptions vo = parse_verify_mode(verify_mode, seed);
    vo.threads = 1;
    row.verify = verify_encoding(t, e, vo).ok() ? "pass" : "fail";
  }
  return row;
}

inline void write_bench_header(std::ostream& os) {
  os << "schema,scheme,n,kind,seed,max_label_bits,mean_label_bits,encode_ms,verify,log_n,ratio_basis,second_order_ratio\n";
}

inline void write_bench_row(std::ostream& os, const BenchRow& r) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(3);
  s << kBenchSchema << ',' << r.scheme << ',' << r.n << ',' << r.kind << ',' << r.seed << ',' << r.max_label_bits << ',' << r.mean_label_bits << ',' << r.encode_ms
    << ',' << r.verify << ',' << r.log_n << ',' << r.ratio_basis << ',' << r.ratio << '\n';
  os << s.str();
}

}  // namespace treelabel
