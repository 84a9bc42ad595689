// treelabel: gen, encode, route, verify, bench
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <mutex>

#include "treelabel/bench.hpp"

using namespace treelabel;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open tree file: " + path);
  return parse_tree(in);
}

// Writes to the -o path, or stdout when empty.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write: " + path);
  fn(out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// accepts plain integers or 2^k
std::uint64_t parse_size(const std::string& s) {
  try {
    std::size_t used = 0;
    if (s.rfind("2^", 0) == 0) {
      unsigned long k = std::stoul(s.substr(2), &used);
      if (used + 2 == s.size() && k < 31) return std::uint64_t(1) << k;
    } else {
      unsigned long long v = std::stoull(s, &used);
      if (used == s.size()) return v;
    }
  } catch (const std::exception&) {
  }
  throw UsageError("bad size: " + s);
}

SchemeOptions scheme_options(const std::string& scheme, unsigned b, unsigned c) {
  if (!is_scheme(scheme)) throw UsageError("unknown scheme: " + scheme);
  if (c && scheme != "prelim") throw UsageError("--c applies to prelim only");
  if (b && (scheme == "final" || scheme == "ct" || scheme == "depth" || scheme.rfind("local:", 0) == 0))
    throw UsageError("--b is fixed for scheme " + scheme);
  return {b, c};
}

PortAssignment ports_from_file(const Tree& t, const LabelsFile& f) {
  PortAssignment p;
  p.port_of_child.assign(t.n, 0);
  p.child_at.assign(t.n, {});
  if (f.ports.size() != static_cast<std::size_t>(t.n) - 1) throw UsageError("labels file: PORTS section does not match the tree");
  for (auto& [u, v, port] : f.ports) {
    if (v <= 0 || v >= t.n || t.parent[v] != u || port < 1 || p.port_of_child[v] != 0) throw UsageError("labels file: PORTS entry does not match the tree");
    p.port_of_child[v] = static_cast<int>(port);
  }
  return p;
}

int cmd_gen(const std::string& kind, std::uint64_t n, std::uint64_t seed, const std::string& out) {
  Tree t;
  try {
    t = gen_tree(kind, static_cast<Node>(n), seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(out, [&](std::ostream& os) { write_tree(os, t); });
  return kOk;
}

int cmd_encode(const std::string& scheme, const std::string& tree_path, unsigned b, unsigned c, const std::string& out) {
  auto opt = scheme_options(scheme, b, c);
  Tree t = load_tree(tree_path);
  Encoding e = encode_scheme(scheme, t, opt);
  emit(out, [&](std::ostream& os) { write_labels(os, e, t); });
  return kOk;
}

int cmd_route(const std::string& labels_path, long long u, long long w) {
  std::ifstream in(labels_path);
  if (!in) throw UsageError("cannot open labels file: " + labels_path);
  LabelsFile f = read_labels(in);
  const long long n = static_cast<long long>(f.labels.size());
  if (u < 0 || w < 0 || u >= n || w >= n) throw UsageError("node id out of range");
  if (u == w) throw UsageError("route: u and w must differ");
  auto r = make_router(f.params, f.labels, f.locals);
  std::cout << r->route(static_cast<Node>(u), static_cast<Node>(w)) << '\n';
  return kOk;
}

int cmd_verify(const std::string& scheme, const std::string& tree_path, unsigned b, unsigned c, const std::string& mode, std::uint64_t seed,
               const std::string& labels_path) {
  VerifyOptions vo;
  try {
    vo = parse_verify_mode(mode, seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Tree t = load_tree(tree_path);
  bool ok = true;
  VerifyReport rep;
  std::string name = scheme;
  if (!labels_path.empty()) {
    std::ifstream in(labels_path);
    if (!in) throw UsageError("cannot open labels file: " + labels_path);
    LabelsFile f = read_labels(in);
    if (!scheme.empty() && scheme != f.params.scheme) throw UsageError("labels file holds scheme " + f.params.scheme);
    name = f.params.scheme;
    PortAssignment ports = ports_from_file(t, f);
    std::string why;
    if (!f.params.scheme.empty() && f.params.scheme != "ancestry" && !is_canonical(t, decompose(t), ports, &why)) {
      std::cout << "FAIL canonical " << why << '\n';
      ok = false;
    }
    std::unique_ptr<Router> r;
    try {
      r = make_router(f.params, f.labels, f.locals);
    } catch (const std::exception& e) {
      // undecodable labels count as a verification failure
      std::cout << "FAIL " << name << " decode: " << e.what() << '\n';
      return kMismatch;
    }
    rep = verify_router(t, ports, *r, vo);
  } else {
    if (scheme.empty()) throw UsageError("verify needs --scheme or --labels");
    auto opt = scheme_options(scheme, b, c);
    Encoding e = encode_scheme(scheme, t, opt);
    std::string why;
    if (!is_canonical(t, decompose(t), e.ports, &why)) {
      std::cout << "FAIL canonical " << why << '\n';
      ok = false;
    }
    if (auto d = duplicate_start(e.starts)) {
      std::cout << "FAIL unique-starts " << d->first << ' ' << d->second << '\n';
      ok = false;
    }
    rep = verify_router(t, e.ports, *make_router(e), vo);
  }
  std::cout << rep.describe(name) << '\n';
  return ok && rep.ok() ? kOk : kMismatch;
}

int cmd_bench(const std::string& schemes, const std::string& sizes, const std::string& kinds, const std::string& seeds, unsigned b, unsigned c,
              const std::string& mode, const std::string& csv) {
  struct Item {
    std::string scheme, kind;
    Node n;
    std::uint64_t seed;
    SchemeOptions opt;
  };
  std::vector<Item> items;
  if (mode != "none") {
    try {
      parse_verify_mode(mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  for (auto& s : split(schemes)) {
    auto opt = scheme_options(s, b, c);
    for (auto& ns : split(sizes)) {
      const std::uint64_t n = parse_size(ns);
      if (n < 1 || n > (std::uint64_t(1) << 30)) throw UsageError("bad size: " + ns);
      for (auto& k : split(kinds)) {
        try {
          GenSpec::parse(k);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        for (auto& sd : split(seeds)) items.push_back({s, k, static_cast<Node>(n), parse_size(sd), opt});
      }
    }
  }
  if (items.empty()) throw UsageError("bench: empty work list");
  std::vector<BenchRow> rows(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    auto& it = items[i];
    rows[i] = bench_one(it.scheme, it.kind, it.n, it.seed, it.opt, mode);
  });
  bool ok = true;
  emit(csv, [&](std::ostream& os) {
    write_bench_header(os);
    for (auto& r : rows) {
      write_bench_row(os, r);
      ok = ok && r.verify != "fail";
    }
  });
  return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"treelabel: compact tree routing labels"};
  app.require_subcommand(1);

  std::string kind = "random_attachment", scheme, out, tree_path, labels_path, mode = "exhaustive", csv;
  std::uint64_t n = 0, seed = 1;
  unsigned b = 0, c = 0;
  long long u = -1, w = -1;

  auto* gen = app.add_subcommand("gen", "generate a tree");
  gen->add_option("kind,--kind", kind, "path, star, caterpillar, complete_binary, random_attachment, lower_bound:i")->required();
  gen->add_option("n,--n", n, "node count")->required();
  gen->add_option("--seed", seed, "seed for random generators");
  gen->add_option("-o", out, "output path (default stdout)");

  auto* enc = app.add_subcommand("encode", "label a tree");
  enc->add_option("--scheme", scheme)->required();
  enc->add_option("tree", tree_path, "tree file")->required();
  enc->add_option("--b", b, "scheme parameter b (0: default)");
  enc->add_option("--c", c, "prelim parameter c (0: default)");
  enc->add_option("-o", out, "output path (default stdout)");

  auto* route = app.add_subcommand("route", "decode one query from a labels file");
  route->add_option("labels", labels_path)->required();
  route->add_option("u", u)->required();
  route->add_option("w", w)->required();

  auto* verify = app.add_subcommand("verify", "check labels against the oracle");
  verify->add_option("--scheme", scheme);
  verify->add_option("tree", tree_path, "tree file")->required();
  verify->add_option("--labels", labels_path, "verify this labels file instead of encoding");
  verify->add_option("--b", b);
  verify->add_option("--c", c);
  verify->add_option("--mode", mode, "exhaustive or sample:k");
  verify->add_option("--seed", seed);

  std::string schemes = "final", sizes = "1024", kinds = "random_attachment", seeds = "1", bench_mode = "none";
  auto* bench = app.add_subcommand("bench", "label-length benchmark as CSV");
  bench->add_option("--scheme", schemes, "comma-separated schemes");
  bench->add_option("--n", sizes, "comma-separated sizes, 2^k allowed");
  bench->add_option("--kind", kinds, "comma-separated generator kinds");
  bench->add_option("--seed", seeds, "comma-separated seeds");
  bench->add_option("--b", b);
  bench->add_option("--c", c);
  bench->add_option("--mode", bench_mode, "none, exhaustive or sample:k");
  bench->add_option("--csv", csv, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(kind, n, seed, out);
    if (*enc) return cmd_encode(scheme, tree_path, b, c, out);
    if (*route) return cmd_route(labels_path, u, w);
    if (*verify) return cmd_verify(scheme, tree_path, b, c, mode, seed, labels_path);
    if (*bench) return cmd_bench(schemes, sizes, kinds, seeds, b, c, bench_mode, csv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    // malformed input files and parameters
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMismatch;
  }
  return kUsage;
}
