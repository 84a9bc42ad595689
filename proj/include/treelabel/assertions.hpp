#pragma once

#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "treelabel/bigint.hpp"

namespace treelabel {

// Anchors name the statement being checked; one token each so report lines stay parsable.
namespace anchor {
inline constexpr const char* kAncestryRootSpan = "ancestry.root-span";
inline constexpr const char* kPrelimClaim = "prelim.head-span-claim";
inline constexpr const char* kHarmonicFit = "prelim.harmonic-fit";
inline constexpr const char* kSpanLeSl = "lemma.span-le-sl";              // head span fits its segment length
inline constexpr const char* kGuaranteedR = "lemma.guaranteed-property";  // accumulated r before sl rounding
inline constexpr const char* kRootSpan = "lemma.root-span";               // root span fits the global ID range
inline constexpr const char* kClassBoundary = "lemma.class-boundary";     // class boundary vs. the member's own segment
inline constexpr const char* kRtBudget = "claim.rt-le-loglw";             // routing table fits the freed low bits
inline constexpr const char* kTzBudget = "claim.tz-ge-loglw";
inline constexpr const char* kMonotone2z = "prop.monotone-2z";            // monotone code length
inline constexpr const char* kCtBudget = "ct.dict-tuples-le-loglw";
inline constexpr const char* kCtKeyOrder = "ct.key-order";
inline constexpr const char* kDepthLength = "depth.label-length";
}  // namespace anchor

struct AssertionRecord {
  std::string anchor;
  std::string where;
  std::string lhs;
  std::string rhs;
  bool pass = true;
  bool advisory = false;

  std::string status() const { return pass ? "PASS" : (advisory ? "WARN" : "FAIL"); }
  // "ANCHOR status lhs rhs"
  std::string line() const { return anchor + " " + status() + " " + lhs + " " + rhs + (where.empty() ? "" : " @" + where); }
};

// Collects lemma checks during an encode. A null log disables checking.
class AssertionLog {
 public:
  explicit AssertionLog(bool keep_passes = false) : keep_passes_(keep_passes) {}

  // records lhs <= rhs
  template <class A, class B>
  bool check_le(const char* anchor, const std::string& where, const A& lhs, const B& rhs, bool advisory = false) {
    bool ok = lhs <= rhs;
    record(anchor, where, to_str(lhs), to_str(rhs), ok, advisory);
    return ok;
  }

  template <class A, class B>
  bool check_ge(const char* anchor, const std::string& where, const A& lhs, const B& rhs, bool advisory = false) {
    bool ok = lhs >= rhs;
    record(anchor, where, to_str(lhs), to_str(rhs), ok, advisory);
    return ok;
  }

  void record(const char* anchor, const std::string& where, std::string lhs, std::string rhs, bool pass, bool advisory) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& c = counts_[anchor];
    ++c.total;
    if (!pass) (advisory ? c.warned : c.failed)++;
    if (!pass || keep_passes_) records_.push_back({anchor, where, std::move(lhs), std::move(rhs), pass, advisory});
  }

  struct Count {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::size_t warned = 0;
  };

  const std::map<std::string, Count>& counts() const { return counts_; }
  const std::vector<AssertionRecord>& records() const { return records_; }

  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& [k, c] : counts_) f += c.failed;
    return f;
  }
  std::size_t total(const std::string& anchor) const {
    auto it = counts_.find(anchor);
    return it == counts_.end() ? 0 : it->second.total;
  }
  std::size_t failed(const std::string& anchor) const {
    auto it = counts_.find(anchor);
    return it == counts_.end() ? 0 : it->second.failed;
  }

  void merge(const AssertionLog& o) {
    std::lock_guard<std::mutex> lock(mu_);
    for (const auto& [k, c] : o.counts_) {
      auto& d = counts_[k];
      d.total += c.total;
      d.failed += c.failed;
      d.warned += c.warned;
    }
    records_.insert(records_.end(), o.records_.begin(), o.records_.end());
  }

  void write(std::ostream& out) const {
    for (const auto& r : records_) out << r.line() << '\n';
  }

 private:
  template <class T>
  static std::string to_str(const T& v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

  bool keep_passes_;
  std::mutex mu_;
  std::map<std::string, Count> counts_;
  std::vector<AssertionRecord> records_;
};

}  // namespace treelabel
