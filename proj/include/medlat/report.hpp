#pragma once

#include <chrono>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "medlat/lattice.hpp"
#include "medlat/preorder.hpp"
#include "medlat/verify.hpp"

namespace medlat {

using json = nlohmann::ordered_json;

struct Check {
  std::string claim;
  bool pass = true;
  std::string detail;
  json witness;  // null on pass unless the check reports a positive example
};

/// Outcome of one suite: named checks plus free-form notes.
class VerificationReport {
 public:
  explicit VerificationReport(std::string suite) : suite_(std::move(suite)), start_(std::chrono::steady_clock::now()) {}

  /// A failing check without a natural witness gets its detail as witness.
  void check(std::string claim, bool pass, std::string detail = {}, json witness = nullptr) {
    if (!pass && witness.is_null()) witness = detail.empty() ? json("failed") : json(detail);
    checks_.push_back({std::move(claim), pass, std::move(detail), std::move(witness)});
  }
  void note(std::string text) { notes_.push_back(std::move(text)); }

  /// Appends another report's checks and notes, prefixing claims.
  void absorb(const VerificationReport& other, const std::string& prefix = {}) {
    for (auto c : other.checks_) {
      if (!prefix.empty()) c.claim = prefix + "/" + c.claim;
      checks_.push_back(std::move(c));
    }
    for (const auto& n : other.notes_) notes_.push_back(prefix.empty() ? n : prefix + ": " + n);
  }

  void finish() {
    elapsed_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

  const std::string& suite() const noexcept { return suite_; }
  const std::vector<Check>& checks() const noexcept { return checks_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  double elapsed_ms() const noexcept { return elapsed_ms_; }

  bool passed() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t k = 0;
    for (const auto& c : checks_) k += !c.pass;
    return k;
  }

  json to_json(bool timing = true) const {
    json j;
    j["suite"] = suite_;
    j["passed"] = passed();
    json arr = json::array();
    for (const auto& c : checks_) {
      json e;
      e["claim"] = c.claim;
      e["pass"] = c.pass;
      if (!c.detail.empty()) e["detail"] = c.detail;
      e["witness"] = c.witness;
      arr.push_back(std::move(e));
    }
    j["checks"] = std::move(arr);
    if (!notes_.empty()) j["notes"] = notes_;
    if (timing) j["elapsed_ms"] = elapsed_ms_;
    return j;
  }

  std::string to_text(bool timing = true) const {
    std::ostringstream os;
    os << "== " << suite_ << ": " << (checks_.size() - failures()) << "/" << checks_.size() << " checks passed";
    if (timing) os << " (" << static_cast<long long>(elapsed_ms_) << " ms)";
    os << " ==\n";
    for (const auto& c : checks_) {
      os << (c.pass ? "[PASS] " : "[FAIL] ") << c.claim;
      if (!c.detail.empty()) os << ": " << c.detail;
      os << "\n";
      if (!c.pass) os << "       witness: " << c.witness.dump() << "\n";
    }
    for (const auto& n : notes_) os << "note: " << n << "\n";
    return os.str();
  }

 private:
  std::string suite_;
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
  std::chrono::steady_clock::time_point start_;
  double elapsed_ms_ = 0;
};

inline json names_json(const Lattice& l, std::span<const ElementId> b) {
  json a = json::array();
  for (ElementId e : b) a.push_back(l.name(e));
  return a;
}

inline json coalition_json(Coalition c) {
  json a = json::array();
  for (std::size_t i : members_of(c)) a.push_back(i + 1);
  return a;
}

inline json witness_json(const Lattice& l, const BMonotonicityWitness& w) {
  return {{"ballots", names_json(l, w.ballots)},
          {"voter", w.voter + 1},
          {"alternative", l.name(w.alternative)},
          {"outcome", l.name(w.outcome)},
          {"alternative_outcome", l.name(w.alternative_outcome)}};
}

inline json witness_json(const Lattice& l, const StrategyProofnessWitness& w) {
  return {{"voter", w.voter + 1},
          {"preference", to_string(w.preference, l)},
          {"ballots", names_json(l, w.ballots)},
          {"deviation", l.name(w.deviation)},
          {"outcome_truthful", l.name(w.outcome_truthful)},
          {"outcome_deviant", l.name(w.outcome_deviant)}};
}

inline json witness_json(const Lattice& l, const ManipulationWitness& w) {
  json prof = json::array();
  for (const auto& p : w.profile) prof.push_back(to_string(p, l));
  return {{"profile", prof},
          {"coalition", coalition_json(w.coalition)},
          {"ballots", names_json(l, w.ballots)},
          {"context_ballots", names_json(l, w.context())},
          {"deviation", names_json(l, w.deviation())},
          {"outcome_truthful", l.name(w.outcome_truthful)},
          {"outcome_deviant", l.name(w.outcome_deviant)}};
}

inline json table_json(const ExplicitRule& r) {
  json rows = json::array();
  const auto& idx = r.indexer();
  for (std::uint64_t k = 0; k < idx.total(); ++k) {
    Ballots b = idx.decode(k);
    rows.push_back({names_json(r.lattice(), b), r.lattice().name(r.at(k))});
  }
  return rows;
}

}  // namespace medlat
