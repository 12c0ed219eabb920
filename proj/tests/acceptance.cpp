// One pass/fail line per acceptance criterion; exits nonzero if any fails.

#include <iostream>
#include <string>
#include <vector>

#include "medlat/suites.hpp"

using namespace medlat;

namespace {

int failures = 0;

void line(int id, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << title << ": " << detail << "\n";
  failures += !pass;
}

/// All named checks exist and pass; failing claims are appended to `detail`.
bool all_pass(const VerificationReport& r, const std::vector<std::string>& claims, std::string& detail) {
  bool ok = true;
  for (const auto& claim : claims) {
    const Check* found = nullptr;
    for (const auto& c : r.checks())
      if (c.claim == claim) found = &c;
    if (!found || !found->pass) {
      ok = false;
      detail += " [" + r.suite() + "/" + claim + (found ? " failed: " + found->witness.dump() : " missing") + "]";
    }
  }
  return ok;
}

const Check& get(const VerificationReport& r, const std::string& claim) {
  for (const auto& c : r.checks())
    if (c.claim == claim) return c;
  static const Check missing{claim, false, "missing", nullptr};
  return missing;
}

}  // namespace

int main() {
  VerifyOptions opts;
  opts.enumeration.max_elements = 8;
  const LatticePtr sq = share(boolean_square()), cube = share(build_boolean_hypercube(3)),
                   chain = share(build_chain(4)), grid = share(build_product(build_chain(3), build_chain(3)));
  const auto bsq = boolean_square_suite(opts);

  {
    std::string d = "12 unimodal, 12 LSU, three per top, templates match, disjoint, separable = LSU";
    const bool ok = all_pass(bsq, {"unimodal.count", "lsu.count", "three_per_top", "unimodal.templates",
                                   "lsu.templates", "disjoint", "separable=lsu"},
                             d);
    line(1, "boolean-square enumerations", ok, d);
  }
  {
    std::string d = "32 nontrivial triples match the listing; the rest are exactly the trivial ones";
    line(2, "betweenness golden set", all_pass(bsq, {"betweenness.listing", "betweenness.complete"}, d), d);
  }
  {
    std::string d = "monotonic, SP on U and S; size-4 witness at (x,x,y,y,0) turns 0 into 1 via (1,1,1,1); "
                    "lexicographically first overall: " + get(bsq, "mu*.coalitional.first").detail;
    const bool ok = all_pass(bsq, {"mu*.b_monotonic", "mu*.sp_unimodal", "mu*.sp_lsu", "mu*.coalitional.first",
                                   "mu*.coalitional.size4", "mu*.coalitional.example"},
                             d);
    line(3, "extended median with five voters", ok, d);
  }
  const auto t2_chain = theorem2_suite(chain, opts);
  {
    std::string d = "SP on D^2 and D'^2, not monotonic (c outside [d,a]), not SP on U, (d,a) -> (a,d) witness";
    const bool ok = all_pass(t2_chain, {"i.D_unimodal", "i.sp_D", "i.sp_D'", "i.not_b_monotonic",
                                        "i.not_sp_full_unimodal", "i.coalitional_D", "i.coalitional_D'"},
                             d);
    line(4, "restricted counterexample on the 4-chain", ok, d);
  }
  {
    const auto t2 = theorem2_suite(sq, opts);
    std::string d = "median-tree table matches the listed outcomes, f(d,c) = c; SP on U and S; coalitional witness";
    const bool ok = all_pass(t2, {"ii.table", "ii.f(d,c)", "ii.b_monotonic", "ii.sp_unimodal", "ii.sp_lsu",
                                  "ii.coalitional_unimodal", "ii.coalitional_lsu", "ii.witness_unimodal",
                                  "ii.witness_lsu"},
                             d);
    line(5, "strategy-proof yet coalitionally manipulable rule on 2^2", ok, d);
  }
  {
    const auto t1 = theorem1_suite(sq, 2, 200, 20240601, 3, opts);
    std::string d = get(t1, "random_tables").detail + "; " + get(t1, "monotone_and_perturbed").detail + "; " +
                    get(t1, "quota_rules/n=3").detail;
    const bool ok = all_pass(t1, {"random_tables", "monotone_and_perturbed", "quota_rules/n=1", "quota_rules/n=2",
                                  "quota_rules/n=3"},
                             d);
    line(6, "five-way equivalence sweep", ok, d);
  }
  {
    const auto a = lemma2_suite(sq, 3, opts), b = lemma2_suite(cube, 3, opts);
    std::string d = "2^2: " + get(a, "pointwise_median").detail + "; 2^3: " + get(b, "pointwise_median").detail;
    const bool ok = all_pass(a, {"family_monotone", "pointwise_median"}, d) &&
                    all_pass(b, {"family_monotone", "pointwise_median"}, d);
    line(7, "pointwise medians of monotonic rules", ok, d);
  }
  {
    std::string d = "median axioms, betweenness properties, B^mu = B and the metric test on 2^2, 2^3, 4-chain, 3x3";
    bool ok = true;
    for (const auto& l : {sq, cube, chain, grid}) {
      const auto r = claim1_suite(*l);
      ok = all_pass(r, {"m(i)", "m(ii)", "m(iii)", "m(iv)", "claim1(i)", "claim1(ii)", "claim1(iii)", "claim1(iv)",
                        "claim1(v)", "B^mu=B", "glivenko"},
                    d) &&
           ok;
    }
    line(8, "median and betweenness axioms", ok, d);
  }
  {
    std::string d = get(bsq, "ste.fails").detail + "; " + get(bsq, "ste1.fails").detail + "; 4-chain: " +
                    get(bsq, "ste.chain").detail;
    line(9, "counter-properties on 2^2", all_pass(bsq, {"ste.fails", "ste1.fails", "ste.chain"}, d), d);
  }
  {
    std::string d;
    bool ok = true;
    for (std::size_t n : {3, 4, 5}) {
      const auto r = theorem3_suite(sq, n, opts);
      ok = all_pass(r, {"survivors_manipulable", "strict_majority_targeted"}, d) && r.passed() && ok;
      d += " n=" + std::to_string(n) + ": " + get(r, "survivors_manipulable").detail + ";";
    }
    line(10, "anonymous quota rules on 2^2 are coalitionally manipulable", ok, d);
  }
  {
    const auto r2 = corollary1_suite(chain, 2, 100, 7, opts), r3 = corollary1_suite(chain, 3, 20, 7, opts);
    std::string d = "n=2: " + get(r2, "monotone_inputs").detail + "; n=3: " + get(r3, "monotone_inputs").detail +
                    "; zero witnesses";
    const bool ok = all_pass(r2, {"monotone_inputs", "no_coalitional_witness", "coalitional_implies_individual"}, d) &&
                    all_pass(r3, {"monotone_inputs", "no_coalitional_witness", "coalitional_implies_individual"}, d);
    line(11, "monotonic rules on a chain resist coalitions", ok, d);
  }
  {
    std::string d = get(bsq, "mu*.among_ballots").detail + "; " + get(bsq, "cube.median_outside").detail;
    line(12, "efficiency observations", all_pass(bsq, {"mu*.among_ballots", "cube.median_outside"}, d), d);
  }
  std::cout << (failures == 0 ? "all 12 criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
