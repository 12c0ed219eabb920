#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "medlat/lattice.hpp"
#include "medlat/preorder.hpp"
#include "medlat/report.hpp"
#include "medlat/rules.hpp"
#include "medlat/tree_automaton.hpp"
#include "medlat/verify.hpp"

namespace medlat {

namespace detail {

/// Sequences y_0 <= y_1 <= ... <= y_{len-1} in the lattice order.
inline std::vector<std::vector<ElementId>> monotone_sequences(const Lattice& l, std::size_t len) {
  std::vector<std::vector<ElementId>> out;
  std::vector<ElementId> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == len) {
      out.push_back(cur);
      return;
    }
    for (ElementId e = 0; e < l.size(); ++e)
      if (cur.empty() || l.leq(cur.back(), e)) {
        cur.push_back(e);
        self(self);
        cur.pop_back();
      }
  };
  rec(rec);
  return out;
}

inline std::vector<std::vector<ElementId>> all_sequences(const Lattice& l, std::size_t len) {
  std::vector<std::vector<ElementId>> out;
  BallotIndexer idx(full_spaces(l, len), l.size());
  for (std::uint64_t k = 0; k < idx.total(); ++k) out.push_back(idx.decode(k));
  return out;
}

inline ExplicitRule random_table(const LatticePtr& l, std::size_t n, std::mt19937_64& rng) {
  BallotIndexer idx(full_spaces(*l, n), l->size());
  std::vector<ElementId> t(idx.total());
  for (auto& e : t) e = static_cast<ElementId>(rng() % l->size());
  return ExplicitRule(l, full_spaces(*l, n), std::move(t));
}

/// Corner data z_T = join of random w_S over S subset of T; monotone in T.
inline std::vector<ElementId> random_monotone_corners(const Lattice& l, std::size_t n, std::mt19937_64& rng) {
  const std::size_t total = std::size_t{1} << n;
  std::vector<ElementId> w(total), z(total);
  for (auto& e : w) e = static_cast<ElementId>(rng() % l.size());
  for (Coalition t = 0; t < total; ++t) {
    ElementId acc = l.bottom();
    for (Coalition s = 0; s < total; ++s)
      if ((s & ~t) == 0) acc = l.join(acc, w[s]);
    z[corner_index_of(t, n)] = acc;
  }
  return z;
}

/// Lexicographically first strictly increasing 4-chain by ids.
inline std::optional<std::array<ElementId, 4>> first_four_chain(const Lattice& l) {
  const auto m = static_cast<ElementId>(l.size());
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b) {
      if (!l.lt(a, b)) continue;
      for (ElementId c = 0; c < m; ++c) {
        if (!l.lt(b, c)) continue;
        for (ElementId d = 0; d < m; ++d)
          if (l.lt(c, d)) return std::array<ElementId, 4>{a, b, c, d};
      }
    }
  return std::nullopt;
}

/// {p meet q, p, q, p join q} for the first incomparable pair p < q.
inline std::optional<std::array<ElementId, 4>> first_square(const Lattice& l) {
  const auto m = static_cast<ElementId>(l.size());
  for (ElementId p = 0; p < m; ++p)
    for (ElementId q = p + 1; q < m; ++q)
      if (!l.comparable(p, q)) return std::array<ElementId, 4>{l.meet(p, q), p, q, l.join(p, q)};
  return std::nullopt;
}

template <class Fail>
std::optional<std::vector<ElementId>> find_tuple(std::size_t m, std::size_t arity, Fail fail) {
  std::vector<ElementId> t(arity, 0);
  while (true) {
    if (fail(t)) return t;
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++t[i] < m) break;
      t[i] = 0;
      if (i == 0) return std::nullopt;
    }
    if (arity == 0) return std::nullopt;
  }
}

inline json tuple_json(const Lattice& l, const std::optional<std::vector<ElementId>>& t) {
  return t ? names_json(l, *t) : json(nullptr);
}

inline std::string seq_string(const Lattice& l, const std::vector<ElementId>& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + l.name(s[i]);
  return out + ")";
}

struct Domains {
  DomainDescriptor u, s;
};

}  // namespace detail

// ---------------------------------------------------------------------------

/// Median axioms, betweenness properties, the metric characterization and the
/// top-betweenness extension, all by exhaustive enumeration.
inline VerificationReport claim1_suite(const Lattice& l) {
  VerificationReport rep("claim1");
  const std::size_t m = l.size();
  auto mu = [&](ElementId a, ElementId b, ElementId c) { return median(l, a, b, c); };
  auto btw = [&](ElementId x, ElementId z, ElementId y) { return between(l, x, z, y); };
  auto report = [&](const std::string& claim, const std::string& what,
                    const std::optional<std::vector<ElementId>>& bad) {
    rep.check(claim, !bad, what, detail::tuple_json(l, bad));
  };

  report("m(i)", "mu(bottom, a, top) = a",
         detail::find_tuple(m, 1, [&](auto& t) { return mu(l.bottom(), t[0], l.top()) != t[0]; }));
  report("m(ii)", "mu(a, b, a) = a", detail::find_tuple(m, 2, [&](auto& t) { return mu(t[0], t[1], t[0]) != t[0]; }));
  report("m(iii)", "mu(a,b,c) = mu(b,a,c) = mu(b,c,a)", detail::find_tuple(m, 3, [&](auto& t) {
           const ElementId v = mu(t[0], t[1], t[2]);
           return v != mu(t[1], t[0], t[2]) || v != mu(t[1], t[2], t[0]);
         }));
  if (m <= 16) {
    report("m(iv)", "mu(mu(a,b,c),d,e) = mu(mu(a,d,e),b,mu(c,d,e))", detail::find_tuple(m, 5, [&](auto& t) {
             return mu(mu(t[0], t[1], t[2]), t[3], t[4]) != mu(mu(t[0], t[3], t[4]), t[1], mu(t[2], t[3], t[4]));
           }));
  } else {
    rep.note("m(iv) skipped: more than 16 elements");
  }

  report("claim1(i)", "symmetry", detail::find_tuple(m, 3, [&](auto& t) {
           return btw(t[0], t[1], t[2]) && !btw(t[2], t[1], t[0]);
         }));
  report("claim1(ii)", "closure", detail::find_tuple(m, 2, [&](auto& t) {
           return !btw(t[0], t[0], t[1]) || !btw(t[0], t[1], t[1]);
         }));
  report("claim1(iii)", "idempotence", detail::find_tuple(m, 2, [&](auto& t) {
           return btw(t[0], t[1], t[0]) && t[1] != t[0];
         }));
  if (m <= 16) {
    // (x, y, u, v, z): u, v in [x,y] and z in [u,v] imply z in [x,y].
    report("claim1(iv)", "convexity", detail::find_tuple(m, 5, [&](auto& t) {
             return btw(t[0], t[2], t[1]) && btw(t[0], t[3], t[1]) && btw(t[2], t[4], t[3]) && !btw(t[0], t[4], t[1]);
           }));
  } else {
    rep.note("claim1(iv) skipped: more than 16 elements");
  }
  report("claim1(v)", "antisymmetry", detail::find_tuple(m, 3, [&](auto& t) {
           return btw(t[0], t[1], t[2]) && btw(t[1], t[0], t[2]) && t[0] != t[1];
         }));

  report("B^mu=B", "z in [x,y] iff mu(x,y,z) = z", detail::find_tuple(m, 3, [&](auto& t) {
           return btw(t[0], t[2], t[1]) != (mu(t[0], t[1], t[2]) == t[2]);
         }));

  const Valuation v = rank_valuation(l);
  report("valuation", "rank valuation is modular and strictly monotone", detail::find_tuple(m, 2, [&](auto& t) {
           return v(l.join(t[0], t[1])) + v(l.meet(t[0], t[1])) != v(t[0]) + v(t[1]) ||
                  (l.lt(t[0], t[1]) && v(t[0]) >= v(t[1]));
         }));
  report("glivenko", "y in [x,z] iff d(x,z) = d(x,y) + d(y,z)", detail::find_tuple(m, 3, [&](auto& t) {
           const long lhs = metric_distance(l, v, t[0], t[2]);
           const long rhs = metric_distance(l, v, t[0], t[1]) + metric_distance(l, v, t[1], t[2]);
           return btw(t[0], t[1], t[2]) != (lhs == rhs);
         }));

  std::optional<std::vector<ElementId>> bad_peak;
  for (ElementId x = 0; x < m && !bad_peak; ++x) {
    const StrictRelation r = strict_top_betweenness(l, x);
    if (!r.is_asymmetric() || !is_s_consistent(r)) {
      bad_peak = std::vector<ElementId>{x};
      break;
    }
    const TotalPreorder p = extend_to_total_preorder(r);
    bool extends = p.top() == x && is_locally_strictly_unimodal(p, l);
    for (auto [a, b] : r.pairs()) extends = extends && p.prefers(a, b);
    if (!extends) bad_peak = std::vector<ElementId>{x};
  }
  report("claim2", "top betweenness is asymmetric, S-consistent and extends to an LSU preorder", bad_peak);
  rep.finish();
  return rep;
}

/// Monotonicity against individual strategy-proofness on both full domains,
/// plus the witness constructors used for the converse directions.
inline VerificationReport lemma1_suite(const LatticePtr& l, std::size_t n, std::size_t samples, std::uint64_t seed,
                                       const VerifyOptions& opts = {}) {
  VerificationReport rep("lemma1");
  std::mt19937_64 rng(seed);
  const auto u = DomainDescriptor::full_unimodal(*l, n, opts.enumeration);
  const auto s = DomainDescriptor::full_lsu(*l, n, opts.enumeration);
  std::size_t monotone = 0, exceptions = 0;
  json first;
  for (std::size_t k = 0; k < samples; ++k) {
    ExplicitRule r = k % 2 ? tabulate(build_canonical_median_tree(l, detail::random_monotone_corners(*l, n, rng), n))
                           : detail::random_table(l, n, rng);
    const bool bm = is_b_monotonic(r, opts).holds;
    const bool su = is_strategy_proof(r, u, opts).holds;
    const bool ss = is_strategy_proof(r, s, opts).holds;
    monotone += bm;
    if (bm != su || bm != ss) {
      if (!exceptions) first = {{"table", table_json(r)}, {"b_monotonic", bm}, {"sp_unimodal", su}, {"sp_lsu", ss}};
      ++exceptions;
    }
  }
  rep.check("equivalence", exceptions == 0,
            std::to_string(samples) + " rules (" + std::to_string(monotone) + " monotone), " +
                std::to_string(exceptions) + " exceptions",
            first);

  std::optional<std::vector<ElementId>> bad3, badl;
  for (ElementId a = 0; a < l->size(); ++a)
    for (ElementId b = 0; b < l->size(); ++b) {
      if (!bad3 && !is_unimodal(build_three_class_witness(*l, a, b), *l)) bad3 = std::vector<ElementId>{a, b};
      const TotalPreorder w = build_lsu_witness(*l, a, b);
      if (!badl && (w.top() != a || !is_locally_strictly_unimodal(w, *l))) badl = std::vector<ElementId>{a, b};
    }
  rep.check("three_class_witness", !bad3, "always unimodal", detail::tuple_json(*l, bad3));
  rep.check("lsu_witness", !badl, "always locally strictly unimodal with the given peak", detail::tuple_json(*l, badl));
  rep.finish();
  return rep;
}

/// Pointwise medians of monotonic rules stay monotonic.
inline VerificationReport lemma2_suite(const LatticePtr& l, std::size_t n, const VerifyOptions& opts = {}) {
  VerificationReport rep("lemma2");
  std::vector<ExplicitRule> family;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    family.push_back(tabulate(projection_rule(l, n, i)));
    labels.push_back("pi" + std::to_string(i + 1));
  }
  for (ElementId c = 0; c < l->size(); ++c) {
    family.push_back(tabulate(constant_rule(l, n, c)));
    labels.push_back("const " + l->name(c));
  }
  family.push_back(tabulate(extended_median_rule(l, n)));
  labels.push_back("mu*");

  std::size_t base_fail = 0;
  for (const auto& f : family) base_fail += !is_b_monotonic(f, opts).holds;
  rep.check("family_monotone", base_fail == 0, std::to_string(family.size()) + " base rules");

  std::size_t triples = 0, failures = 0;
  json first;
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i; j < family.size(); ++j)
      for (std::size_t k = j; k < family.size(); ++k) {
        ++triples;
        auto res = is_b_monotonic(pointwise_median(family[i], family[j], family[k]), opts);
        if (!res.holds) {
          if (!failures)
            first = {{"rules", {labels[i], labels[j], labels[k]}}, {"witness", witness_json(*l, *res.witness)}};
          ++failures;
        }
      }
  rep.check("pointwise_median", failures == 0,
            std::to_string(triples) + " triples, " + std::to_string(failures) + " not monotone", first);
  rep.finish();
  return rep;
}

namespace detail {

struct Statements {
  bool bm = false, sp_u = false, sp_s = false, tree = false, committee = false;
  json to_json() const {
    return {{"b_monotonic", bm}, {"sp_unimodal", sp_u}, {"sp_lsu", sp_s}, {"tree_round_trip", tree},
            {"committee_round_trip", committee}};
  }
  bool all_equal() const { return bm == sp_u && bm == sp_s && bm == tree && bm == committee; }
};

inline Statements statements(const ExplicitRule& r, const Domains& d, const VerifyOptions& opts) {
  Statements st;
  st.bm = is_b_monotonic(r, opts).holds;
  st.sp_u = is_strategy_proof(r, d.u, opts).holds;
  st.sp_s = is_strategy_proof(r, d.s, opts).holds;
  const MedianTree t = build_canonical_median_tree(r.lattice_ptr(), corners(r), r.voters());
  st.tree = tabulate(t) == r;
  st.committee = tabulate(tree_to_committee(t)) == r;
  return st;
}

}  // namespace detail

/// Five-way equivalence over random tables, every quota rule up to
/// `max_quota_voters`, and the embedded chain counterexample.
inline VerificationReport theorem1_suite(const LatticePtr& l, std::size_t n, std::size_t samples, std::uint64_t seed,
                                         std::size_t max_quota_voters = 3, const VerifyOptions& opts = {}) {
  VerificationReport rep("theorem1");
  std::map<std::size_t, detail::Domains> domains;
  auto dom = [&](std::size_t k) -> const detail::Domains& {
    auto it = domains.find(k);
    if (it == domains.end())
      it = domains
               .emplace(k, detail::Domains{DomainDescriptor::full_unimodal(*l, k, opts.enumeration),
                                           DomainDescriptor::full_lsu(*l, k, opts.enumeration)})
               .first;
    return it->second;
  };

  std::mt19937_64 rng(seed);
  std::size_t exceptions = 0, monotone = 0;
  json first;
  for (std::size_t k = 0; k < samples; ++k) {
    ExplicitRule r = detail::random_table(l, n, rng);
    auto st = detail::statements(r, dom(n), opts);
    monotone += st.bm;
    if (!(st.bm == st.sp_u && st.bm == st.sp_s)) {
      if (!exceptions) first = {{"table", table_json(r)}, {"statements", st.to_json()}};
      ++exceptions;
    }
    if (st.bm && !(st.tree && st.committee)) {
      if (!exceptions) first = {{"table", table_json(r)}, {"statements", st.to_json()}};
      ++exceptions;
    }
  }
  rep.check("random_tables", exceptions == 0,
            std::to_string(samples) + " random tables with n=" + std::to_string(n) + " (" + std::to_string(monotone) +
                " monotone), " + std::to_string(exceptions) + " exceptions",
            first);

  // Monotonic tables and single-entry perturbations of them.
  {
    std::size_t bad = 0, perturbed_monotone = 0;
    json firstm;
    for (std::size_t k = 0; k < samples; ++k) {
      ExplicitRule base = tabulate(build_canonical_median_tree(l, detail::random_monotone_corners(*l, n, rng), n));
      std::vector<ElementId> t = base.table();
      t[rng() % t.size()] = static_cast<ElementId>(rng() % l->size());
      ExplicitRule near(l, base.ballot_spaces(), std::move(t));
      for (const auto* r : {&base, &near}) {
        auto st = detail::statements(*r, dom(n), opts);
        const bool ok = (r == &base ? st.bm : true) && st.all_equal();
        if (r == &near) perturbed_monotone += st.bm;
        if (!ok) {
          if (!bad) firstm = {{"table", table_json(*r)}, {"statements", st.to_json()}};
          ++bad;
        }
      }
    }
    rep.check("monotone_and_perturbed", bad == 0,
              std::to_string(samples) + " monotonic tables and their one-entry perturbations (" +
                  std::to_string(perturbed_monotone) + " still monotone), " + std::to_string(bad) + " exceptions",
              firstm);
  }

  for (std::size_t k = 1; k <= max_quota_voters; ++k) {
    std::size_t count = 0, bad = 0;
    json firstq;
    const auto seqs = detail::all_sequences(*l, k + 1);
    for (const auto& seq : seqs) {
      ++count;
      ExplicitRule r = tabulate(quota_rule(l, k, seq));
      auto st = detail::statements(r, dom(k), opts);
      const bool ok = st.bm && st.sp_u && st.sp_s && st.tree && st.committee;
      if (!ok) {
        if (!bad) firstq = {{"constants", names_json(*l, seq)}, {"statements", st.to_json()}};
        ++bad;
      }
    }
    rep.check("quota_rules/n=" + std::to_string(k), bad == 0,
              std::to_string(count) + " quota rules, all five statements true for " + std::to_string(count - bad),
              firstq);
  }

  // Lemma 3: the automaton's run map and the arena tree agree.
  {
    std::size_t bad = 0;
    for (int trial = 0; trial < 20; ++trial) {
      auto z = detail::random_monotone_corners(*l, n, rng);
      auto a = median_automaton(l, z);
      const TermTree term = canonical_median_term(n);
      const MedianTree t = build_canonical_median_tree(l, z, n);
      BallotIndexer idx(full_spaces(*l, n), l->size());
      for (std::uint64_t k = 0; k < idx.total(); ++k) {
        Ballots b = idx.decode(k);
        bad += run_tree_automaton(a, ballot_assignment(b), term) != t(b);
      }
      bad += !is_b_monotonic(t, opts).holds;
      bad += corners(t) != z;
    }
    rep.check("lemma3_automaton", bad == 0, "automaton run equals tree evaluation and is monotonic");
  }

  if (auto chain = detail::first_four_chain(*l)) {
    const ElementId a = (*chain)[0], b = (*chain)[1], d = (*chain)[2], c = (*chain)[3];
    auto embed = [&](ElementId e) { return l->leq(e, b) ? a : d; };
    std::vector<ElementId> table;
    BallotIndexer idx(full_spaces(*l, 2), l->size());
    for (std::uint64_t k = 0; k < idx.total(); ++k) {
      Ballots x = idx.decode(k);
      const ElementId x1 = embed(x[0]), x2 = embed(x[1]);
      table.push_back(x1 == a ? (x2 == a ? a : b) : (x2 == a ? c : d));
    }
    ExplicitRule r(l, full_spaces(*l, 2), table);
    auto st = detail::statements(r, dom(2), opts);
    rep.check("embedded_counterexample", !st.bm && st.all_equal(), "all five statements false together",
              st.to_json());
  } else {
    rep.note("no 4-element chain: embedded counterexample skipped");
  }
  rep.finish();
  return rep;
}

namespace detail {

inline TotalPreorder preorder_of(const Lattice& l, const std::vector<std::vector<ElementId>>& classes) {
  return TotalPreorder::from_classes(l.size(), classes);
}

}  // namespace detail

/// Restricted rule on a 4-element sublattice (part i) and a full rule on a
/// Boolean-square sublattice (part ii), each strategy-proof but coalitionally
/// manipulable.
inline VerificationReport theorem2_suite(const LatticePtr& l, const VerifyOptions& opts = {}) {
  if (l->size() < 4) throw Error(ErrorKind::NoSuitableSublattice, "need at least 4 elements");
  VerificationReport rep("theorem2");
  const auto chain = detail::first_four_chain(*l);
  const auto square = detail::first_square(*l);

  // Part (i). Labels: on a chain a < b < d < c; on a square a is the top and d the bottom.
  {
    std::vector<ElementId> members;
    if (chain)
      members = {(*chain)[0], (*chain)[1], (*chain)[2], (*chain)[3]};
    else
      members = {(*square)[3], (*square)[1], (*square)[2], (*square)[0]};
    LatticePtr sub = share(induced_sublattice(*l, members));
    const Lattice& y = *sub;
    // Sublattice ids follow `members`.
    const ElementId a = 0, b = 1, c = chain ? 3 : 2, d = chain ? 2 : 3;
    rep.note(std::string("part (i) on ") + (chain ? "4-chain" : "Boolean square") + " {" + y.name(a) + "=a, " +
             y.name(b) + "=b, " + y.name(c) + "=c, " + y.name(d) + "=d}");
    const TotalPreorder p = detail::preorder_of(y, {{a}, {b}, {c, d}});
    const TotalPreorder p1 = detail::preorder_of(y, {{d}, {b}, {c, a}});
    const TotalPreorder p2 = detail::preorder_of(y, {{a}, {b}, {c}, {d}});
    const TotalPreorder p3 = detail::preorder_of(y, {{d}, {b}, {c}, {a}});
    rep.check("i.D_unimodal", is_unimodal(p, y) && is_unimodal(p1, y), "both preferences in D are unimodal");
    const bool d2_lsu = is_locally_strictly_unimodal(p2, y), d3_lsu = is_locally_strictly_unimodal(p3, y);
    if (!(d2_lsu && d3_lsu))
      rep.note("D' is not contained in the LSU domain here: " + to_string(p2, y) + (d2_lsu ? " is" : " is not") +
               " LSU, " + to_string(p3, y) + (d3_lsu ? " is" : " is not") + " LSU");

    const ExplicitRule f(sub, {{a, d}, {a, d}}, {a, b, c, d});
    const auto dd = DomainDescriptor::custom({{p, p1}, {p, p1}});
    const auto dd2 = DomainDescriptor::custom({{p2, p3}, {p2, p3}});
    auto sp1 = is_strategy_proof(f, dd, opts), sp2 = is_strategy_proof(f, dd2, opts);
    rep.check("i.sp_D", sp1.holds, "strategy-proof on D^2",
              sp1.witness ? witness_json(y, *sp1.witness) : json(nullptr));
    rep.check("i.sp_D'", sp2.holds, "strategy-proof on D'^2",
              sp2.witness ? witness_json(y, *sp2.witness) : json(nullptr));
    for (auto [label, dom] : {std::pair{"i.coalitional_D", &dd}, std::pair{"i.coalitional_D'", &dd2}}) {
      auto w = find_coalitional_manipulation(f, *dom, opts);
      const bool ok = w && validate_witness(f, *w) && w->coalition == 0b11 && w->ballots == Ballots{d, a} &&
                      w->deviated == Ballots{a, d} && w->outcome_truthful == c && w->outcome_deviant == b;
      rep.check(label, ok, "tops (d,a) deviate to (a,d): c becomes b", w ? witness_json(y, *w) : json(nullptr));
    }
    if (chain) {
      auto bm = is_b_monotonic(f, opts);
      const bool ok = !bm.holds && bm.witness->ballots == Ballots{d, a} && bm.witness->outcome == c &&
                      !between(y, d, c, bm.witness->alternative_outcome);
      rep.check("i.not_b_monotonic", ok, "f'(d,a) = c lies outside [d, f'(a,a)]",
                bm.witness ? witness_json(y, *bm.witness) : json(nullptr));
      std::vector<TotalPreorder> u;
      for (const auto& q : enumerate_unimodal(y, opts.enumeration))
        if (q.top() == a || q.top() == d) u.push_back(q);
      auto spu = is_strategy_proof(f, DomainDescriptor::custom({u, u}), opts);
      rep.check("i.not_sp_full_unimodal", !spu.holds, "manipulable on the full unimodal domain",
                spu.witness ? witness_json(y, *spu.witness) : json(nullptr));
    }
  }

  // Part (ii).
  if (!square) {
    rep.check("ii.chain_exemption", true, "lattice is a chain: individual and coalitional strategy-proofness coincide");
  } else {
    LatticePtr sub = share(induced_sublattice(*l, {(*square)[0], (*square)[1], (*square)[2], (*square)[3]}));
    const Lattice& y = *sub;
    const ElementId d = 0, b = 1, c = 2, a = 3;
    rep.note("part (ii) on Boolean square {" + y.name(a) + "=a (top), " + y.name(b) + "=b, " + y.name(c) + "=c, " +
             y.name(d) + "=d (bottom)}");
    const MedianTree tree = build_canonical_median_tree(sub, {d, c, b, a}, 2);
    const ExplicitRule f = tabulate(tree);
    struct Row {
      ElementId x1, x2, v;
    };
    const std::vector<Row> listed{{a, c, a}, {b, a, a}, {b, c, a}, {b, b, b}, {a, b, b}, {b, d, b},
                                  {c, c, c}, {c, a, c}, {d, c, c}, {c, d, d}, {c, b, d}};
    json mismatches = json::array();
    for (const auto& row : listed)
      if (f(Ballots{row.x1, row.x2}) != row.v)
        mismatches.push_back({names_json(y, Ballots{row.x1, row.x2}), y.name(f(Ballots{row.x1, row.x2}))});
    rep.check("ii.table", mismatches.empty(), "corner values (d,c,b,a) reproduce the listed outcomes", mismatches);
    rep.check("ii.f(d,c)", f(Ballots{d, c}) == c, "f(d,c) = c by the median tree");
    rep.note("f(d,c) is listed twice, as c and as d; the median tree gives c");

    const auto u = DomainDescriptor::full_unimodal(y, 2, opts.enumeration);
    const auto s = DomainDescriptor::full_lsu(y, 2, opts.enumeration);
    rep.check("ii.b_monotonic", is_b_monotonic(f, opts).holds, "monotonic by construction");
    rep.check("ii.sp_unimodal", is_strategy_proof(f, u, opts).holds, "strategy-proof on the full unimodal domain");
    rep.check("ii.sp_lsu", is_strategy_proof(f, s, opts).holds, "strategy-proof on the full LSU domain");
    for (auto [label, dom] : {std::pair{"ii.coalitional_unimodal", &u}, std::pair{"ii.coalitional_lsu", &s}}) {
      auto w = find_coalitional_manipulation(f, *dom, opts);
      rep.check(label, w && validate_witness(f, *w), "first coalitional manipulation",
                w ? witness_json(y, *w) : json(nullptr));
    }
    const TotalPreorder p = detail::preorder_of(y, {{a}, {b}, {c, d}});
    const TotalPreorder p1 = detail::preorder_of(y, {{d}, {b}, {c, a}});
    const TotalPreorder p2 = detail::preorder_of(y, {{a}, {b}, {c}, {d}});
    const TotalPreorder p3 = detail::preorder_of(y, {{d}, {b}, {c}, {a}});
    auto has_dev = [&](const PreferenceProfile& prof) {
      for (const auto& w : manipulations_at(f, prof, 0b11, {d, a}))
        if (w.deviated == Ballots{a, d} && w.outcome_truthful == c && w.outcome_deviant == b) return true;
      return false;
    };
    rep.check("ii.witness_unimodal", is_unimodal(p, y) && is_unimodal(p1, y) && has_dev({p1, p}),
              "voters with tops (d,a) deviate to (a,d): c becomes b");
    rep.check("ii.witness_lsu",
              is_locally_strictly_unimodal(p2, y) && is_locally_strictly_unimodal(p3, y) && has_dev({p3, p2}),
              "same deviation with strict preferences");
    rep.note("the strict-preference witness assigns d>b>c>a to voter 1 and a>b>c>d to voter 2");
  }
  rep.finish();
  return rep;
}

/// Anonymous quota rules that are locally sovereign and locally JI-neutral on
/// {0, x, z, x or z} for the first two atoms, each shown coalitionally
/// manipulable on the full unimodal and LSU domains.
inline VerificationReport theorem3_suite(const LatticePtr& l, std::size_t n, const VerifyOptions& opts = {}) {
  const auto& atoms = l->atoms();
  if (atoms.size() < 2) throw Error(ErrorKind::NotEnoughAtoms, "need two distinct atoms");
  if (n < 2) throw Error(ErrorKind::InvalidInput, "need at least two voters");
  VerificationReport rep("theorem3/n=" + std::to_string(n));
  const Lattice& X = *l;
  const ElementId zero = X.bottom(), x = atoms[0], z = atoms[1], xz = X.join(x, z);
  const std::vector<ElementId> Y{zero, x, z, xz};
  std::vector<ElementId> rest;
  for (ElementId e = 0; e < X.size(); ++e)
    if (std::find(Y.begin(), Y.end(), e) == Y.end()) rest.push_back(e);
  auto with_rest = [&](std::vector<ElementId> cls) {
    cls.insert(cls.end(), rest.begin(), rest.end());
    return cls;
  };

  struct Family {
    TotalPreorder px, pz, p0;
  };
  const Family alpha_u{detail::preorder_of(X, {{x}, {zero}, with_rest({xz, z})}),
                       detail::preorder_of(X, {{z}, {zero}, with_rest({xz, x})}),
                       detail::preorder_of(X, {{zero}, with_rest({x, z, xz})})};
  const Family alpha_s{lsu_completion(X, {{x}, {zero}, {xz}, {z}}), lsu_completion(X, {{z}, {zero}, {xz}, {x}}),
                       lsu_completion(X, {{zero}, {x}, {z}, {xz}})};
  const Family beta_u{detail::preorder_of(X, {{x}, {xz}, with_rest({zero, z})}),
                      detail::preorder_of(X, {{z}, {xz}, with_rest({zero, x})}),
                      detail::preorder_of(X, {{zero}, with_rest({x, z, xz})})};
  const Family beta_s{lsu_completion(X, {{x}, {xz}, {zero}, {z}}), lsu_completion(X, {{z}, {xz}, {zero}, {x}}),
                      lsu_completion(X, {{zero}, {x}, {z}, {xz}})};
  auto in_u = [&](const Family& f) { return is_unimodal(f.px, X) && is_unimodal(f.pz, X) && is_unimodal(f.p0, X); };
  auto in_s = [&](const Family& f) {
    return is_locally_strictly_unimodal(f.px, X) && is_locally_strictly_unimodal(f.pz, X) &&
           is_locally_strictly_unimodal(f.p0, X);
  };
  rep.check("profiles.alpha_unimodal", in_u(alpha_u), "starred preferences are unimodal");
  rep.check("profiles.alpha_lsu", in_s(alpha_s), "primed preferences are locally strictly unimodal");
  rep.check("profiles.beta_unimodal", in_u(beta_u), "circled preferences are unimodal");
  rep.check("profiles.beta_lsu", in_s(beta_s), "plus-marked preferences are locally strictly unimodal");

  std::optional<DomainDescriptor> full_u, full_s;
  auto domain = [&](bool unimodal) -> const DomainDescriptor& {
    auto& slot = unimodal ? full_u : full_s;
    if (!slot)
      slot = unimodal ? DomainDescriptor::full_unimodal(X, n, opts.enumeration)
                      : DomainDescriptor::full_lsu(X, n, opts.enumeration);
    return *slot;
  };

  // Targeted attempt from the case analysis; nullopt if it does not apply.
  auto targeted = [&](const ExplicitRule& r, bool alpha, bool unimodal) -> std::optional<ManipulationWitness> {
    const Family& fam = alpha ? (unimodal ? alpha_u : alpha_s) : (unimodal ? beta_u : beta_s);
    const std::size_t k = n / 2;
    const bool odd = n % 2 == 1;
    std::vector<ElementId> tops;
    for (std::size_t i = 0; i < k; ++i) tops.push_back(x);
    const std::size_t zs = (!alpha && !odd) ? k - 1 : k;
    for (std::size_t i = 0; i < zs; ++i) tops.push_back(z);
    while (tops.size() < n) tops.push_back(zero);
    const Coalition all = (Coalition{1} << n) - 1;
    const Coalition coalition = (alpha && !odd) ? all : (all & ~(Coalition{1} << (n - 1)));
    Ballots dev = tops;
    for (std::size_t i : members_of(coalition)) dev[i] = alpha ? zero : xz;
    ManipulationWitness w;
    for (ElementId t : tops) w.profile.push_back(t == x ? fam.px : t == z ? fam.pz : fam.p0);
    w.coalition = coalition;
    w.ballots = tops;
    w.deviated = dev;
    w.outcome_truthful = r(tops);
    w.outcome_deviant = r(dev);
    if (!validate_witness(r, w)) return std::nullopt;
    return w;
  };

  const auto seqs = detail::monotone_sequences(X, n + 1);
  std::size_t survivors = 0, escaped = 0, fallbacks = 0, inner_fallbacks = 0, full_quota = 0;
  std::size_t majority_seen = 0, majority_fallbacks = 0;
  for (const auto& seq : seqs) {
    const ExplicitRule r = tabulate(quota_rule(l, n, seq));
    if (!is_locally_sovereign(r, Y).holds || !is_locally_ji_neutral(r, Y).holds) continue;
    ++survivors;
    std::size_t q = n + 1;
    for (std::size_t t = 0; t <= n && q > n; ++t) {
      Ballots b(n, zero);
      for (std::size_t i = 0; i < t; ++i) b[i] = x;
      if (X.leq(x, r(b))) q = t;
    }
    const bool alpha = 2 * q <= n;
    std::string label = "rule " + detail::seq_string(X, seq) + " q=" + std::to_string(q) + (alpha ? " alpha" : " beta");
    bool both_targeted = true;
    json found = json::object();
    for (bool unimodal : {true, false}) {
      auto w = targeted(r, alpha, unimodal);
      const char* dom_name = unimodal ? "unimodal" : "lsu";
      if (w) {
        found[dom_name] = {{"via", "targeted"}, {"witness", witness_json(X, *w)}};
        continue;
      }
      both_targeted = false;
      ++fallbacks;
      auto g = find_coalitional_manipulation(r, domain(unimodal), opts);
      if (g)
        found[dom_name] = {{"via", "search"}, {"witness", witness_json(X, *g)}};
      else
        ++escaped;
    }
    const bool ok = found.contains("unimodal") && found.contains("lsu");
    rep.check(label, ok, both_targeted ? "manipulated by the targeted profiles" : "manipulated (search fallback)",
              ok ? json(nullptr) : found);
    full_quota += q >= n;
    inner_fallbacks += q < n && !both_targeted;
    if (q == n / 2 + 1) {
      ++majority_seen;
      majority_fallbacks += !both_targeted;
    }
  }
  rep.check("survivors_manipulable", escaped == 0,
            std::to_string(seqs.size()) + " quota rules, " + std::to_string(survivors) + " pass the filters, " +
                std::to_string(fallbacks) + " search fallbacks, " + std::to_string(escaped) + " escape");
  rep.check("targeted_below_unanimity", inner_fallbacks == 0,
            "every surviving rule with q < n falls to the targeted profiles on both domains");
  if (n / 2 + 1 < n)
    rep.check("strict_majority_targeted", majority_seen > 0 && majority_fallbacks == 0,
              std::to_string(majority_seen) + " surviving rule(s) with q = " + std::to_string(n / 2 + 1) +
                  ", all manipulated by the targeted profiles");
  else
    rep.note("strict majority equals unanimity for n = 2; no targeted check");
  if (full_quota)
    rep.note(std::to_string(full_quota) +
             " surviving rule(s) need all n voters to reach x; the targeted deviation cannot lift them, the search finds a witness");
  rep.note("enumerated space: quota rules with nondecreasing size-indexed constants; other anonymous rules are not covered");
  rep.finish();
  return rep;
}

/// On a chain, monotonic rules admit no coalitional manipulation.
inline VerificationReport corollary1_suite(const LatticePtr& l, std::size_t n, std::size_t samples, std::uint64_t seed,
                                           const VerifyOptions& opts = {}) {
  if (!l->is_chain()) throw Error(ErrorKind::NotAChain, "corollary suite needs a chain");
  VerificationReport rep("corollary1/n=" + std::to_string(n));
  const auto u = DomainDescriptor::full_unimodal(*l, n, opts.enumeration);
  const auto s = DomainDescriptor::full_lsu(*l, n, opts.enumeration);
  std::size_t rules = 0, witnesses = 0, not_monotone = 0, implication = 0;
  json first;
  auto run = [&](const ExplicitRule& r) {
    ++rules;
    not_monotone += !is_b_monotonic(r, opts).holds;
    for (const auto* d : {&u, &s}) {
      auto w = find_coalitional_manipulation(r, *d, opts);
      if (w) {
        if (!witnesses) first = witness_json(*l, *w);
        ++witnesses;
      } else {
        implication += !is_strategy_proof(r, *d, opts).holds;
      }
    }
  };
  for (const auto& seq : detail::monotone_sequences(*l, n + 1)) run(tabulate(quota_rule(l, n, seq)));
  const std::size_t quota = rules;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k)
    run(tabulate(build_canonical_median_tree(l, detail::random_monotone_corners(*l, n, rng), n)));
  rep.check("monotone_inputs", not_monotone == 0,
            std::to_string(quota) + " quota rules and " + std::to_string(samples) + " random monotonic tables");
  rep.check("no_coalitional_witness", witnesses == 0, std::to_string(witnesses) + " witnesses on full U and full S",
            first);
  rep.check("coalitional_implies_individual", implication == 0,
            "every coalitionally strategy-proof rule is individually strategy-proof");
  rep.finish();
  return rep;
}

/// Golden values for the two-issue example and the two failing interval properties.
inline VerificationReport boolean_square_suite(const VerifyOptions& opts = {}) {
  VerificationReport rep("boolean-square");
  LatticePtr l = share(boolean_square());
  const Lattice& sq = *l;
  const ElementId zero = sq.id("0"), x = sq.id("x"), y = sq.id("y"), one = sq.id("1");

  // Enumerations.
  const auto u = enumerate_unimodal(sq), s = enumerate_lsu(sq), sep = enumerate_separable(sq);
  rep.check("unimodal.count", u.size() == 12, std::to_string(u.size()) + " unimodal preorders");
  rep.check("lsu.count", s.size() == 12, std::to_string(s.size()) + " locally strictly unimodal preorders");
  std::set<std::vector<std::uint32_t>> us, ss, seps, tu, ts;
  for (const auto& p : u) us.insert(p.ranks());
  for (const auto& p : s) ss.insert(p.ranks());
  for (const auto& p : sep) seps.insert(p.ranks());
  bool per_top = true;
  for (ElementId a = 0; a < 4; ++a) {
    per_top = per_top && std::count_if(u.begin(), u.end(), [&](auto& p) { return p.top() == a; }) == 3 &&
              std::count_if(s.begin(), s.end(), [&](auto& p) { return p.top() == a; }) == 3;
    const ElementId ac = *sq.complement(a);
    std::vector<ElementId> others;
    for (ElementId e = 0; e < 4; ++e)
      if (e != a && e != ac) others.push_back(e);
    const ElementId b = others[0], bc = others[1];
    tu.insert(detail::preorder_of(sq, {{a}, {b}, {bc, ac}}).ranks());
    tu.insert(detail::preorder_of(sq, {{a}, {bc}, {b, ac}}).ranks());
    tu.insert(detail::preorder_of(sq, {{a}, {b, bc, ac}}).ranks());
    ts.insert(detail::preorder_of(sq, {{a}, {b}, {bc}, {ac}}).ranks());
    ts.insert(detail::preorder_of(sq, {{a}, {bc}, {b}, {ac}}).ranks());
    ts.insert(detail::preorder_of(sq, {{a}, {b, bc}, {ac}}).ranks());
  }
  rep.check("three_per_top", per_top, "three unimodal and three LSU preorders per top");
  rep.check("unimodal.templates", us == tu, "unimodal set matches the three templates per top");
  rep.check("lsu.templates", ss == ts, "LSU set matches the three templates per top");
  bool disjoint = true;
  for (const auto& r : us) disjoint = disjoint && !ss.count(r);
  rep.check("disjoint", disjoint, "no preorder is both unimodal and LSU");
  rep.check("separable=lsu", seps == ss, "separable preorders coincide with LSU preorders");

  // Betweenness listing: (a, c, b) means c lies between a and b.
  const std::vector<std::array<const char*, 3>> listed{
      {"0", "x", "1"}, {"0", "y", "1"}, {"0", "0", "1"}, {"0", "1", "1"}, {"1", "x", "0"}, {"1", "y", "0"},
      {"1", "0", "0"}, {"1", "1", "0"}, {"x", "0", "y"}, {"x", "1", "y"}, {"x", "x", "y"}, {"x", "y", "y"},
      {"y", "0", "x"}, {"y", "1", "x"}, {"y", "x", "x"}, {"y", "y", "x"}, {"0", "0", "x"}, {"0", "x", "x"},
      {"x", "0", "0"}, {"x", "x", "0"}, {"0", "0", "y"}, {"0", "y", "y"}, {"y", "0", "0"}, {"y", "y", "0"},
      {"x", "x", "1"}, {"x", "1", "1"}, {"1", "x", "x"}, {"1", "1", "x"}, {"y", "y", "1"}, {"y", "1", "1"},
      {"1", "y", "y"}, {"1", "1", "y"}};
  std::set<std::array<ElementId, 3>> shown, computed, trivial_or_shown;
  for (const auto& t : listed) shown.insert({sq.id(t[0]), sq.id(t[1]), sq.id(t[2])});
  for (ElementId a = 0; a < 4; ++a)
    for (ElementId c = 0; c < 4; ++c)
      for (ElementId b = 0; b < 4; ++b) {
        const bool in = between(sq, a, c, b);
        if (in && a != b) computed.insert({a, c, b});
        const bool trivial = a == c || b == c;
        if (in != (trivial || shown.count({a, c, b}))) trivial_or_shown.insert({a, c, b});
      }
  rep.check("betweenness.listing", shown.size() == 32 && computed == shown,
            std::to_string(computed.size()) + " triples with distinct endpoints, 32 listed");
  json diff = json::array();
  for (const auto& t : trivial_or_shown) diff.push_back(names_json(sq, t));
  rep.check("betweenness.complete", trivial_or_shown.empty(),
            "betweenness = listed triples plus those whose middle equals an endpoint", diff);

  // Extended median with five voters.
  const ExplicitRule mu = tabulate(extended_median_rule(l, 5));
  rep.check("mu*(x,x,y,y,0)", mu(Ballots{x, x, y, y, zero}) == zero, "= 0");
  rep.check("mu*(1,1,1,1,0)", mu(Ballots{one, one, one, one, zero}) == one, "= 1");
  rep.check("mu*.b_monotonic", is_b_monotonic(mu, opts).holds, "monotonic");
  const auto du = DomainDescriptor::full_unimodal(sq, 5), ds = DomainDescriptor::full_lsu(sq, 5);
  rep.check("mu*.sp_unimodal", is_strategy_proof(mu, du, opts).holds, "strategy-proof on full U");
  rep.check("mu*.sp_lsu", is_strategy_proof(mu, ds, opts).holds, "strategy-proof on full S");
  auto first = find_coalitional_manipulation(mu, du, opts);
  rep.check("mu*.coalitional.first", first && validate_witness(mu, *first),
            first ? "first witness: coalition of size " + std::to_string(std::popcount(first->coalition)) +
                        ", " + sq.name(first->outcome_truthful) + " -> " + sq.name(first->outcome_deviant)
                  : "no witness",
            first ? witness_json(sq, *first) : json(nullptr));
  if (first) rep.note("first coalitional witness on full U: " + witness_json(sq, *first).dump());

  const TotalPreorder px = detail::preorder_of(sq, {{x}, {one}, {zero, y}});
  const TotalPreorder py = detail::preorder_of(sq, {{y}, {one}, {zero, x}});
  const TotalPreorder p0 = detail::preorder_of(sq, {{zero}, {x}, {y, one}});
  const PreferenceProfile profile{px, px, py, py, p0};
  bool profile_unimodal = true;
  for (const auto& p : profile) profile_unimodal = profile_unimodal && is_unimodal(p, sq);
  VerifyOptions four = opts;
  four.min_coalition_size = four.max_coalition_size = 4;
  auto w4 = find_coalitional_manipulation(mu, DomainDescriptor::custom({{px}, {px}, {py}, {py}, {p0}}), four);
  const bool w4_ok = profile_unimodal && w4 && validate_witness(mu, *w4) && w4->coalition == 0b01111 &&
                     w4->ballots == Ballots{x, x, y, y, zero} && w4->outcome_truthful == zero &&
                     w4->outcome_deviant == one;
  rep.check("mu*.coalitional.size4", w4_ok, "first size-4 witness at tops (x,x,y,y,0): 0 -> 1",
            w4 ? witness_json(sq, *w4) : json(nullptr));
  bool listed_dev = false;
  for (const auto& w : manipulations_at(mu, profile, 0b01111, {x, x, y, y, zero}))
    listed_dev = listed_dev || (w.deviation() == Ballots{one, one, one, one} && w.outcome_deviant == one);
  rep.check("mu*.coalitional.example", listed_dev, "coalition {1,2,3,4} deviating to (1,1,1,1) turns 0 into 1");

  auto axioms = check_axioms(mu, all_elements(sq), opts);
  rep.check("mu*.axioms",
            axioms.anonymous.holds && axioms.locally_ji_neutral.holds && axioms.locally_sovereign.holds &&
                axioms.locally_idempotent.holds && axioms.efficient.holds,
            "anonymous, JI-neutral, sovereign, idempotent and efficient");

  // Outcome always among the ballots on the square.
  std::optional<Ballots> outside;
  for (std::uint64_t k = 0; k < mu.indexer().total() && !outside; ++k) {
    Ballots b = mu.indexer().decode(k);
    if (std::find(b.begin(), b.end(), mu.at(k)) == b.end()) outside = b;
  }
  rep.check("mu*.among_ballots", !outside, "over all 4^5 profiles the outcome is one of the ballots",
            outside ? names_json(sq, *outside) : json(nullptr));
  {
    const Lattice cube = build_boolean_hypercube(3);
    const Ballots b{cube.id("110"), cube.id("011"), cube.id("101")};
    const ElementId m = extended_median(cube, b);
    rep.check("cube.median_outside", m == cube.id("111") && std::find(b.begin(), b.end(), m) == b.end(),
              "mu((1,1,0),(0,1,1),(1,0,1)) = " + cube.name(m) + ", not among the ballots");
  }

  // The order-statistic property of medians on chains fails here.
  {
    const Ballots b{one, x, y};
    const ElementId m = extended_median(sq, b);
    std::size_t below = 0, above = 0;
    for (ElementId e : b) {
      below += sq.leq(e, m);
      above += sq.leq(m, e);
    }
    rep.check("ste.fails", m == one && below == 3 && above == 1 && std::min(below, above) < 2,
              "at (1,x,y): " + std::to_string(below) + " ballots below, " + std::to_string(above) + " above");
    const Lattice c4 = build_chain(4);
    std::optional<std::vector<ElementId>> bad;
    bad = detail::find_tuple(4, 3, [&](auto& t) {
      const ElementId med = extended_median(c4, t);
      std::size_t lo = 0, hi = 0;
      for (ElementId e : t) {
        lo += c4.leq(e, med);
        hi += c4.leq(med, e);
      }
      return std::min(lo, hi) < 2;
    });
    rep.check("ste.chain", !bad, "holds for all 64 triples on the 4-chain", detail::tuple_json(c4, bad));
  }
  {
    // Labels: a = 1 (top), d = 0 (bottom), b = x, c = y.
    const ElementId a = one, b = x, c = y, d = zero;
    const bool fails = between(sq, a, b, d) && between(sq, b, a, c) && !between(sq, c, b, d);
    rep.check("ste1.fails", fails, "b in [a,d], a in [b,c], b not in [c,d]",
              names_json(sq, Ballots{b, a, d, c}));
    auto first_bad = detail::find_tuple(4, 4, [&](auto& t) {
      // (x, y, v, z): x != y, x in [y,v], y in [x,z], x not in [v,z].
      return t[0] != t[1] && between(sq, t[1], t[0], t[2]) && between(sq, t[0], t[1], t[3]) &&
             !between(sq, t[2], t[0], t[3]);
    });
    if (first_bad) rep.note("first interval-property failure (x,y,v,z): " + names_json(sq, *first_bad).dump());
  }
  rep.finish();
  return rep;
}

}  // namespace medlat
