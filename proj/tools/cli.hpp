#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "medlat/io.hpp"
#include "medlat/suites.hpp"

namespace medlat::cli {

struct Options {
  std::string lattice, rule, ballots, json_path, preorder, to, semantics = "truthful", shape = "square",
                                                             pref_class = "all";
  std::size_t workers = 1, size = 2, samples = 0;
  std::optional<std::size_t> voters;
  std::uint64_t cap = 100'000'000, seed = 1;
  bool no_timing = false;
};

namespace detail {

inline LatticePtr builtin(const std::string& shape, std::size_t k) {
  if (shape == "square") return share(boolean_square());
  if (shape == "chain") return share(build_chain(k));
  if (shape == "cube") return share(build_boolean_hypercube(k));
  if (shape == "grid") return share(build_product(build_chain(k), build_chain(k)));
  throw Error(ErrorKind::InvalidInput, "unknown shape '" + shape + "' (square, chain, cube, grid)", {shape});
}

inline LatticePtr lattice_or(const Options& o, LatticePtr fallback) {
  return o.lattice.empty() ? fallback : share(io::lattice_from_json(io::read_file(o.lattice)));
}

inline LatticePtr require_lattice(const Options& o) {
  if (o.lattice.empty()) throw Error(ErrorKind::InvalidInput, "--lattice is required");
  return lattice_or(o, nullptr);
}

inline VerifyOptions verify_options(const Options& o) {
  VerifyOptions v;
  v.workers = o.workers == 0 ? 1 : o.workers;
  v.cap = o.cap;
  if (o.semantics == "truthful")
    v.semantics = CoalitionSemantics::TruthfulOrigin;
  else if (o.semantics == "literal")
    v.semantics = CoalitionSemantics::Literal;
  else
    throw Error(ErrorKind::InvalidInput, "--semantics must be truthful or literal", {o.semantics});
  v.enumeration.max_elements = 8;
  return v;
}

inline Ballots parse_ballots(const Lattice& l, const std::string& csv) {
  Ballots out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(l.id(item));
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "--ballots is empty");
  return out;
}

inline int emit(const Options& o, const io::json& j, std::ostream& out) {
  if (o.json_path.empty())
    out << j.dump(2) << "\n";
  else
    io::write_file(o.json_path, j);
  return 0;
}

inline int emit_report(const Options& o, const VerificationReport& r, std::ostream& out) {
  out << r.to_text(!o.no_timing);
  if (!o.json_path.empty()) io::write_file(o.json_path, r.to_json(!o.no_timing));
  return r.passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int lattice_build(const Options& o, std::ostream& out) {
  return emit(o, io::lattice_to_json(*builtin(o.shape, o.size)), out);
}

inline int lattice_inspect(const Options& o, std::ostream& out) {
  const LatticePtr lp = require_lattice(o);
  const Lattice& l = *lp;
  auto names = [&](const std::vector<ElementId>& v) { return names_json(l, v); };
  io::json j = {{"size", l.size()},
                {"bottom", l.name(l.bottom())},
                {"top", l.name(l.top())},
                {"atoms", names(l.atoms())},
                {"join_irreducibles", names(l.join_irreducibles())},
                {"chain", l.is_chain()},
                {"boolean", l.is_boolean()},
                {"canonical", io::lattice_to_json(l)}};
  return emit(o, j, out);
}

inline int prefs_enum(const Options& o, std::ostream& out) {
  const LatticePtr l = lattice_or(o, share(boolean_square()));
  const auto v = verify_options(o);
  io::json j = io::json::object();
  auto add = [&](const char* name, const std::vector<TotalPreorder>& ps) {
    io::json arr = io::json::array();
    for (const auto& p : ps) arr.push_back(io::preorder_to_json(p, *l));
    j[name] = {{"count", ps.size()}, {"preorders", arr}};
  };
  const std::string& c = o.pref_class;
  if (c == "unimodal" || c == "all") add("unimodal", enumerate_unimodal(*l, v.enumeration));
  if (c == "lsu" || c == "all") add("lsu", enumerate_lsu(*l, v.enumeration));
  if (c == "separable" || (c == "all" && l->is_boolean())) add("separable", enumerate_separable(*l, v.enumeration));
  if (c == "topped" || c == "all") add("topped", enumerate_topped_preorders(*l, v.enumeration));
  if (j.empty()) throw Error(ErrorKind::InvalidInput, "--class must be unimodal, lsu, separable, topped or all", {c});
  return emit(o, j, out);
}

inline int prefs_check(const Options& o, std::ostream& out) {
  const LatticePtr l = lattice_or(o, share(boolean_square()));
  if (o.preorder.empty()) throw Error(ErrorKind::InvalidInput, "--preorder is required");
  const TotalPreorder p = io::preorder_from_json(io::read_file(o.preorder), *l);
  io::json j = {{"preorder", io::preorder_to_json(p, *l)},
                {"top", l->name(p.top())},
                {"unimodal", is_unimodal(p, *l)},
                {"lsu", is_locally_strictly_unimodal(p, *l)}};
  if (l->is_boolean()) j["separable"] = is_separable(p, *l);
  return emit(o, j, out);
}

inline io::AnyRule load_rule(const Options& o, const LatticePtr& l) {
  if (o.rule.empty()) throw Error(ErrorKind::InvalidInput, "--rule is required");
  return io::rule_from_json(io::read_file(o.rule), l);
}

inline int rule_eval(const Options& o, std::ostream& out) {
  const LatticePtr l = lattice_or(o, share(boolean_square()));
  const io::AnyRule r = load_rule(o, l);
  const Ballots b = parse_ballots(*l, o.ballots);
  if (b.size() != io::voters_of(r))
    throw Error(ErrorKind::ArityMismatch, std::to_string(b.size()) + " ballots for " +
                                              std::to_string(io::voters_of(r)) + " voters");
  out << l->name(io::eval_any(r, b)) << "\n";
  return 0;
}

inline int rule_convert(const Options& o, std::ostream& out) {
  const LatticePtr l = lattice_or(o, share(boolean_square()));
  const io::AnyRule r = load_rule(o, l);
  const ExplicitRule table = io::tabulate_any(r);
  if (o.to == "explicit") return emit(o, io::rule_to_json(table), out);
  if (o.to != "tree" && o.to != "committee")
    throw Error(ErrorKind::InvalidInput, "--to must be explicit, tree or committee", {o.to});
  const auto bm = is_b_monotonic(table, verify_options(o));
  if (!bm.holds)
    throw Error(ErrorKind::InvalidInput, "rule is not monotonic; no median-tree form: " +
                                             witness_json(*l, *bm.witness).dump());
  const MedianTree t = build_canonical_median_tree(l, corners(table), table.voters());
  if (o.to == "tree") return emit(o, io::rule_to_json(t), out);
  return emit(o, io::rule_to_json(tree_to_committee(t)), out);
}

inline int rule_check(const Options& o, std::ostream& out) {
  const LatticePtr l = lattice_or(o, share(boolean_square()));
  const io::AnyRule any = load_rule(o, l);
  const ExplicitRule r = io::tabulate_any(any);
  const auto v = verify_options(o);
  VerificationReport rep("rule-check");
  auto bm = is_b_monotonic(r, v);
  rep.check("b_monotonic", bm.holds, "", bm.witness ? witness_json(*l, *bm.witness) : io::json(nullptr));
  bool full = true;
  for (const auto& s : r.ballot_spaces()) full = full && s.size() == l->size();
  if (!full) {
    rep.note("ballot spaces are restricted; domain checks skipped");
  } else {
    const std::size_t n = r.voters();
    const auto u = DomainDescriptor::full_unimodal(*l, n, v.enumeration);
    const auto s = DomainDescriptor::full_lsu(*l, n, v.enumeration);
    for (auto [name, d] : {std::pair{"unimodal", &u}, std::pair{"lsu", &s}}) {
      auto sp = is_strategy_proof(r, *d, v);
      rep.check(std::string("sp_") + name, sp.holds, "", sp.witness ? witness_json(*l, *sp.witness) : io::json(nullptr));
      auto w = find_coalitional_manipulation(r, *d, v);
      rep.check(std::string("coalitional_sp_") + name, !w, "", w ? witness_json(*l, *w) : io::json(nullptr));
    }
  }
  return emit_report(o, rep, out);
}

// ---------------------------------------------------------------------------

inline VerificationReport run_suite(const std::string& name, const Options& o) {
  const auto v = verify_options(o);
  auto n_or = [&](std::size_t d) { return o.voters.value_or(d); };
  auto samples_or = [&](std::size_t d) { return o.samples ? o.samples : d; };
  if (name == "claim1") return claim1_suite(*lattice_or(o, share(boolean_square())));
  if (name == "lemma1") return lemma1_suite(lattice_or(o, share(boolean_square())), n_or(2), samples_or(100), o.seed, v);
  if (name == "lemma2") return lemma2_suite(lattice_or(o, share(boolean_square())), n_or(3), v);
  if (name == "theorem1")
    return theorem1_suite(lattice_or(o, share(boolean_square())), n_or(2), samples_or(200), o.seed, 3, v);
  if (name == "theorem2") return theorem2_suite(lattice_or(o, share(boolean_square())), v);
  if (name == "theorem3") return theorem3_suite(lattice_or(o, share(boolean_square())), n_or(3), v);
  if (name == "corollary1")
    return corollary1_suite(lattice_or(o, share(build_chain(4))), n_or(2), samples_or(100), o.seed, v);
  if (name == "boolean-square") return boolean_square_suite(v);
  throw Error(ErrorKind::InvalidInput, "unknown suite '" + name + "'", {name});
}

/// The standard battery over the built-in lattices.
inline VerificationReport run_all(const Options& o) {
  const auto v = verify_options(o);
  VerificationReport all("all");
  const LatticePtr sq = share(boolean_square()), cube = share(build_boolean_hypercube(3)),
                   chain = share(build_chain(4)), grid = share(build_product(build_chain(3), build_chain(3)));
  all.absorb(boolean_square_suite(v), "boolean-square");
  for (auto [label, l] : {std::pair{"square", sq}, std::pair{"cube", cube}, std::pair{"chain4", chain},
                          std::pair{"grid3x3", grid}})
    all.absorb(claim1_suite(*l), std::string("claim1[") + label + "]");
  all.absorb(lemma1_suite(sq, 2, 100, o.seed, v), "lemma1[square]");
  all.absorb(lemma2_suite(sq, 3, v), "lemma2[square]");
  all.absorb(lemma2_suite(cube, 3, v), "lemma2[cube]");
  all.absorb(theorem1_suite(sq, 2, 200, o.seed, 3, v), "theorem1[square]");
  all.absorb(theorem1_suite(chain, 2, 100, o.seed, 2, v), "theorem1[chain4]");
  all.absorb(theorem2_suite(sq, v), "theorem2[square]");
  all.absorb(theorem2_suite(chain, v), "theorem2[chain4]");
  for (std::size_t n : {3, 4, 5}) all.absorb(theorem3_suite(sq, n, v), "theorem3[square]");
  for (std::size_t n : {2, 3}) all.absorb(corollary1_suite(chain, n, n == 2 ? 100 : 20, o.seed, v), "corollary1[chain4]");
  all.finish();
  return all;
}

inline int verify(const std::string& name, const Options& o, std::ostream& out) {
  if (name == "all" && o.lattice.empty()) return emit_report(o, run_all(o), out);
  if (name == "all") {
    VerificationReport all("all");
    for (const char* s : {"claim1", "lemma1", "lemma2", "theorem1", "theorem2", "theorem3", "corollary1"}) {
      try {
        all.absorb(run_suite(s, o), s);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAChain && e.kind() != ErrorKind::NotEnoughAtoms &&
            e.kind() != ErrorKind::NoSuitableSublattice && e.kind() != ErrorKind::TooLarge)
          throw;
        all.note(std::string(s) + " skipped: " + e.what());
      }
    }
    all.finish();
    return emit_report(o, all, out);
  }
  return emit_report(o, run_suite(name, o), out);
}

}  // namespace detail

/// Runs one command; returns 0 if every check passes, 1 if a check fails and 2
/// on usage, input or validation errors.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Median-lattice voting rules: lattices, preferences, rules and verification suites", "medlat"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* c) {
    c->add_option("--lattice", o.lattice, "lattice file (names and covers)");
    c->add_option("--json", o.json_path, "write machine-readable output here");
    c->add_option("--workers", o.workers, "worker threads for verification sweeps");
    c->add_option("--cap", o.cap, "search-space cap in rule evaluations");
    c->add_option("--semantics", o.semantics, "coalitional reading: truthful or literal");
  };

  std::string action;
  auto* lat = app.add_subcommand("lattice", "build or inspect lattices");
  lat->add_option("action", action, "build | inspect")->required()->check(CLI::IsMember({"build", "inspect"}));
  common(lat);
  lat->add_option("--shape", o.shape, "square | chain | cube | grid");
  lat->add_option("--size", o.size, "chain length, cube dimension or grid side");

  auto* prefs = app.add_subcommand("prefs", "enumerate or classify preorders");
  prefs->add_option("action", action, "enum | check")->required()->check(CLI::IsMember({"enum", "check"}));
  common(prefs);
  prefs->add_option("--class", o.pref_class, "unimodal | lsu | separable | topped | all");
  prefs->add_option("--preorder", o.preorder, "preorder file: rank classes, best first");

  auto* rule = app.add_subcommand("rule", "evaluate, convert or check a rule");
  rule->add_option("action", action, "eval | convert | check")
      ->required()
      ->check(CLI::IsMember({"eval", "convert", "check"}));
  common(rule);
  rule->add_option("--rule", o.rule, "rule file");
  rule->add_option("--ballots", o.ballots, "comma-separated element names");
  rule->add_option("--to", o.to, "explicit | tree | committee");
  rule->add_flag("--no-timing", o.no_timing, "omit timings from reports");

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  ver->add_option("suite", suite, "claim1 | lemma1 | lemma2 | theorem1 | theorem2 | theorem3 | corollary1 | "
                                  "boolean-square | all")
      ->required()
      ->check(CLI::IsMember({"claim1", "lemma1", "lemma2", "theorem1", "theorem2", "theorem3", "corollary1",
                             "boolean-square", "all"}));
  common(ver);
  ver->add_option("--voters", o.voters, "number of voters");
  ver->add_option("--samples", o.samples, "random rules to sample");
  ver->add_option("--seed", o.seed, "sampling seed");
  ver->add_flag("--no-timing", o.no_timing, "omit timings from reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (lat->parsed()) return action == "build" ? detail::lattice_build(o, out) : detail::lattice_inspect(o, out);
    if (prefs->parsed()) return action == "enum" ? detail::prefs_enum(o, out) : detail::prefs_check(o, out);
    if (rule->parsed()) {
      if (action == "eval") return detail::rule_eval(o, out);
      if (action == "convert") return detail::rule_convert(o, out);
      return detail::rule_check(o, out);
    }
    return detail::verify(suite, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!e.witness().empty()) {
      err << "witness:";
      for (const auto& w : e.witness()) err << " " << w;
      err << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace medlat::cli
