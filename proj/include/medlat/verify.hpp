#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "medlat/error.hpp"
#include "medlat/lattice.hpp"
#include "medlat/parallel.hpp"
#include "medlat/preorder.hpp"
#include "medlat/rules.hpp"

namespace medlat {

enum class CoalitionSemantics {
  TruthfulOrigin,  // deviations start from the coalition's tops
  Literal,         // deviations start from arbitrary ballots
};

struct VerifyOptions {
  std::size_t workers = 1;
  std::uint64_t cap = 100'000'000;
  CoalitionSemantics semantics = CoalitionSemantics::TruthfulOrigin;
  EnumerationOptions enumeration{};
  // Coalition sizes searched by find_coalitional_manipulation; 0 = no upper bound.
  std::size_t min_coalition_size = 1;
  std::size_t max_coalition_size = 0;
};

inline std::vector<std::size_t> members_of(Coalition c) {
  std::vector<std::size_t> out;
  for (; c; c &= c - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(c)));
  return out;
}

// ---------------------------------------------------------------------------
// B-monotonicity

struct BMonotonicityWitness {
  Ballots ballots;
  std::size_t voter = 0;
  ElementId alternative = 0;
  ElementId outcome = 0;
  ElementId alternative_outcome = 0;
};

struct BMonotonicityResult {
  bool holds = true;
  std::optional<BMonotonicityWitness> witness;
};

/// f(x) must lie in [x_i, f(x'_i, x_-i)] for every x, i and x'_i. The first
/// failure in (ballot index, voter, alternative) order is reported.
inline BMonotonicityResult is_b_monotonic(const ExplicitRule& r, const VerifyOptions& opts = {}) {
  const Lattice& l = r.lattice();
  const BallotIndexer& idx = r.indexer();
  const std::size_t n = idx.voters();
  std::uint64_t width = 0;
  for (const auto& s : idx.spaces()) width += s.size();
  if (static_cast<double>(idx.total()) * static_cast<double>(width) > static_cast<double>(opts.cap))
    throw Error(ErrorKind::TooLarge, "monotonicity search exceeds cap");
  std::vector<std::uint64_t> stride(n);
  for (std::size_t i = 0; i < n; ++i) stride[i] = idx.stride(i);

  auto first_failure = [&](std::uint64_t k, BMonotonicityWitness* out) {
    Ballots b = idx.decode(k);
    const ElementId fx = r.at(k);
    for (std::size_t i = 0; i < n; ++i) {
      const auto pos = static_cast<std::uint64_t>(idx.position(i, b[i]));
      const std::uint64_t base = k - pos * stride[i];
      for (std::size_t p = 0; p < idx.spaces()[i].size(); ++p) {
        const ElementId fy = r.at(base + p * stride[i]);
        if (!between(l, b[i], fx, fy)) {
          if (out) *out = {b, i, idx.spaces()[i][p], fx, fy};
          return true;
        }
      }
    }
    return false;
  };
  auto hit = parallel_find_first(idx.total(), opts.workers, [&](std::uint64_t k) { return first_failure(k, nullptr); });
  BMonotonicityResult res;
  if (hit) {
    BMonotonicityWitness w;
    first_failure(*hit, &w);
    res.holds = false;
    res.witness = w;
  }
  return res;
}

template <VotingRule R>
BMonotonicityResult is_b_monotonic(const R& r, const VerifyOptions& opts = {}) {
  return is_b_monotonic(tabulate(r), opts);
}

// ---------------------------------------------------------------------------
// Preference domains

enum class DomainKind { FullUnimodal, FullLsu, Custom };

/// Per-voter preference sets D_i.
struct DomainDescriptor {
  DomainKind kind = DomainKind::Custom;
  std::vector<std::vector<TotalPreorder>> prefs;

  static DomainDescriptor full_unimodal(const Lattice& l, std::size_t n, const EnumerationOptions& e = {}) {
    return {DomainKind::FullUnimodal, std::vector<std::vector<TotalPreorder>>(n, enumerate_unimodal(l, e))};
  }
  static DomainDescriptor full_lsu(const Lattice& l, std::size_t n, const EnumerationOptions& e = {}) {
    return {DomainKind::FullLsu, std::vector<std::vector<TotalPreorder>>(n, enumerate_lsu(l, e))};
  }
  static DomainDescriptor custom(std::vector<std::vector<TotalPreorder>> p) {
    return {DomainKind::Custom, std::move(p)};
  }

  std::size_t voters() const noexcept { return prefs.size(); }
};

inline std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::FullUnimodal: return "full unimodal";
    case DomainKind::FullLsu: return "full locally strictly unimodal";
    case DomainKind::Custom: return "custom";
  }
  return "custom";
}

namespace detail {

inline void check_domain(const ExplicitRule& r, const DomainDescriptor& d) {
  if (d.voters() != r.voters())
    throw Error(ErrorKind::ArityMismatch, "domain has " + std::to_string(d.voters()) + " voters, rule has " +
                                              std::to_string(r.voters()));
  for (std::size_t i = 0; i < d.voters(); ++i)
    for (const auto& p : d.prefs[i]) {
      if (p.size() != r.lattice().size())
        throw Error(ErrorKind::CarrierMismatch, "preference carrier differs from the lattice");
      if (r.indexer().position(i, p.top()) < 0)
        throw Error(ErrorKind::BallotOutOfSpace, "top of a preference of voter " + std::to_string(i + 1) +
                                                     " is outside the ballot space",
                    {r.lattice().name(p.top())});
    }
}

/// better[t][a*m+b]: some preference in the set with top t strictly prefers a to b.
struct BetterTable {
  std::size_t m = 0;
  std::vector<std::vector<bool>> by_top;
  std::vector<bool> any;
  std::vector<bool> has_top;

  BetterTable(const std::vector<TotalPreorder>& prefs, std::size_t m_) : m(m_) {
    by_top.assign(m, std::vector<bool>(m * m, false));
    any.assign(m * m, false);
    has_top.assign(m, false);
    for (const auto& p : prefs) {
      const ElementId t = p.top();
      has_top[t] = true;
      for (ElementId a = 0; a < m; ++a)
        for (ElementId b = 0; b < m; ++b)
          if (p.prefers(a, b)) by_top[t][a * m + b] = any[a * m + b] = true;
    }
  }
  bool better(ElementId top, ElementId a, ElementId b) const { return by_top[top][a * m + b]; }
  bool better_any(ElementId a, ElementId b) const { return any[a * m + b]; }
};

inline const TotalPreorder* first_with(const std::vector<TotalPreorder>& prefs, std::optional<ElementId> top,
                                       ElementId a, ElementId b) {
  for (const auto& p : prefs)
    if ((!top || p.top() == *top) && p.prefers(a, b)) return &p;
  return nullptr;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual strategy-proofness

struct StrategyProofnessWitness {
  std::size_t voter = 0;
  TotalPreorder preference;
  Ballots ballots;  // truthful: the voter's entry is the top
  ElementId deviation = 0;
  ElementId outcome_truthful = 0;
  ElementId outcome_deviant = 0;
};

struct StrategyProofnessResult {
  bool holds = true;
  std::optional<StrategyProofnessWitness> witness;
};

/// Direct quantification in (voter, preference, context, deviation) order.
inline StrategyProofnessResult is_strategy_proof(const ExplicitRule& r, const DomainDescriptor& d,
                                                 const VerifyOptions& opts = {}) {
  detail::check_domain(r, d);
  const BallotIndexer& idx = r.indexer();
  const std::size_t n = r.voters();
  double cost = 0;
  std::size_t widest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cost += static_cast<double>(d.prefs[i].size());
    widest = std::max(widest, idx.spaces()[i].size());
  }
  if (cost * static_cast<double>(idx.total()) * static_cast<double>(widest) > static_cast<double>(opts.cap))
    throw Error(ErrorKind::TooLarge, "strategy-proofness search exceeds cap");

  for (std::size_t i = 0; i < n; ++i) {
    const auto& space = idx.spaces()[i];
    const std::uint64_t stride = idx.stride(i);
    const std::uint64_t hi = stride * space.size();
    const std::uint64_t contexts = idx.total() / space.size();
    for (const auto& p : d.prefs[i]) {
      const ElementId t = p.top();
      const auto tpos = static_cast<std::uint64_t>(idx.position(i, t));
      // Context c splits into the digits above and below voter i.
      auto full_index = [&](std::uint64_t c, std::uint64_t pos) { return (c / stride) * hi + pos * stride + c % stride; };
      auto check = [&](std::uint64_t c, std::size_t* dev) {
        const ElementId o = r.at(full_index(c, tpos));
        for (std::size_t q = 0; q < space.size(); ++q)
          if (p.prefers(r.at(full_index(c, q)), o)) {
            if (dev) *dev = q;
            return true;
          }
        return false;
      };
      auto hit = parallel_find_first(contexts, opts.workers, [&](std::uint64_t c) { return check(c, nullptr); });
      if (hit) {
        std::size_t q = 0;
        check(*hit, &q);
        StrategyProofnessWitness w;
        w.voter = i;
        w.preference = p;
        w.ballots = idx.decode(full_index(*hit, tpos));
        w.deviation = space[q];
        w.outcome_truthful = r.at(full_index(*hit, tpos));
        w.outcome_deviant = r.at(full_index(*hit, q));
        return {false, w};
      }
    }
  }
  return {};
}

template <VotingRule R>
StrategyProofnessResult is_strategy_proof(const R& r, const DomainDescriptor& d, const VerifyOptions& opts = {}) {
  return is_strategy_proof(tabulate(r), d, opts);
}

// ---------------------------------------------------------------------------
// Coalitional manipulation

struct ManipulationWitness {
  PreferenceProfile profile;
  Coalition coalition = 0;
  Ballots ballots;    // origin ballots; coalition members at their tops unless literal
  Ballots deviated;   // ballots after the coalition deviates
  ElementId outcome_truthful = 0;
  ElementId outcome_deviant = 0;

  Ballots deviation() const {
    Ballots out;
    for (std::size_t i : members_of(coalition)) out.push_back(deviated[i]);
    return out;
  }
  Ballots context() const {
    Ballots out;
    for (std::size_t i = 0; i < ballots.size(); ++i)
      if (!((coalition >> i) & 1)) out.push_back(ballots[i]);
    return out;
  }
};

namespace detail {

/// Fills in the preference profile for a found manipulation.
inline PreferenceProfile witness_profile(const DomainDescriptor& d, Coalition c, const Ballots& origin,
                                         ElementId truthful, ElementId deviant, CoalitionSemantics sem) {
  PreferenceProfile prof;
  for (std::size_t i = 0; i < d.voters(); ++i) {
    const auto& prefs = d.prefs[i];
    if ((c >> i) & 1) {
      std::optional<ElementId> top;
      if (sem == CoalitionSemantics::TruthfulOrigin) top = origin[i];
      prof.push_back(*first_with(prefs, top, deviant, truthful));
    } else {
      const TotalPreorder* pick = nullptr;
      for (const auto& p : prefs)
        if (p.top() == origin[i]) {
          pick = &p;
          break;
        }
      prof.push_back(pick ? *pick : prefs.front());
    }
  }
  return prof;
}

}  // namespace detail

/// Coalitions by size then bitmask; within a coalition the origin (member
/// tops, then context) and then the deviation, each in mixed-radix order.
inline std::optional<ManipulationWitness> find_coalitional_manipulation(const ExplicitRule& r,
                                                                        const DomainDescriptor& d,
                                                                        const VerifyOptions& opts = {}) {
  detail::check_domain(r, d);
  const Lattice& l = r.lattice();
  const BallotIndexer& idx = r.indexer();
  const std::size_t n = r.voters();
  const bool literal = opts.semantics == CoalitionSemantics::Literal;
  for (std::size_t i = 0; i < n; ++i)
    if (d.prefs[i].empty()) return std::nullopt;

  std::vector<detail::BetterTable> better;
  for (std::size_t i = 0; i < n; ++i) better.emplace_back(d.prefs[i], l.size());
  // Origin digits for coalition members: available tops (truthful) or all ballots (literal).
  std::vector<std::vector<ElementId>> origin_space(n);
  for (std::size_t i = 0; i < n; ++i)
    for (ElementId e : idx.spaces()[i])
      if (literal || better[i].has_top[e]) origin_space[i].push_back(e);

  std::vector<Coalition> order;
  for (Coalition c = 1; c < (Coalition{1} << n); ++c) {
    const auto size = static_cast<std::size_t>(std::popcount(c));
    if (size >= opts.min_coalition_size && (opts.max_coalition_size == 0 || size <= opts.max_coalition_size))
      order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](Coalition a, Coalition b) { return std::popcount(a) < std::popcount(b); });

  double cost = 0;
  for (Coalition c : order) {
    double part = 1;
    for (std::size_t i = 0; i < n; ++i)
      part *= ((c >> i) & 1) ? static_cast<double>(origin_space[i].size() * idx.spaces()[i].size())
                             : static_cast<double>(idx.spaces()[i].size());
    cost += part;
  }
  if (cost > static_cast<double>(opts.cap)) throw Error(ErrorKind::TooLarge, "coalitional search exceeds cap");

  for (Coalition c : order) {
    BallotSpaces origin_spaces(n), dev_spaces;
    std::vector<std::size_t> members = members_of(c);
    for (std::size_t i = 0; i < n; ++i) origin_spaces[i] = ((c >> i) & 1) ? origin_space[i] : idx.spaces()[i];
    // Origin order: member digits first (tops), then the context.
    BallotSpaces origin_ordered;
    std::vector<std::size_t> origin_voters;
    for (std::size_t i : members) origin_ordered.push_back(origin_spaces[i]), origin_voters.push_back(i);
    for (std::size_t i = 0; i < n; ++i)
      if (!((c >> i) & 1)) origin_ordered.push_back(origin_spaces[i]), origin_voters.push_back(i);
    for (std::size_t i : members) dev_spaces.push_back(idx.spaces()[i]);
    bool empty = false;
    for (const auto& s : origin_ordered) empty = empty || s.empty();
    if (empty) continue;
    const BallotIndexer origin_idx(origin_ordered, l.size());
    const BallotIndexer dev_idx(dev_spaces, l.size());

    auto scan = [&](std::uint64_t k, Ballots* origin_out, Ballots* dev_out) {
      Ballots digits = origin_idx.decode(k);
      Ballots b(n);
      for (std::size_t p = 0; p < digits.size(); ++p) b[origin_voters[p]] = digits[p];
      const ElementId o = r(b);
      Ballots dv = b;
      Ballots dd;
      for (std::uint64_t q = 0; q < dev_idx.total(); ++q) {
        dev_idx.decode(q, dd);
        for (std::size_t p = 0; p < members.size(); ++p) dv[members[p]] = dd[p];
        const ElementId o2 = r(dv);
        if (o2 == o) continue;
        bool all = true;
        for (std::size_t i : members) {
          const bool ok = literal ? better[i].better_any(o2, o) : better[i].better(b[i], o2, o);
          if (!ok) {
            all = false;
            break;
          }
        }
        if (all) {
          if (origin_out) *origin_out = b;
          if (dev_out) *dev_out = dv;
          return true;
        }
      }
      return false;
    };
    auto hit = parallel_find_first(origin_idx.total(), opts.workers,
                                   [&](std::uint64_t k) { return scan(k, nullptr, nullptr); });
    if (hit) {
      ManipulationWitness w;
      scan(*hit, &w.ballots, &w.deviated);
      w.coalition = c;
      w.outcome_truthful = r(w.ballots);
      w.outcome_deviant = r(w.deviated);
      w.profile = detail::witness_profile(d, c, w.ballots, w.outcome_truthful, w.outcome_deviant, opts.semantics);
      return w;
    }
  }
  return std::nullopt;
}

template <VotingRule R>
std::optional<ManipulationWitness> find_coalitional_manipulation(const R& r, const DomainDescriptor& d,
                                                                 const VerifyOptions& opts = {}) {
  return find_coalitional_manipulation(tabulate(r), d, opts);
}

/// Every successful joint deviation of `coalition` from the fixed origin
/// ballots, under the fixed preference profile, in deviation order.
inline std::vector<ManipulationWitness> manipulations_at(const ExplicitRule& r, const PreferenceProfile& profile,
                                                         Coalition coalition, const Ballots& origin) {
  const BallotIndexer& idx = r.indexer();
  if (profile.size() != r.voters()) throw Error(ErrorKind::ArityMismatch, "profile size differs from voter count");
  std::vector<std::size_t> members = members_of(coalition);
  BallotSpaces dev_spaces;
  for (std::size_t i : members) dev_spaces.push_back(idx.spaces()[i]);
  const BallotIndexer dev_idx(dev_spaces, r.lattice().size());
  const ElementId o = r(origin);
  std::vector<ManipulationWitness> out;
  Ballots dv = origin, dd;
  for (std::uint64_t q = 0; q < dev_idx.total(); ++q) {
    dev_idx.decode(q, dd);
    for (std::size_t p = 0; p < members.size(); ++p) dv[members[p]] = dd[p];
    const ElementId o2 = r(dv);
    bool all = !members.empty();
    for (std::size_t i : members) all = all && profile[i].prefers(o2, o);
    if (all) out.push_back({profile, coalition, origin, dv, o, o2});
  }
  return out;
}

/// Recomputes both outcomes and the strict preferences of every member.
template <VotingRule R>
bool validate_witness(const R& r, const ManipulationWitness& w,
                      CoalitionSemantics sem = CoalitionSemantics::TruthfulOrigin) {
  if (w.coalition == 0 || w.profile.size() != r.voters()) return false;
  if (r(w.ballots) != w.outcome_truthful || r(w.deviated) != w.outcome_deviant) return false;
  for (std::size_t i = 0; i < r.voters(); ++i) {
    const bool member = (w.coalition >> i) & 1;
    if (!member && w.ballots[i] != w.deviated[i]) return false;
    if (member) {
      if (sem == CoalitionSemantics::TruthfulOrigin && w.profile[i].top() != w.ballots[i]) return false;
      if (!w.profile[i].prefers(w.outcome_deviant, w.outcome_truthful)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural axioms

struct AxiomOutcome {
  bool holds = true;
  Ballots witness;
  std::string detail;
};

struct AxiomReport {
  AxiomOutcome anonymous, locally_ji_neutral, locally_sovereign, locally_idempotent, efficient;
};

namespace detail {

inline void require_full_spaces(const ExplicitRule& r) {
  for (const auto& s : r.ballot_spaces())
    if (s.size() != r.lattice().size())
      throw Error(ErrorKind::InvalidInput, "axiom checks need unrestricted ballot spaces");
}

inline std::string ballots_string(const Lattice& l, const Ballots& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + l.name(b[i]);
  return s + ")";
}

}  // namespace detail

/// Invariance under adjacent transpositions of voters.
inline AxiomOutcome is_anonymous(const ExplicitRule& r) {
  detail::require_full_spaces(r);
  const auto& idx = r.indexer();
  Ballots b;
  for (std::uint64_t k = 0; k < idx.total(); ++k) {
    idx.decode(k, b);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      if (b[i] == b[i + 1]) continue;
      Ballots s = b;
      std::swap(s[i], s[i + 1]);
      if (r(s) != r.at(k))
        return {false, b, "swapping voters " + std::to_string(i + 1) + " and " + std::to_string(i + 2) + " changes the outcome"};
    }
  }
  return {};
}

/// tau swaps two join-irreducibles of Y and fixes everything else, including
/// elements outside Y.
inline AxiomOutcome is_locally_ji_neutral(const ExplicitRule& r, const std::vector<ElementId>& y) {
  detail::require_full_spaces(r);
  const Lattice& l = r.lattice();
  std::vector<ElementId> ji;
  for (ElementId e : y)
    if (l.is_join_irreducible(e)) ji.push_back(e);
  const BallotIndexer yidx(BallotSpaces(r.voters(), y), l.size());
  Ballots b;
  for (std::size_t a = 0; a < ji.size(); ++a)
    for (std::size_t c = a + 1; c < ji.size(); ++c) {
      const ElementId j = ji[a], k = ji[c];
      auto tau = [&](ElementId e) { return e == j ? k : e == k ? j : e; };
      for (std::uint64_t q = 0; q < yidx.total(); ++q) {
        yidx.decode(q, b);
        Ballots t = b;
        for (auto& e : t) e = tau(e);
        if (r(t) != tau(r(b)))
          return {false, b, "transposing " + l.name(j) + " and " + l.name(k) + " does not commute with the rule"};
      }
    }
  return {};
}

/// Every element of Y is the outcome of some ballot profile drawn from Y.
inline AxiomOutcome is_locally_sovereign(const ExplicitRule& r, const std::vector<ElementId>& y) {
  const Lattice& l = r.lattice();
  const BallotIndexer yidx(BallotSpaces(r.voters(), y), l.size());
  std::vector<bool> hit(l.size(), false);
  Ballots b;
  for (std::uint64_t q = 0; q < yidx.total(); ++q) {
    yidx.decode(q, b);
    hit[r(b)] = true;
  }
  for (ElementId e : y)
    if (!hit[e]) return {false, {e}, l.name(e) + " is never selected"};
  return {};
}

inline AxiomOutcome is_locally_idempotent(const ExplicitRule& r, const std::vector<ElementId>& y) {
  for (ElementId e : y) {
    Ballots b(r.voters(), e);
    if (r(b) != e) return {false, b, "unanimous " + r.lattice().name(e) + " is not selected"};
  }
  return {};
}

/// For every unimodal top profile, no alternative is strictly better for all
/// voters than the outcome at the tops.
inline AxiomOutcome is_efficient(const ExplicitRule& r, const VerifyOptions& opts = {}) {
  const Lattice& l = r.lattice();
  const detail::BetterTable better(enumerate_unimodal(l, opts.enumeration), l.size());
  const auto& idx = r.indexer();
  Ballots b;
  for (std::uint64_t k = 0; k < idx.total(); ++k) {
    idx.decode(k, b);
    const ElementId o = r.at(k);
    for (ElementId x = 0; x < l.size(); ++x) {
      bool dominated = true;
      for (ElementId t : b) dominated = dominated && better.better(t, x, o);
      if (dominated) return {false, b, l.name(x) + " Pareto-dominates " + l.name(o)};
    }
  }
  return {};
}

inline AxiomReport check_axioms(const ExplicitRule& r, const std::vector<ElementId>& y, const VerifyOptions& opts = {}) {
  return {is_anonymous(r), is_locally_ji_neutral(r, y), is_locally_sovereign(r, y), is_locally_idempotent(r, y),
          is_efficient(r, opts)};
}

}  // namespace medlat
