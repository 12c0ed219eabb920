#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "medlat/error.hpp"
#include "medlat/lattice.hpp"

namespace medlat {

/// Topped total preorder stored as a rank vector: rank 0 is the unique best
/// element and ranks are contiguous.
class TotalPreorder {
 public:
  TotalPreorder() = default;

  /// Canonicalizes the ranks; throws NotTopped unless exactly one element
  /// carries the smallest rank.
  static TotalPreorder from_ranks(std::vector<std::uint32_t> ranks) {
    if (ranks.empty()) throw Error(ErrorKind::InvalidSize, "preorder over an empty carrier");
    std::vector<std::uint32_t> distinct(ranks);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (auto& r : ranks)
      r = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), r) -
                                     distinct.begin());
    if (std::count(ranks.begin(), ranks.end(), 0u) != 1)
      throw Error(ErrorKind::NotTopped, "preorder must have a unique best element");
    TotalPreorder p;
    p.rank_ = std::move(ranks);
    return p;
  }

  /// Classes best first; together they must cover 0..m-1 exactly once.
  static TotalPreorder from_classes(std::size_t m, const std::vector<std::vector<ElementId>>& classes) {
    std::vector<std::uint32_t> ranks(m, UINT32_MAX);
    std::uint32_t r = 0;
    for (const auto& cls : classes) {
      if (cls.empty()) continue;
      for (ElementId e : cls) {
        if (e >= m) throw Error(ErrorKind::InvalidElement, "element id out of range");
        if (ranks[e] != UINT32_MAX)
          throw Error(ErrorKind::InvalidInput, "element appears in two classes");
        ranks[e] = r;
      }
      ++r;
    }
    for (auto x : ranks)
      if (x == UINT32_MAX) throw Error(ErrorKind::InvalidInput, "classes do not cover the carrier");
    return from_ranks(std::move(ranks));
  }

  std::size_t size() const noexcept { return rank_.size(); }
  std::uint32_t rank(ElementId a) const { return rank_.at(a); }
  const std::vector<std::uint32_t>& ranks() const noexcept { return rank_; }
  ElementId top() const {
    return static_cast<ElementId>(std::find(rank_.begin(), rank_.end(), 0u) - rank_.begin());
  }
  std::uint32_t depth() const { return *std::max_element(rank_.begin(), rank_.end()) + 1; }

  /// a is strictly preferred to b.
  bool prefers(ElementId a, ElementId b) const { return rank_[a] < rank_[b]; }
  bool weakly_prefers(ElementId a, ElementId b) const { return rank_[a] <= rank_[b]; }
  bool indifferent(ElementId a, ElementId b) const { return rank_[a] == rank_[b]; }

  std::vector<std::vector<ElementId>> classes() const {
    std::vector<std::vector<ElementId>> out(depth());
    for (ElementId a = 0; a < size(); ++a) out[rank_[a]].push_back(a);
    return out;
  }

  friend bool operator==(const TotalPreorder&, const TotalPreorder&) = default;
  friend auto operator<=>(const TotalPreorder&, const TotalPreorder&) = default;

 private:
  std::vector<std::uint32_t> rank_;
};

using PreferenceProfile = std::vector<TotalPreorder>;

inline std::string to_string(const TotalPreorder& p, const Lattice& l) {
  std::string out;
  for (const auto& cls : p.classes()) {
    if (!out.empty()) out += " > ";
    for (std::size_t i = 0; i < cls.size(); ++i) {
      if (i) out += " ~ ";
      out += l.name(cls[i]);
    }
  }
  return out;
}

namespace detail {

inline void check_carrier(const TotalPreorder& p, const Lattice& l) {
  if (p.size() != l.size())
    throw Error(ErrorKind::CarrierMismatch, "preorder has " + std::to_string(p.size()) +
                                                " elements, lattice has " + std::to_string(l.size()));
}

}  // namespace detail

/// Every z in [x,y] is weakly preferred to x or to y.
inline bool is_unimodal(const TotalPreorder& p, const Lattice& l) {
  detail::check_carrier(p, l);
  const auto m = static_cast<ElementId>(l.size());
  for (ElementId x = 0; x < m; ++x)
    for (ElementId y = x + 1; y < m; ++y) {
      const std::uint32_t worst_allowed = std::max(p.rank(x), p.rank(y));
      Bits iv = interval_bits(l, x, y);
      for (auto z = iv.find_first(); z != Bits::npos; z = iv.find_next(z))
        if (p.rank(static_cast<ElementId>(z)) > worst_allowed) return false;
    }
  return true;
}

/// Every z in [top, y] other than y is strictly preferred to y.
inline bool is_locally_strictly_unimodal(const TotalPreorder& p, const Lattice& l) {
  detail::check_carrier(p, l);
  const ElementId t = p.top();
  for (ElementId y = 0; y < l.size(); ++y) {
    Bits iv = interval_bits(l, t, y);
    for (auto z = iv.find_first(); z != Bits::npos; z = iv.find_next(z))
      if (z != y && !p.prefers(static_cast<ElementId>(z), y)) return false;
  }
  return true;
}

/// Reads the lattice as subsets of its atoms. Good items are atoms preferred
/// to the empty set; adding a good item to any subset must strictly improve
/// it and adding any other item must strictly worsen it.
inline bool is_separable(const TotalPreorder& p, const Lattice& l) {
  detail::check_carrier(p, l);
  if (!l.is_boolean()) throw Error(ErrorKind::NotHypercube, "lattice is not Boolean");
  const ElementId bot = l.bottom();
  for (ElementId a : l.atoms()) {
    const bool good = p.prefers(a, bot);
    for (ElementId s = 0; s < l.size(); ++s) {
      if (l.leq(a, s)) continue;
      const ElementId t = l.join(s, a);
      if (good ? !p.prefers(t, s) : !p.prefers(s, t)) return false;
    }
  }
  return true;
}

struct EnumerationOptions {
  std::size_t max_elements = 7;
};

/// All topped total preorders: the top in id order, then each following class
/// as a nonempty subset of the remaining elements in increasing bitmask order.
inline std::vector<TotalPreorder> enumerate_topped_preorders(const Lattice& l,
                                                             const EnumerationOptions& opts = {}) {
  const std::size_t m = l.size();
  if (m > opts.max_elements)
    throw Error(ErrorKind::TooLarge, "enumeration of preorders on " + std::to_string(m) +
                                         " elements exceeds cap " + std::to_string(opts.max_elements));
  if (m > 20) throw Error(ErrorKind::TooLarge, "carrier too large to enumerate");
  std::vector<TotalPreorder> out;
  std::vector<std::uint32_t> ranks(m, 0);
  const std::uint32_t full = (m == 32) ? UINT32_MAX : ((std::uint32_t{1} << m) - 1);
  auto rec = [&](auto&& self, std::uint32_t remaining, std::uint32_t r) -> void {
    if (remaining == 0) {
      out.push_back(TotalPreorder::from_ranks(ranks));
      return;
    }
    // Nonempty submasks of `remaining` in increasing numeric order.
    std::vector<std::uint32_t> subs;
    for (std::uint32_t s = remaining; s; s = (s - 1) & remaining) subs.push_back(s);
    std::reverse(subs.begin(), subs.end());
    for (std::uint32_t s : subs) {
      for (std::size_t e = 0; e < m; ++e)
        if ((s >> e) & 1) ranks[e] = r;
      self(self, remaining & ~s, r + 1);
    }
  };
  for (std::size_t t = 0; t < m; ++t) {
    ranks.assign(m, 0);
    rec(rec, full & ~(std::uint32_t{1} << t), 1);
  }
  return out;
}

inline std::vector<TotalPreorder> enumerate_unimodal(const Lattice& l,
                                                     const EnumerationOptions& opts = {}) {
  std::vector<TotalPreorder> out;
  for (auto& p : enumerate_topped_preorders(l, opts))
    if (is_unimodal(p, l)) out.push_back(std::move(p));
  return out;
}

inline std::vector<TotalPreorder> enumerate_lsu(const Lattice& l,
                                                const EnumerationOptions& opts = {}) {
  std::vector<TotalPreorder> out;
  for (auto& p : enumerate_topped_preorders(l, opts))
    if (is_locally_strictly_unimodal(p, l)) out.push_back(std::move(p));
  return out;
}

inline std::vector<TotalPreorder> enumerate_separable(const Lattice& l,
                                                      const EnumerationOptions& opts = {}) {
  if (!l.is_boolean()) throw Error(ErrorKind::NotHypercube, "lattice is not Boolean");
  std::vector<TotalPreorder> out;
  for (auto& p : enumerate_topped_preorders(l, opts))
    if (is_separable(p, l)) out.push_back(std::move(p));
  return out;
}

/// Irreflexive binary relation on 0..m-1.
class StrictRelation {
 public:
  explicit StrictRelation(std::size_t m) : m_(m) {}
  StrictRelation(std::size_t m, std::vector<std::pair<ElementId, ElementId>> pairs) : m_(m) {
    for (auto [a, b] : pairs) add(a, b);
  }

  void add(ElementId a, ElementId b) {
    if (a >= m_ || b >= m_) throw Error(ErrorKind::InvalidElement, "element id out of range");
    if (a == b) throw Error(ErrorKind::InvalidInput, "strict relation must be irreflexive");
    pairs_.insert({a, b});
  }
  bool contains(ElementId a, ElementId b) const { return pairs_.count({a, b}) != 0; }
  std::size_t carrier_size() const noexcept { return m_; }
  const std::set<std::pair<ElementId, ElementId>>& pairs() const noexcept { return pairs_; }
  bool is_asymmetric() const {
    for (auto [a, b] : pairs_)
      if (contains(b, a)) return false;
    return true;
  }

 private:
  std::size_t m_;
  std::set<std::pair<ElementId, ElementId>> pairs_;
};

/// Pairs (y, z) with y in [x, z] and y != z.
inline StrictRelation strict_top_betweenness(const Lattice& l, ElementId x) {
  StrictRelation r(l.size());
  for (ElementId z = 0; z < l.size(); ++z) {
    Bits iv = interval_bits(l, x, z);
    for (auto y = iv.find_first(); y != Bits::npos; y = iv.find_next(y))
      if (y != z) r.add(static_cast<ElementId>(y), z);
  }
  return r;
}

namespace detail {

/// Longest-path layer of each element in `subset` for the relation restricted
/// to it: layer(e) = length of the longest strict chain ending at e. Returns
/// nullopt on a cycle.
inline std::optional<std::vector<std::uint32_t>> layers(const StrictRelation& r,
                                                        const std::vector<bool>& subset) {
  const std::size_t m = r.carrier_size();
  std::vector<std::vector<ElementId>> pred(m);
  std::vector<std::size_t> indeg(m, 0);
  for (auto [a, b] : r.pairs())
    if (subset[a] && subset[b]) {
      pred[b].push_back(a);
      ++indeg[b];
    }
  std::vector<std::vector<ElementId>> succ(m);
  for (ElementId b = 0; b < m; ++b)
    for (ElementId a : pred[b]) succ[a].push_back(b);
  std::vector<std::uint32_t> layer(m, 0);
  std::vector<ElementId> ready;
  std::size_t members = 0, seen = 0;
  for (ElementId a = 0; a < m; ++a)
    if (subset[a]) {
      ++members;
      if (indeg[a] == 0) ready.push_back(a);
    }
  while (!ready.empty()) {
    ElementId a = ready.back();
    ready.pop_back();
    ++seen;
    for (ElementId b : succ[a]) {
      layer[b] = std::max(layer[b], layer[a] + 1);
      if (--indeg[b] == 0) ready.push_back(b);
    }
  }
  if (seen != members) return std::nullopt;
  return layer;
}

}  // namespace detail

/// For an irreflexive relation S-consistency reduces to acyclicity.
inline bool is_s_consistent(const StrictRelation& r) {
  return detail::layers(r, std::vector<bool>(r.carrier_size(), true)).has_value();
}

/// Longest-path layering. When several elements land on the first layer the
/// smallest id stays on top and the rest move down one rank.
inline TotalPreorder extend_to_total_preorder(const StrictRelation& r) {
  if (r.carrier_size() == 0) throw Error(ErrorKind::InvalidSize, "empty carrier");
  auto layer = detail::layers(r, std::vector<bool>(r.carrier_size(), true));
  if (!layer) throw Error(ErrorKind::NotConsistent, "relation has a strict cycle");
  std::vector<std::uint32_t> ranks = *layer;
  if (std::count(ranks.begin(), ranks.end(), 0u) > 1) {
    const auto keep = static_cast<std::size_t>(std::find(ranks.begin(), ranks.end(), 0u) - ranks.begin());
    for (std::size_t a = 0; a < ranks.size(); ++a)
      if (a != keep) ++ranks[a];
  }
  return TotalPreorder::from_ranks(std::move(ranks));
}

/// {peak} > [peak, ref] minus peak > everything else.
inline TotalPreorder build_three_class_witness(const Lattice& l, ElementId peak, ElementId ref) {
  Bits iv = interval_bits(l, peak, ref);
  std::vector<std::uint32_t> ranks(l.size(), 2);
  for (auto z = iv.find_first(); z != Bits::npos; z = iv.find_next(z)) ranks[z] = 1;
  ranks[peak] = 0;
  return TotalPreorder::from_ranks(std::move(ranks));
}

/// Layers the peak's strict betweenness relation on [peak, ref], then layers
/// it on the remaining elements and places that block strictly below.
inline TotalPreorder build_lsu_witness(const Lattice& l, ElementId peak, ElementId ref) {
  const StrictRelation r = strict_top_betweenness(l, peak);
  Bits iv = interval_bits(l, peak, ref);
  std::vector<bool> inside(l.size()), outside(l.size());
  for (ElementId a = 0; a < l.size(); ++a) (iv.test(a) ? inside : outside)[a] = true;
  auto in_layers = detail::layers(r, inside);
  auto out_layers = detail::layers(r, outside);
  std::uint32_t offset = 0;
  for (ElementId a = 0; a < l.size(); ++a)
    if (inside[a]) offset = std::max(offset, (*in_layers)[a] + 1);
  std::vector<std::uint32_t> ranks(l.size());
  for (ElementId a = 0; a < l.size(); ++a)
    ranks[a] = inside[a] ? (*in_layers)[a] : offset + (*out_layers)[a];
  return TotalPreorder::from_ranks(std::move(ranks));
}

/// Fixed classes first (best first), then every element not mentioned, placed
/// below by layering the top's strict betweenness relation. The result is
/// locally strictly unimodal whenever the fixed prefix is compatible.
inline TotalPreorder lsu_completion(const Lattice& l,
                                    const std::vector<std::vector<ElementId>>& prefix) {
  std::vector<bool> rest(l.size(), true);
  std::uint32_t r = 0;
  std::vector<std::uint32_t> ranks(l.size(), 0);
  for (const auto& cls : prefix) {
    for (ElementId e : cls) {
      ranks[e] = r;
      rest[e] = false;
    }
    ++r;
  }
  if (prefix.empty() || prefix.front().size() != 1)
    throw Error(ErrorKind::NotTopped, "prefix must start with a single top element");
  auto layer = detail::layers(strict_top_betweenness(l, prefix.front().front()), rest);
  for (ElementId a = 0; a < l.size(); ++a)
    if (rest[a]) ranks[a] = r + (*layer)[a];
  return TotalPreorder::from_ranks(std::move(ranks));
}

}  // namespace medlat
