#pragma once

// Independent brute-force reference implementations. None of these call into
// the library's algorithms beyond reading the order relation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "medlat/lattice.hpp"
#include "medlat/preorder.hpp"

namespace oracle {

using medlat::ElementId;
using medlat::Lattice;

/// Least upper bound by scanning all upper bounds for one below all others.
inline std::optional<ElementId> lub(const std::vector<std::vector<bool>>& leq, ElementId a, ElementId b) {
  const std::size_t m = leq.size();
  for (ElementId u = 0; u < m; ++u) {
    if (!leq[a][u] || !leq[b][u]) continue;
    bool least = true;
    for (ElementId v = 0; v < m && least; ++v)
      if (leq[a][v] && leq[b][v] && !leq[u][v]) least = false;
    if (least) return u;
  }
  return std::nullopt;
}

inline std::optional<ElementId> glb(const std::vector<std::vector<bool>>& leq, ElementId a, ElementId b) {
  const std::size_t m = leq.size();
  for (ElementId u = 0; u < m; ++u) {
    if (!leq[u][a] || !leq[u][b]) continue;
    bool greatest = true;
    for (ElementId v = 0; v < m && greatest; ++v)
      if (leq[v][a] && leq[v][b] && !leq[v][u]) greatest = false;
    if (greatest) return u;
  }
  return std::nullopt;
}

inline std::vector<std::vector<bool>> leq_matrix(const Lattice& l) {
  std::vector<std::vector<bool>> m(l.size(), std::vector<bool>(l.size()));
  for (ElementId a = 0; a < l.size(); ++a)
    for (ElementId b = 0; b < l.size(); ++b) m[a][b] = l.leq(a, b);
  return m;
}

/// Full triple scan of the distributive law.
inline bool distributive(const std::vector<std::vector<bool>>& leq) {
  const std::size_t m = leq.size();
  for (ElementId a = 0; a < m; ++a)
    for (ElementId b = 0; b < m; ++b)
      for (ElementId c = 0; c < m; ++c) {
        auto bc = lub(leq, b, c), ab = glb(leq, a, b), ac = glb(leq, a, c);
        if (!bc || !ab || !ac) return false;
        auto lhs = glb(leq, a, *bc), rhs = lub(leq, *ab, *ac);
        if (!lhs || !rhs || *lhs != *rhs) return false;
      }
  return true;
}

/// Elements with exactly one lower cover.
inline std::vector<ElementId> join_irreducibles(const std::vector<std::vector<bool>>& leq) {
  const std::size_t m = leq.size();
  std::vector<ElementId> out;
  for (ElementId a = 0; a < m; ++a) {
    int covers = 0;
    for (ElementId b = 0; b < m; ++b) {
      if (b == a || !leq[b][a]) continue;
      bool cover = true;
      for (ElementId c = 0; c < m && cover; ++c)
        if (c != a && c != b && leq[b][c] && leq[c][a]) cover = false;
      covers += cover;
    }
    if (covers == 1) out.push_back(a);
  }
  return out;
}

/// Ordered Bell (Fubini) numbers.
inline std::uint64_t fubini(std::size_t k) {
  std::vector<std::uint64_t> a(k + 1, 0);
  a[0] = 1;
  for (std::size_t n = 1; n <= k; ++n) {
    std::uint64_t binom = 1;
    for (std::size_t i = 1; i <= n; ++i) {
      binom = binom * (n - i + 1) / i;
      a[n] += binom * a[n - i];
    }
  }
  return a[k];
}

/// Topped preorders: choose the top, then an ordered partition of the rest.
inline std::uint64_t topped_count(std::size_t m) { return m * fubini(m - 1); }

/// Order ideals of a poset given by a strict-less matrix, by checking every subset.
inline std::vector<std::uint32_t> ideals(const std::vector<std::vector<bool>>& less) {
  const std::size_t p = less.size();
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << p); ++s) {
    bool closed = true;
    for (std::size_t b = 0; b < p && closed; ++b)
      if ((s >> b) & 1)
        for (std::size_t a = 0; a < p && closed; ++a)
          if (less[a][b] && !((s >> a) & 1)) closed = false;
    if (closed) out.push_back(s);
  }
  return out;
}

/// On a Boolean hypercube with bitmask ids, betweenness is coordinatewise.
inline bool cube_between(std::uint32_t x, std::uint32_t z, std::uint32_t y) {
  return ((x & y) & ~z) == 0 && (z & ~(x | y)) == 0;
}

/// Coordinatewise majority on bitmask ballots.
inline std::uint32_t cube_majority(const std::vector<std::uint32_t>& ballots, std::size_t k) {
  std::uint32_t out = 0;
  for (std::size_t bit = 0; bit < k; ++bit) {
    std::size_t ones = 0;
    for (auto b : ballots) ones += (b >> bit) & 1;
    if (2 * ones > ballots.size()) out |= 1u << bit;
  }
  return out;
}

/// Relation-matrix view of a preorder: weak[a][b] iff a is weakly preferred to b.
using Relation = std::vector<std::vector<bool>>;

inline Relation weak_relation(const medlat::TotalPreorder& p) {
  Relation r(p.size(), std::vector<bool>(p.size()));
  for (ElementId a = 0; a < p.size(); ++a)
    for (ElementId b = 0; b < p.size(); ++b) r[a][b] = p.ranks()[a] <= p.ranks()[b];
  return r;
}

/// Definition-level unimodality using a betweenness predicate.
template <class Between>
bool unimodal(const Relation& w, Between btw) {
  const std::size_t m = w.size();
  for (ElementId x = 0; x < m; ++x)
    for (ElementId y = 0; y < m; ++y)
      for (ElementId z = 0; z < m; ++z)
        if (btw(x, z, y) && !w[z][x] && !w[z][y]) return false;
  return true;
}

template <class Between>
bool lsu(const Relation& w, ElementId top, Between btw) {
  const std::size_t m = w.size();
  for (ElementId y = 0; y < m; ++y)
    for (ElementId z = 0; z < m; ++z)
      if (z != y && btw(top, z, y) && !(w[z][y] && !w[y][z])) return false;
  return true;
}

/// Separability on bitmask subsets: good items are those whose singleton
/// beats the empty set.
inline bool separable(const Relation& w, std::size_t k) {
  auto strictly = [&](std::uint32_t a, std::uint32_t b) { return w[a][b] && !w[b][a]; };
  for (std::size_t item = 0; item < k; ++item) {
    const std::uint32_t bit = 1u << item;
    const bool good = strictly(bit, 0);
    for (std::uint32_t s = 0; s < (1u << k); ++s) {
      if (s & bit) continue;
      if (good ? !strictly(s | bit, s) : !strictly(s, s | bit)) return false;
    }
  }
  return true;
}

/// All total preorders with a unique top, as rank vectors, by brute force
/// over all rank assignments.
inline std::vector<std::vector<std::uint32_t>> all_topped(std::size_t m) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> r(m, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      std::set<std::uint32_t> used(r.begin(), r.end());
      if (*used.rbegin() + 1 != used.size()) return;  // ranks must be contiguous
      if (std::count(r.begin(), r.end(), 0u) != 1) return;
      out.push_back(r);
      return;
    }
    for (std::uint32_t v = 0; v < m; ++v) {
      r[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace oracle
