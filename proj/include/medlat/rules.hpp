#pragma once

#include <bit>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medlat/error.hpp"
#include "medlat/lattice.hpp"

namespace medlat {

/// Bit i set means voter i (0-based) belongs to the coalition.
using Coalition = std::uint32_t;
using LatticePtr = std::shared_ptr<const Lattice>;
using Ballots = std::vector<ElementId>;
using BallotSpaces = std::vector<std::vector<ElementId>>;

inline constexpr std::size_t kMaxVoters = 20;
inline constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 20;

inline LatticePtr share(Lattice l) { return std::make_shared<const Lattice>(std::move(l)); }

inline std::vector<ElementId> all_elements(const Lattice& l) {
  std::vector<ElementId> out(l.size());
  for (ElementId a = 0; a < l.size(); ++a) out[a] = a;
  return out;
}

inline BallotSpaces full_spaces(const Lattice& l, std::size_t n) {
  return BallotSpaces(n, all_elements(l));
}

template <class R>
concept VotingRule = requires(const R& r, std::span<const ElementId> ballots) {
  { r.voters() } -> std::convertible_to<std::size_t>;
  { r.lattice() } -> std::convertible_to<const Lattice&>;
  { r.ballot_spaces() } -> std::convertible_to<BallotSpaces>;
  { r(ballots) } -> std::same_as<ElementId>;
};

/// Mixed-radix indexing over a product of ballot spaces; voter 1 is the most
/// significant digit.
class BallotIndexer {
 public:
  BallotIndexer() = default;
  explicit BallotIndexer(BallotSpaces spaces, std::size_t universe) : spaces_(std::move(spaces)) {
    total_ = 1;
    pos_.assign(spaces_.size(), std::vector<std::int32_t>(universe, -1));
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
      if (spaces_[i].empty()) throw Error(ErrorKind::InvalidInput, "empty ballot space");
      for (std::size_t k = 0; k < spaces_[i].size(); ++k) {
        ElementId e = spaces_[i][k];
        if (e >= universe) throw Error(ErrorKind::InvalidElement, "ballot space element out of range");
        if (pos_[i][e] != -1) throw Error(ErrorKind::InvalidInput, "duplicate element in ballot space");
        pos_[i][e] = static_cast<std::int32_t>(k);
      }
      total_ *= spaces_[i].size();
      if (total_ > kMaxTableSize)
        throw Error(ErrorKind::TooLarge, "ballot product exceeds " + std::to_string(kMaxTableSize));
    }
  }

  const BallotSpaces& spaces() const noexcept { return spaces_; }
  std::size_t voters() const noexcept { return spaces_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  /// Position of e inside Y_i, or -1.
  std::int32_t position(std::size_t i, ElementId e) const {
    return e < pos_[i].size() ? pos_[i][e] : -1;
  }

  std::uint64_t index(std::span<const ElementId> ballots) const {
    if (ballots.size() != spaces_.size())
      throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(spaces_.size()) +
                                                " ballots, got " + std::to_string(ballots.size()));
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < spaces_.size(); ++i) {
      std::int32_t p = position(i, ballots[i]);
      if (p < 0)
        throw Error(ErrorKind::BallotOutOfSpace,
                    "ballot of voter " + std::to_string(i + 1) + " is outside its ballot space");
      idx = idx * spaces_[i].size() + static_cast<std::uint64_t>(p);
    }
    return idx;
  }

  void decode(std::uint64_t idx, Ballots& out) const {
    out.resize(spaces_.size());
    for (std::size_t i = spaces_.size(); i-- > 0;) {
      out[i] = spaces_[i][idx % spaces_[i].size()];
      idx /= spaces_[i].size();
    }
  }
  Ballots decode(std::uint64_t idx) const {
    Ballots out;
    decode(idx, out);
    return out;
  }

  /// Weight of voter i's digit.
  std::uint64_t stride(std::size_t i) const {
    std::uint64_t s = 1;
    for (std::size_t j = i + 1; j < spaces_.size(); ++j) s *= spaces_[j].size();
    return s;
  }

 private:
  BallotSpaces spaces_;
  std::vector<std::vector<std::int32_t>> pos_;
  std::uint64_t total_ = 0;
};

/// Rule given by its full table over the product of ballot spaces.
class ExplicitRule {
 public:
  ExplicitRule(LatticePtr l, BallotSpaces spaces, std::vector<ElementId> table)
      : lattice_(std::move(l)), indexer_(std::move(spaces), lattice_->size()), table_(std::move(table)) {
    if (indexer_.voters() == 0) throw Error(ErrorKind::InvalidInput, "rule needs at least one voter");
    if (indexer_.voters() > kMaxVoters) throw Error(ErrorKind::TooLarge, "too many voters");
    if (table_.size() != indexer_.total())
      throw Error(ErrorKind::InvalidInput, "table has " + std::to_string(table_.size()) +
                                               " entries, expected " + std::to_string(indexer_.total()));
    for (ElementId e : table_)
      if (e >= lattice_->size()) throw Error(ErrorKind::InvalidElement, "table output out of range");
  }

  std::size_t voters() const noexcept { return indexer_.voters(); }
  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  const BallotSpaces& ballot_spaces() const noexcept { return indexer_.spaces(); }
  const BallotIndexer& indexer() const noexcept { return indexer_; }
  const std::vector<ElementId>& table() const noexcept { return table_; }
  ElementId at(std::uint64_t idx) const { return table_[idx]; }

  ElementId operator()(std::span<const ElementId> ballots) const { return table_[indexer_.index(ballots)]; }

  friend bool operator==(const ExplicitRule& a, const ExplicitRule& b) {
    return *a.lattice_ == *b.lattice_ && a.ballot_spaces() == b.ballot_spaces() && a.table_ == b.table_;
  }

 private:
  LatticePtr lattice_;
  BallotIndexer indexer_;
  std::vector<ElementId> table_;
};

inline ElementId eval_explicit(const ExplicitRule& r, std::span<const ElementId> ballots) { return r(ballots); }

struct CommitteeTerm {
  Coalition coalition = 0;
  ElementId constant = 0;
  friend bool operator==(const CommitteeTerm&, const CommitteeTerm&) = default;
};

/// Join over terms of (meet of the coalition's ballots) meet constant. The
/// empty coalition's meet is top; an empty term list evaluates to bottom.
class CommitteeRule {
 public:
  CommitteeRule(LatticePtr l, std::size_t n, std::vector<CommitteeTerm> terms)
      : lattice_(std::move(l)), n_(n), terms_(std::move(terms)) {
    if (n_ == 0) throw Error(ErrorKind::InvalidInput, "rule needs at least one voter");
    if (n_ > kMaxVoters) throw Error(ErrorKind::TooLarge, "too many voters");
    for (const auto& t : terms_) {
      if (t.coalition >> n_)
        throw Error(ErrorKind::ArityMismatch, "coalition names a voter beyond n=" + std::to_string(n_));
      if (t.constant >= lattice_->size()) throw Error(ErrorKind::InvalidElement, "constant out of range");
    }
  }

  std::size_t voters() const noexcept { return n_; }
  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  BallotSpaces ballot_spaces() const { return full_spaces(*lattice_, n_); }
  const std::vector<CommitteeTerm>& terms() const noexcept { return terms_; }

  ElementId operator()(std::span<const ElementId> ballots) const {
    if (ballots.size() != n_)
      throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(n_) + " ballots, got " +
                                                std::to_string(ballots.size()));
    const Lattice& l = *lattice_;
    for (ElementId b : ballots)
      if (b >= l.size()) throw Error(ErrorKind::InvalidElement, "ballot out of range");
    ElementId acc = l.bottom();
    for (const auto& t : terms_) {
      ElementId m = t.constant;
      for (Coalition s = t.coalition; s; s &= s - 1) m = l.meet(m, ballots[std::countr_zero(s)]);
      acc = l.join(acc, m);
    }
    return acc;
  }

  /// S in C and S subset of T imply T in C.
  bool is_order_filter() const {
    std::vector<bool> in(std::size_t{1} << n_, false);
    for (const auto& t : terms_) in[t.coalition] = true;
    for (Coalition s = 0; s < in.size(); ++s)
      if (in[s])
        for (std::size_t i = 0; i < n_; ++i)
          if (!in[s | (Coalition{1} << i)]) return false;
    return true;
  }

  /// S subset of T implies y_S <= y_T, over the listed coalitions.
  bool constants_monotone() const {
    for (const auto& a : terms_)
      for (const auto& b : terms_)
        if ((a.coalition & ~b.coalition) == 0 && !lattice_->leq(a.constant, b.constant)) return false;
    return true;
  }

  friend bool operator==(const CommitteeRule& a, const CommitteeRule& b) {
    return *a.lattice_ == *b.lattice_ && a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  LatticePtr lattice_;
  std::size_t n_;
  std::vector<CommitteeTerm> terms_;
};

inline ElementId eval_committee(const CommitteeRule& r, std::span<const ElementId> ballots) { return r(ballots); }

/// One term per coalition; the constant depends on the coalition size only.
inline CommitteeRule quota_rule(LatticePtr l, std::size_t n, const std::vector<ElementId>& by_size) {
  if (by_size.size() != n + 1) throw Error(ErrorKind::ArityMismatch, "need n+1 size-indexed constants");
  std::vector<CommitteeTerm> terms;
  for (Coalition s = 0; s < (Coalition{1} << n); ++s)
    terms.push_back({s, by_size[static_cast<std::size_t>(std::popcount(s))]});
  return CommitteeRule(std::move(l), n, std::move(terms));
}

/// Threshold quota rule: top for coalitions of size at least q, bottom otherwise.
inline CommitteeRule threshold_rule(LatticePtr l, std::size_t n, std::size_t q) {
  std::vector<ElementId> c(n + 1);
  for (std::size_t s = 0; s <= n; ++s) c[s] = s >= q ? l->top() : l->bottom();
  return quota_rule(std::move(l), n, c);
}

/// Join of meets over strict-majority coalitions.
inline CommitteeRule extended_median_rule(LatticePtr l, std::size_t n) {
  return threshold_rule(std::move(l), n, n / 2 + 1);
}

inline ElementId extended_median(const Lattice& l, std::span<const ElementId> ballots) {
  const std::size_t n = ballots.size();
  if (n == 0) throw Error(ErrorKind::ArityMismatch, "extended median of no ballots");
  if (n > kMaxVoters) throw Error(ErrorKind::TooLarge, "too many voters");
  const std::size_t q = n / 2 + 1;
  ElementId acc = l.bottom();
  for (Coalition s = 0; s < (Coalition{1} << n); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) < q) continue;
    ElementId m = l.top();
    for (Coalition t = s; t; t &= t - 1) m = l.meet(m, ballots[std::countr_zero(t)]);
    acc = l.join(acc, m);
  }
  return acc;
}

/// Median tree over an arena of nodes.
class MedianTree {
 public:
  enum class Kind { Median, Ballot, Const };
  struct Node {
    Kind kind;
    std::uint32_t left = 0, mid = 0, right = 0;
    std::uint32_t voter = 0;
    ElementId value = 0;
  };

  MedianTree(LatticePtr l, std::size_t n, std::vector<Node> nodes, std::uint32_t root)
      : lattice_(std::move(l)), n_(n), nodes_(std::move(nodes)), root_(root) {
    if (n_ == 0) throw Error(ErrorKind::InvalidInput, "rule needs at least one voter");
    if (n_ > kMaxVoters) throw Error(ErrorKind::TooLarge, "too many voters");
    if (root_ >= nodes_.size()) throw Error(ErrorKind::MalformedTree, "root out of range");
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
      const Node& nd = nodes_[i];
      switch (nd.kind) {
        case Kind::Median:
          // Children precede parents, which rules out cycles.
          if (nd.left >= i || nd.mid >= i || nd.right >= i)
            throw Error(ErrorKind::MalformedTree, "child must precede its parent in the arena");
          break;
        case Kind::Ballot:
          if (nd.voter >= n_)
            throw Error(ErrorKind::BadLeafIndex, "ballot leaf references voter " +
                                                     std::to_string(nd.voter + 1) + " of " + std::to_string(n_));
          break;
        case Kind::Const:
          if (nd.value >= lattice_->size()) throw Error(ErrorKind::InvalidElement, "constant out of range");
          break;
      }
    }
  }

  std::size_t voters() const noexcept { return n_; }
  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  BallotSpaces ballot_spaces() const { return full_spaces(*lattice_, n_); }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::uint32_t root() const noexcept { return root_; }

  ElementId operator()(std::span<const ElementId> ballots) const {
    if (ballots.size() != n_)
      throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(n_) + " ballots, got " +
                                                std::to_string(ballots.size()));
    const Lattice& l = *lattice_;
    std::vector<ElementId> val(root_ + 1);
    for (std::uint32_t i = 0; i <= root_; ++i) {
      const Node& nd = nodes_[i];
      switch (nd.kind) {
        case Kind::Median: val[i] = median(l, val[nd.left], val[nd.mid], val[nd.right]); break;
        case Kind::Ballot:
          if (ballots[nd.voter] >= l.size()) throw Error(ErrorKind::InvalidElement, "ballot out of range");
          val[i] = ballots[nd.voter];
          break;
        case Kind::Const: val[i] = nd.value; break;
      }
    }
    return val[root_];
  }

  /// Corner leaves in left-to-right order.
  std::vector<ElementId> leaf_constants() const {
    std::vector<ElementId> out;
    auto rec = [&](auto&& self, std::uint32_t i) -> void {
      const Node& nd = nodes_[i];
      if (nd.kind == Kind::Const) out.push_back(nd.value);
      if (nd.kind == Kind::Median) {
        self(self, nd.left);
        self(self, nd.mid);
        self(self, nd.right);
      }
    };
    rec(rec, root_);
    return out;
  }

 private:
  LatticePtr lattice_;
  std::size_t n_;
  std::vector<Node> nodes_;
  std::uint32_t root_;
};

inline ElementId eval_median_tree(const MedianTree& t, std::span<const ElementId> ballots) { return t(ballots); }

/// Rule backed by an arbitrary callable.
class FunctionRule {
 public:
  using Fn = std::function<ElementId(std::span<const ElementId>)>;
  FunctionRule(LatticePtr l, BallotSpaces spaces, Fn fn)
      : lattice_(std::move(l)), spaces_(std::move(spaces)), fn_(std::move(fn)) {}
  FunctionRule(LatticePtr l, std::size_t n, Fn fn)
      : FunctionRule(l, full_spaces(*l, n), std::move(fn)) {}

  std::size_t voters() const noexcept { return spaces_.size(); }
  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  const BallotSpaces& ballot_spaces() const noexcept { return spaces_; }
  ElementId operator()(std::span<const ElementId> ballots) const {
    if (ballots.size() != spaces_.size())
      throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(spaces_.size()) + " ballots");
    return fn_(ballots);
  }

 private:
  LatticePtr lattice_;
  BallotSpaces spaces_;
  Fn fn_;
};

inline FunctionRule projection_rule(LatticePtr l, std::size_t n, std::size_t voter) {
  if (voter >= n) throw Error(ErrorKind::ArityMismatch, "projection onto a missing voter");
  return FunctionRule(l, n, [voter](std::span<const ElementId> b) { return b[voter]; });
}

inline FunctionRule constant_rule(LatticePtr l, std::size_t n, ElementId c) {
  if (c >= l->size()) throw Error(ErrorKind::InvalidElement, "constant out of range");
  return FunctionRule(l, n, [c](std::span<const ElementId>) { return c; });
}

/// Tabulates any rule over its ballot spaces.
template <VotingRule R>
ExplicitRule tabulate(const R& r) {
  BallotIndexer idx(r.ballot_spaces(), r.lattice().size());
  std::vector<ElementId> table(idx.total());
  Ballots b;
  for (std::uint64_t k = 0; k < idx.total(); ++k) {
    idx.decode(k, b);
    table[k] = r(b);
  }
  if constexpr (requires { r.lattice_ptr(); }) {
    return ExplicitRule(r.lattice_ptr(), r.ballot_spaces(), std::move(table));
  } else {
    return ExplicitRule(std::make_shared<const Lattice>(r.lattice()), r.ballot_spaces(), std::move(table));
  }
}

/// Pointwise median of three rules on the same lattice and ballot spaces.
template <VotingRule F, VotingRule G, VotingRule H>
ExplicitRule pointwise_median(const F& f, const G& g, const H& h) {
  ExplicitRule tf = tabulate(f), tg = tabulate(g), th = tabulate(h);
  if (tf.ballot_spaces() != tg.ballot_spaces() || tf.ballot_spaces() != th.ballot_spaces())
    throw Error(ErrorKind::ArityMismatch, "rules disagree on ballot spaces");
  std::vector<ElementId> table(tf.table().size());
  for (std::size_t k = 0; k < table.size(); ++k) table[k] = median(tf.lattice(), tf.at(k), tg.at(k), th.at(k));
  return ExplicitRule(tf.lattice_ptr(), tf.ballot_spaces(), std::move(table));
}

/// Corner c in binary order: voter i (0-based) votes top iff bit n-1-i of c is set.
inline Ballots corner_ballots(const Lattice& l, std::size_t n, std::uint32_t c) {
  Ballots b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = ((c >> (n - 1 - i)) & 1) ? l.top() : l.bottom();
  return b;
}

/// Coalition (bit i = voter i) to the binary-order corner index.
inline std::uint32_t corner_index_of(Coalition s, std::size_t n) {
  std::uint32_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if ((s >> i) & 1) c |= std::uint32_t{1} << (n - 1 - i);
  return c;
}

template <VotingRule R>
std::vector<ElementId> corners(const R& r) {
  const Lattice& l = r.lattice();
  const std::size_t n = r.voters();
  const BallotSpaces spaces = r.ballot_spaces();
  for (std::size_t i = 0; i < n; ++i) {
    auto has = [&](ElementId e) { return std::find(spaces[i].begin(), spaces[i].end(), e) != spaces[i].end(); };
    if (!has(l.bottom()) || !has(l.top()))
      throw Error(ErrorKind::CornerNotInBallotSpace,
                  "ballot space of voter " + std::to_string(i + 1) + " lacks bottom or top");
  }
  std::vector<ElementId> out(std::size_t{1} << n);
  for (std::uint32_t c = 0; c < out.size(); ++c) out[c] = r(corner_ballots(l, n, c));
  return out;
}

/// Nested medians: the subtree for a corner prefix is
/// median(subtree(prefix,bottom), ballot of the next voter, subtree(prefix,top)).
inline MedianTree build_canonical_median_tree(LatticePtr l, const std::vector<ElementId>& corner_values,
                                              std::size_t n) {
  if (n == 0 || n > kMaxVoters) throw Error(ErrorKind::InvalidInput, "voter count out of range");
  if (corner_values.size() != (std::size_t{1} << n))
    throw Error(ErrorKind::ArityMismatch, "need 2^n corner values");
  std::vector<MedianTree::Node> nodes;
  auto build = [&](auto&& self, std::uint32_t prefix, std::size_t depth) -> std::uint32_t {
    if (depth == n) {
      nodes.push_back({MedianTree::Kind::Const, 0, 0, 0, 0, corner_values[prefix]});
      return static_cast<std::uint32_t>(nodes.size() - 1);
    }
    std::uint32_t left = self(self, prefix * 2, depth + 1);
    nodes.push_back({MedianTree::Kind::Ballot, 0, 0, 0, static_cast<std::uint32_t>(depth), 0});
    std::uint32_t mid = static_cast<std::uint32_t>(nodes.size() - 1);
    std::uint32_t right = self(self, prefix * 2 + 1, depth + 1);
    nodes.push_back({MedianTree::Kind::Median, left, mid, right, 0, 0});
    return static_cast<std::uint32_t>(nodes.size() - 1);
  };
  std::uint32_t root = build(build, 0, 0);
  return MedianTree(std::move(l), n, std::move(nodes), root);
}

/// z_S = value at the corner that is top on S and bottom elsewhere, one term
/// per subset in bitmask order.
inline CommitteeRule tree_to_committee(const MedianTree& t) {
  const std::size_t n = t.voters();
  const Lattice& l = t.lattice();
  std::vector<CommitteeTerm> terms;
  for (Coalition s = 0; s < (Coalition{1} << n); ++s)
    terms.push_back({s, t(corner_ballots(l, n, corner_index_of(s, n)))});
  return CommitteeRule(t.lattice_ptr(), n, std::move(terms));
}

inline std::string to_string(const MedianTree& t) {
  const Lattice& l = t.lattice();
  auto rec = [&](auto&& self, std::uint32_t i) -> std::string {
    const auto& nd = t.nodes()[i];
    switch (nd.kind) {
      case MedianTree::Kind::Median:
        return "mu(" + self(self, nd.left) + "," + self(self, nd.mid) + "," + self(self, nd.right) + ")";
      case MedianTree::Kind::Ballot: return "x" + std::to_string(nd.voter + 1);
      case MedianTree::Kind::Const: return l.name(nd.value);
    }
    return {};
  };
  return rec(rec, t.root());
}

}  // namespace medlat
