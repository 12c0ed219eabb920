#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "medlat/error.hpp"
#include "medlat/lattice.hpp"
#include "medlat/rules.hpp"

namespace medlat {

struct Symbol {
  std::string name;
  std::size_t arity = 0;
};

/// Finitary type: operation symbols with their arities.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (!index_.emplace(symbols_[i].name, i).second)
        throw Error(ErrorKind::InvalidInput, "duplicate symbol '" + symbols_[i].name + "'");
  }

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  const Symbol* find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &symbols_[it->second];
  }

 private:
  std::vector<Symbol> symbols_;
  std::map<std::string, std::size_t> index_;
};

/// Finite labelled tree. Internal nodes and nullary leaves carry symbols,
/// remaining leaves carry variables.
struct TermTree {
  struct Node {
    bool is_variable = false;
    std::string label;
    std::vector<std::size_t> children;
  };
  std::vector<Node> nodes;
  std::size_t root = 0;

  std::size_t add_variable(std::string name) {
    nodes.push_back({true, std::move(name), {}});
    return nodes.size() - 1;
  }
  std::size_t add_symbol(std::string name, std::vector<std::size_t> children = {}) {
    nodes.push_back({false, std::move(name), std::move(children)});
    return nodes.size() - 1;
  }

  /// Structural well-formedness against a signature: labels known, child
  /// counts match arities, every node reachable at most once from the root.
  void validate(const Signature& sig) const {
    if (root >= nodes.size()) throw Error(ErrorKind::MalformedTree, "root out of range");
    std::vector<int> state(nodes.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i >= nodes.size()) throw Error(ErrorKind::MalformedTree, "child index out of range");
      if (state[i] != 0) throw Error(ErrorKind::MalformedTree, "node shared or cyclic");
      state[i] = 1;
      const Node& nd = nodes[i];
      if (nd.is_variable) {
        if (!nd.children.empty()) throw Error(ErrorKind::MalformedTree, "variable leaf with children");
        return;
      }
      const Symbol* s = sig.find(nd.label);
      if (!s) throw Error(ErrorKind::MalformedTree, "unknown symbol '" + nd.label + "'", {nd.label});
      if (s->arity != nd.children.size())
        throw Error(ErrorKind::MalformedTree, "symbol '" + nd.label + "' expects " +
                                                  std::to_string(s->arity) + " children", {nd.label});
      for (std::size_t c : nd.children) self(self, c);
    };
    rec(rec, root);
  }
};

/// Non-initial tree automaton: a carrier of states, one operation per symbol
/// and an output map.
template <class State, class Output = State>
struct TreeAutomaton {
  Signature signature;
  std::map<std::string, std::function<State(std::span<const State>)>> operations;
  std::function<Output(const State&)> output;
};

/// Run map: variables take their initial states, operations fold bottom-up,
/// the output map is applied at the root.
template <class State, class Output>
Output run_tree_automaton(const TreeAutomaton<State, Output>& a, const std::map<std::string, State>& init,
                          const TermTree& t) {
  t.validate(a.signature);
  auto rec = [&](auto&& self, std::size_t i) -> State {
    const auto& nd = t.nodes[i];
    if (nd.is_variable) {
      auto it = init.find(nd.label);
      if (it == init.end()) throw Error(ErrorKind::UnboundVariable, "variable '" + nd.label + "' is unbound", {nd.label});
      return it->second;
    }
    auto op = a.operations.find(nd.label);
    if (op == a.operations.end())
      throw Error(ErrorKind::MalformedTree, "symbol '" + nd.label + "' has no operation", {nd.label});
    std::vector<State> args;
    args.reserve(nd.children.size());
    for (std::size_t c : nd.children) args.push_back(self(self, c));
    return op->second(std::span<const State>(args));
  };
  State s = rec(rec, t.root);
  if constexpr (std::is_constructible_v<Output, State>) {
    if (!a.output) return Output(s);
  }
  if (!a.output) throw Error(ErrorKind::InvalidInput, "automaton has no output map");
  return a.output(s);
}

inline std::string voter_variable(std::size_t i) { return "x" + std::to_string(i + 1); }
inline std::string phantom_symbol(std::size_t c) { return "c" + std::to_string(c); }

/// Median signature for n voters: the ternary median, bottom and top, and one
/// nullary phantom per corner.
inline Signature median_signature(std::size_t n) {
  std::vector<Symbol> syms{{"mu", 3}, {"bot", 0}, {"top", 0}};
  for (std::size_t c = 0; c < (std::size_t{1} << n); ++c) syms.push_back({phantom_symbol(c), 0});
  return Signature(std::move(syms));
}

/// Median automaton over the lattice with the given corner values bound to the phantoms.
inline TreeAutomaton<ElementId> median_automaton(LatticePtr l, const std::vector<ElementId>& corner_values) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < corner_values.size()) ++n;
  if ((std::size_t{1} << n) != corner_values.size())
    throw Error(ErrorKind::ArityMismatch, "corner count is not a power of two");
  TreeAutomaton<ElementId> a;
  a.signature = median_signature(n);
  a.operations["mu"] = [l](std::span<const ElementId> v) { return median(*l, v[0], v[1], v[2]); };
  a.operations["bot"] = [l](std::span<const ElementId>) { return l->bottom(); };
  a.operations["top"] = [l](std::span<const ElementId>) { return l->top(); };
  for (std::size_t c = 0; c < corner_values.size(); ++c) {
    ElementId v = corner_values[c];
    a.operations[phantom_symbol(c)] = [v](std::span<const ElementId>) { return v; };
  }
  a.output = [](const ElementId& s) { return s; };
  return a;
}

/// The canonical nested-median term with voter variables x1..xn.
inline TermTree canonical_median_term(std::size_t n) {
  TermTree t;
  auto build = [&](auto&& self, std::size_t prefix, std::size_t depth) -> std::size_t {
    if (depth == n) return t.add_symbol(phantom_symbol(prefix));
    std::size_t left = self(self, prefix * 2, depth + 1);
    std::size_t mid = t.add_variable(voter_variable(depth));
    std::size_t right = self(self, prefix * 2 + 1, depth + 1);
    return t.add_symbol("mu", {left, mid, right});
  };
  t.root = build(build, 0, 0);
  return t;
}

inline std::map<std::string, ElementId> ballot_assignment(std::span<const ElementId> ballots) {
  std::map<std::string, ElementId> init;
  for (std::size_t i = 0; i < ballots.size(); ++i) init[voter_variable(i)] = ballots[i];
  return init;
}

}  // namespace medlat
