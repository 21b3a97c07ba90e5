#ifndef LCFRS_UNLEXICALIZE_HPP
#define LCFRS_UNLEXICALIZE_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "binarize.hpp"
#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "induce.hpp"
#include "symbols.hpp"
#include "tree.hpp"

namespace lcfrs {

// Inverse of the lexicalization steps. Every function throws
// CorruptDerivation when its input cannot have been produced by the
// corresponding forward step.

namespace detail {

template <class Fn>
Derivation rebuild(const Derivation& d, Fn&& fn) {
  Derivation out;
  out.rule = d.rule;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    out.children.push_back(fn(d.children[i]));
    out.rule.rhs[i] = out.children.back().rule.lhs;
  }
  return out;
}

inline Composition make_comp(const Components& comps) {
  try {
    return Composition(comps);
  } catch (const PreconditionError& e) {
    throw CorruptDerivation(std::string("ill-formed composition: ") + e.what());
  }
}

}  // namespace detail

// A -> c(A^R)(A^R -> (s)) becomes A -> c[x1^1 := s].
inline Derivation merge_split(const Derivation& d) {
  if (d.rule.lhs.mark == Mark::rest) throw CorruptDerivation("^R nonterminal outside a split rule");
  if (d.rule.is_monic() && d.rule.rhs[0].mark == Mark::rest) {
    const Derivation& rest = d.children.at(0);
    auto syms = rest.rule.comp.symbols();
    if (!rest.rule.is_terminating() || syms.size() != 1 || !syms[0].is_lexical())
      throw CorruptDerivation("^R rule is not A^R -> (sigma)");
    if (d.rule.comp.lexical_count() != 1 || d.rule.swapped)
      throw CorruptDerivation("split rule must carry exactly one terminal");
    Components comps = d.rule.comp.components();
    auto [cj, p] = edit::find_var(comps, 1, 1);
    comps[cj][p] = syms[0];
    return Derivation(Rule(d.rule.lhs, {}, detail::make_comp(comps)));
  }
  return detail::rebuild(d, [](const Derivation& c) { return merge_split(c); });
}

namespace detail {

inline void mark_paths(const Derivation& d, std::vector<const Derivation*>& on_path) {
  if (d.rule.is_branching()) {
    if (d.children.size() != 2) throw CorruptDerivation("branching rule must be binary");
    const Derivation* s = &d.children[1];
    on_path.push_back(s);
    while (!s->rule.is_terminating()) {
      if (s->children.empty()) throw CorruptDerivation("derivation arity does not match its rule");
      s = &s->children[0];
      on_path.push_back(s);
    }
  }
  for (const auto& c : d.children) mark_paths(c, on_path);
}

inline void check_annotations(const Derivation& root) {
  std::vector<const Derivation*> on_path;
  mark_paths(root, on_path);
  std::sort(on_path.begin(), on_path.end());
  if (std::adjacent_find(on_path.begin(), on_path.end()) != on_path.end())
    throw CorruptDerivation("node lies on two propagation paths");
  auto visit = [&](auto&& self, const Derivation& n) -> void {
    const bool path = std::binary_search(on_path.begin(), on_path.end(), &n);
    const Mark m = n.rule.lhs.mark;
    if (m == Mark::rest) throw CorruptDerivation("^R nonterminal left after merging");
    if (path != (m == Mark::plus || m == Mark::minus))
      throw CorruptDerivation(path ? "propagation path node without ^+/^- annotation"
                                   : "^+/^- annotation outside a propagation path");
    if (n.rule.swapped && (!path || !n.rule.is_monic())) throw CorruptDerivation("swapped flag on a rule that cannot swap");
    for (const auto& c : n.children) self(self, c);
  };
  visit(visit, root);
}

inline void branching_postorder(Derivation& d, std::vector<Derivation*>& out) {
  for (auto& c : d.children) branching_postorder(c, out);
  if (d.rule.is_branching()) out.push_back(&d);
}

inline std::pair<std::size_t, std::size_t> only_lexical(const Components& comps, const char* where) {
  std::optional<std::pair<std::size_t, std::size_t>> hit;
  for (std::size_t j = 0; j < comps.size(); ++j)
    for (std::size_t p = 0; p < comps[j].size(); ++p)
      if (comps[j][p].is_lexical()) {
        if (hit) throw CorruptDerivation(std::string("more than one terminal on ") + where);
        hit = std::pair{j, p};
      }
  if (!hit) throw CorruptDerivation(std::string("no terminal on ") + where);
  return *hit;
}

inline void unpropagate_into(Derivation& r) {
  std::vector<Derivation*> path;
  for (Derivation* s = &r.children[1];; s = &s->children[0]) {
    path.push_back(s);
    if (s->rule.is_terminating()) break;
  }

  Components comps = r.rule.comp.components();
  auto [cj, p] = only_lexical(comps, "a branching rule");
  Symbol carried = comps[cj][p];
  if (path[0]->rule.lhs.mark == Mark::minus) {
    edit::shift_components(comps, 2, 1);
    comps[cj][p] = Symbol::var(2, 1);
  } else {
    comps[cj].erase(comps[cj].begin() + static_cast<std::ptrdiff_t>(p));
    if (comps[cj].empty()) throw CorruptDerivation("branching rule loses a component when its terminal is removed");
  }
  r.rule.comp = make_comp(comps);

  for (std::size_t idx = 0; idx < path.size(); ++idx) {
    Derivation& s = *path[idx];
    Components cs = s.rule.comp.components();
    if (s.rule.lhs.mark == Mark::minus) cs.insert(cs.begin(), Component{});
    cs[0].insert(cs[0].begin(), carried);
    if (idx + 1 < path.size()) {
      std::size_t sj = 0, sp = 0;
      if (s.rule.swapped) {
        bool found = false;
        for (std::size_t j = 0; j < cs.size() && !found; ++j)
          for (std::size_t q = 0; q < cs[j].size(); ++q)
            if (cs[j][q].is_lexical() && !(j == 0 && q == 0)) {
              sj = j, sp = q, found = true;
              break;
            }
        if (!found) throw CorruptDerivation("swapped rule has no terminal of its own");
      }
      const Symbol sigma = cs[sj][sp];
      if (path[idx + 1]->rule.lhs.mark == Mark::minus) {
        edit::shift_components(cs, 1, 1);
        cs[sj][sp] = Symbol::var(1, 1);
      } else {
        cs[sj].erase(cs[sj].begin() + static_cast<std::ptrdiff_t>(sp));
        if (cs[sj].empty()) throw CorruptDerivation("component emptied while restoring a propagation path");
      }
      carried = sigma;
    }
    s.rule.comp = make_comp(cs);
    s.rule.lhs.mark = Mark::none;
    s.rule.lhs.fanout = static_cast<int>(cs.size());
    s.rule.swapped = false;
  }

  r.rule.rhs[1] = path[0]->rule.lhs;
  for (std::size_t idx = 0; idx + 1 < path.size(); ++idx) path[idx]->rule.rhs[0] = path[idx + 1]->rule.lhs;
}

}  // namespace detail

// Undoes terminal propagation: branching rules are restored in reverse
// post-order, each path top-down. Annotations are cleared.
inline Derivation unpropagate(const Derivation& d) {
  detail::check_annotations(d);
  Derivation out = d;
  std::vector<Derivation*> order;
  detail::branching_postorder(out, order);
  for (auto it = order.rbegin(); it != order.rend(); ++it) detail::unpropagate_into(**it);
  try {
    for_each_node(out, [](const Derivation& n) { n.rule.check(); });
    out.check_sorts();
  } catch (const Error& e) {
    throw CorruptDerivation(std::string("inconsistent derivation after unpropagation: ") + e.what());
  }
  return out;
}

// POS nonterminal parts for a terminal (sentence position).
using PosLookup = std::function<std::vector<LabelId>(int)>;

namespace detail {

inline Derivation pos_rule(const Symbol& sigma, const PosLookup& pos) {
  if (!sigma.is_terminal()) throw CorruptDerivation("hole left in derivation");
  auto parts = pos(sigma.terminal());
  if (parts.empty()) throw CorruptDerivation("no POS for position " + std::to_string(sigma.terminal()));
  return Derivation(Rule(Nonterminal{std::move(parts), Mark::none, 1}, {}, Composition({{sigma}})));
}

}  // namespace detail

// Moves every terminal of a non-initial rule back into a POS rule below it.
inline Derivation defuse_terminals(const Derivation& d, const PosLookup& pos, bool is_root = true) {
  const auto nlex = d.rule.comp.lexical_count();
  if (d.rule.is_terminating()) {
    if (nlex == 2) {
      Components comps = d.rule.comp.components();
      std::vector<Derivation> kids;
      int next = 1;
      for (auto& c : comps)
        for (auto& s : c)
          if (s.is_lexical()) {
            kids.push_back(detail::pos_rule(s, pos));
            s = Symbol::var(next++, 1);
          }
      Rule r(d.rule.lhs, {kids[0].rule.lhs, kids[1].rule.lhs}, detail::make_comp(comps));
      return Derivation(std::move(r), std::move(kids));
    }
    if (nlex == 1 && is_root) return d;
    if (nlex == 1) throw CorruptDerivation("uni-lexical terminating rule below the root");
    throw CorruptDerivation("terminating rule with " + std::to_string(nlex) + " terminals");
  }
  if (d.rule.is_monic() && nlex == 1) {
    Components comps = d.rule.comp.components();
    Derivation below = defuse_terminals(d.children[0], pos, false);
    const bool first = comps[0][0].is_lexical();
    Derivation pr;
    for (auto& c : comps)
      for (auto& s : c) {
        if (s.is_lexical()) {
          pr = detail::pos_rule(s, pos);
          s = Symbol::var(first ? 1 : 2, 1);
        } else if (first) {
          s.a = 2;
        }
      }
    std::vector<Derivation> kids;
    if (first) {
      kids.push_back(std::move(pr));
      kids.push_back(std::move(below));
    } else {
      kids.push_back(std::move(below));
      kids.push_back(std::move(pr));
    }
    Rule r(d.rule.lhs, {kids[0].rule.lhs, kids[1].rule.lhs}, detail::make_comp(comps));
    return Derivation(std::move(r), std::move(kids));
  }
  if (nlex != 0) throw CorruptDerivation("lexical rule of unexpected shape");
  return detail::rebuild(d, [&](const Derivation& c) { return defuse_terminals(c, pos, false); });
}

namespace detail {

inline Derivation split_chain(Derivation node) {
  if (!node.rule.lhs.is_chain()) return node;
  Nonterminal head{{node.rule.lhs.parts.front()}, node.rule.lhs.mark, node.rule.lhs.fanout};
  node.rule.lhs.parts.erase(node.rule.lhs.parts.begin());
  Derivation lower = split_chain(std::move(node));
  Nonterminal below = lower.rule.lhs;
  return Derivation(Rule(head, {below}, identity(head.fanout)), {std::move(lower)});
}

}  // namespace detail

// A+B+... -> c(...) becomes A -> id(B+...)(B+... -> c(...)), recursively.
inline Derivation expand_chains(const Derivation& d) {
  return detail::split_chain(detail::rebuild(d, [](const Derivation& c) { return expand_chains(c); }));
}

// Full inverse: uni-lexical derivation back to a (debinarized) tree.
inline Tree unlexicalize(const Derivation& d, const PosLookup& pos, const std::vector<std::string>& words) {
  Derivation base = expand_chains(defuse_terminals(unpropagate(merge_split(d)), pos));
  try {
    return unbinarize(derivation_to_tree(base, words));
  } catch (const StructuralError& e) {
    throw CorruptDerivation(e.what());
  }
}

}  // namespace lcfrs

#endif  // LCFRS_UNLEXICALIZE_HPP
