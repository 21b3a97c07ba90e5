#ifndef LCFRS_LEXICALIZE_HPP
#define LCFRS_LEXICALIZE_HPP

#include <cstddef>
#include <vector>

#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"

namespace lcfrs {

// Transformations that turn a derivation of the binary, terminal- and
// initial-separated treebank LCFRS into a uni-lexical one. Terminals are
// sentence positions throughout.

// A -> id(B)(B -> c(...)) becomes A+B -> c(...), repeatedly.
inline Derivation collapse_chains(const Derivation& d) {
  if (d.rule.is_monic()) {
    if (!d.rule.comp.is_identity())
      throw PreconditionError("monic rule with non-identity composition cannot be collapsed");
    Derivation below = collapse_chains(d.children[0]);
    Nonterminal merged = d.rule.lhs;
    merged.parts.insert(merged.parts.end(), below.rule.lhs.parts.begin(), below.rule.lhs.parts.end());
    below.rule.lhs = std::move(merged);
    return below;
  }
  Derivation out;
  out.rule = d.rule;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    out.children.push_back(collapse_chains(d.children[i]));
    out.rule.rhs[i] = out.children.back().rule.lhs;
  }
  return out;
}

namespace detail {

inline Symbol pos_terminal(const Derivation& d) {
  auto syms = d.rule.comp.symbols();
  if (d.rule.comp.fanout() != 1 || syms.size() != 1 || !syms[0].is_lexical())
    throw PreconditionError("terminating rule below a branching rule must be A -> (sigma)");
  return syms[0];
}

}  // namespace detail

// Moves the terminal of every non-initial terminating rule into its parent
// by partial application. Terminating status is decided on the input.
inline Derivation fuse_terminals(const Derivation& d) {
  if (d.rule.is_terminating()) return d;
  if (d.rule.is_monic()) throw PreconditionError("fuse_terminals expects no monic rules (collapse chains first)");
  if (d.rule.rhs.size() != 2) throw PreconditionError("fuse_terminals expects a binary derivation");

  const bool left = d.children[0].rule.is_terminating();
  const bool right = d.children[1].rule.is_terminating();
  const Rule& r = d.rule;
  if (left && right) {
    auto c = partial_apply(r.comp, 2, detail::pos_terminal(d.children[1]));
    c = partial_apply(c, 1, detail::pos_terminal(d.children[0]));
    return Derivation(Rule(r.lhs, {}, std::move(c)));
  }
  if (left) {
    Derivation kid = fuse_terminals(d.children[1]);
    Rule nr(r.lhs, {kid.rule.lhs}, partial_apply(r.comp, 1, detail::pos_terminal(d.children[0])));
    return Derivation(std::move(nr), {std::move(kid)});
  }
  if (right) {
    Derivation kid = fuse_terminals(d.children[0]);
    Rule nr(r.lhs, {kid.rule.lhs}, partial_apply(r.comp, 2, detail::pos_terminal(d.children[1])));
    return Derivation(std::move(nr), {std::move(kid)});
  }
  Derivation a = fuse_terminals(d.children[0]);
  Derivation b = fuse_terminals(d.children[1]);
  Rule nr(r.lhs, {a.rule.lhs, b.rule.lhs}, r.comp);
  return Derivation(std::move(nr), {std::move(a), std::move(b)});
}

namespace detail {

// Nodes from the second child of `r` down to the leftmost terminating
// descendant (always following the first child).
inline std::vector<Derivation*> propagation_path(Derivation& r) {
  std::vector<Derivation*> path;
  Derivation* s = &r.children[1];
  path.push_back(s);
  while (!s->rule.is_terminating()) {
    if (s->children.empty()) throw StructuralError("derivation node without children");
    s = &s->children[0];
    path.push_back(s);
  }
  return path;
}

inline void propagate_into(Derivation& r) {
  auto path = propagation_path(r);
  Symbol carried{};
  Mark below = Mark::none;
  for (std::size_t idx = path.size(); idx-- > 0;) {
    Derivation& s = *path[idx];
    const bool is_t = idx + 1 == path.size();
    if (s.rule.lhs.mark != Mark::none) throw StructuralError("node lies on two propagation paths");
    Components comps = s.rule.comp.components();
    if (!is_t) {
      edit::insert_before_var(comps, 1, 1, carried);
      if (below == Mark::minus) edit::drop_first_var(comps, 1);
    }
    if (comps.empty() || comps[0].empty() || !comps[0][0].is_lexical())
      throw StructuralError("no lexical symbol to propagate (terminal-free path)");
    const Symbol removed = comps[0][0];
    comps[0].erase(comps[0].begin());
    const bool swapped = !is_t && removed != carried;
    Mark m = Mark::plus;
    if (comps[0].empty()) {
      comps.erase(comps.begin());
      m = Mark::minus;
    }
    if (comps.empty()) throw StructuralError("propagation removed the only symbol of a rule");
    if (swapped && !s.rule.is_monic()) throw StructuralError("terminal swap on a non-monic rule");

    Nonterminal lhs = s.rule.lhs.with_mark(m);
    lhs.fanout = static_cast<int>(comps.size());
    std::vector<Nonterminal> rhs = s.rule.rhs;
    if (!is_t) rhs[0] = path[idx + 1]->rule.lhs;
    s.rule = Rule(std::move(lhs), std::move(rhs), Composition(comps), s.rule.swapped || swapped);

    carried = removed;
    below = m;
  }
  Components comps = r.rule.comp.components();
  edit::insert_before_var(comps, 2, 1, carried);
  if (below == Mark::minus) edit::drop_first_var(comps, 2);
  std::vector<Nonterminal> rhs = r.rule.rhs;
  rhs[1] = path[0]->rule.lhs;
  r.rule = Rule(r.rule.lhs, std::move(rhs), Composition(comps), r.rule.swapped);
}

inline void propagate_postorder(Derivation& d) {
  for (auto& c : d.children) propagate_postorder(c);
  if (d.rule.is_branching()) {
    if (d.rule.rhs.size() != 2) throw PreconditionError("propagate_terminals expects binary branching rules");
    propagate_into(d);
  }
}

}  // namespace detail

// For each branching rule (post-order), moves the leftmost terminal of the
// leftmost terminating rule below its second child up to it, one node at a
// time; nodes on the way are marked ^+ or ^- (first component emptied) and
// monic rules whose own terminal left are flagged swapped.
inline Derivation propagate_terminals(const Derivation& d) {
  Derivation out = d;
  detail::propagate_postorder(out);
  return out;
}

// A -> (s1 s2) becomes A -> (s1 x1^1)(A^R)(A^R -> (s2)); likewise for
// A -> (s1, s2).
inline Derivation split_double(const Derivation& d) {
  if (!d.rule.is_terminating()) {
    Derivation out;
    out.rule = d.rule;
    for (std::size_t i = 0; i < d.children.size(); ++i) {
      out.children.push_back(split_double(d.children[i]));
      out.rule.rhs[i] = out.children.back().rule.lhs;
    }
    return out;
  }
  const auto n = d.rule.comp.lexical_count();
  if (n <= 1) return d;
  if (n > 2) throw PreconditionError("terminating rule with more than two terminals");
  if (d.rule.lhs.mark != Mark::none) throw StructuralError("annotated double-lexical rule cannot be split");
  Components comps = d.rule.comp.components();
  auto second = edit::find(comps, [seen = 0](const Symbol& s) mutable { return s.is_lexical() && ++seen == 2; });
  const Symbol sigma2 = comps[second->first][second->second];
  comps[second->first][second->second] = Symbol::var(1, 1);
  Nonterminal rest{d.rule.lhs.parts, Mark::rest, 1};
  Derivation leaf(Rule(rest, {}, Composition({{sigma2}})));
  return Derivation(Rule(d.rule.lhs, {rest}, Composition(comps)), {std::move(leaf)});
}

// How much of a collapsed preterminal chain is kept as the POS of a word:
// the whole chain (A+B+NN) or just the tag (NN).
enum class PosMode { chain, tag };

// POS nonterminal parts per position (index = position - 1), read off the
// terminating rules of a chain-collapsed derivation.
inline std::vector<std::vector<LabelId>> collect_pos(const Derivation& collapsed, PosMode mode) {
  std::vector<std::vector<LabelId>> out;
  for_each_node(collapsed, [&](const Derivation& n) {
    if (!n.rule.is_terminating()) return;
    for (const auto& s : n.rule.comp.symbols()) {
      if (!s.is_terminal()) continue;
      auto p = static_cast<std::size_t>(s.terminal());
      if (p == 0) throw StructuralError("terminal position 0");
      if (out.size() < p) out.resize(p);
      if (mode == PosMode::chain)
        out[p - 1] = n.rule.lhs.parts;
      else
        out[p - 1] = {n.rule.lhs.parts.back()};
    }
  });
  for (const auto& v : out)
    if (v.empty()) throw StructuralError("sentence position without a POS rule");
  return out;
}

inline Derivation lexicalize(const Derivation& d) {
  return split_double(propagate_terminals(fuse_terminals(collapse_chains(d))));
}

inline bool is_unilexical(const Derivation& d) {
  bool ok = true;
  for_each_node(d, [&](const Derivation& n) { ok = ok && n.rule.comp.lexical_count() == 1; });
  return ok;
}

}  // namespace lcfrs

#endif  // LCFRS_LEXICALIZE_HPP
