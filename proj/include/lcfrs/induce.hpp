#ifndef LCFRS_INDUCE_HPP
#define LCFRS_INDUCE_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "tree.hpp"

namespace lcfrs {

namespace detail {

inline Derivation induce_node(const Tree& t, std::vector<int>& pos_out) {
  if (t.is_leaf()) throw StructuralError("word at position " + std::to_string(t.position) + " has no POS tag");
  if (t.is_preterminal()) {
    pos_out = {t.children[0].position};
    return Derivation(Rule(Nonterminal::make(t.label, 1), {}, Composition({{Symbol::term(t.children[0].position)}})));
  }
  std::vector<Derivation> kids;
  std::vector<std::vector<std::pair<int, int>>> kid_runs;
  std::vector<int> mine;
  for (const auto& c : t.children) {
    std::vector<int> ps;
    kids.push_back(induce_node(c, ps));
    kid_runs.push_back(runs(ps));
    mine.insert(mine.end(), ps.begin(), ps.end());
  }
  std::sort(mine.begin(), mine.end());
  // run start -> (argument, component, run end)
  std::map<int, std::tuple<int, int, int>> starts;
  for (std::size_t i = 0; i < kid_runs.size(); ++i)
    for (std::size_t j = 0; j < kid_runs[i].size(); ++j)
      starts[kid_runs[i][j].first] = {static_cast<int>(i) + 1, static_cast<int>(j) + 1, kid_runs[i][j].second};
  Components comps;
  for (auto [a, b] : runs(mine)) {
    Component comp;
    for (int p = a; p <= b;) {
      auto it = starts.find(p);
      if (it == starts.end()) throw StructuralError("overlapping or inconsistent child spans");
      auto [i, j, end] = it->second;
      comp.push_back(Symbol::var(i, j));
      p = end + 1;
    }
    comps.push_back(std::move(comp));
  }
  std::vector<Nonterminal> rhs;
  for (const auto& k : kids) rhs.push_back(k.rule.lhs);
  Rule r(Nonterminal::make(t.label, static_cast<int>(comps.size())), std::move(rhs), Composition(comps));
  pos_out = std::move(mine);
  return Derivation(std::move(r), std::move(kids));
}

}  // namespace detail

// Reads one rule per tree node off a (binarized) tree. Preterminals become
// A -> (position); inner nodes get terminal-free compositions describing how
// the children's position runs interleave. Terminals are sentence positions.
inline Derivation induce_derivation(const Tree& t) {
  if (fanout(t) != 1) throw StructuralError("tree root has fanout " + std::to_string(fanout(t)) + "; initial nonterminal needs fanout 1");
  std::vector<int> ps;
  return detail::induce_node(t, ps);
}

// Reverse of induce_derivation for derivations of the treebank grammar.
inline Tree derivation_to_tree(const Derivation& d, const std::vector<std::string>& words) {
  if (d.rule.lhs.parts.size() != 1) throw StructuralError("chain nonterminal left in derivation: expand chains first");
  const std::string& label = d.rule.lhs.head_label();
  if (d.rule.is_terminating()) {
    auto syms = d.rule.comp.symbols();
    if (syms.size() != 1 || !syms[0].is_terminal())
      throw StructuralError("terminating rule is not a part-of-speech rule");
    int p = syms[0].terminal();
    if (p < 1 || static_cast<std::size_t>(p) > words.size()) throw StructuralError("terminal position out of range");
    return Tree::preterminal(label, p, words[static_cast<std::size_t>(p - 1)]);
  }
  if (d.rule.comp.lexical_count() != 0) throw StructuralError("lexical inner rule left in derivation");
  std::vector<Tree> kids;
  for (const auto& c : d.children) kids.push_back(derivation_to_tree(c, words));
  Tree t = Tree::node(label, std::move(kids));
  canonicalize(t);
  return t;
}

}  // namespace lcfrs

#endif  // LCFRS_INDUCE_HPP
