#ifndef LCFRS_GRAMMAR_HPP
#define LCFRS_GRAMMAR_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "composition.hpp"
#include "error.hpp"
#include "symbols.hpp"

namespace lcfrs {

// Lexicalization bookkeeping on a nonterminal: ^+ / ^- from terminal
// propagation, ^R for the rest nonterminal of a split double-lexical rule.
enum class Mark : std::uint8_t { none, plus, minus, rest };

struct Nonterminal {
  std::vector<LabelId> parts;  // A+B+... after chain collapsing
  Mark mark = Mark::none;
  int fanout = 1;

  static Nonterminal make(std::string_view label, int fanout = 1) {
    return Nonterminal{{labels().intern(label)}, Mark::none, fanout};
  }

  bool is_chain() const { return parts.size() > 1; }

  // Label of the outermost chain element.
  const std::string& head_label() const { return labels().str(parts.front()); }

  Nonterminal with_mark(Mark m) const {
    Nonterminal n = *this;
    n.mark = m;
    return n;
  }

  void check() const {
    if (parts.empty()) throw PreconditionError("nonterminal without label");
    if (fanout < 1) throw PreconditionError("nonterminal fanout must be >= 1");
    if (mark == Mark::rest && fanout != 1) throw PreconditionError("^R nonterminal must have fanout 1");
  }

  friend auto operator<=>(const Nonterminal&, const Nonterminal&) = default;
  friend bool operator==(const Nonterminal&, const Nonterminal&) = default;
};

// A -> comp(B_1, ..., B_k). `swapped` records that terminal propagation
// replaced the rule's own terminal; it is only allowed on monic rules.
struct Rule {
  Nonterminal lhs;
  std::vector<Nonterminal> rhs;
  Composition comp;
  bool swapped = false;

  Rule() = default;
  Rule(Nonterminal l, std::vector<Nonterminal> r, Composition c, bool sw = false)
      : lhs(std::move(l)), rhs(std::move(r)), comp(std::move(c)), swapped(sw) {
    check();
  }

  void check() const {
    lhs.check();
    for (const auto& n : rhs) n.check();
    if (comp.fanout() != static_cast<std::size_t>(lhs.fanout))
      throw SortError("composition fanout " + std::to_string(comp.fanout()) + " does not match lhs fanout " +
                      std::to_string(lhs.fanout));
    const auto& sort = comp.arg_fanouts();
    if (sort.size() != rhs.size())
      throw SortError("composition rank " + std::to_string(sort.size()) + " does not match rhs length " +
                      std::to_string(rhs.size()));
    for (std::size_t i = 0; i < rhs.size(); ++i)
      if (sort[i] != rhs[i].fanout) throw SortError("composition sort does not match rhs fanout");
    if (swapped && rhs.size() != 1) throw PreconditionError("only monic rules can be swapped");
  }

  bool is_terminating() const { return rhs.empty(); }
  bool is_monic() const { return rhs.size() == 1; }
  bool is_branching() const { return rhs.size() >= 2; }

  friend auto operator<=>(const Rule&, const Rule&) = default;
  friend bool operator==(const Rule&, const Rule&) = default;
};

enum class Structure : std::uint8_t { terminating, monic, branching };
enum class Lexicality : std::uint8_t { nonlexical, unilexical, doublelexical, multilexical };

struct RuleClass {
  Structure structure;
  Lexicality lexicality;
  friend bool operator==(const RuleClass&, const RuleClass&) = default;
};

inline RuleClass classify(const Rule& r) {
  Structure s = r.rhs.empty() ? Structure::terminating : r.rhs.size() == 1 ? Structure::monic : Structure::branching;
  const auto n = r.comp.lexical_count();
  Lexicality l = n == 0   ? Lexicality::nonlexical
                 : n == 1 ? Lexicality::unilexical
                 : n == 2 ? Lexicality::doublelexical
                          : Lexicality::multilexical;
  return {s, l};
}

// A rule-labelled tree. Well-sorted iff children[i].rule.lhs == rule.rhs[i].
struct Derivation {
  Rule rule;
  std::vector<Derivation> children;

  Derivation() = default;
  explicit Derivation(Rule r, std::vector<Derivation> ch = {}) : rule(std::move(r)), children(std::move(ch)) {}

  void check_sorts() const {
    if (children.size() != rule.rhs.size())
      throw StructuralError("derivation node has " + std::to_string(children.size()) + " children, rule rank is " +
                            std::to_string(rule.rhs.size()));
    for (std::size_t i = 0; i < children.size(); ++i) {
      if (!(children[i].rule.lhs == rule.rhs[i])) throw StructuralError("derivation is not well-sorted");
      children[i].check_sorts();
    }
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const Derivation&, const Derivation&) = default;
};

template <class Fn>
void for_each_node(const Derivation& d, Fn&& fn) {
  fn(d);
  for (const auto& c : d.children) for_each_node(c, fn);
}

template <class Fn>
void for_each_node(Derivation& d, Fn&& fn) {
  fn(d);
  for (auto& c : d.children) for_each_node(c, fn);
}

// Bottom-up evaluation of all compositions.
template <class T, class TerminalFn>
Tuple<T> derivation_yield(const Derivation& d, TerminalFn&& terminal) {
  if (d.children.size() != d.rule.rhs.size()) throw StructuralError("derivation arity does not match its rule");
  std::vector<Tuple<T>> args;
  args.reserve(d.children.size());
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    if (!(d.children[i].rule.lhs == d.rule.rhs[i])) throw StructuralError("derivation is not well-sorted");
    args.push_back(derivation_yield<T>(d.children[i], terminal));
  }
  return evaluate<T>(d.rule.comp, std::span<const Tuple<T>>(args), terminal);
}

inline Tuple<int> derivation_yield(const Derivation& d) {
  return derivation_yield<int>(d, [](int t) { return t; });
}

// G = (N, Sigma, S, R). Terminal ids refer to an external word table.
struct Grammar {
  std::set<Nonterminal> nonterminals;
  std::set<int> terminals;
  Nonterminal initial;
  std::set<Rule> rules;

  void add(const Rule& r) {
    nonterminals.insert(r.lhs);
    nonterminals.insert(r.rhs.begin(), r.rhs.end());
    for (const auto& s : r.comp.symbols())
      if (s.is_terminal()) terminals.insert(s.terminal());
    rules.insert(r);
  }

  void check() const {
    if (initial.fanout != 1) throw PreconditionError("initial nonterminal must have fanout 1");
    if (!nonterminals.count(initial)) throw PreconditionError("initial nonterminal not in grammar");
    for (const auto& r : rules) {
      r.check();
      if (!nonterminals.count(r.lhs)) throw PreconditionError("rule lhs not in nonterminal set");
      for (const auto& n : r.rhs)
        if (!nonterminals.count(n)) throw PreconditionError("rule rhs not in nonterminal set");
      for (const auto& s : r.comp.symbols())
        if (s.is_terminal() && !terminals.count(s.terminal())) throw PreconditionError("rule terminal not in alphabet");
    }
  }
};

}  // namespace lcfrs

#endif  // LCFRS_GRAMMAR_HPP
