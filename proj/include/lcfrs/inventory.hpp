#ifndef LCFRS_INVENTORY_HPP
#define LCFRS_INVENTORY_HPP

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "binarize.hpp"
#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "grammar_io.hpp"
#include "induce.hpp"
#include "lexicalize.hpp"
#include "parallel.hpp"
#include "tree.hpp"
#include "treebank.hpp"

namespace lcfrs {

// A uni-lexical rule with its terminal replaced by a hole, plus the POS
// (nonterminal parts) of the word that filled it.
struct Supertag {
  Rule rule;
  std::vector<LabelId> pos;

  Rule fill(int terminal) const {
    Components comps = rule.comp.components();
    for (auto& c : comps)
      for (auto& s : c)
        if (s.is_hole()) s = Symbol::term(terminal);
    return Rule(rule.lhs, rule.rhs, Composition(comps), rule.swapped);
  }

  std::string pos_string() const { return chain_string(pos); }

  friend auto operator<=>(const Supertag&, const Supertag&) = default;
  friend bool operator==(const Supertag&, const Supertag&) = default;
};

// Supertag of one rule occurrence: the single terminal becomes a hole.
inline Supertag make_supertag(const Rule& r, const std::vector<std::vector<LabelId>>& pos) {
  Components comps = r.comp.components();
  int found = 0;
  int terminal = 0;
  for (auto& c : comps)
    for (auto& s : c)
      if (s.is_lexical()) {
        ++found;
        terminal = s.terminal();
        s = Symbol::hole();
      }
  if (found != 1) throw PreconditionError("supertag read-off needs a uni-lexical rule");
  if (terminal < 1 || static_cast<std::size_t>(terminal) > pos.size())
    throw PreconditionError("terminal position without POS");
  return Supertag{Rule(r.lhs, r.rhs, Composition(comps), r.swapped), pos[static_cast<std::size_t>(terminal - 1)]};
}

class SupertagInventory {
 public:
  SupertagInventory() = default;

  // Indices by decreasing count, then by printed line.
  static SupertagInventory build(const std::map<Supertag, std::size_t>& counts,
                                 const std::map<Nonterminal, std::size_t>& root_counts) {
    std::vector<std::tuple<std::size_t, std::string, const Supertag*>> order;
    for (const auto& [tag, n] : counts) order.emplace_back(n, print(tag), &tag);
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
      return std::get<1>(x) < std::get<1>(y);
    });
    SupertagInventory inv;
    for (const auto& [n, line, tag] : order) inv.add(*tag, n);
    std::vector<std::pair<std::size_t, Nonterminal>> roots;
    for (const auto& [nt, n] : root_counts) roots.emplace_back(n, nt);
    std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& [n, nt] : roots) inv.roots_.push_back(nt);
    return inv;
  }

  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }
  const Supertag& tag(std::size_t i) const { return tags_.at(i); }
  std::size_t count(std::size_t i) const { return counts_.at(i); }
  const std::vector<Supertag>& tags() const { return tags_; }

  std::optional<std::size_t> find(const Supertag& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Initial nonterminals, most frequent first.
  const std::vector<Nonterminal>& roots() const { return roots_; }

  std::string root_label() const { return roots_.empty() ? std::string(kRootLabel) : roots_.front().head_label(); }

  int max_fanout() const {
    int m = 1;
    for (const auto& t : tags_) {
      m = std::max(m, t.rule.lhs.fanout);
      for (const auto& r : t.rule.rhs) m = std::max(m, r.fanout);
    }
    return m;
  }

  // Header: count TAB root nonterminals; then index TAB count TAB pos TAB rule.
  void write(std::ostream& os) const {
    os << tags_.size();
    for (const auto& r : roots_) os << '\t' << to_string(r);
    os << '\n';
    for (std::size_t i = 0; i < tags_.size(); ++i) os << i << '\t' << counts_[i] << '\t' << print(tags_[i]) << '\n';
  }

  static SupertagInventory read(std::istream& in) {
    SupertagInventory inv;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw FormatError("empty inventory file", 1);
    ++lineno;
    auto head = detail::split(line, '\t');
    std::size_t expected = 0;
    try {
      expected = static_cast<std::size_t>(detail::parse_int(head[0], "tag count"));
      for (std::size_t i = 1; i < head.size(); ++i) inv.roots_.push_back(parse_nonterminal(head[i]));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    }
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = detail::split(line, '\t');
      if (f.size() != 7) throw FormatError("inventory line needs 7 tab-separated fields", lineno);
      try {
        auto idx = static_cast<std::size_t>(detail::parse_int(f[0], "tag index"));
        if (idx != inv.size()) throw FormatError("inventory indices must be dense and ascending");
        auto n = static_cast<std::size_t>(detail::parse_int(f[1], "tag count"));
        Supertag t{parse_rule_fields(f[3], f[4], f[5], f[6]), f[2] == "-" ? std::vector<LabelId>{} : parse_chain(f[2])};
        if (t.rule.comp.lexical_count() != 1 || !t.rule.comp.first_lexical()->is_hole())
          throw FormatError("supertag template must contain exactly one hole");
        inv.add(std::move(t), n);
      } catch (const FormatError& e) {
        throw FormatError(e.what(), lineno);
      } catch (const Error& e) {
        throw FormatError(e.what(), lineno);
      }
    }
    if (inv.size() != expected)
      throw FormatError("inventory header announces " + std::to_string(expected) + " tags, found " +
                        std::to_string(inv.size()), lineno);
    if (inv.roots_.empty()) inv.infer_roots();
    return inv;
  }

  static std::string print(const Supertag& t) {
    return (t.pos.empty() ? std::string("-") : t.pos_string()) + '\t' + to_line(t.rule);
  }

 private:
  void add(Supertag t, std::size_t n) {
    if (!index_.emplace(t, tags_.size()).second) throw FormatError("duplicate supertag in inventory");
    tags_.push_back(std::move(t));
    counts_.push_back(n);
  }

  // Without a header: a lhs never used on any rhs can only be a root.
  void infer_roots() {
    std::set<Nonterminal> used;
    for (const auto& t : tags_) used.insert(t.rule.rhs.begin(), t.rule.rhs.end());
    std::set<Nonterminal> seen;
    for (const auto& t : tags_)
      if (!used.count(t.rule.lhs) && seen.insert(t.rule.lhs).second) roots_.push_back(t.rule.lhs);
  }

  std::vector<Supertag> tags_;
  std::vector<std::size_t> counts_;
  std::vector<Nonterminal> roots_;
  std::map<Supertag, std::size_t> index_;
};

// word -> tag index -> count
using Lexicon = std::map<std::string, std::map<std::size_t, std::size_t>>;

inline void write_lexicon(std::ostream& os, const Lexicon& lex) {
  for (const auto& [w, tags] : lex)
    for (const auto& [t, n] : tags) os << w << '\t' << t << '\t' << n << '\n';
}

inline Lexicon read_lexicon(std::istream& in, std::size_t num_tags) {
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = detail::split(line, '\t');
    if (f.size() != 3) throw FormatError("lexicon line needs word, tag, count", lineno);
    try {
      auto t = static_cast<std::size_t>(detail::parse_int(f[1], "tag index"));
      if (t >= num_tags) throw FormatError("tag index " + std::to_string(t) + " outside inventory");
      lex[std::string(f[0])][t] += static_cast<std::size_t>(detail::parse_int(f[2], "count"));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  return lex;
}

struct ExtractOptions {
  int h = 0;
  int v = 1;
  PosMode pos_mode = PosMode::chain;
};

// Rule occurrences summed over the corpus after each stage.
struct StepStats {
  std::size_t sentences = 0;
  std::size_t induced = 0;
  std::size_t collapsed = 0;
  std::size_t fused = 0;
  std::size_t propagated = 0;
  std::size_t split = 0;

  StepStats& operator+=(const StepStats& o) {
    sentences += o.sentences;
    induced += o.induced;
    collapsed += o.collapsed;
    fused += o.fused;
    propagated += o.propagated;
    split += o.split;
    return *this;
  }
};

struct LexicalizedSentence {
  std::vector<std::string> words;
  Derivation derivation;
  std::vector<std::vector<LabelId>> pos;  // by position - 1
};

inline LexicalizedSentence lexicalize_tree(const Tree& t, const ExtractOptions& opt, StepStats* stats = nullptr) {
  validate(t);
  LexicalizedSentence out;
  out.words = words(t);
  Derivation d = induce_derivation(binarize(t, opt.h, opt.v));
  Derivation c = collapse_chains(d);
  out.pos = collect_pos(c, opt.pos_mode);
  Derivation f = fuse_terminals(c);
  Derivation p = propagate_terminals(f);
  out.derivation = split_double(p);
  if (stats) {
    stats->sentences += 1;
    stats->induced += d.size();
    stats->collapsed += c.size();
    stats->fused += f.size();
    stats->propagated += p.size();
    stats->split += out.derivation.size();
  }
  if (out.derivation.size() != out.words.size() || !is_unilexical(out.derivation))
    throw StructuralError("lexicalized derivation is not one uni-lexical rule per word");
  return out;
}

// Supertag per position (index position - 1).
inline std::vector<Supertag> read_off(const LexicalizedSentence& s) {
  std::vector<std::optional<Supertag>> at(s.words.size());
  for_each_node(s.derivation, [&](const Derivation& n) {
    auto sym = n.rule.comp.first_lexical();
    if (!sym || !sym->is_terminal()) throw PreconditionError("rule without terminal in lexicalized derivation");
    auto p = static_cast<std::size_t>(sym->terminal());
    if (p < 1 || p > at.size() || at[p - 1]) throw StructuralError("positions not covered exactly once");
    at[p - 1] = make_supertag(n.rule, s.pos);
  });
  std::vector<Supertag> out;
  for (auto& t : at) out.push_back(std::move(*t));
  return out;
}

inline constexpr std::size_t kNoTag = static_cast<std::size_t>(-1);

inline std::vector<std::size_t> tag_indices(const std::vector<Supertag>& tags, const SupertagInventory& inv) {
  std::vector<std::size_t> out;
  for (const auto& t : tags) out.push_back(inv.find(t).value_or(kNoTag));
  return out;
}

struct Extraction {
  SupertagInventory inventory;
  Lexicon lexicon;
  std::vector<std::vector<std::size_t>> gold;  // per extracted sentence
  std::vector<std::string> sentence_ids;
  std::vector<std::string> skipped;  // "id: reason"
  StepStats stats;
  std::set<std::string> grammar;  // lexical rule lines with quoted words
};

inline Extraction extract(const std::vector<Sentence>& corpus, const ExtractOptions& opt, unsigned threads = 1) {
  struct Result {
    std::optional<LexicalizedSentence> lex;
    std::vector<Supertag> tags;
    std::string error;
    StepStats stats;
  };
  std::vector<Result> results(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    try {
      auto lex = lexicalize_tree(corpus[i].tree, opt, &results[i].stats);
      results[i].tags = read_off(lex);
      results[i].lex = std::move(lex);
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });

  Extraction ex;
  std::map<Supertag, std::size_t> counts;
  std::map<Nonterminal, std::size_t> roots;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& r = results[i];
    if (!r.lex) {
      ex.skipped.push_back(corpus[i].id + ": " + r.error);
      continue;
    }
    ex.stats += r.stats;
    for (const auto& t : r.tags) ++counts[t];
    ++roots[r.lex->derivation.rule.lhs];
    const auto& words = r.lex->words;
    for_each_node(r.lex->derivation, [&](const Derivation& n) {
      ex.grammar.insert(to_line(n.rule, [&](int p) { return detail::quote(words[static_cast<std::size_t>(p - 1)]); }));
    });
  }
  ex.inventory = SupertagInventory::build(counts, roots);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& r = results[i];
    if (!r.lex) continue;
    auto idx = tag_indices(r.tags, ex.inventory);
    for (std::size_t p = 0; p < idx.size(); ++p) ++ex.lexicon[r.lex->words[p]][idx[p]];
    ex.gold.push_back(std::move(idx));
    ex.sentence_ids.push_back(corpus[i].id);
  }
  return ex;
}

}  // namespace lcfrs

#endif  // LCFRS_INVENTORY_HPP
