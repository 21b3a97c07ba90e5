#ifndef LCFRS_TEST_UTIL_HPP
#define LCFRS_TEST_UTIL_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "lcfrs/lcfrs.hpp"

#ifndef LCFRS_DATA_DIR
#define LCFRS_DATA_DIR "data"
#endif

namespace testutil {

using namespace lcfrs;

inline std::string data(const std::string& name) { return std::string(LCFRS_DATA_DIR) + "/" + name; }

// Rule from its text fields; terminals are bare position numbers.
inline Rule R(const std::string& lhs, const std::string& rhs, const std::string& comp, const std::string& flags = "-") {
  return parse_rule_fields(lhs, rhs, comp, flags);
}

inline Derivation D(Rule r, std::vector<Derivation> children = {}) { return Derivation(std::move(r), std::move(children)); }

inline std::vector<LabelId> chain(const std::string& s) { return parse_chain(s); }

// Flattened yield of a derivation, one vector per component.
inline std::vector<std::vector<int>> yield_of(const Derivation& d) { return derivation_yield(d); }

// Random uni-lexical derivation over positions 1..n with fanout <= max_fanout
// and rank <= 2; nonterminal labels drawn from `labels_`. The root covers
// 1..n as one component and is labelled `root`.
class RandomDerivations {
 public:
  explicit RandomDerivations(unsigned seed, std::vector<std::string> labels_ = {"A", "B", "C"}, int max_fanout = 2)
      : rng_(seed), labels_(std::move(labels_)), max_fanout_(max_fanout) {}

  Derivation make(int n, const std::string& root = "S") {
    std::vector<int> all;
    for (int i = 1; i <= n; ++i) all.push_back(i);
    return node(all, root);
  }

  std::mt19937& rng() { return rng_; }

 private:
  static int count_runs(const std::vector<int>& s) { return static_cast<int>(runs(s).size()); }

  Derivation node(const std::vector<int>& cover, const std::string& label) {
    std::uniform_int_distribution<std::size_t> pick(0, cover.size() - 1);
    const int term = cover[pick(rng_)];
    std::vector<int> a, b;
    for (int attempt = 0;; ++attempt) {
      a.clear();
      b.clear();
      std::uniform_int_distribution<int> side(0, 2);
      for (int p : cover) {
        if (p == term) continue;
        // blocks rather than independent coin flips keep fanout low
        int s = side(rng_);
        (s == 0 || (s == 2 && !a.empty() && a.back() == p - 1) ? a : b).push_back(p);
      }
      if (count_runs(a) <= max_fanout_ && count_runs(b) <= max_fanout_) break;
      if (attempt > 50) {
        a.clear();
        b.clear();
        for (int p : cover)
          if (p != term) (p < term ? a : b).push_back(p);
        break;
      }
    }
    if (a.empty()) std::swap(a, b);
    if (!a.empty() && !b.empty() && b.front() < a.front()) std::swap(a, b);

    std::vector<std::vector<int>> kids;
    if (!a.empty()) kids.push_back(a);
    if (!b.empty()) kids.push_back(b);

    Components comps;
    for (auto [lo, hi] : runs(cover)) {
      Component c;
      for (int p = lo; p <= hi; ++p) {
        if (p == term) {
          c.push_back(Symbol::term(p));
          continue;
        }
        for (std::size_t i = 0; i < kids.size(); ++i) {
          auto kr = runs(kids[i]);
          for (std::size_t j = 0; j < kr.size(); ++j)
            if (kr[j].first == p) c.push_back(Symbol::var(static_cast<int>(i) + 1, static_cast<int>(j) + 1));
        }
      }
      comps.push_back(c);
    }
    std::vector<Derivation> children;
    std::vector<Nonterminal> rhs;
    std::uniform_int_distribution<std::size_t> lab(0, labels_.size() - 1);
    for (const auto& k : kids) {
      children.push_back(node(k, labels_[lab(rng_)]));
      rhs.push_back(children.back().rule.lhs);
    }
    Nonterminal lhs = Nonterminal::make(label, count_runs(cover));
    return Derivation(Rule(lhs, rhs, Composition(comps)), std::move(children));
  }

  std::mt19937 rng_;
  std::vector<std::string> labels_;
  int max_fanout_;
};

// Random constituency tree over n words (binary-or-wider branching, some
// discontinuity, preterminals over every word).
inline Tree random_tree(std::mt19937& rng, int n) {
  static const std::vector<std::string> phrase = {"S", "NP", "VP", "PP"};
  static const std::vector<std::string> pos = {"DT", "NN", "VB", "IN"};
  std::uniform_int_distribution<std::size_t> pl(0, phrase.size() - 1), tl(0, pos.size() - 1);
  std::vector<Tree> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back(Tree::preterminal(pos[tl(rng)], i, "w" + std::to_string(i)));
  while (nodes.size() > 1) {
    std::uniform_int_distribution<std::size_t> arity(2, std::min<std::size_t>(3, nodes.size()));
    std::size_t k = arity(rng);
    std::vector<std::size_t> idx(nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<Tree> kids;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
      kids.insert(kids.begin(), nodes[*it]);
      nodes.erase(nodes.begin() + static_cast<long>(*it));
    }
    nodes.push_back(Tree::node(phrase[pl(rng)], std::move(kids)));
  }
  Tree root = Tree::node(kRootLabel, {nodes[0]});
  canonicalize(root);
  return root;
}

}  // namespace testutil

#endif  // LCFRS_TEST_UTIL_HPP
