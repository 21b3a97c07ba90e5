#ifndef LCFRS_PARSER_HPP
#define LCFRS_PARSER_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "inventory.hpp"
#include "supertagger.hpp"
#include "tree.hpp"
#include "unlexicalize.hpp"

namespace lcfrs {

// A supertag instantiated at one sentence position.
struct PositionRule {
  Rule rule;  // exactly one terminal: the position
  double weight = 0;
  std::size_t tag = kNoTag;
  int position = 0;
};

struct ParseResult {
  bool ok = false;
  double score = -std::numeric_limits<double>::infinity();
  Derivation derivation;
  std::vector<std::size_t> tags;  // chosen tag per position (index position - 1)
  std::size_t items = 0;
};

// Top-k predictions per position as position rules. Tags that differ only in
// pos or swapped flag give the same rule; the better-scored one is kept.
inline std::vector<PositionRule> instantiate(const SentencePrediction& pred, const SupertagInventory& inv, std::size_t k) {
  std::vector<PositionRule> out;
  for (std::size_t i = 0; i < pred.tags.size(); ++i) {
    const int p = static_cast<int>(i) + 1;
    std::set<std::tuple<Nonterminal, std::vector<Nonterminal>, Composition>> seen;
    for (std::size_t j = 0; j < pred.tags[i].size() && j < k; ++j) {
      const auto& st = pred.tags[i][j];
      if (st.tag >= inv.size()) throw FormatError("tag index " + std::to_string(st.tag) + " outside inventory");
      const Supertag& tag = inv.tag(st.tag);
      if (!seen.emplace(tag.rule.lhs, tag.rule.rhs, tag.rule.comp).second) continue;
      out.push_back({tag.fill(p), st.score, st.tag, p});
    }
  }
  return out;
}

namespace detail {

using Span = std::pair<int, int>;

struct ChartItem {
  int nt;
  std::vector<Span> spans;
  int size;
  double score;
  int rule;
  int child[2];
};

struct CompiledRule {
  int lhs;
  std::vector<int> rhs;
  std::vector<std::vector<Symbol>> comps;
};

// Evaluates a composition over interval tuples; fails unless every
// component is contiguous and components are disjoint and ascending.
inline bool combine(const CompiledRule& r, const ChartItem* a, const ChartItem* b, std::vector<Span>& out) {
  out.clear();
  for (const auto& comp : r.comps) {
    int start = -1, end = -1;
    for (const auto& s : comp) {
      Span piece;
      if (s.is_variable()) {
        const ChartItem* src = s.arg() == 1 ? a : b;
        piece = src->spans[static_cast<std::size_t>(s.comp() - 1)];
      } else {
        piece = {s.terminal(), s.terminal()};
      }
      if (start < 0)
        start = piece.first;
      else if (piece.first != end + 1)
        return false;
      end = piece.second;
    }
    if (!out.empty() && out.back().second >= start) return false;
    out.emplace_back(start, end);
  }
  return true;
}

inline std::string item_key(int nt, const std::vector<Span>& spans) {
  std::string key(sizeof(int) + spans.size() * 2 * sizeof(int), '\0');
  char* p = key.data();
  std::memcpy(p, &nt, sizeof nt);
  p += sizeof nt;
  for (const auto& [x, y] : spans) {
    std::memcpy(p, &x, sizeof x);
    std::memcpy(p + sizeof x, &y, sizeof y);
    p += 2 * sizeof x;
  }
  return key;
}

}  // namespace detail

// Viterbi parse of the position sequence 1..n. Items are processed by the
// number of covered positions: every rule adds exactly one position, so an
// item's best score is final before its level starts.
inline ParseResult parse(const std::vector<PositionRule>& rules, int n, const std::vector<Nonterminal>& roots) {
  ParseResult res;
  if (n < 1) return res;

  std::map<Nonterminal, int> ids;
  for (const auto& r : rules) {
    ids.emplace(r.rule.lhs, 0);
    for (const auto& b : r.rule.rhs) ids.emplace(b, 0);
  }
  for (const auto& nt : roots) ids.emplace(nt, 0);
  {
    int next = 0;
    for (auto& [nt, id] : ids) id = next++;
  }
  std::vector<bool> is_root(ids.size(), false);
  for (const auto& nt : roots) is_root[static_cast<std::size_t>(ids.at(nt))] = true;

  std::vector<detail::CompiledRule> compiled;
  std::vector<std::vector<std::pair<int, int>>> by_arg(ids.size());  // nt -> (rule, argument)
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i].rule;
    if (r.rhs.size() > 2) throw PreconditionError("parser supports rules of rank <= 2");
    if (r.comp.lexical_count() != 1) throw PreconditionError("position rule must contain exactly one terminal");
    detail::CompiledRule c{ids.at(r.lhs), {}, r.comp.components()};
    for (std::size_t a = 0; a < r.rhs.size(); ++a) {
      c.rhs.push_back(ids.at(r.rhs[a]));
      by_arg[static_cast<std::size_t>(c.rhs.back())].emplace_back(static_cast<int>(i), static_cast<int>(a));
    }
    compiled.push_back(std::move(c));
  }

  std::vector<detail::ChartItem> items;
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> levels(static_cast<std::size_t>(n) + 1);
  auto add = [&](int nt, std::vector<detail::Span>& spans, int size, double score, int rule, int c0, int c1) {
    if (size > n) return;
    auto key = detail::item_key(nt, spans);
    auto [it, fresh] = index.emplace(std::move(key), static_cast<int>(items.size()));
    if (fresh) {
      items.push_back({nt, spans, size, score, rule, {c0, c1}});
      levels[static_cast<std::size_t>(size)].push_back(it->second);
    } else if (score > items[static_cast<std::size_t>(it->second)].score) {
      auto& old = items[static_cast<std::size_t>(it->second)];
      old.score = score;
      old.rule = rule;
      old.child[0] = c0;
      old.child[1] = c1;
    }
  };

  std::vector<detail::Span> buf;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!compiled[i].rhs.empty()) continue;
    if (detail::combine(compiled[i], nullptr, nullptr, buf))
      add(compiled[i].lhs, buf, 1, rules[i].weight, static_cast<int>(i), -1, -1);
  }

  std::vector<std::vector<int>> done(ids.size());
  for (int m = 1; m <= n; ++m) {
    const auto& level = levels[static_cast<std::size_t>(m)];
    for (std::size_t li = 0; li < level.size(); ++li) {
      const int x = level[li];
      const int xnt = items[static_cast<std::size_t>(x)].nt;
      done[static_cast<std::size_t>(xnt)].push_back(x);
      for (auto [ri, arg] : by_arg[static_cast<std::size_t>(xnt)]) {
        const auto& cr = compiled[static_cast<std::size_t>(ri)];
        const double w = rules[static_cast<std::size_t>(ri)].weight;
        if (cr.rhs.size() == 1) {
          const auto& X = items[static_cast<std::size_t>(x)];
          if (detail::combine(cr, &X, nullptr, buf)) {
            double sc = X.score + w;
            add(cr.lhs, buf, m + 1, sc, ri, x, -1);
          }
          continue;
        }
        const int other = cr.rhs[static_cast<std::size_t>(1 - arg)];
        const auto& partners = done[static_cast<std::size_t>(other)];
        for (std::size_t pi = 0; pi < partners.size(); ++pi) {
          const int y = partners[pi];
          if (y == x) continue;
          const auto& X = items[static_cast<std::size_t>(x)];
          const auto& Y = items[static_cast<std::size_t>(y)];
          if (X.size + Y.size + 1 > n) continue;
          const auto* a = arg == 0 ? &X : &Y;
          const auto* b = arg == 0 ? &Y : &X;
          if (detail::combine(cr, a, b, buf)) {
            double sc = X.score + Y.score + w;
            int size = X.size + Y.size + 1;
            add(cr.lhs, buf, size, sc, ri, arg == 0 ? x : y, arg == 0 ? y : x);
          }
        }
      }
    }
  }
  res.items = items.size();

  int best = -1;
  for (int id : levels[static_cast<std::size_t>(n)]) {
    const auto& it = items[static_cast<std::size_t>(id)];
    if (!is_root[static_cast<std::size_t>(it.nt)] || it.spans.size() != 1) continue;
    if (best < 0 || it.score > items[static_cast<std::size_t>(best)].score ||
        (it.score == items[static_cast<std::size_t>(best)].score && it.nt < items[static_cast<std::size_t>(best)].nt))
      best = id;
  }
  if (best < 0) return res;

  res.ok = true;
  res.score = items[static_cast<std::size_t>(best)].score;
  res.tags.assign(static_cast<std::size_t>(n), kNoTag);
  auto build = [&](auto&& self, int id) -> Derivation {
    const auto& it = items[static_cast<std::size_t>(id)];
    const auto& pr = rules[static_cast<std::size_t>(it.rule)];
    res.tags[static_cast<std::size_t>(pr.position - 1)] = pr.tag;
    std::vector<Derivation> kids;
    for (int c : it.child)
      if (c >= 0) kids.push_back(self(self, c));
    return Derivation(pr.rule, std::move(kids));
  };
  res.derivation = build(build, best);
  return res;
}

// Root label over one preterminal per word.
inline Tree flat_tree(const std::string& root, const std::vector<std::string>& words,
                      const std::vector<std::string>& pos) {
  std::vector<Tree> kids;
  for (std::size_t i = 0; i < words.size(); ++i)
    kids.push_back(Tree::preterminal(i < pos.size() && !pos[i].empty() ? pos[i] : "UNK", static_cast<int>(i) + 1, words[i]));
  return Tree::node(root, std::move(kids));
}

struct ParseOutcome {
  Tree tree;
  std::string status;  // ok, fallback-<k>, noparse
  std::size_t k = 0;
  double score = 0;
};

// Tries each k of the schedule in turn; a parse whose derivation cannot be
// unlexicalized counts as a failure. Last resort is a flat tree.
inline ParseOutcome parse_with_fallback(const SentencePrediction& pred, const SupertagInventory& inv,
                                        const std::vector<std::size_t>& schedule) {
  const int n = static_cast<int>(pred.words.size());
  for (std::size_t si = 0; si < schedule.size(); ++si) {
    const std::size_t k = schedule[si];
    if (si > 0 && k <= schedule[si - 1]) continue;
    auto res = parse(instantiate(pred, inv, k), n, inv.roots());
    if (!res.ok) continue;
    try {
      PosLookup pos = [&](int p) { return inv.tag(res.tags.at(static_cast<std::size_t>(p - 1))).pos; };
      Tree t = unlexicalize(res.derivation, pos, pred.words);
      return {std::move(t), si == 0 ? "ok" : "fallback-" + std::to_string(k), k, res.score};
    } catch (const CorruptDerivation&) {
    }
  }
  std::vector<std::string> pos;
  for (const auto& tags : pred.tags)
    if (tags.empty() || tags.front().tag >= inv.size() || inv.tag(tags.front().tag).pos.empty())
      pos.emplace_back();
    else
      pos.push_back(labels().str(inv.tag(tags.front().tag).pos.back()));
  return {flat_tree(inv.root_label(), pred.words, pos), "noparse", 0, 0};
}

}  // namespace lcfrs

#endif  // LCFRS_PARSER_HPP
