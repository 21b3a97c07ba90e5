#ifndef LCFRS_TREE_HPP
#define LCFRS_TREE_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace lcfrs {

// Discontinuous phrase-structure tree. Leaves carry a 1-based sentence
// position and a word and have no label; the POS tag is the label of a
// leaf's parent (the preterminal).
struct Tree {
  std::string label;
  std::vector<Tree> children;
  int position = 0;
  std::string word;

  static Tree leaf(int position, std::string word) {
    Tree t;
    t.position = position;
    t.word = std::move(word);
    return t;
  }
  static Tree node(std::string label, std::vector<Tree> children) {
    Tree t;
    t.label = std::move(label);
    t.children = std::move(children);
    return t;
  }
  static Tree preterminal(std::string pos, int position, std::string word) {
    return node(std::move(pos), {leaf(position, std::move(word))});
  }

  bool is_leaf() const { return position > 0; }
  bool is_preterminal() const { return children.size() == 1 && children[0].is_leaf(); }

  friend bool operator==(const Tree&, const Tree&) = default;
};

inline void collect_positions(const Tree& t, std::vector<int>& out) {
  if (t.is_leaf()) {
    out.push_back(t.position);
    return;
  }
  for (const auto& c : t.children) collect_positions(c, out);
}

// Sorted leaf positions below `t`.
inline std::vector<int> positions(const Tree& t) {
  std::vector<int> out;
  collect_positions(t, out);
  std::sort(out.begin(), out.end());
  return out;
}

// Maximal contiguous runs [first, last] of a sorted position list.
inline std::vector<std::pair<int, int>> runs(const std::vector<int>& sorted) {
  std::vector<std::pair<int, int>> out;
  for (int p : sorted) {
    if (!out.empty() && out.back().second + 1 == p)
      out.back().second = p;
    else
      out.emplace_back(p, p);
  }
  return out;
}

inline int fanout(const Tree& t) { return static_cast<int>(runs(positions(t)).size()); }

inline int min_position(const Tree& t) {
  if (t.is_leaf()) return t.position;
  int m = 0;
  for (const auto& c : t.children) {
    int p = min_position(c);
    if (p && (!m || p < m)) m = p;
  }
  return m;
}

// Orders children by their smallest position, recursively.
inline void canonicalize(Tree& t) {
  for (auto& c : t.children) canonicalize(c);
  std::stable_sort(t.children.begin(), t.children.end(),
                   [](const Tree& a, const Tree& b) { return min_position(a) < min_position(b); });
}

inline bool is_discontinuous(const Tree& t) {
  if (t.is_leaf()) return false;
  if (fanout(t) > 1) return true;
  return std::any_of(t.children.begin(), t.children.end(), [](const Tree& c) { return is_discontinuous(c); });
}

inline std::size_t sentence_length(const Tree& t) { return positions(t).size(); }

// Words indexed by position - 1.
inline std::vector<std::string> words(const Tree& t) {
  std::vector<std::string> out(sentence_length(t));
  auto visit = [&](auto&& self, const Tree& n) -> void {
    if (n.is_leaf()) {
      if (n.position < 1 || static_cast<std::size_t>(n.position) > out.size())
        throw StructuralError("leaf position out of range");
      out[static_cast<std::size_t>(n.position - 1)] = n.word;
      return;
    }
    for (const auto& c : n.children) self(self, c);
  };
  visit(visit, t);
  return out;
}

// Preterminal labels indexed by position - 1 (empty for bare leaves).
inline std::vector<std::string> pos_tags(const Tree& t) {
  std::vector<std::string> out(sentence_length(t));
  auto visit = [&](auto&& self, const Tree& n) -> void {
    for (const auto& c : n.children) {
      if (c.is_leaf()) {
        if (n.children.size() == 1 && c.position >= 1 && static_cast<std::size_t>(c.position) <= out.size())
          out[static_cast<std::size_t>(c.position - 1)] = n.label;
      } else {
        self(self, c);
      }
    }
  };
  visit(visit, t);
  return out;
}

// Leaf positions are distinct and exactly 1..n; every inner node has children.
inline void validate(const Tree& t) {
  auto visit = [&](auto&& self, const Tree& n) -> void {
    if (n.is_leaf()) return;
    if (n.children.empty()) throw StructuralError("node '" + n.label + "' has no children");
    for (const auto& c : n.children) self(self, c);
  };
  if (t.is_leaf()) throw StructuralError("tree root is a bare leaf");
  visit(visit, t);
  auto ps = positions(t);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i && ps[i] == ps[i - 1]) throw StructuralError("duplicate leaf position " + std::to_string(ps[i]));
    if (ps[i] != static_cast<int>(i) + 1) throw StructuralError("leaf positions are not 1..n");
  }
}

}  // namespace lcfrs

#endif  // LCFRS_TREE_HPP
