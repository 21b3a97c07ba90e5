#ifndef LCFRS_BINARIZE_HPP
#define LCFRS_BINARIZE_HPP

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "tree.hpp"

namespace lcfrs {

// Right-factored, strictly left-to-right binarization with markovization.
// An auxiliary node for label X is labelled "X|<l_1,...,l_h>" with the labels
// of the h siblings following its first child; with v > 1 every inner node
// above the preterminals gets "^<P_1,...,P_{v-1}>" (nearest ancestor first).
inline bool is_auxiliary(std::string_view label) { return label.find("|<") != std::string_view::npos; }

inline std::string base_label(std::string_view label) {
  auto cut = std::min(label.find("|<"), label.find("^<"));
  return std::string(label.substr(0, cut));
}

namespace detail {

inline std::string parent_decoration(const std::vector<std::string>& ancestors, int v) {
  if (v <= 1 || ancestors.empty()) return {};
  std::string out = "^<";
  int taken = 0;
  for (auto it = ancestors.rbegin(); it != ancestors.rend() && taken < v - 1; ++it, ++taken) {
    if (taken) out += ',';
    out += *it;
  }
  return out + ">";
}

inline Tree binarize(const Tree& t, int h, int v, std::vector<std::string>& ancestors) {
  if (t.is_leaf() || t.is_preterminal()) return t;
  const std::string deco = parent_decoration(ancestors, v);
  ancestors.push_back(t.label);
  std::vector<Tree> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(binarize(c, h, v, ancestors));
  ancestors.pop_back();

  if (kids.size() <= 2) return Tree::node(t.label + deco, std::move(kids));

  auto aux_label = [&](std::size_t first) {
    std::string l = t.label + "|<";
    for (std::size_t i = first + 1, n = 0; i < t.children.size() && n < static_cast<std::size_t>(h); ++i, ++n) {
      if (n) l += ',';
      l += t.children[i].label;
    }
    return l + ">" + deco;
  };
  // Build from the right: the last aux node covers the final two children.
  std::size_t m = kids.size();
  Tree right = Tree::node(aux_label(m - 2), {std::move(kids[m - 2]), std::move(kids[m - 1])});
  for (std::size_t i = m - 2; i-- > 1;) right = Tree::node(aux_label(i), {std::move(kids[i]), std::move(right)});
  return Tree::node(t.label + deco, {std::move(kids[0]), std::move(right)});
}

inline Tree unbinarize_node(const Tree& t) {
  if (t.is_leaf()) return t;
  Tree out = Tree::node(base_label(t.label), {});
  for (const auto& c : t.children) {
    Tree u = unbinarize_node(c);
    if (!c.is_leaf() && is_auxiliary(c.label)) {
      for (auto& g : u.children) out.children.push_back(std::move(g));
    } else {
      out.children.push_back(std::move(u));
    }
  }
  return out;
}

}  // namespace detail

inline Tree binarize(const Tree& t, int h, int v) {
  if (h < 0 || v < 1) throw PreconditionError("binarization needs h >= 0 and v >= 1");
  std::vector<std::string> ancestors;
  Tree b = detail::binarize(t, h, v, ancestors);
  canonicalize(b);
  return b;
}

inline Tree unbinarize(const Tree& t) {
  if (!t.is_leaf() && is_auxiliary(t.label)) throw StructuralError("auxiliary node at the root");
  Tree u = detail::unbinarize_node(t);
  canonicalize(u);
  return u;
}

}  // namespace lcfrs

#endif  // LCFRS_BINARIZE_HPP
