#ifndef LCFRS_TREEBANK_HPP
#define LCFRS_TREEBANK_HPP

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "tree.hpp"

namespace lcfrs {

// Label of the artificial root that every export sentence hangs from.
inline constexpr const char* kRootLabel = "ROOT";

struct Sentence {
  std::string id;
  Tree tree;
};

namespace detail {

inline std::vector<std::string> fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool is_node_ref(const std::string& f) {
  return f.size() > 1 && f[0] == '#' &&
         std::all_of(f.begin() + 1, f.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline int to_int(const std::string& s, const std::string& sid, std::size_t line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("sentence " + sid + ": bad number '" + s + "'", line);
  }
}

struct ExportBlock {
  std::string id;
  std::size_t first_line = 0;
  struct Token {
    std::string word, pos;
    int parent;
  };
  struct Node {
    std::string label;
    int parent;
  };
  std::vector<Token> tokens;
  std::map<int, Node> nodes;
};

inline Tree build_export_tree(const ExportBlock& b) {
  std::map<int, std::vector<Tree>> kids;
  for (std::size_t i = 0; i < b.tokens.size(); ++i) {
    const auto& tok = b.tokens[i];
    if (tok.parent != 0 && !b.nodes.count(tok.parent))
      throw FormatError("sentence " + b.id + ": dangling parent reference #" + std::to_string(tok.parent), b.first_line);
    kids[tok.parent].push_back(Tree::preterminal(tok.pos, static_cast<int>(i) + 1, tok.word));
  }
  for (const auto& [id, node] : b.nodes)
    if (node.parent != 0 && !b.nodes.count(node.parent))
      throw FormatError("sentence " + b.id + ": dangling parent reference #" + std::to_string(node.parent),
                        b.first_line);
  std::vector<int> state(b.nodes.size(), 0);
  std::map<int, int> index;
  for (const auto& [id, node] : b.nodes) index[id] = static_cast<int>(index.size());
  auto build = [&](auto&& self, int id) -> Tree {
    auto& st = state[static_cast<std::size_t>(index[id])];
    if (st == 1) throw FormatError("sentence " + b.id + ": cyclic parent references", b.first_line);
    st = 1;
    std::vector<Tree> children = kids[id];
    for (const auto& [cid, cnode] : b.nodes)
      if (cnode.parent == id) children.push_back(self(self, cid));
    if (children.empty()) throw FormatError("sentence " + b.id + ": node #" + std::to_string(id) + " has no children", b.first_line);
    st = 2;
    return Tree::node(b.nodes.at(id).label, std::move(children));
  };
  std::vector<Tree> top = kids[0];
  for (const auto& [id, node] : b.nodes)
    if (node.parent == 0) top.push_back(build(build, id));
  for (const auto& [id, node] : b.nodes)
    if (state[static_cast<std::size_t>(index[id])] != 2)
      throw FormatError("sentence " + b.id + ": node #" + std::to_string(id) + " not reachable from the root", b.first_line);
  if (top.empty()) throw FormatError("sentence " + b.id + ": empty sentence", b.first_line);
  Tree t = Tree::node(kRootLabel, std::move(top));
  canonicalize(t);
  return t;
}

}  // namespace detail

// NEGRA export format 3 or 4. Format is taken from a #FORMAT line when
// present, otherwise from the parity of the first token line's column count
// (format 3: 5 + 2m columns, format 4: 6 + 2m).
inline std::vector<Sentence> read_export_sentences(std::istream& in) {
  std::vector<Sentence> out;
  int format = 0;
  bool in_block = false, in_table = false;
  detail::ExportBlock block;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto c = raw.find("%%"); c != std::string::npos) raw.erase(c);
    auto f = detail::fields(raw);
    if (f.empty()) continue;
    if (in_table) {
      if (f[0] == "#EOT") in_table = false;
      continue;
    }
    if (f[0] == "#FORMAT") {
      if (f.size() < 2) throw FormatError("#FORMAT without version", lineno);
      format = detail::to_int(f[1], "-", lineno);
      if (format != 3 && format != 4) throw FormatError("unsupported export format " + f[1], lineno);
      continue;
    }
    if (f[0] == "#BOT") {
      in_table = true;
      continue;
    }
    if (f[0] == "#BOS") {
      if (in_block) throw FormatError("sentence " + block.id + ": missing #EOS", lineno);
      in_block = true;
      block = {};
      block.id = f.size() > 1 ? f[1] : std::to_string(out.size() + 1);
      block.first_line = lineno;
      continue;
    }
    if (f[0] == "#EOS") {
      if (!in_block) throw FormatError("#EOS without #BOS", lineno);
      out.push_back({block.id, detail::build_export_tree(block)});
      in_block = false;
      continue;
    }
    if (!in_block) throw FormatError("content outside #BOS/#EOS block", lineno);
    if (!format) format = f.size() % 2 == 1 ? 3 : 4;
    const std::size_t label_col = format == 3 ? 1 : 2;
    const std::size_t parent_col = format == 3 ? 4 : 5;
    if (f.size() <= parent_col) throw FormatError("sentence " + block.id + ": too few columns", lineno);
    int parent = detail::to_int(f[parent_col], block.id, lineno);
    if (detail::is_node_ref(f[0])) {
      int id = detail::to_int(f[0].substr(1), block.id, lineno);
      if (!block.nodes.emplace(id, detail::ExportBlock::Node{f[label_col], parent}).second)
        throw FormatError("sentence " + block.id + ": duplicate node id #" + std::to_string(id), lineno);
    } else {
      block.tokens.push_back({f[0], f[label_col], parent});
    }
  }
  if (in_block) throw FormatError("sentence " + block.id + ": missing #EOS", lineno);
  return out;
}

inline std::vector<Tree> read_export(std::istream& in) {
  std::vector<Tree> out;
  for (auto& s : read_export_sentences(in)) out.push_back(std::move(s.tree));
  return out;
}

namespace detail {

inline std::string escape_bracket(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '(')
      out += "-LRB-";
    else if (c == ')')
      out += "-RRB-";
    else
      out += c;
  }
  return out;
}

inline std::string unescape_bracket(std::string s) {
  for (auto [from, to] : {std::pair{"-LRB-", "("}, std::pair{"-RRB-", ")"}}) {
    std::size_t p = 0;
    while ((p = s.find(from, p)) != std::string::npos) {
      s.replace(p, 5, to);
      p += 1;
    }
  }
  return s;
}

inline void write_bracket(const Tree& t, std::string& out) {
  if (t.is_leaf()) {
    out += std::to_string(t.position) + "=" + escape_bracket(t.word);
    return;
  }
  out += "(" + escape_bracket(t.label);
  for (const auto& c : t.children) {
    out += ' ';
    write_bracket(c, out);
  }
  out += ')';
}

}  // namespace detail

// "(S (A 1=x) (B 2=y))"; children ordered by smallest position.
inline std::string write_discbracket(const Tree& t) {
  Tree c = t;
  canonicalize(c);
  std::string out;
  detail::write_bracket(c, out);
  return out;
}

inline Tree read_discbracket(std::string_view line) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  };
  auto token = [&] {
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '(' && line[j] != ')') ++j;
    auto tok = std::string(line.substr(i, j - i));
    i = j;
    return tok;
  };
  auto parse = [&](auto&& self) -> Tree {
    skip();
    if (i >= line.size() || line[i] != '(') throw FormatError("expected '(' at offset " + std::to_string(i));
    ++i;
    skip();
    std::string label = token();
    if (label.empty()) throw FormatError("missing label at offset " + std::to_string(i));
    Tree t = Tree::node(detail::unescape_bracket(label), {});
    while (true) {
      skip();
      if (i >= line.size()) throw FormatError("unbalanced brackets: missing ')'");
      if (line[i] == ')') {
        ++i;
        break;
      }
      if (line[i] == '(') {
        t.children.push_back(self(self));
        continue;
      }
      std::string leaf = token();
      auto eq = leaf.find('=');
      if (eq == std::string::npos || eq == 0) throw FormatError("bad leaf '" + leaf + "', expected position=word");
      int pos = 0;
      try {
        std::size_t used = 0;
        pos = std::stoi(leaf.substr(0, eq), &used);
        if (used != eq) throw std::invalid_argument(leaf);
      } catch (const std::exception&) {
        throw FormatError("bad leaf position in '" + leaf + "'");
      }
      if (pos < 1) throw FormatError("leaf positions are 1-based: '" + leaf + "'");
      t.children.push_back(Tree::leaf(pos, detail::unescape_bracket(leaf.substr(eq + 1))));
    }
    if (t.children.empty()) throw FormatError("node '" + t.label + "' has no children");
    return t;
  };
  Tree t = parse(parse);
  skip();
  if (i != line.size()) throw FormatError("unbalanced brackets: trailing input");
  try {
    validate(t);
  } catch (const StructuralError& e) {
    throw FormatError(e.what());
  }
  canonicalize(t);
  return t;
}

// One tree per non-empty line.
inline std::vector<Tree> read_discbracket_stream(std::istream& in) {
  std::vector<Tree> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(read_discbracket(line));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    }
  }
  return out;
}

// Writes one block per tree in export format 3.
inline void write_export(std::ostream& os, const std::vector<Tree>& trees) {
  os << "#FORMAT 3\n";
  for (std::size_t s = 0; s < trees.size(); ++s) {
    const Tree& t = trees[s];
    const auto n = sentence_length(t);
    std::vector<std::string> word(n), pos(n);
    std::vector<int> tok_parent(n, 0);
    struct NodeLine {
      int id;
      std::string label;
      int parent;
    };
    std::vector<NodeLine> nodes;
    int next_id = 500;
    // Post-order ids: children get smaller ids than their parents.
    auto visit = [&](auto&& self, const Tree& node) -> int {
      std::vector<std::pair<int, bool>> kids;  // (id or position, is token)
      for (const auto& c : node.children) {
        if (c.is_preterminal()) {
          auto p = static_cast<std::size_t>(c.children[0].position - 1);
          word[p] = c.children[0].word;
          pos[p] = c.label;
          kids.emplace_back(c.children[0].position, true);
        } else if (c.is_leaf()) {
          throw StructuralError("export format needs a POS over every word");
        } else {
          kids.emplace_back(self(self, c), false);
        }
      }
      int id = next_id++;
      nodes.push_back({id, node.label, 0});
      for (auto [k, tok] : kids) {
        if (tok)
          tok_parent[static_cast<std::size_t>(k - 1)] = id;
        else
          for (auto& nl : nodes)
            if (nl.id == k) nl.parent = id;
      }
      return id;
    };
    if (t.label != kRootLabel) throw StructuralError("export writer expects an artificial ROOT");
    for (const auto& c : t.children) {
      if (c.is_preterminal()) {
        auto p = static_cast<std::size_t>(c.children[0].position - 1);
        word[p] = c.children[0].word;
        pos[p] = c.label;
      } else {
        visit(visit, c);
      }
    }
    os << "#BOS " << s + 1 << "\n";
    for (std::size_t i = 0; i < n; ++i) os << word[i] << '\t' << pos[i] << "\t--\t--\t" << tok_parent[i] << '\n';
    for (const auto& nl : nodes) os << '#' << nl.id << '\t' << nl.label << "\t--\t--\t" << nl.parent << '\n';
    os << "#EOS " << s + 1 << "\n";
  }
}

}  // namespace lcfrs

#endif  // LCFRS_TREEBANK_HPP
