#ifndef LCFRS_GRAMMAR_IO_HPP
#define LCFRS_GRAMMAR_IO_HPP

#include <charconv>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "composition.hpp"
#include "error.hpp"
#include "grammar.hpp"
#include "symbols.hpp"

namespace lcfrs {

namespace detail {

inline bool needs_escape(char c) {
  return c == '%' || c == '+' || c == ',' || c == '"' || c == ' ' || c == '\t' || c == '\n';
}

inline std::string escape_label(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (needs_escape(c)) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

inline std::string unescape_label(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      unsigned v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

inline int parse_int(std::string_view s, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw FormatError(std::string("bad ") + what + " '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + '"';
}

}  // namespace detail

// Label chain without fanout or mark, e.g. "NP+NN".
inline std::string chain_string(const std::vector<LabelId>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '+';
    out += detail::escape_label(labels().str(parts[i]));
  }
  return out;
}

inline std::vector<LabelId> parse_chain(std::string_view s) {
  if (s.empty()) throw FormatError("empty label chain");
  std::vector<LabelId> parts;
  for (auto p : detail::split(s, '+')) {
    if (p.empty()) throw FormatError("empty label in chain '" + std::string(s) + "'");
    parts.push_back(labels().intern(detail::unescape_label(p)));
  }
  return parts;
}

// NP+NN_1^+ : chain, fanout, optional mark.
inline std::string to_string(const Nonterminal& n) {
  std::string out = chain_string(n.parts) + "_" + std::to_string(n.fanout);
  switch (n.mark) {
    case Mark::plus: out += "^+"; break;
    case Mark::minus: out += "^-"; break;
    case Mark::rest: out += "^R"; break;
    case Mark::none: break;
  }
  return out;
}

inline Nonterminal parse_nonterminal(std::string_view s) {
  Nonterminal n;
  if (s.size() > 2 && s[s.size() - 2] == '^') {
    switch (s.back()) {
      case '+': n.mark = Mark::plus; break;
      case '-': n.mark = Mark::minus; break;
      case 'R': n.mark = Mark::rest; break;
      default: throw FormatError("bad nonterminal mark in '" + std::string(s) + "'");
    }
    s.remove_suffix(2);
  }
  auto us = s.rfind('_');
  if (us == std::string_view::npos || us == 0) throw FormatError("nonterminal without fanout: '" + std::string(s) + "'");
  n.fanout = detail::parse_int(s.substr(us + 1), "fanout");
  n.parts = parse_chain(s.substr(0, us));
  n.check();
  return n;
}

using TerminalPrinter = std::function<std::string(int)>;
using TerminalParser = std::function<int(std::string_view)>;

inline std::string to_string(const Composition& c, const TerminalPrinter& term = {}) {
  std::string out;
  for (std::size_t j = 0; j < c.fanout(); ++j) {
    if (j) out += ", ";
    bool first = true;
    for (const auto& s : c.component(j)) {
      if (!first) out += ' ';
      first = false;
      if (s.is_variable())
        out += "x" + std::to_string(s.arg()) + "^" + std::to_string(s.comp());
      else if (s.is_hole())
        out += "<>";
      else
        out += term ? term(s.terminal()) : std::to_string(s.terminal());
    }
  }
  return out;
}

// Inverse of to_string. Bare integers are terminal ids; quoted strings are
// handed to `term` (required when quotes occur).
inline Composition parse_composition(std::string_view s, const TerminalParser& term = {}) {
  Components comps(1);
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (s[i] == ' ')) ++i;
  };
  while (true) {
    skip();
    if (i >= s.size()) break;
    char c = s[i];
    if (c == ',') {
      comps.emplace_back();
      ++i;
    } else if (c == '"') {
      std::string word;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\' && i + 1 < s.size()) {
          word += s[i + 1] == 't' ? '\t' : s[i + 1];
          i += 2;
        } else if (s[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          word += s[i++];
        }
      }
      if (!closed) throw FormatError("unterminated terminal in composition");
      if (!term) throw FormatError("quoted terminal without a terminal table");
      comps.back().push_back(Symbol::term(term(word)));
    } else {
      auto end = s.find_first_of(" ,", i);
      if (end == std::string_view::npos) end = s.size();
      auto tok = s.substr(i, end - i);
      i = end;
      if (tok == "<>") {
        comps.back().push_back(Symbol::hole());
      } else if (tok.size() > 1 && tok[0] == 'x') {
        auto caret = tok.find('^');
        if (caret == std::string_view::npos) throw FormatError("bad variable '" + std::string(tok) + "'");
        comps.back().push_back(Symbol::var(detail::parse_int(tok.substr(1, caret - 1), "variable"),
                                           detail::parse_int(tok.substr(caret + 1), "variable")));
      } else {
        comps.back().push_back(Symbol::term(detail::parse_int(tok, "terminal")));
      }
    }
  }
  try {
    return Composition(comps);
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("ill-formed composition: ") + e.what());
  }
}

// lhs TAB rhs (space separated) TAB composition TAB flags
inline std::string to_line(const Rule& r, const TerminalPrinter& term = {}) {
  std::string out = to_string(r.lhs) + '\t';
  for (std::size_t i = 0; i < r.rhs.size(); ++i) {
    if (i) out += ' ';
    out += to_string(r.rhs[i]);
  }
  out += '\t' + to_string(r.comp, term) + '\t' + (r.swapped ? "swapped" : "-");
  return out;
}

inline Rule parse_rule_fields(std::string_view lhs, std::string_view rhs, std::string_view comp,
                              std::string_view flags, const TerminalParser& term = {}) {
  std::vector<Nonterminal> rhs_nts;
  if (!rhs.empty())
    for (auto part : detail::split(rhs, ' '))
      if (!part.empty()) rhs_nts.push_back(parse_nonterminal(part));
  bool swapped = false;
  if (flags == "swapped")
    swapped = true;
  else if (flags != "-")
    throw FormatError("bad rule flags '" + std::string(flags) + "'");
  try {
    return Rule(parse_nonterminal(lhs), std::move(rhs_nts), parse_composition(comp, term), swapped);
  } catch (const SortError& e) {
    throw FormatError(e.what());
  } catch (const PreconditionError& e) {
    throw FormatError(e.what());
  }
}

inline Rule parse_rule_line(std::string_view line, const TerminalParser& term = {}) {
  auto f = detail::split(line, '\t');
  if (f.size() != 4) throw FormatError("rule line needs 4 tab-separated fields");
  return parse_rule_fields(f[0], f[1], f[2], f[3], term);
}

// One-line bracketed rendering for diagnostics.
inline std::string to_string(const Derivation& d, const TerminalPrinter& term = {}) {
  std::string out = "[" + to_string(d.rule.lhs) + " -> (" + to_string(d.rule.comp, term) + ")";
  if (!d.rule.rhs.empty()) {
    out += "(";
    for (std::size_t i = 0; i < d.rule.rhs.size(); ++i) out += (i ? ", " : "") + to_string(d.rule.rhs[i]);
    out += ")";
  }
  if (d.rule.swapped) out += " swapped";
  for (const auto& c : d.children) out += " " + to_string(c, term);
  return out + "]";
}

}  // namespace lcfrs

#endif  // LCFRS_GRAMMAR_IO_HPP
