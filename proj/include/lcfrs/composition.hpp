#ifndef LCFRS_COMPOSITION_HPP
#define LCFRS_COMPOSITION_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace lcfrs {

// One symbol of a composition: a terminal, a variable x_i^j, or the hole
// left in a supertag template where the terminal was abstracted.
struct Symbol {
  enum class Kind : std::uint8_t { terminal, variable, hole };

  Kind kind = Kind::terminal;
  int a = 0;  // terminal id, or argument index i
  int b = 0;  // component index j (variables only)

  static constexpr Symbol term(int t) { return {Kind::terminal, t, 0}; }
  static constexpr Symbol var(int i, int j) { return {Kind::variable, i, j}; }
  static constexpr Symbol hole() { return {Kind::hole, 0, 0}; }

  constexpr bool is_terminal() const { return kind == Kind::terminal; }
  constexpr bool is_variable() const { return kind == Kind::variable; }
  constexpr bool is_hole() const { return kind == Kind::hole; }
  // Lexical symbol: a terminal or a hole standing for one.
  constexpr bool is_lexical() const { return kind != Kind::variable; }

  constexpr int terminal() const { return a; }
  constexpr int arg() const { return a; }
  constexpr int comp() const { return b; }

  friend constexpr auto operator<=>(const Symbol&, const Symbol&) = default;
};

using Component = std::vector<Symbol>;
using Components = std::vector<Component>;

// A tuple of non-empty symbol strings. Well-formedness (every x_i^j of the
// sort exactly once, x_i^1 before x_{i+1}^1, x_i^j before x_i^{j+1}) is
// checked on construction. Stored flat with component offsets.
class Composition {
 public:
  Composition() = default;

  explicit Composition(const Components& comps) {
    if (comps.empty()) throw PreconditionError("composition needs at least one component");
    offsets_.reserve(comps.size() + 1);
    offsets_.push_back(0);
    for (const auto& c : comps) {
      if (c.empty()) throw PreconditionError("composition with empty component");
      symbols_.insert(symbols_.end(), c.begin(), c.end());
      offsets_.push_back(static_cast<std::uint32_t>(symbols_.size()));
    }
    validate();
  }

  std::size_t fanout() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t rank() const { return arg_fanouts_.size(); }
  // s_1 ... s_k
  const std::vector<int>& arg_fanouts() const { return arg_fanouts_; }

  std::span<const Symbol> symbols() const { return symbols_; }
  std::span<const Symbol> component(std::size_t j) const {
    return std::span<const Symbol>(symbols_).subspan(offsets_[j], offsets_[j + 1] - offsets_[j]);
  }

  Components components() const {
    Components out;
    out.reserve(fanout());
    for (std::size_t j = 0; j < fanout(); ++j) {
      auto c = component(j);
      out.emplace_back(c.begin(), c.end());
    }
    return out;
  }

  // Number of lexical symbols (terminals and holes).
  std::size_t lexical_count() const {
    return static_cast<std::size_t>(std::count_if(symbols_.begin(), symbols_.end(),
                                                  [](const Symbol& s) { return s.is_lexical(); }));
  }

  // The first lexical symbol in left-to-right order, if any.
  std::optional<Symbol> first_lexical() const {
    for (const auto& s : symbols_)
      if (s.is_lexical()) return s;
    return std::nullopt;
  }

  bool is_identity() const {
    if (rank() != 1 || arg_fanouts_[0] != static_cast<int>(fanout())) return false;
    for (std::size_t j = 0; j < fanout(); ++j) {
      auto c = component(j);
      if (c.size() != 1 || c[0] != Symbol::var(1, static_cast<int>(j) + 1)) return false;
    }
    return true;
  }

  friend bool operator==(const Composition& x, const Composition& y) {
    return x.symbols_ == y.symbols_ && x.offsets_ == y.offsets_;
  }
  friend auto operator<=>(const Composition& x, const Composition& y) {
    if (auto c = x.offsets_ <=> y.offsets_; c != 0) return c;
    return x.symbols_ <=> y.symbols_;
  }

 private:
  void validate() {
    int k = 0;
    for (const auto& s : symbols_) {
      if (!s.is_variable()) continue;
      if (s.arg() < 1 || s.comp() < 1) throw PreconditionError("variable index must be >= 1");
      k = std::max(k, s.arg());
    }
    arg_fanouts_.assign(static_cast<std::size_t>(k), 0);
    std::vector<int> next(static_cast<std::size_t>(k), 1);
    // components of one argument in order; arguments may interleave freely
    for (const auto& s : symbols_) {
      if (!s.is_variable()) continue;
      const auto i = static_cast<std::size_t>(s.arg() - 1);
      if (s.comp() != next[i]) {
        throw PreconditionError("variable x" + std::to_string(s.arg()) + "^" + std::to_string(s.comp()) +
                                " repeated or out of order");
      }
      ++next[i];
    }
    for (std::size_t i = 0; i < arg_fanouts_.size(); ++i) {
      arg_fanouts_[i] = next[i] - 1;
      if (arg_fanouts_[i] == 0) throw PreconditionError("argument " + std::to_string(i + 1) + " never used");
    }
  }

  std::vector<Symbol> symbols_;
  std::vector<std::uint32_t> offsets_;
  std::vector<int> arg_fanouts_;
};

// id_s = (x_1^1, ..., x_1^s)
inline Composition identity(int s) {
  if (s < 1) throw PreconditionError("identity composition needs s >= 1");
  Components comps;
  for (int j = 1; j <= s; ++j) comps.push_back({Symbol::var(1, j)});
  return Composition(comps);
}

template <class T>
using Tuple = std::vector<std::vector<T>>;

// Replaces every x_i^j by component j of argument i; terminals are mapped
// through `terminal`.
template <class T, class TerminalFn>
Tuple<T> evaluate(const Composition& c, std::span<const Tuple<T>> args, TerminalFn&& terminal) {
  const auto& sort = c.arg_fanouts();
  if (args.size() != sort.size())
    throw SortError("composition expects " + std::to_string(sort.size()) + " arguments, got " +
                    std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i)
    if (args[i].size() != static_cast<std::size_t>(sort[i]))
      throw SortError("argument " + std::to_string(i + 1) + " has fanout " + std::to_string(args[i].size()) +
                      ", expected " + std::to_string(sort[i]));
  Tuple<T> out(c.fanout());
  for (std::size_t j = 0; j < c.fanout(); ++j) {
    for (const auto& s : c.component(j)) {
      if (s.is_variable()) {
        const auto& piece = args[static_cast<std::size_t>(s.arg() - 1)][static_cast<std::size_t>(s.comp() - 1)];
        out[j].insert(out[j].end(), piece.begin(), piece.end());
      } else if (s.is_terminal()) {
        out[j].push_back(terminal(s.terminal()));
      } else {
        throw PreconditionError("cannot evaluate a composition with a hole");
      }
    }
  }
  return out;
}

// Terminal ids pass through unchanged.
inline Tuple<int> evaluate(const Composition& c, std::span<const Tuple<int>> args) {
  return evaluate<int>(c, args, [](int t) { return t; });
}

// i-partial application: x_i^1 becomes `sigma`, x_{i'}^j becomes x_{i'-1}^j
// for i' > i. Requires s_i = 1.
inline Composition partial_apply(const Composition& c, int i, Symbol sigma) {
  const auto& sort = c.arg_fanouts();
  if (i < 1 || static_cast<std::size_t>(i) > sort.size())
    throw PreconditionError("partial application index out of range");
  if (sort[static_cast<std::size_t>(i - 1)] != 1)
    throw PreconditionError("partial application needs s_i = 1");
  if (sigma.is_variable()) throw PreconditionError("partial application needs a lexical symbol");
  Components comps = c.components();
  for (auto& comp : comps)
    for (auto& s : comp) {
      if (!s.is_variable()) continue;
      if (s.arg() == i)
        s = sigma;
      else if (s.arg() > i)
        s.a -= 1;
    }
  return Composition(comps);
}

inline Composition partial_apply(const Composition& c, int i, int terminal) {
  return partial_apply(c, i, Symbol::term(terminal));
}

// Editing helpers on component lists; callers rebuild a Composition (and
// thereby re-validate) once a rewrite is complete.
namespace edit {

// Location (component, offset) of the first symbol matching `pred`.
template <class Pred>
std::optional<std::pair<std::size_t, std::size_t>> find(const Components& comps, Pred&& pred) {
  for (std::size_t j = 0; j < comps.size(); ++j)
    for (std::size_t p = 0; p < comps[j].size(); ++p)
      if (pred(comps[j][p])) return std::pair{j, p};
  return std::nullopt;
}

inline std::pair<std::size_t, std::size_t> find_var(const Components& comps, int i, int j) {
  auto loc = find(comps, [&](const Symbol& s) { return s == Symbol::var(i, j); });
  if (!loc) throw StructuralError("variable x" + std::to_string(i) + "^" + std::to_string(j) + " not found");
  return *loc;
}

// x_i^j -> x_i^{j+delta} for every j.
inline void shift_components(Components& comps, int i, int delta) {
  for (auto& c : comps)
    for (auto& s : c)
      if (s.is_variable() && s.arg() == i) s.b += delta;
}

inline void insert_before_var(Components& comps, int i, int j, Symbol sym) {
  auto [cj, p] = find_var(comps, i, j);
  comps[cj].insert(comps[cj].begin() + static_cast<std::ptrdiff_t>(p), sym);
}

// Removes x_i^1 and renumbers x_i^j -> x_i^{j-1}.
inline void drop_first_var(Components& comps, int i) {
  auto [cj, p] = find_var(comps, i, 1);
  comps[cj].erase(comps[cj].begin() + static_cast<std::ptrdiff_t>(p));
  shift_components(comps, i, -1);
}

}  // namespace edit

}  // namespace lcfrs

#endif  // LCFRS_COMPOSITION_HPP
