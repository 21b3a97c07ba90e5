#ifndef LCFRS_EVAL_HPP
#define LCFRS_EVAL_HPP

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "supertagger.hpp"
#include "tree.hpp"

namespace lcfrs {

inline const std::set<std::string>& default_ignored_pos() {
  static const std::set<std::string> s{"$,", "$.", "$(", ",", ".", ":", "``", "''", "-NONE-"};
  return s;
}

struct EvalPolicy {
  std::set<std::string> ignore_pos = default_ignored_pos();
  bool include_root = false;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

using Constituent = std::pair<std::string, std::vector<int>>;

// Labelled position sets of all inner non-POS nodes. Positions whose gold POS
// is ignored are dropped and the rest renumbered 1..m.
inline std::multiset<Constituent> constituents(const Tree& t, const std::vector<int>& renumber, bool include_root) {
  std::multiset<Constituent> out;
  auto visit = [&](auto&& self, const Tree& n, bool root) -> void {
    if (n.is_leaf() || n.is_preterminal()) return;
    if (!root || include_root) {
      std::vector<int> ps;
      for (int p : positions(n)) {
        if (p < 1 || static_cast<std::size_t>(p) > renumber.size()) throw AlignmentError("tree position outside sentence");
        if (int q = renumber[static_cast<std::size_t>(p - 1)]) ps.push_back(q);
      }
      if (!ps.empty()) out.emplace(n.label, std::move(ps));
    }
    for (const auto& c : n.children) self(self, c, false);
  };
  visit(visit, t, true);
  return out;
}

inline bool is_discontinuous(const std::vector<int>& sorted) { return runs(sorted).size() > 1; }

struct Score {
  std::size_t matched = 0, gold = 0, pred = 0;

  static double pct(std::size_t a, std::size_t b) {
    return b ? 100.0 * static_cast<double>(a) / static_cast<double>(b) : std::numeric_limits<double>::quiet_NaN();
  }
  double precision() const { return pct(matched, pred); }
  double recall() const { return pct(matched, gold); }
  double f1() const {
    if (!gold && !pred) return std::numeric_limits<double>::quiet_NaN();
    return gold + pred ? 200.0 * static_cast<double>(matched) / static_cast<double>(gold + pred) : 0.0;
  }

  Score& operator+=(const Score& o) {
    matched += o.matched;
    gold += o.gold;
    pred += o.pred;
    return *this;
  }
};

struct BracketScores {
  Score all;
  Score disc;
};

inline BracketScores score_pair(const Tree& gold, const Tree& pred, const EvalPolicy& policy) {
  const auto n = sentence_length(gold);
  if (sentence_length(pred) != n)
    throw AlignmentError("sentence lengths differ (" + std::to_string(n) + " vs " + std::to_string(sentence_length(pred)) + ")");
  auto tags = pos_tags(gold);
  std::vector<int> renumber(n, 0);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!policy.ignore_pos.count(tags[i])) renumber[i] = ++next;
  auto g = constituents(gold, renumber, policy.include_root);
  auto p = constituents(pred, renumber, policy.include_root);

  BracketScores s;
  auto match = [](const std::multiset<Constituent>& a, const std::multiset<Constituent>& b, bool disc_only) {
    std::size_t m = 0;
    std::multiset<Constituent> left = b;
    for (const auto& c : a) {
      if (disc_only && !is_discontinuous(c.second)) continue;
      if (auto it = left.find(c); it != left.end()) {
        ++m;
        left.erase(it);
      }
    }
    return m;
  };
  s.all = {match(g, p, false), g.size(), p.size()};
  std::size_t gd = 0, pd = 0;
  for (const auto& c : g) gd += is_discontinuous(c.second);
  for (const auto& c : p) pd += is_discontinuous(c.second);
  s.disc = {match(g, p, true), gd, pd};
  return s;
}

// Micro-averaged over the corpus.
inline BracketScores evaluate_corpus(const std::vector<Tree>& gold, const std::vector<Tree>& pred,
                                     const EvalPolicy& policy = {}) {
  if (gold.size() != pred.size())
    throw AlignmentError("corpus sizes differ: " + std::to_string(gold.size()) + " gold vs " +
                         std::to_string(pred.size()) + " predicted trees");
  BracketScores total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto s = score_pair(gold[i], pred[i], policy);
    total.all += s.all;
    total.disc += s.disc;
  }
  return total;
}

// Share of positions whose gold tag is among the first k predictions.
inline double tag_accuracy(const std::vector<std::vector<std::size_t>>& gold,
                           const std::vector<SentencePrediction>& preds, std::size_t k) {
  if (gold.size() != preds.size()) throw AlignmentError("tag corpus sizes differ");
  std::size_t hit = 0, total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != preds[i].tags.size()) throw AlignmentError("sentence " + preds[i].id + ": length mismatch");
    for (std::size_t p = 0; p < gold[i].size(); ++p) {
      ++total;
      const auto& list = preds[i].tags[p];
      for (std::size_t j = 0; j < list.size() && j < k; ++j)
        if (list[j].tag == gold[i][p]) {
          ++hit;
          break;
        }
    }
  }
  return total ? 100.0 * static_cast<double>(hit) / static_cast<double>(total) : std::numeric_limits<double>::quiet_NaN();
}

struct Speed {
  std::size_t sentences = 0;
  double seconds = 0;
  double per_second() const {
    return seconds > 0 ? static_cast<double>(sentences) / seconds : std::numeric_limits<double>::infinity();
  }
  std::string str() const {
    if (!(seconds > 0)) return "> " + std::to_string(sentences) + "/timer-resolution";
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << per_second();
    return os.str();
  }
};

inline std::string fmt_pct(double x) {
  if (std::isnan(x)) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << x;
  return os.str();
}

// Plain-text table; write_records gives the metric TAB value form.
inline void write_report(std::ostream& os, const BracketScores& s) {
  os << std::left << std::setw(8) << "" << std::right << std::setw(9) << "prec" << std::setw(9) << "rec"
     << std::setw(9) << "F1" << std::setw(9) << "match" << std::setw(9) << "gold" << std::setw(9) << "pred" << '\n';
  auto row = [&](const char* name, const Score& x) {
    os << std::left << std::setw(8) << name << std::right << std::setw(9) << fmt_pct(x.precision()) << std::setw(9)
       << fmt_pct(x.recall()) << std::setw(9) << fmt_pct(x.f1()) << std::setw(9) << x.matched << std::setw(9) << x.gold
       << std::setw(9) << x.pred << '\n';
  };
  row("all", s.all);
  row("disc", s.disc);
}

inline void write_records(std::ostream& os, const BracketScores& s) {
  os << "precision\t" << fmt_pct(s.all.precision()) << '\n'
     << "recall\t" << fmt_pct(s.all.recall()) << '\n'
     << "f1\t" << fmt_pct(s.all.f1()) << '\n'
     << "dis_precision\t" << fmt_pct(s.disc.precision()) << '\n'
     << "dis_recall\t" << fmt_pct(s.disc.recall()) << '\n'
     << "dis_f1\t" << fmt_pct(s.disc.f1()) << '\n';
}

}  // namespace lcfrs

#endif  // LCFRS_EVAL_HPP
