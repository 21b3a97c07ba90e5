#ifndef LCFRS_PIPELINE_HPP
#define LCFRS_PIPELINE_HPP

#include <chrono>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "eval.hpp"
#include "inventory.hpp"
#include "lexicalize.hpp"
#include "parallel.hpp"
#include "parser.hpp"
#include "supertagger.hpp"
#include "treebank.hpp"
#include "unlexicalize.hpp"

namespace lcfrs {

// Corpus-level glue shared by the command-line tool and the tests.

class DataError : public Error {
 public:
  using Error::Error;
};

inline std::vector<Sentence> read_corpus(const std::string& path, const std::string& format = "auto") {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read corpus " + path);
  bool exp = format == "export" || (format == "auto" && path.size() >= 7 && path.substr(path.size() - 7) == ".export");
  if (exp) return read_export_sentences(in);
  std::vector<Sentence> out;
  for (auto& t : read_discbracket_stream(in)) out.push_back({std::to_string(out.size() + 1), std::move(t)});
  return out;
}

inline ExtractOptions extract_options(const RunConfig& cfg) { return {cfg.h, cfg.v, cfg.pos_mode}; }

// Gold supertag indices of arbitrary trees w.r.t. an inventory (kNoTag where
// the tree needs a tag the inventory lacks, or for whole sentences that fail
// to lexicalize).
inline std::vector<std::vector<std::size_t>> gold_tags(const std::vector<Sentence>& corpus, const SupertagInventory& inv,
                                                       const ExtractOptions& opt) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : corpus) {
    try {
      out.push_back(tag_indices(read_off(lexicalize_tree(s.tree, opt)), inv));
    } catch (const Error&) {
      out.emplace_back(sentence_length(s.tree), kNoTag);
    }
  }
  return out;
}

inline std::vector<SentencePrediction> tag_corpus(const BaselineModel& model, const std::vector<Sentence>& corpus,
                                                  std::size_t k, unsigned threads = 1) {
  std::vector<SentencePrediction> out(corpus.size());
  parallel_for(corpus.size(), threads,
               [&](std::size_t i) { out[i] = model.predict(corpus[i].id, words(corpus[i].tree), k); });
  return out;
}

inline std::vector<SentencePrediction> oracle_corpus(const std::vector<Sentence>& corpus,
                                                     const std::vector<std::vector<std::size_t>>& gold) {
  std::vector<SentencePrediction> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) out.push_back(oracle_prediction(corpus[i].id, words(corpus[i].tree), gold[i]));
  return out;
}

struct ParseRun {
  std::vector<ParseOutcome> outcomes;
  std::vector<double> millis;
  Speed speed;
};

inline ParseRun parse_corpus(const std::vector<SentencePrediction>& preds, const SupertagInventory& inv,
                             const std::vector<std::size_t>& schedule, unsigned threads = 1) {
  using clock = std::chrono::steady_clock;
  ParseRun run;
  run.outcomes.resize(preds.size());
  run.millis.resize(preds.size());
  auto start = clock::now();
  parallel_for(preds.size(), threads, [&](std::size_t i) {
    auto t0 = clock::now();
    run.outcomes[i] = parse_with_fallback(preds[i], inv, schedule);
    run.millis[i] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  });
  run.speed = {preds.size(), std::chrono::duration<double>(clock::now() - start).count()};
  return run;
}

inline void write_parse_outputs(std::ostream& trees, std::ostream& sidecar, const std::vector<SentencePrediction>& preds,
                                const ParseRun& run) {
  for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
    trees << write_discbracket(run.outcomes[i].tree) << '\n';
    sidecar << preds[i].id << '\t' << run.outcomes[i].status << '\t' << format_score(run.millis[i]) << '\n';
  }
}

struct RoundtripReport {
  std::size_t total = 0;
  std::size_t mismatches = 0;
  std::size_t known = 0;  // explained by the bare-POS heuristic
  std::vector<std::string> known_ids;
  std::string first_diff;

  std::size_t unexplained() const { return mismatches - known; }
};

// A unary node directly over a POS node below the root: its label is lost
// when only the bare tag is kept for fused terminals.
inline bool has_pos_chain(const Tree& t) {
  bool found = false;
  auto visit = [&](auto&& self, const Tree& n, bool root) -> void {
    if (n.is_leaf() || n.is_preterminal()) return;
    if (!root && n.children.size() == 1 && n.children[0].is_preterminal()) found = true;
    for (const auto& c : n.children) self(self, c, false);
  };
  visit(visit, t, true);
  return found;
}

inline Tree roundtrip_tree(const Tree& t, const ExtractOptions& opt) {
  auto lex = lexicalize_tree(t, opt);
  PosLookup pos = [&](int p) { return lex.pos.at(static_cast<std::size_t>(p - 1)); };
  return unlexicalize(lex.derivation, pos, lex.words);
}

inline RoundtripReport roundtrip(const std::vector<Sentence>& corpus, const ExtractOptions& opt, unsigned threads = 1) {
  std::vector<std::optional<std::string>> diffs(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const Tree& t = corpus[i].tree;
    try {
      Tree back = roundtrip_tree(t, opt);
      if (!(back == t)) diffs[i] = "  gold: " + write_discbracket(t) + "\n  got:  " + write_discbracket(back);
    } catch (const Error& e) {
      diffs[i] = std::string("  error: ") + e.what();
    }
  });
  RoundtripReport r;
  r.total = corpus.size();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!diffs[i]) continue;
    ++r.mismatches;
    if (opt.pos_mode == PosMode::tag && has_pos_chain(corpus[i].tree)) {
      ++r.known;
      r.known_ids.push_back(corpus[i].id);
    } else if (r.first_diff.empty()) {
      r.first_diff = "sentence " + corpus[i].id + "\n" + *diffs[i];
    }
  }
  return r;
}

struct SweepRow {
  std::size_t k = 0;
  Speed speed;
  double tag_acc = 0;
  BracketScores scores;
  std::size_t noparse = 0;
};

// One parse per k without fallback, so each row shows the effect of k alone.
inline std::vector<SweepRow> sweep_k(const BaselineModel& model, const SupertagInventory& inv,
                                     const std::vector<Sentence>& dev, const RunConfig& cfg) {
  std::vector<SweepRow> rows;
  auto gold = gold_tags(dev, inv, extract_options(cfg));
  std::vector<Tree> gold_trees;
  for (const auto& s : dev) gold_trees.push_back(s.tree);
  EvalPolicy policy{cfg.ignore_pos, false};
  for (auto k : cfg.sweep) {
    auto preds = tag_corpus(model, dev, k, cfg.threads);
    auto run = parse_corpus(preds, inv, {k}, cfg.threads);
    SweepRow row;
    row.k = k;
    row.speed = run.speed;
    row.tag_acc = tag_accuracy(gold, preds, k);
    std::vector<Tree> pred_trees;
    for (const auto& o : run.outcomes) {
      pred_trees.push_back(o.tree);
      row.noparse += o.status == "noparse";
    }
    row.scores = evaluate_corpus(gold_trees, pred_trees, policy);
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << std::right << std::setw(4) << "k" << std::setw(10) << "sent/s" << std::setw(10) << "tag acc." << std::setw(9)
     << "prec." << std::setw(9) << "rec." << std::setw(9) << "F1" << std::setw(9) << "Dis-F1" << std::setw(9)
     << "noparse" << '\n';
  for (const auto& r : rows)
    os << std::setw(4) << r.k << std::setw(10) << r.speed.str() << std::setw(10) << fmt_pct(r.tag_acc) << std::setw(9)
       << fmt_pct(r.scores.all.precision()) << std::setw(9) << fmt_pct(r.scores.all.recall()) << std::setw(9)
       << fmt_pct(r.scores.all.f1()) << std::setw(9) << fmt_pct(r.scores.disc.f1()) << std::setw(9) << r.noparse
       << '\n';
}

}  // namespace lcfrs

#endif  // LCFRS_PIPELINE_HPP
