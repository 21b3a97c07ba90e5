// Prints one line per acceptance criterion; exits nonzero if a checkable one fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "brute_force.hpp"
#include "worked_example.hpp"
#include "test_util.hpp"

using namespace lcfrs;
using clk = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

std::string fixed(double x, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

std::vector<Sentence> load(const std::string& name) { return read_corpus(testutil::data(name)); }

std::vector<Tree> trees_of(const std::vector<Sentence>& c) {
  std::vector<Tree> out;
  for (const auto& s : c) out.push_back(s.tree);
  return out;
}

Outcome worked_example_steps() {
  using namespace worked;
  auto t0 = clk::now();
  std::vector<std::pair<std::string, bool>> checks{
      {"collapse", collapse_chains(chain_expanded()) == chain_collapsed()},
      {"expand", expand_chains(chain_collapsed()) == chain_expanded()},
      {"fuse", fuse_terminals(np_induced()) == np_fused()},
      {"defuse", defuse_terminals(np_fused(), np_pos()) == np_induced()},
      {"propagate", propagate_terminals(np_fused()) == np_propagated()},
      {"unpropagate", unpropagate(np_propagated()) == np_fused()},
      {"split", split_double(np_propagated()) == np_split()},
      {"merge", merge_split(np_split()) == np_propagated()},
  };
  Outcome o;
  std::string failed;
  for (const auto& [name, ok] : checks)
    if (!ok) failed += " " + name;
  double secs = seconds_since(t0);
  o.pass = failed.empty() && secs < 1.0;
  o.detail = std::to_string(checks.size()) + " steps" + (failed.empty() ? "" : ", failed:" + failed) + ", " + fixed(secs) + " s";
  return o;
}

Outcome mini_roundtrip() {
  auto t0 = clk::now();
  auto corpus = load("mini.export");
  std::size_t disc = 0;
  bool has_example = false;
  const Tree example = read_discbracket(worked::kExample);
  for (const auto& s : corpus) {
    disc += is_discontinuous(s.tree);
    has_example = has_example || s.tree == example;
  }
  auto r = roundtrip(corpus, {});
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = corpus.size() >= 50 && disc * 10 >= corpus.size() * 3 && has_example && r.mismatches == 0 && secs < 5.0;
  o.detail = std::to_string(corpus.size()) + " trees, " + std::to_string(disc) + " discontinuous, example sentence " +
             (has_example ? "present" : "missing") + ", mismatches " + std::to_string(r.mismatches) + " (whitelisted " +
             std::to_string(r.known) + "), " + fixed(secs) + " s";
  return o;
}

Outcome oracle_parse() {
  auto t0 = clk::now();
  auto corpus = load("mini.export");
  auto ex = extract(corpus, {});
  auto preds = oracle_corpus(corpus, ex.gold);
  auto run = parse_corpus(preds, ex.inventory, {1});
  std::vector<Tree> pred;
  for (const auto& o : run.outcomes) pred.push_back(o.tree);
  auto s = evaluate_corpus(trees_of(corpus), pred);
  double secs = seconds_since(t0);
  Outcome o;
  o.pass = ex.skipped.empty() && s.all.f1() == 100.0 && s.disc.f1() == 100.0 && secs < 10.0;
  o.detail = "F1 " + fmt_pct(s.all.f1()) + ", Dis-F1 " + fmt_pct(s.disc.f1()) + ", " + std::to_string(ex.inventory.size()) +
             " supertags, " + fixed(secs) + " s";
  return o;
}

// Returns an empty string when every invariant holds for t.
std::string invariants(const Tree& t) {
  const auto n = sentence_length(t);
  Tuple<int> expect(1);
  for (std::size_t i = 1; i <= n; ++i) expect[0].push_back(static_cast<int>(i));
  Derivation d = induce_derivation(binarize(t, 0, 1));
  if (derivation_yield(d) != expect) return "induced yield";
  std::vector<std::pair<std::string, std::function<Derivation(const Derivation&)>>> steps{
      {"collapse", collapse_chains}, {"fuse", fuse_terminals}, {"propagate", propagate_terminals}, {"split", split_double}};
  for (const auto& [name, f] : steps) {
    d = f(d);
    if (derivation_yield(d) != expect) return name + " yield";
  }
  if (d.size() != n) return "rule count";
  auto lex = lexicalize_tree(t, {});
  for (const auto& tag : read_off(lex)) {
    std::size_t holes = 0;
    for (const auto& sym : tag.rule.comp.symbols()) holes += sym.is_hole();
    if (holes != 1) return "hole count";
  }
  return {};
}

Outcome counting_invariants() {
  std::size_t checked = 0, bad = 0;
  std::string first;
  auto check = [&](const Tree& t, const std::string& what) {
    ++checked;
    std::string err;
    try {
      err = invariants(t);
    } catch (const std::exception& e) {
      err = e.what();
    }
    if (!err.empty() && bad++ == 0) first = what + ": " + err;
  };
  for (const auto& s : load("mini.export")) check(s.tree, "sentence " + s.id);
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) check(testutil::random_tree(rng, 1 + i % 8), "random " + std::to_string(i));
  auto ex = extract(load("mini.export"), {});
  std::size_t bad_tags = 0;
  for (std::size_t i = 0; i < ex.inventory.size(); ++i) {
    std::size_t holes = 0;
    for (const auto& sym : ex.inventory.tag(i).rule.comp.symbols()) holes += sym.is_hole();
    bad_tags += holes != 1;
  }
  Outcome o;
  o.pass = bad == 0 && bad_tags == 0;
  o.detail = std::to_string(checked) + " trees, " + std::to_string(bad) + " violations, " + std::to_string(ex.inventory.size()) +
             " inventory tags with " + std::to_string(bad_tags) + " off-count holes" + (first.empty() ? "" : ", first: " + first);
  return o;
}

Outcome parser_optimality() {
  testutil::RandomDerivations gen(99);
  std::uniform_int_distribution<int> weight(-6, 0);
  std::size_t agree = 0;
  const std::vector<Nonterminal> roots{parse_nonterminal("S_1"), parse_nonterminal("T_1")};
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 1 + inst % 6;
    const int k = 1 + inst % 3;
    std::vector<std::vector<Rule>> per_pos(static_cast<std::size_t>(n));
    for (int c = 0; c < k; ++c) {
      Derivation d = gen.make(n, c == 2 ? "T" : "S");
      for_each_node(d, [&](const Derivation& x) {
        per_pos[static_cast<std::size_t>(x.rule.comp.first_lexical()->terminal() - 1)].push_back(x.rule);
      });
    }
    std::vector<PositionRule> rules;
    for (int p = 1; p <= n; ++p)
      for (const auto& r : per_pos[static_cast<std::size_t>(p - 1)])
        rules.push_back({r, static_cast<double>(weight(gen.rng())), rules.size(), p});
    auto res = parse(rules, n, roots);
    auto oracle = testutil::brute_force(rules, n, roots);
    agree += res.ok == oracle.has_value() && (!res.ok || res.score == *oracle);
  }
  return {agree == 200, std::to_string(agree) + "/200 instances agree with exhaustive search"};
}

struct Trained {
  Extraction ex;
  BaselineModel model;
  std::vector<Sentence> dev;
};

Trained train_mini() {
  auto ex = extract(load("mini-train.export"), {});
  auto model = BaselineModel::train(ex.lexicon, ex.inventory.size(), {});
  return {std::move(ex), std::move(model), load("mini-dev.export")};
}

Outcome k_monotonicity(const Trained& t) {
  RunConfig cfg;
  cfg.sweep = {1, 2, 3, 5, 10};
  auto rows = sweep_k(t.model, t.ex.inventory, t.dev, cfg);
  Outcome o;
  std::ostringstream os;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i) {
      o.pass = o.pass && rows[i].tag_acc >= rows[i - 1].tag_acc;
      o.pass = o.pass && rows[i].scores.all.recall() >= rows[i - 1].scores.all.recall();
    }
    os << (i ? "; " : "") << "k=" << rows[i].k << " acc " << fmt_pct(rows[i].tag_acc) << " rec "
       << fmt_pct(rows[i].scores.all.recall());
  }
  o.detail = os.str();
  return o;
}

std::string corpus_mode() {
  auto corpus = load("mini.export");
  auto ex = extract(corpus, {});
  auto run = parse_corpus(oracle_corpus(corpus, ex.gold), ex.inventory, {1});
  std::vector<Tree> pred;
  for (const auto& o : run.outcomes) pred.push_back(o.tree);
  auto s = evaluate_corpus(trees_of(corpus), pred);
  return "corpus mode on the bundled sample: " + std::to_string(ex.inventory.size()) + " supertags, oracle F1 " +
         fmt_pct(s.all.f1()) + "; run extract, tag --oracle, parse and eval on a licensed export file to compare";
}

Outcome throughput(const Trained& t) {
  auto preds = tag_corpus(t.model, t.dev, 10, 1);
  auto run = parse_corpus(preds, t.ex.inventory, {10}, 1);
  Outcome o;
  o.pass = run.speed.per_second() >= 50.0;
  o.detail = run.speed.str() + " sent/s at k=10 over " + std::to_string(t.dev.size()) + " dev sentences";
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int n, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail << std::endl;
  };
  report(1, worked_example_steps);
  report(2, mini_roundtrip);
  report(3, oracle_parse);
  report(4, counting_invariants);
  report(5, parser_optimality);
  std::optional<Trained> trained;
  try {
    trained = train_mini();
  } catch (const std::exception& e) {
    std::cout << "training failed: " << e.what() << std::endl;
  }
  report(6, [&] { return trained ? k_monotonicity(*trained) : Outcome{false, "no model"}; });
  std::string demo;
  try {
    demo = corpus_mode();
  } catch (const std::exception& e) {
    demo = std::string("corpus mode failed: ") + e.what();
  }
  std::cout << "criterion 7: NOT REPRODUCIBLE | full-size treebanks and neural taggers are not available; " << demo
            << std::endl;
  report(8, [&] { return trained ? throughput(*trained) : Outcome{false, "no model"}; });
  return all ? 0 : 1;
}
