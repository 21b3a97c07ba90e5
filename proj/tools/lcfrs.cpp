// lcfrs: extract, train, tag, parse, eval, roundtrip, sweep-k.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcfrs/lcfrs.hpp"

namespace fs = std::filesystem;
using namespace lcfrs;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInvariant = 3 };

struct Paths {
  std::string inventory, lexicon, model, predictions, parsed, input, gold, pred;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw DataError("cannot write " + p.string());
  return os;
}

std::ifstream open_in(const std::string& p) {
  std::ifstream is(p);
  if (!is) throw DataError("cannot read " + p);
  return is;
}

fs::path out_file(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.out) / name; }

void write_resolved(const RunConfig& cfg, const std::string& command) {
  fs::create_directories(cfg.out);
  auto os = open_out(out_file(cfg, command + ".resolved.cfg"));
  os << cfg.resolved();
}

std::string or_default(const std::string& given, const fs::path& fallback) { return given.empty() ? fallback.string() : given; }

const std::string& need(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " given");
  if (!fs::exists(path)) throw DataError(std::string(what) + " " + path + " does not exist");
  return path;
}

SupertagInventory load_inventory(const std::string& path) {
  auto in = open_in(path);
  return SupertagInventory::read(in);
}

int cmd_extract(const RunConfig& cfg) {
  auto corpus = read_corpus(need(cfg.train, "training corpus"), cfg.format);
  if (corpus.empty()) throw DataError("training corpus " + cfg.train + " contains no sentences");
  auto ex = extract(corpus, extract_options(cfg), cfg.threads);
  for (const auto& s : ex.skipped) std::cerr << "skipped " << s << '\n';
  if (ex.inventory.empty()) throw DataError("no sentence could be lexicalized");

  write_resolved(cfg, "extract");
  {
    auto os = open_out(out_file(cfg, "inventory.tsv"));
    ex.inventory.write(os);
  }
  {
    auto os = open_out(out_file(cfg, "lexicon.tsv"));
    write_lexicon(os, ex.lexicon);
  }
  {
    auto os = open_out(out_file(cfg, "grammar.tsv"));
    for (const auto& line : ex.grammar) os << line << '\n';
  }
  const auto& st = ex.stats;
  std::cout << "sentences\t" << st.sentences << "\n"
            << "skipped\t" << ex.skipped.size() << "\n"
            << "rules induced\t" << st.induced << "\n"
            << "rules after collapse\t" << st.collapsed << "\n"
            << "rules after fuse\t" << st.fused << "\n"
            << "rules after propagate\t" << st.propagated << "\n"
            << "rules after split\t" << st.split << "\n"
            << "lexical rule types\t" << ex.grammar.size() << "\n"
            << "supertags\t" << ex.inventory.size() << "\n";
  return kOk;
}

int cmd_train(const RunConfig& cfg, const Paths& p) {
  auto inv = load_inventory(need(or_default(p.inventory, out_file(cfg, "inventory.tsv")), "inventory"));
  auto lin = open_in(need(or_default(p.lexicon, out_file(cfg, "lexicon.tsv")), "lexicon"));
  auto lex = read_lexicon(lin, inv.size());
  auto model = BaselineModel::train(lex, inv.size(), {cfg.lambda, cfg.max_suffix});
  write_resolved(cfg, "train");
  auto os = open_out(or_default(p.model, out_file(cfg, "model.tsv")));
  model.write(os);
  std::cout << "words\t" << lex.size() << "\ntags\t" << inv.size() << '\n';
  return kOk;
}

int cmd_tag(const RunConfig& cfg, const Paths& p, bool oracle) {
  auto corpus = read_corpus(need(or_default(p.input, cfg.dev), "input corpus"), cfg.format);
  auto inv = load_inventory(need(or_default(p.inventory, out_file(cfg, "inventory.tsv")), "inventory"));
  std::vector<SentencePrediction> preds;
  if (oracle) {
    auto gold = gold_tags(corpus, inv, extract_options(cfg));
    std::size_t missing = 0;
    for (auto& g : gold)
      for (auto& t : g)
        if (t == kNoTag) {
          ++missing;
          t = 0;  // placeholder
        }
    if (missing) std::cerr << missing << " positions need a supertag missing from the inventory\n";
    preds = oracle_corpus(corpus, gold);
  } else {
    auto min = open_in(need(or_default(p.model, out_file(cfg, "model.tsv")), "model"));
    auto model = BaselineModel::read(min);
    if (model.num_tags() != inv.size()) throw DataError("model and inventory disagree on the number of tags");
    model.set_lambda(cfg.lambda);
    auto sched = cfg.schedule();
    preds = tag_corpus(model, corpus, sched.back(), cfg.threads);
  }
  write_resolved(cfg, "tag");
  auto os = open_out(or_default(p.predictions, out_file(cfg, "predictions.tsv")));
  write_predictions(os, preds);
  return kOk;
}

int cmd_parse(const RunConfig& cfg, const Paths& p) {
  auto inv = load_inventory(need(or_default(p.inventory, out_file(cfg, "inventory.tsv")), "inventory"));
  auto pin = open_in(need(or_default(p.predictions, out_file(cfg, "predictions.tsv")), "predictions"));
  auto preds = read_predictions(pin, inv.size());
  auto run = parse_corpus(preds, inv, cfg.schedule(), cfg.threads);
  write_resolved(cfg, "parse");
  auto trees = open_out(or_default(p.parsed, out_file(cfg, "parsed.discbracket")));
  auto side = open_out(out_file(cfg, "parsed.status.tsv"));
  write_parse_outputs(trees, side, preds, run);
  std::map<std::string, std::size_t> status;
  for (const auto& o : run.outcomes) ++status[o.status.rfind("fallback", 0) == 0 ? "fallback" : o.status];
  std::cout << "sentences\t" << preds.size() << "\n";
  for (const auto& [s, n] : status) std::cout << s << '\t' << n << '\n';
  std::cout << "sent/s\t" << run.speed.str() << '\n';
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const Paths& p, std::size_t k) {
  auto gold = read_corpus(need(or_default(p.gold, cfg.dev), "gold corpus"), cfg.format);
  auto pin = open_in(need(or_default(p.pred, out_file(cfg, "parsed.discbracket")), "predicted trees"));
  auto pred = read_discbracket_stream(pin);
  std::vector<Tree> gt;
  for (const auto& s : gold) gt.push_back(s.tree);
  auto scores = evaluate_corpus(gt, pred, {cfg.ignore_pos, false});
  write_report(std::cout, scores);
  write_resolved(cfg, "eval");
  auto os = open_out(out_file(cfg, "eval.tsv"));
  write_records(os, scores);
  if (!p.predictions.empty()) {
    auto inv = load_inventory(need(or_default(p.inventory, out_file(cfg, "inventory.tsv")), "inventory"));
    auto tin = open_in(need(p.predictions, "predictions"));
    auto preds = read_predictions(tin, inv.size());
    double acc = tag_accuracy(gold_tags(gold, inv, extract_options(cfg)), preds, k);
    std::cout << "tag acc. (k=" << k << ")\t" << fmt_pct(acc) << '\n';
    os << "tag_acc\t" << fmt_pct(acc) << '\n';
  }
  return kOk;
}

int cmd_roundtrip(const RunConfig& cfg, const Paths& p) {
  auto corpus = read_corpus(need(or_default(p.input, cfg.train), "input corpus"), cfg.format);
  auto r = roundtrip(corpus, extract_options(cfg), cfg.threads);
  std::cout << "trees\t" << r.total << "\nmismatches\t" << r.mismatches << "\nknown POS-chain mismatches\t" << r.known
            << '\n';
  for (const auto& id : r.known_ids) std::cout << "known\t" << id << '\n';
  if (!r.first_diff.empty()) std::cout << "first mismatch: " << r.first_diff << '\n';
  return r.unexplained() ? kInvariant : kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  auto train = read_corpus(need(cfg.train, "training corpus"), cfg.format);
  auto dev = read_corpus(need(cfg.dev, "dev corpus"), cfg.format);
  if (train.empty() || dev.empty()) throw DataError("sweep needs non-empty train and dev corpora");
  auto ex = extract(train, extract_options(cfg), cfg.threads);
  auto model = BaselineModel::train(ex.lexicon, ex.inventory.size(), {cfg.lambda, cfg.max_suffix});
  auto rows = sweep_k(model, ex.inventory, dev, cfg);
  write_sweep(std::cout, rows);
  write_resolved(cfg, "sweep-k");
  auto os = open_out(out_file(cfg, "sweep.tsv"));
  os << "k\tsent_per_s\ttag_acc\tprecision\trecall\tf1\tdis_f1\tnoparse\n";
  for (const auto& r : rows)
    os << r.k << '\t' << r.speed.str() << '\t' << fmt_pct(r.tag_acc) << '\t' << fmt_pct(r.scores.all.precision()) << '\t'
       << fmt_pct(r.scores.all.recall()) << '\t' << fmt_pct(r.scores.all.f1()) << '\t' << fmt_pct(r.scores.disc.f1())
       << '\t' << r.noparse << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supertag-based discontinuous constituent parsing with lexicalized LCFRS"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  app.add_option("-c,--config", config_file, "key = value config file");
  app.add_option("--set", sets, "override a config key (key=value), repeatable");
  for (const char* key : {"train", "dev", "test", "format", "h", "v", "k", "k_schedule", "sweep", "lambda",
                          "max_suffix", "ignore_pos", "out", "seed", "threads", "pos_mode"})
    app.add_option_function<std::string>(std::string("--") + key, [&flags, key](const std::string& v) { flags[key] = v; },
                                          std::string("config key ") + key);

  Paths p;
  bool oracle = false;
  std::size_t eval_k = 1;
  auto* extract_cmd = app.add_subcommand("extract", "lexicalize the training corpus, write inventory/lexicon/grammar");
  auto* train_cmd = app.add_subcommand("train", "train the baseline supertagger");
  train_cmd->add_option("--inventory", p.inventory);
  train_cmd->add_option("--lexicon", p.lexicon);
  train_cmd->add_option("--model", p.model);
  auto* tag_cmd = app.add_subcommand("tag", "predict supertags for a corpus");
  tag_cmd->add_option("--input", p.input, "corpus to tag (default: dev)");
  tag_cmd->add_option("--inventory", p.inventory);
  tag_cmd->add_option("--model", p.model);
  tag_cmd->add_option("--predictions", p.predictions, "output file");
  tag_cmd->add_flag("--oracle", oracle, "emit the gold supertag (k=1) instead of tagging");
  auto* parse_cmd = app.add_subcommand("parse", "parse from supertag predictions");
  parse_cmd->add_option("--inventory", p.inventory);
  parse_cmd->add_option("--predictions", p.predictions);
  parse_cmd->add_option("--output", p.parsed, "discbracket output");
  auto* eval_cmd = app.add_subcommand("eval", "score predicted trees against gold trees");
  eval_cmd->add_option("--gold", p.gold, "gold corpus (default: dev)");
  eval_cmd->add_option("--pred", p.pred, "predicted discbracket trees");
  eval_cmd->add_option("--predictions", p.predictions, "also report tag accuracy for these predictions");
  eval_cmd->add_option("--inventory", p.inventory);
  eval_cmd->add_option("--tag-k", eval_k, "k for tag accuracy")->check(CLI::PositiveNumber);
  auto* rt_cmd = app.add_subcommand("roundtrip", "lexicalize and unlexicalize every tree and compare");
  rt_cmd->add_option("--input", p.input, "corpus (default: train)");
  auto* sweep_cmd = app.add_subcommand("sweep-k", "train on train, tag and parse dev for each k in sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) cfg = load_config_file(config_file);
    for (const auto& [k, v] : flags) cfg.set(k, v);
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      cfg.set(detail::trim(s.substr(0, eq)), s.substr(eq + 1));
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*extract_cmd) return cmd_extract(cfg);
    if (*train_cmd) return cmd_train(cfg, p);
    if (*tag_cmd) return cmd_tag(cfg, p, oracle);
    if (*parse_cmd) return cmd_parse(cfg, p);
    if (*eval_cmd) return cmd_eval(cfg, p, eval_k);
    if (*rt_cmd) return cmd_roundtrip(cfg, p);
    if (*sweep_cmd) return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const CorruptDerivation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const AlignmentError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const StructuralError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
