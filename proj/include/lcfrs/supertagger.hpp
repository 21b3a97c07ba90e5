#ifndef LCFRS_SUPERTAGGER_HPP
#define LCFRS_SUPERTAGGER_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "grammar_io.hpp"
#include "inventory.hpp"

namespace lcfrs {

struct ScoredTag {
  std::size_t tag;
  double score;  // log-probability
  friend bool operator==(const ScoredTag&, const ScoredTag&) = default;
};

// k-best tags per position, best first.
struct SentencePrediction {
  std::string id;
  std::vector<std::string> words;
  std::vector<std::vector<ScoredTag>> tags;
};

struct BaselineConfig {
  double lambda = 0.1;
  int max_suffix = 4;
};

namespace detail {

// Suffixes of 1..max code points (UTF-8), shortest first.
inline std::vector<std::string> suffixes(std::string_view w, int max) {
  std::vector<std::string> out;
  std::size_t cut = w.size();
  for (int n = 0; n < max && cut > 0; ++n) {
    --cut;
    while (cut > 0 && (static_cast<unsigned char>(w[cut]) & 0xC0) == 0x80) --cut;
    out.emplace_back(w.substr(cut));
  }
  return out;
}

using TagCounts = std::map<std::size_t, std::size_t>;

inline std::size_t total(const TagCounts& c) {
  std::size_t n = 0;
  for (const auto& [t, k] : c) n += k;
  return n;
}

}  // namespace detail

// Add-lambda relative frequencies P(tag | word); unknown words use the
// longest known suffix, then the global tag distribution.
class BaselineModel {
 public:
  BaselineModel() = default;

  static BaselineModel train(const Lexicon& lex, std::size_t num_tags, BaselineConfig cfg = {}) {
    if (lex.empty() || num_tags == 0) throw PreconditionError("cannot train the baseline tagger on an empty lexicon");
    if (!(cfg.lambda > 0) || cfg.max_suffix < 0) throw PreconditionError("baseline needs lambda > 0 and max_suffix >= 0");
    BaselineModel m;
    m.num_tags_ = num_tags;
    m.cfg_ = cfg;
    for (const auto& [w, tags] : lex) {
      auto& wc = m.words_[w];
      for (const auto& [t, n] : tags) {
        if (t >= num_tags) throw PreconditionError("lexicon tag outside inventory");
        wc[t] += n;
        m.global_[t] += n;
        for (const auto& s : detail::suffixes(w, cfg.max_suffix)) m.suffix_[s][t] += n;
      }
    }
    return m;
  }

  std::size_t num_tags() const { return num_tags_; }
  const BaselineConfig& config() const { return cfg_; }

  // Distribution used for `word`.
  const detail::TagCounts& counts_for(const std::string& word) const {
    if (auto it = words_.find(word); it != words_.end()) return it->second;
    auto sfx = detail::suffixes(word, cfg_.max_suffix);
    for (auto s = sfx.rbegin(); s != sfx.rend(); ++s)
      if (auto it = suffix_.find(*s); it != suffix_.end()) return it->second;
    return global_;
  }

  std::vector<ScoredTag> predict_word(const std::string& word, std::size_t k) const {
    const auto& c = counts_for(word);
    const double denom = static_cast<double>(detail::total(c)) + cfg_.lambda * static_cast<double>(num_tags_);
    std::vector<ScoredTag> seen;
    for (const auto& [t, n] : c) seen.push_back({t, std::log((static_cast<double>(n) + cfg_.lambda) / denom)});
    std::sort(seen.begin(), seen.end(), [](const ScoredTag& a, const ScoredTag& b) {
      return a.score != b.score ? a.score > b.score : a.tag < b.tag;
    });
    if (seen.size() > k) seen.resize(k);
    // unseen tags all share the smoothing mass; lowest indices first
    const double rest = std::log(cfg_.lambda / denom);
    for (std::size_t t = 0; seen.size() < k && t < num_tags_; ++t)
      if (!c.count(t)) seen.push_back({t, rest});
    return seen;
  }

  SentencePrediction predict(std::string id, const std::vector<std::string>& words, std::size_t k) const {
    if (k == 0) throw PreconditionError("k must be >= 1");
    SentencePrediction p{std::move(id), words, {}};
    for (const auto& w : words) p.tags.push_back(predict_word(w, k));
    return p;
  }

  // C num_tags lambda max_suffix / W word tag count / S suffix tag count / G tag count
  void write(std::ostream& os) const {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, cfg_.lambda);
    os << "C\t" << num_tags_ << '\t' << std::string(buf, end) << '\t' << cfg_.max_suffix << '\n';
    std::map<std::string, const detail::TagCounts*> sorted_words, sorted_sfx;
    for (const auto& [w, c] : words_) sorted_words[w] = &c;
    for (const auto& [s, c] : suffix_) sorted_sfx[s] = &c;
    for (const auto& [w, c] : sorted_words)
      for (const auto& [t, n] : *c) os << "W\t" << w << '\t' << t << '\t' << n << '\n';
    for (const auto& [s, c] : sorted_sfx)
      for (const auto& [t, n] : *c) os << "S\t" << s << '\t' << t << '\t' << n << '\n';
    for (const auto& [t, n] : global_) os << "G\t" << t << '\t' << n << '\n';
  }

  static BaselineModel read(std::istream& in) {
    BaselineModel m;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      auto f = detail::split(line, '\t');
      try {
        auto idx = [&](std::string_view s) {
          auto t = static_cast<std::size_t>(detail::parse_int(s, "tag index"));
          if (!header || t >= m.num_tags_) throw FormatError("tag index outside model");
          return t;
        };
        auto cnt = [&](std::string_view s) { return static_cast<std::size_t>(detail::parse_int(s, "count")); };
        if (f[0] == "C" && f.size() == 4) {
          m.num_tags_ = static_cast<std::size_t>(detail::parse_int(f[1], "tag count"));
          auto [p, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), m.cfg_.lambda);
          if (ec != std::errc() || p != f[2].data() + f[2].size()) throw FormatError("bad lambda");
          m.cfg_.max_suffix = detail::parse_int(f[3], "suffix length");
          header = true;
        } else if (f[0] == "W" && f.size() == 4) {
          m.words_[std::string(f[1])][idx(f[2])] = cnt(f[3]);
        } else if (f[0] == "S" && f.size() == 4) {
          m.suffix_[std::string(f[1])][idx(f[2])] = cnt(f[3]);
        } else if (f[0] == "G" && f.size() == 3) {
          m.global_[idx(f[1])] = cnt(f[2]);
        } else {
          throw FormatError("unknown model record");
        }
      } catch (const FormatError& e) {
        throw FormatError(e.what(), lineno);
      }
    }
    if (!header || m.global_.empty()) throw FormatError("model file without header or global counts", lineno);
    return m;
  }

  // Overrides the smoothing settings from a config without retraining.
  void set_lambda(double lambda) {
    if (!(lambda > 0)) throw PreconditionError("lambda must be > 0");
    cfg_.lambda = lambda;
  }

 private:
  std::size_t num_tags_ = 0;
  BaselineConfig cfg_;
  std::unordered_map<std::string, detail::TagCounts> words_;
  std::unordered_map<std::string, detail::TagCounts> suffix_;
  detail::TagCounts global_;
};

inline std::string format_score(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

// sentence-id TAB position TAB word TAB tag:score,...; blank line after each sentence.
inline void write_predictions(std::ostream& os, const std::vector<SentencePrediction>& preds) {
  for (const auto& s : preds) {
    for (std::size_t i = 0; i < s.tags.size(); ++i) {
      os << s.id << '\t' << i + 1 << '\t' << s.words.at(i) << '\t';
      for (std::size_t j = 0; j < s.tags[i].size(); ++j)
        os << (j ? "," : "") << s.tags[i][j].tag << ':' << format_score(s.tags[i][j].score);
      os << '\n';
    }
    os << '\n';
  }
}

inline std::vector<SentencePrediction> read_predictions(std::istream& in, std::size_t num_tags) {
  std::vector<SentencePrediction> out;
  std::string line;
  std::size_t lineno = 0;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      open = false;
      continue;
    }
    auto f = detail::split(line, '\t');
    if (f.size() != 4) throw FormatError("prediction line needs 4 tab-separated fields", lineno);
    if (!open || out.back().id != f[0]) {
      out.push_back({std::string(f[0]), {}, {}});
      open = true;
    }
    auto& s = out.back();
    int pos = 0;
    try {
      pos = detail::parse_int(f[1], "position");
    } catch (const FormatError& e) {
      throw FormatError(e.what(), lineno);
    }
    if (pos != static_cast<int>(s.words.size()) + 1)
      throw FormatError("position " + std::to_string(pos) + " out of sequence", lineno);
    s.words.emplace_back(f[2]);
    std::vector<ScoredTag> tags;
    for (auto item : detail::split(f[3], ',')) {
      auto colon = item.find(':');
      if (colon == std::string_view::npos) throw FormatError("tag entry '" + std::string(item) + "' lacks ':'", lineno);
      auto ts = item.substr(0, colon), ss = item.substr(colon + 1);
      std::size_t tag = 0;
      double score = 0;
      auto r1 = std::from_chars(ts.data(), ts.data() + ts.size(), tag);
      if (r1.ec != std::errc() || r1.ptr != ts.data() + ts.size())
        throw FormatError("bad tag index '" + std::string(ts) + "'", lineno);
      auto r2 = std::from_chars(ss.data(), ss.data() + ss.size(), score);
      if (r2.ec != std::errc() || r2.ptr != ss.data() + ss.size() || !std::isfinite(score))
        throw FormatError("bad score '" + std::string(ss) + "'", lineno);
      if (tag >= num_tags)
        throw FormatError("tag index " + std::to_string(tag) + " outside inventory of " + std::to_string(num_tags),
                          lineno);
      tags.push_back({tag, score});
    }
    if (tags.empty()) throw FormatError("position without predicted tags", lineno);
    s.tags.push_back(std::move(tags));
  }
  return out;
}

// Gold tags as a prediction with score 0 (oracle mode).
inline SentencePrediction oracle_prediction(std::string id, const std::vector<std::string>& words,
                                            const std::vector<std::size_t>& gold) {
  SentencePrediction p{std::move(id), words, {}};
  for (auto g : gold) p.tags.push_back(g == kNoTag ? std::vector<ScoredTag>{} : std::vector<ScoredTag>{{g, 0.0}});
  return p;
}

}  // namespace lcfrs

#endif  // LCFRS_SUPERTAGGER_HPP
