#ifndef LCFRS_CONFIG_HPP
#define LCFRS_CONFIG_HPP

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "eval.hpp"
#include "lexicalize.hpp"

namespace lcfrs {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// key = value settings. Unknown keys are rejected.
struct RunConfig {
  std::string train, dev, test;
  std::string format = "auto";  // auto, export, discbracket
  int h = 0;
  int v = 1;
  std::size_t k = 10;
  std::vector<std::size_t> k_schedule;  // empty: k, 2k
  std::vector<std::size_t> sweep = {1, 2, 3, 5, 10};
  double lambda = 0.1;
  int max_suffix = 4;
  std::set<std::string> ignore_pos = default_ignored_pos();
  std::string out = "out";
  unsigned long seed = 1;
  unsigned threads = 1;
  PosMode pos_mode = PosMode::chain;

  std::vector<std::size_t> schedule() const { return k_schedule.empty() ? std::vector<std::size_t>{k, 2 * k} : k_schedule; }

  void validate() const {
    if (h < 0) throw ConfigError("h must be >= 0");
    if (v < 1) throw ConfigError("v must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!(lambda > 0)) throw ConfigError("lambda must be > 0");
    if (max_suffix < 0) throw ConfigError("max_suffix must be >= 0");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    auto s = schedule();
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] < 1 || (i && s[i] <= s[i - 1])) throw ConfigError("k_schedule must be ascending positive integers");
    for (auto x : sweep)
      if (x < 1) throw ConfigError("sweep values must be >= 1");
    if (format != "auto" && format != "export" && format != "discbracket")
      throw ConfigError("format must be auto, export or discbracket");
  }

  void set(const std::string& key, const std::string& value);

  std::string resolved() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline long long config_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

inline std::vector<std::size_t> config_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    long long x = config_int(key, item);
    if (x < 1) throw ConfigError(key + ": values must be >= 1");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

template <class T>
std::string join(const T& xs, const char* sep = ",") {
  std::ostringstream os;
  bool first = true;
  for (const auto& x : xs) {
    if (!first) os << sep;
    first = false;
    os << x;
  }
  return os.str();
}

}  // namespace detail

inline void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = detail::trim(value);
  if (key == "train") train = v;
  else if (key == "dev") dev = v;
  else if (key == "test") test = v;
  else if (key == "format") format = v;
  else if (key == "h") h = static_cast<int>(detail::config_int(key, v));
  else if (key == "v") this->v = static_cast<int>(detail::config_int(key, v));
  else if (key == "k") {
    auto x = detail::config_int(key, v);
    if (x < 1) throw ConfigError("k must be >= 1");
    k = static_cast<std::size_t>(x);
  } else if (key == "k_schedule") k_schedule = detail::config_list(key, v);
  else if (key == "sweep") sweep = detail::config_list(key, v);
  else if (key == "lambda") {
    try {
      std::size_t used = 0;
      lambda = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError("lambda: expected a number, got '" + v + "'");
    }
  } else if (key == "max_suffix") max_suffix = static_cast<int>(detail::config_int(key, v));
  else if (key == "ignore_pos") {
    ignore_pos.clear();
    std::stringstream ss(v);
    std::string item;
    while (ss >> item) ignore_pos.insert(item);
  } else if (key == "out") out = v;
  else if (key == "seed") seed = static_cast<unsigned long>(detail::config_int(key, v));
  else if (key == "threads") {
    auto x = detail::config_int(key, v);
    if (x < 1) throw ConfigError("threads must be >= 1");
    threads = static_cast<unsigned>(x);
  } else if (key == "pos_mode") {
    if (v == "chain") pos_mode = PosMode::chain;
    else if (v == "tag") pos_mode = PosMode::tag;
    else throw ConfigError("pos_mode must be chain or tag");
  } else throw ConfigError("unknown config key '" + key + "'");
}

inline std::string RunConfig::resolved() const {
  std::ostringstream os;
  os << "train = " << train << '\n'
     << "dev = " << dev << '\n'
     << "test = " << test << '\n'
     << "format = " << format << '\n'
     << "h = " << h << '\n'
     << "v = " << v << '\n'
     << "k = " << k << '\n'
     << "k_schedule = " << detail::join(schedule()) << '\n'
     << "sweep = " << detail::join(sweep) << '\n'
     << "lambda = " << lambda << '\n'
     << "max_suffix = " << max_suffix << '\n'
     << "ignore_pos = " << detail::join(ignore_pos, " ") << '\n'
     << "out = " << out << '\n'
     << "seed = " << seed << '\n'
     << "threads = " << threads << '\n'
     << "pos_mode = " << (pos_mode == PosMode::chain ? "chain" : "tag") << '\n';
  return os.str();
}

// '#' starts a comment.
inline void load_config(std::istream& in, RunConfig& cfg) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    if (detail::trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    try {
      cfg.set(detail::trim(std::string_view(line).substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  load_config(in, cfg);
  return cfg;
}

}  // namespace lcfrs

#endif  // LCFRS_CONFIG_HPP
