#ifndef LCFRS_SYMBOLS_HPP
#define LCFRS_SYMBOLS_HPP

#include <cstdint>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "error.hpp"

namespace lcfrs {

using LabelId = std::uint32_t;

// Bidirectional string <-> id table. Reads may run concurrently; interning
// new strings is serialized.
class SymbolTable {
 public:
  LabelId intern(std::string_view s) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(std::string(s)); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(std::string(s), static_cast<LabelId>(strings_.size()));
    if (inserted) strings_.emplace_back(s);
    return it->second;
  }

  // Returns true and sets `id` if `s` is already interned.
  bool find(std::string_view s, LabelId& id) const {
    std::shared_lock lock(mutex_);
    auto it = ids_.find(std::string(s));
    if (it == ids_.end()) return false;
    id = it->second;
    return true;
  }

  const std::string& str(LabelId id) const {
    std::shared_lock lock(mutex_);
    if (id >= strings_.size()) throw PreconditionError("unknown symbol id " + std::to_string(id));
    return strings_[id];  // deque: references stay valid across growth
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return strings_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, LabelId> ids_;
  std::deque<std::string> strings_;
};

// Process-wide table for tree labels and nonterminal parts.
inline SymbolTable& labels() {
  static SymbolTable table;
  return table;
}

}  // namespace lcfrs

#endif  // LCFRS_SYMBOLS_HPP
