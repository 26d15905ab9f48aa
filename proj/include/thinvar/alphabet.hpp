#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "thinvar/errors.hpp"

namespace thinvar {

/// Finite ordered state space. Symbol order fixes the mixed-radix encoding
/// of configurations everywhere else.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw input_error("alphabet must have at least one symbol");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (!index_.emplace(symbols_[i], i).second)
        throw input_error("alphabet symbols must be distinct: duplicate \"" + symbols_[i] + "\"");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::size_t index(const std::string& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw input_error("unknown symbol \"" + s + "\"");
    return it->second;
  }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

  static Alphabet spin() { return Alphabet({"-1", "+1"}); }
  static Alphabet binary() { return Alphabet({"0", "1"}); }
  static Alphabet pm() { return Alphabet({"-", "+"}); }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace thinvar
