#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "thinvar/alphabet.hpp"
#include "thinvar/errors.hpp"
#include "thinvar/joint_measure.hpp"
#include "thinvar/profile.hpp"
#include "thinvar/spin_chain.hpp"

namespace thinvar {

namespace detail {

inline nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const std::string& name, const std::string& context) {
  if (!j.contains(name)) throw input_error(context + ": missing field \"" + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(context + ": field \"" + name + "\": " + e.what());
  }
}

}  // namespace detail

/// {"alphabet": [...], "n": int, "weights": [...]}. Dense weights may omit
/// trailing zeros; sparse files set "sparse": true and list [index, weight]
/// pairs instead.
inline JointMeasure read_joint_measure(const std::string& path) {
  nlohmann::json j = detail::parse_file(path);
  Alphabet alphabet(detail::field<std::vector<std::string>>(j, "alphabet", path));
  std::size_t n = detail::field<std::size_t>(j, "n", path);
  if (n == 0) throw input_error(path + ": field \"n\": must be positive");
  std::size_t sz = checked_pow(alphabet.size(), n);
  std::vector<double> weights(sz, 0.0);
  if (j.value("sparse", false)) {
    auto pairs = detail::field<std::vector<std::pair<std::size_t, double>>>(j, "weights", path);
    for (const auto& [idx, w] : pairs) {
      if (idx >= sz) throw input_error(path + ": sparse index " + std::to_string(idx) +
                                       " out of range");
      weights[idx] = w;
    }
  } else {
    auto dense = detail::field<std::vector<double>>(j, "weights", path);
    if (dense.size() > sz)
      throw input_error(path + ": field \"weights\": " + std::to_string(dense.size()) +
                        " entries exceed state space size " + std::to_string(sz));
    std::copy(dense.begin(), dense.end(), weights.begin());
  }
  try {
    return JointMeasure(std::move(alphabet), n, std::move(weights));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline void write_joint_measure(const JointMeasure& mu, const std::string& path) {
  nlohmann::json j;
  j["alphabet"] = mu.alphabet().symbols();
  j["n"] = mu.n();
  j["weights"] = mu.weights();
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

/// {"alphabet": [...], "breakpoints": [...], "weights": [[...], ...]}.
inline PiecewiseProfile read_profile(const std::string& path) {
  nlohmann::json j = detail::parse_file(path);
  Alphabet alphabet(detail::field<std::vector<std::string>>(j, "alphabet", path));
  auto breakpoints = detail::field<std::vector<double>>(j, "breakpoints", path);
  auto weights = detail::field<std::vector<std::vector<double>>>(j, "weights", path);
  try {
    return PiecewiseProfile(std::move(alphabet), std::move(breakpoints), std::move(weights));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline void write_profile(const PiecewiseProfile& profile, const std::string& path) {
  nlohmann::json j;
  j["alphabet"] = profile.alphabet().symbols();
  j["breakpoints"] = profile.breakpoints();
  std::vector<std::vector<double>> ws;
  for (std::size_t r = 0; r < profile.intervals(); ++r) ws.push_back(profile.measure(r));
  j["weights"] = ws;
  std::ofstream out(path);
  if (!out) throw input_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

/// {"alphabet": [...], "arity": int, "table": {"(-1,-1)": v, ...}}.
inline Interaction read_interaction(const std::string& path) {
  nlohmann::json j = detail::parse_file(path);
  Alphabet alphabet(detail::field<std::vector<std::string>>(j, "alphabet", path));
  std::size_t arity = detail::field<std::size_t>(j, "arity", path);
  if (arity == 0) throw input_error(path + ": field \"arity\": must be positive");
  std::size_t sz = checked_pow(alphabet.size(), arity);
  std::vector<double> table(sz, 0.0);
  std::vector<bool> seen(sz, false);
  if (!j.contains("table") || !j.at("table").is_object())
    throw input_error(path + ": missing object field \"table\"");
  for (const auto& [key, value] : j.at("table").items()) {
    // key format: "(sym1,sym2,...)"
    std::string inner = key;
    if (inner.size() >= 2 && inner.front() == '(' && inner.back() == ')')
      inner = inner.substr(1, inner.size() - 2);
    std::vector<std::size_t> config;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) config.push_back(alphabet.index(tok));
    if (config.size() != arity)
      throw input_error(path + ": table key \"" + key + "\" has " +
                        std::to_string(config.size()) + " symbols, expected " +
                        std::to_string(arity));
    std::size_t idx = 0;
    for (std::size_t c : config) idx = idx * alphabet.size() + c;
    if (!value.is_number())
      throw input_error(path + ": table entry \"" + key + "\" is not a number");
    table[idx] = value.get<double>();
    seen[idx] = true;
  }
  for (std::size_t idx = 0; idx < sz; ++idx)
    if (!seen[idx]) throw input_error(path + ": interaction table is missing entries");
  try {
    return Interaction(std::move(alphabet), arity, std::move(table));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

}  // namespace thinvar
