#include "tomo/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace tomo {

Outcome DetectionReport::outcome() const {
  if (items.empty()) return Outcome::Inconclusive;
  bool all_positive = true;
  for (const auto& it : items) {
    if (it.outcome == Outcome::Negative) return Outcome::Negative;
    if (it.outcome != Outcome::Positive) all_positive = false;
  }
  return all_positive ? Outcome::Positive : Outcome::Inconclusive;
}

std::string DetectionReport::label(Outcome o) const {
  switch (o) {
    case Outcome::Positive: return positive;
    case Outcome::Negative: return negative;
    default: return "inconclusive";
  }
}

double DetectionReport::max_residual() const {
  double r = 0.0;
  for (const auto& it : items) r = std::max(r, it.residual);
  return r;
}

nlohmann::json DetectionReport::to_json() const {
  nlohmann::json j;
  j["test"] = test;
  j["verdict"] = verdict();
  j["max_residual"] = max_residual();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& it : items) {
    nlohmann::json e = {{"label", it.label}, {"verdict", label(it.outcome)}, {"relative_residual", it.residual}};
    if (it.degree >= 0) e["degree"] = it.degree;
    for (auto kv = it.details.begin(); kv != it.details.end(); ++kv) e[kv.key()] = kv.value();
    arr.push_back(std::move(e));
  }
  j["items"] = std::move(arr);
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_vector(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

}  // namespace tomo
