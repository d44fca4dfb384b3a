#pragma once

#include "tomo/bodies.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace tomo {

enum class Outcome { Positive, Negative, Inconclusive };

struct DetectionItem {
  std::string label;   // e.g. a direction "0.6,0.8" or a translate
  Outcome outcome = Outcome::Inconclusive;
  int degree = -1;     // fitted degree when meaningful
  double residual = 0.0;
  nlohmann::json details = nlohmann::json::object();
};

/// Verdict of one characterization test, with one item per direction/translate/coefficient.
/// The aggregate is negative as soon as one item is negative, positive only if all are.
struct DetectionReport {
  std::string test;
  std::string positive = "polynomial";
  std::string negative = "not-polynomial";
  std::vector<DetectionItem> items;
  std::vector<std::string> warnings;

  Outcome outcome() const;
  std::string label(Outcome o) const;
  std::string verdict() const { return label(outcome()); }
  double max_residual() const;
  nlohmann::json to_json() const;
};

std::string format_vector(const Vec& v);

/// Shortest decimal that round-trips; used for every number the CLI prints.
std::string format_number(double x);

}  // namespace tomo
