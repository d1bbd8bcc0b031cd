#include "sessrec/weighting.hpp"

#include <algorithm>
#include <cmath>

#include "sessrec/types.hpp"

namespace sessrec {

double position_weight(Weighting w, int pos, int len) {
  switch (w) {
    case Weighting::same:
      return 1.0;
    case Weighting::linear:
      return std::max(0.0, 1.0 - 0.1 * static_cast<double>(len - pos));
    case Weighting::div:
      return static_cast<double>(pos) / static_cast<double>(len);
    case Weighting::quadratic: {
      const double r = static_cast<double>(pos) / static_cast<double>(len);
      return r * r;
    }
    case Weighting::log:
      return 1.0 / std::log10(static_cast<double>(len - pos) + 1.7);
  }
  return 1.0;
}

double step_weight(Weighting w, int distance) {
  switch (w) {
    case Weighting::same:
      return 1.0;
    case Weighting::linear:
      return std::max(0.0, 1.0 - 0.1 * static_cast<double>(distance));
    case Weighting::div:
      return 1.0 / static_cast<double>(distance);
    case Weighting::quadratic:
      return 1.0 / (static_cast<double>(distance) * static_cast<double>(distance));
    case Weighting::log:
      return 1.0 / std::log10(static_cast<double>(distance) + 1.7);
  }
  return 1.0;
}

Weighting parse_weighting(const std::string& name) {
  if (name == "same") return Weighting::same;
  if (name == "linear") return Weighting::linear;
  if (name == "div") return Weighting::div;
  if (name == "quadratic") return Weighting::quadratic;
  if (name == "log") return Weighting::log;
  throw ConfigError("unknown weighting scheme '" + name + "'");
}

std::string weighting_name(Weighting w) {
  switch (w) {
    case Weighting::same:
      return "same";
    case Weighting::linear:
      return "linear";
    case Weighting::div:
      return "div";
    case Weighting::quadratic:
      return "quadratic";
    case Weighting::log:
      return "log";
  }
  return "same";
}

}  // namespace sessrec
