#pragma once

#include <string>

namespace sessrec {

// Named decay schemes shared by the rule and neighborhood methods.
enum class Weighting { same, linear, div, quadratic, log };

// Weight of 1-based position `pos` in a session of length `len`; later
// positions weigh more:
//   same      1
//   linear    max(0, 1 - 0.1 * (len - pos))
//   div       pos / len
//   quadratic (pos / len)^2
//   log       1 / log10(len - pos + 1.7)
double position_weight(Weighting w, int pos, int len);

// Weight of an ordered item pair `distance` positions apart (distance >= 1);
// nearer pairs weigh more:
//   same      1
//   linear    max(0, 1 - 0.1 * distance)
//   div       1 / distance
//   quadratic 1 / distance^2
//   log       1 / log10(distance + 1.7)
double step_weight(Weighting w, int distance);

Weighting parse_weighting(const std::string& name);  // throws ConfigError
std::string weighting_name(Weighting w);

}  // namespace sessrec
