#include "sessrec/model.hpp"

namespace sessrec {

std::optional<double> Model::session_weight(const PredictionContext&, const Session&) const {
  return std::nullopt;
}

}  // namespace sessrec
