#pragma once

#include <functional>
#include <memory>
#include <string>

#include "sessrec/extensions.hpp"
#include "sessrec/hyperopt.hpp"
#include "sessrec/model.hpp"

namespace sessrec {

// An algorithm name is a base method plus an optional extension suffix after
// an underscore: e (extend), b (boost), r (remind), in any combination, e.g.
// "sr", "vsknn_b", "stan_er", "vstan_ebr". Extend does not apply to sr.
struct AlgorithmSpec {
  std::string base;
  bool extend = false;
  bool boost = false;
  bool remind = false;

  std::string name() const;
  bool is_neighborhood() const { return base != "sr"; }
};

AlgorithmSpec parse_algorithm(const std::string& name);  // throws ConfigError

struct BuiltAlgorithm {
  std::function<std::unique_ptr<Model>(const SessionLog&)> fit;
  ExtensionStack stack;
};

// Materializes fit + extension wrappers from a flat parameter map. Unknown
// keys, values of the wrong kind and parameters of inapplicable extensions
// are ConfigErrors; omitted parameters use the documented defaults.
BuiltAlgorithm build_algorithm(const AlgorithmSpec& spec, const ParamConfig& params);

}  // namespace sessrec
