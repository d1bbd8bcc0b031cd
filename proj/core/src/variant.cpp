#include "sessrec/variant.hpp"

#include <unordered_set>

#include "sessrec/neighborhood.hpp"
#include "sessrec/sr.hpp"

namespace sessrec {

namespace {

constexpr const char* kBases[] = {"sr", "vsknn", "stan", "vstan"};

bool known_base(const std::string& base) {
  for (const char* b : kBases) {
    if (base == b) return true;
  }
  return false;
}

std::int64_t get_int(const ParamConfig& params, const std::string& key, std::int64_t fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  throw ConfigError("parameter '" + key + "' must be an integer");
}

double get_real(const ParamConfig& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<double>(&it->second)) return *v;
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return static_cast<double>(*v);
  throw ConfigError("parameter '" + key + "' must be a number");
}

std::string get_word(const ParamConfig& params, const std::string& key, std::string fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  throw ConfigError("parameter '" + key + "' must be a string");
}

}  // namespace

std::string AlgorithmSpec::name() const {
  std::string out = base;
  if (extend || boost || remind) {
    out += '_';
    if (extend) out += 'e';
    if (boost) out += 'b';
    if (remind) out += 'r';
  }
  return out;
}

AlgorithmSpec parse_algorithm(const std::string& name) {
  AlgorithmSpec spec;
  const auto underscore = name.find('_');
  spec.base = name.substr(0, underscore);
  if (!known_base(spec.base)) {
    throw ConfigError("unknown algorithm '" + name +
                      "' (expected sr, vsknn, stan or vstan, optionally with an _e/_b/_r suffix)");
  }
  if (underscore == std::string::npos) return spec;

  const std::string suffix = name.substr(underscore + 1);
  if (suffix.empty()) throw ConfigError("empty extension suffix in '" + name + "'");
  for (const char c : suffix) {
    bool* flag = c == 'e' ? &spec.extend : c == 'b' ? &spec.boost : c == 'r' ? &spec.remind
                                                                             : nullptr;
    if (flag == nullptr) {
      throw ConfigError("unknown extension '" + std::string(1, c) + "' in '" + name + "'");
    }
    if (*flag) throw ConfigError("repeated extension '" + std::string(1, c) + "' in '" + name + "'");
    *flag = true;
  }
  if (spec.base == "sr" && spec.extend) {
    throw ConfigError("session extension does not apply to sr");
  }
  return spec;
}

BuiltAlgorithm build_algorithm(const AlgorithmSpec& spec, const ParamConfig& params) {
  if (!known_base(spec.base)) throw ConfigError("unknown algorithm base '" + spec.base + "'");

  std::unordered_set<std::string> allowed;
  if (spec.base == "sr") {
    allowed = {"steps", "weighting"};
  } else if (spec.base == "vsknn") {
    allowed = {"k", "sample_size", "weighting", "weighting_score", "idf_weighting"};
  } else {
    allowed = {"k", "sample_size", "lambda_spw", "lambda_snh", "lambda_inh"};
    if (spec.base == "vstan") {
      allowed.insert({"similarity", "lambda_ipw", "lambda_idf"});
    }
  }
  if (spec.extend) allowed.insert("extend");
  if (spec.boost) allowed.insert("boost");
  if (spec.remind) {
    allowed.insert({"remind_sessions", "weight_rel", "weight_irec"});
    if (spec.base != "sr") allowed.insert("weight_ssim");
  }
  for (const auto& [key, value] : params) {
    if (allowed.count(key) == 0) {
      throw ConfigError("unknown parameter '" + key + "' for algorithm '" + spec.name() + "'");
    }
  }

  BuiltAlgorithm built;
  if (spec.base == "sr") {
    SrConfig config;
    config.steps = static_cast<int>(get_int(params, "steps", config.steps));
    config.weighting = parse_weighting(get_word(params, "weighting", weighting_name(config.weighting)));
    built.fit = [config](const SessionLog& train) { return fit_sr(train, config); };
  } else if (spec.base == "vsknn") {
    VsknnConfig config;
    config.k = static_cast<int>(get_int(params, "k", config.k));
    config.sample_size = static_cast<int>(get_int(params, "sample_size", config.sample_size));
    config.weighting = parse_weighting(get_word(params, "weighting", weighting_name(config.weighting)));
    config.weighting_score =
        parse_weighting(get_word(params, "weighting_score", weighting_name(config.weighting_score)));
    config.idf_weighting = static_cast<int>(get_int(params, "idf_weighting", config.idf_weighting));
    built.fit = [config](const SessionLog& train) -> std::unique_ptr<Model> {
      return fit_vsknn(train, config);
    };
  } else if (spec.base == "stan") {
    StanConfig config;
    config.k = static_cast<int>(get_int(params, "k", config.k));
    config.sample_size = static_cast<int>(get_int(params, "sample_size", config.sample_size));
    config.lambda_spw = get_real(params, "lambda_spw", config.lambda_spw);
    config.lambda_snh = get_real(params, "lambda_snh", config.lambda_snh);
    config.lambda_inh = get_real(params, "lambda_inh", config.lambda_inh);
    built.fit = [config](const SessionLog& train) -> std::unique_ptr<Model> {
      return fit_stan(train, config);
    };
  } else {
    VstanConfig config;
    config.k = static_cast<int>(get_int(params, "k", config.k));
    config.sample_size = static_cast<int>(get_int(params, "sample_size", config.sample_size));
    config.similarity =
        parse_similarity(get_word(params, "similarity", similarity_name(config.similarity)));
    config.lambda_spw = get_real(params, "lambda_spw", config.lambda_spw);
    config.lambda_snh = get_real(params, "lambda_snh", config.lambda_snh);
    config.lambda_inh = get_real(params, "lambda_inh", config.lambda_inh);
    config.lambda_ipw = get_real(params, "lambda_ipw", config.lambda_ipw);
    config.lambda_idf = static_cast<int>(get_int(params, "lambda_idf", config.lambda_idf));
    built.fit = [config](const SessionLog& train) -> std::unique_ptr<Model> {
      return fit_vstan(train, config);
    };
  }

  if (spec.extend) {
    ExtendConfig config;
    config.desired_length = static_cast<int>(get_int(params, "extend", config.desired_length));
    if (config.desired_length < 1) throw ConfigError("extend desired_length must be >= 1");
    built.stack.extend = config;
  }
  if (spec.boost) {
    BoostConfig config;
    config.factor = get_real(params, "boost", config.factor);
    if (config.factor < 0.0) throw ConfigError("boost factor must be finite and >= 0");
    built.stack.boost = config;
  }
  if (spec.remind) {
    RemindConfig config;
    config.past_sessions =
        static_cast<int>(get_int(params, "remind_sessions", config.past_sessions));
    config.weight_rel = static_cast<int>(get_int(params, "weight_rel", config.weight_rel));
    config.weight_irec = static_cast<int>(get_int(params, "weight_irec", config.weight_irec));
    if (spec.base != "sr") {
      config.weight_ssim = static_cast<int>(get_int(params, "weight_ssim", config.weight_ssim));
    }
    if (config.past_sessions < 1) throw ConfigError("remind_sessions must be >= 1");
    if (config.weight_rel < 0 || config.weight_irec < 0 || config.weight_ssim < 0) {
      throw ConfigError("reminder weights must be >= 0");
    }
    built.stack.remind = config;
  }
  return built;
}

}  // namespace sessrec
