#include "sessrec/presets.hpp"

#include <algorithm>

#include "sessrec/types.hpp"

namespace sessrec {

namespace {

ParamValue iv(std::int64_t v) { return ParamValue(v); }
ParamValue rv(double v) { return ParamValue(v); }
ParamValue sv(const char* v) { return ParamValue(std::string(v)); }

std::vector<ParamValue> int_range(int lo, int hi) {
  std::vector<ParamValue> values;
  for (int v = lo; v <= hi; ++v) values.push_back(iv(v));
  return values;
}

std::vector<ParamValue> int_set(std::initializer_list<std::int64_t> xs) {
  std::vector<ParamValue> values;
  for (const std::int64_t v : xs) values.push_back(iv(v));
  return values;
}

std::vector<ParamValue> real_set(std::initializer_list<double> xs) {
  std::vector<ParamValue> values;
  for (const double v : xs) values.push_back(rv(v));
  return values;
}

std::vector<ParamValue> word_set(std::initializer_list<const char*> xs) {
  std::vector<ParamValue> values;
  for (const char* v : xs) values.push_back(sv(v));
  return values;
}

// 0.1, 0.3, ... 3.9 — twenty equally spaced boost factors.
std::vector<ParamValue> boost_grid() {
  std::vector<ParamValue> values;
  for (int i = 0; i < 20; ++i) values.push_back(rv(static_cast<double>(2 * i + 1) / 10.0));
  return values;
}

const std::vector<ParamValue>& decay_grid() {
  static const std::vector<ParamValue> grid =
      real_set({0.00001, 0.4525, 0.905, 1.81, 3.62, 7.24});
  return grid;
}

std::vector<ParamDomain> base_domains(const std::string& base) {
  if (base == "sr") {
    std::vector<ParamValue> steps = int_range(2, 15);
    for (const std::int64_t v : {20, 25, 30}) steps.push_back(iv(v));
    return {{"steps", std::move(steps)},
            {"weighting", word_set({"linear", "div", "quadratic", "log"})}};
  }
  if (base == "vsknn") {
    return {{"k", int_set({50, 100, 500, 1000, 1500})},
            {"sample_size", int_set({500, 1000, 2500, 5000, 10000})},
            {"weighting", word_set({"same", "div", "linear", "quadratic", "log"})},
            {"weighting_score", word_set({"same", "div", "linear", "quadratic", "log"})},
            {"idf_weighting", int_set({0, 1, 2, 5, 10})}};
  }
  std::vector<ParamDomain> domains = {
      {"k", int_set({100, 200, 500, 1000, 1500, 2000})},
      {"sample_size", int_set({1000, 2500, 5000, 10000})},
      {"lambda_spw", decay_grid()},
      {"lambda_snh", real_set({2.5, 5, 10, 20, 40, 80, 100})},
      {"lambda_inh", decay_grid()}};
  if (base == "vstan") {
    domains.push_back({"similarity", word_set({"cosine", "vec"})});
    domains.push_back({"lambda_ipw", decay_grid()});
    domains.push_back({"lambda_idf", int_set({0, 1, 2, 5, 10})});
  }
  return domains;
}

}  // namespace

SearchSpace preset_space(const AlgorithmSpec& spec) {
  SearchSpace space;
  space.joint = base_domains(spec.base);
  if (spec.boost) space.joint.push_back({"boost", boost_grid()});
  if (spec.extend) space.joint.push_back({"extend", int_range(1, 25)});
  if (spec.remind) {
    space.post_hoc.push_back({"remind_sessions", int_range(1, 10)});
    space.post_hoc.push_back({"weight_rel", int_range(1, 10)});
    space.post_hoc.push_back({"weight_irec", int_range(0, 9)});
    if (spec.base != "sr") space.post_hoc.push_back({"weight_ssim", int_range(0, 9)});
  }
  return space;
}

std::vector<std::string> preset_datasets() { return {"retail", "xing", "cosmetics", "lastfm"}; }

ParamConfig preset_optimum(const AlgorithmSpec& spec, const std::string& dataset) {
  const auto known = preset_datasets();
  if (std::find(known.begin(), known.end(), dataset) == known.end()) {
    throw ConfigError("unknown dataset family '" + dataset +
                      "' (expected retail, xing, cosmetics or lastfm)");
  }
  const std::string name = spec.name();
  const int d = dataset == "retail" ? 0 : dataset == "xing" ? 1 : dataset == "cosmetics" ? 2 : 3;

  if (name == "sr") {
    static const std::int64_t steps[] = {15, 25, 15, 8};
    static const char* weighting[] = {"quadratic", "quadratic", "div", "quadratic"};
    return {{"steps", iv(steps[d])}, {"weighting", sv(weighting[d])}};
  }
  if (name == "sr_br" && d <= 2) {
    static const std::int64_t steps[] = {12, 30, 15};
    static const char* weighting[] = {"quadratic", "quadratic", "div"};
    static const double boost[] = {3.1, 1.9, 3.7};
    static const std::int64_t sessions[] = {2, 6, 9};
    static const std::int64_t w_rel[] = {5, 8, 8};
    static const std::int64_t w_irec[] = {3, 4, 3};
    return {{"steps", iv(steps[d])},          {"weighting", sv(weighting[d])},
            {"boost", rv(boost[d])},          {"remind_sessions", iv(sessions[d])},
            {"weight_rel", iv(w_rel[d])},     {"weight_irec", iv(w_irec[d])}};
  }
  if (name == "sr_b" && d == 3) {
    return {{"steps", iv(20)}, {"weighting", sv("quadratic")}, {"boost", rv(3.1)}};
  }

  if (name == "vsknn") {
    static const std::int64_t k[] = {50, 100, 100, 50};
    static const std::int64_t sample[] = {500, 500, 10000, 500};
    static const char* weighting[] = {"log", "log", "quadratic", "quadratic"};
    static const char* score[] = {"linear", "quadratic", "div", "quadratic"};
    static const std::int64_t idf[] = {10, 10, 10, 5};
    return {{"k", iv(k[d])},
            {"sample_size", iv(sample[d])},
            {"weighting", sv(weighting[d])},
            {"weighting_score", sv(score[d])},
            {"idf_weighting", iv(idf[d])}};
  }
  if (name == "vsknn_ebr" && (d == 0 || d == 2)) {
    const bool retail = d == 0;
    return {{"k", iv(1500)},
            {"sample_size", iv(retail ? 1000 : 10000)},
            {"weighting", sv(retail ? "log" : "quadratic")},
            {"weighting_score", sv(retail ? "linear" : "div")},
            {"idf_weighting", iv(retail ? 1 : 10)},
            {"extend", iv(retail ? 8 : 2)},
            {"boost", rv(retail ? 0.1 : 0.9)},
            {"remind_sessions", iv(retail ? 4 : 10)},
            {"weight_rel", iv(retail ? 8 : 9)},
            {"weight_irec", iv(retail ? 1 : 2)},
            {"weight_ssim", iv(retail ? 1 : 3)}};
  }
  if (name == "vsknn_r" && d == 1) {
    return {{"k", iv(100)},           {"sample_size", iv(500)},
            {"weighting", sv("log")}, {"weighting_score", sv("quadratic")},
            {"idf_weighting", iv(10)}, {"remind_sessions", iv(8)},
            {"weight_rel", iv(2)},    {"weight_irec", iv(1)},
            {"weight_ssim", iv(0)}};
  }
  if (name == "vsknn_eb" && d == 3) {
    return {{"k", iv(50)},
            {"sample_size", iv(500)},
            {"weighting", sv("quadratic")},
            {"weighting_score", sv("quadratic")},
            {"idf_weighting", iv(1)},
            {"extend", iv(3)},
            {"boost", rv(2.5)}};
  }

  if (name == "stan") {
    static const std::int64_t k[] = {1500, 100, 500, 100};
    static const std::int64_t sample[] = {2500, 10000, 2500, 10000};
    static const double spw[] = {0.905, 0.4525, 0.905, 0.00001};
    static const double snh[] = {100, 80, 40, 80};
    static const double inh[] = {0.4525, 0.4525, 0.4525, 3.62};
    return {{"k", iv(k[d])},
            {"sample_size", iv(sample[d])},
            {"lambda_spw", rv(spw[d])},
            {"lambda_snh", rv(snh[d])},
            {"lambda_inh", rv(inh[d])}};
  }
  if (name == "stan_er" && d == 0) {
    return {{"k", iv(200)},          {"sample_size", iv(1000)}, {"lambda_spw", rv(0.905)},
            {"lambda_snh", rv(100)}, {"lambda_inh", rv(0.905)}, {"extend", iv(2)},
            {"remind_sessions", iv(9)}, {"weight_rel", iv(10)}, {"weight_irec", iv(3)},
            {"weight_ssim", iv(2)}};
  }
  if (name == "stan_r" && d == 1) {
    return {{"k", iv(100)},         {"sample_size", iv(10000)}, {"lambda_spw", rv(0.4525)},
            {"lambda_snh", rv(80)}, {"lambda_inh", rv(0.4525)}, {"remind_sessions", iv(3)},
            {"weight_rel", iv(10)}, {"weight_irec", iv(2)},     {"weight_ssim", iv(1)}};
  }
  if (name == "stan_ebr" && (d == 2 || d == 3)) {
    const bool cosmetics = d == 2;
    return {{"k", iv(cosmetics ? 1500 : 100)},
            {"sample_size", iv(cosmetics ? 5000 : 2500)},
            {"lambda_spw", rv(cosmetics ? 0.905 : 0.00001)},
            {"lambda_snh", rv(100)},
            {"lambda_inh", rv(7.24)},
            {"extend", iv(cosmetics ? 2 : 17)},
            {"boost", rv(cosmetics ? 1.9 : 2.7)},
            {"remind_sessions", iv(cosmetics ? 4 : 3)},
            {"weight_rel", iv(cosmetics ? 10 : 5)},
            {"weight_irec", iv(cosmetics ? 1 : 0)},
            {"weight_ssim", iv(cosmetics ? 1 : 6)}};
  }

  if (name == "vstan") {
    static const std::int64_t k[] = {200, 1500, 500, 1000};
    static const std::int64_t sample[] = {5000, 10000, 1000, 5000};
    static const char* similarity[] = {"vec", "cosine", "cosine", "cosine"};
    static const double spw[] = {1.81, 3.62, 3.62, 1.81};
    static const double snh[] = {40, 20, 80, 100};
    static const double inh[] = {0.905, 0.4525, 0.4525, 1.81};
    static const double ipw[] = {0.905, 0.4525, 0.905, 0.0001};
    static const std::int64_t idf[] = {0, 10, 0, 0};
    return {{"k", iv(k[d])},
            {"sample_size", iv(sample[d])},
            {"similarity", sv(similarity[d])},
            {"lambda_spw", rv(spw[d])},
            {"lambda_snh", rv(snh[d])},
            {"lambda_inh", rv(inh[d])},
            {"lambda_ipw", rv(ipw[d])},
            {"lambda_idf", iv(idf[d])}};
  }
  if (name == "vstan_ebr" && (d == 0 || d == 2)) {
    const bool retail = d == 0;
    return {{"k", iv(retail ? 2000 : 500)},
            {"sample_size", iv(retail ? 10000 : 1000)},
            {"similarity", sv("cosine")},
            {"lambda_spw", rv(0.905)},
            {"lambda_snh", rv(80)},
            {"lambda_inh", rv(retail ? 1.81 : 0.4525)},
            {"lambda_ipw", rv(3.62)},
            {"lambda_idf", iv(retail ? 5 : 1)},
            {"extend", iv(retail ? 5 : 1)},
            {"boost", rv(retail ? 0.1 : 3.1)},
            {"remind_sessions", iv(retail ? 2 : 5)},
            {"weight_rel", iv(retail ? 6 : 7)},
            {"weight_irec", iv(retail ? 2 : 1)},
            {"weight_ssim", iv(0)}};
  }
  if (name == "vstan_r" && d == 1) {
    return {{"k", iv(1500)},           {"sample_size", iv(10000)},
            {"similarity", sv("cosine")}, {"lambda_spw", rv(3.62)},
            {"lambda_snh", rv(20)},    {"lambda_inh", rv(0.4525)},
            {"lambda_ipw", rv(0.4525)}, {"lambda_idf", iv(10)},
            {"remind_sessions", iv(3)}, {"weight_rel", iv(9)},
            {"weight_irec", iv(1)},    {"weight_ssim", iv(5)}};
  }
  if (name == "vstan_eb" && d == 3) {
    return {{"k", iv(1000)},          {"sample_size", iv(10000)},
            {"similarity", sv("cosine")}, {"lambda_spw", rv(0.4525)},
            {"lambda_snh", rv(100)},  {"lambda_inh", rv(3.62)},
            {"lambda_ipw", rv(0.4525)}, {"lambda_idf", iv(5)},
            {"extend", iv(7)},        {"boost", rv(3.7)}};
  }

  throw ConfigError("no tuned starting point for '" + name + "' on dataset family '" + dataset +
                    "'");
}

}  // namespace sessrec
