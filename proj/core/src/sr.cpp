#include "sessrec/sr.hpp"

#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sessrec {

namespace {

using nlohmann::json;

class SrModel final : public Model {
 public:
  SrModel(const SessionLog& train, const SrConfig& config) : config_(config) {
    if (config.steps < 1) throw ConfigError("sr steps must be >= 1");
    if (config.weighting == Weighting::same) {
      throw ConfigError("weighting 'same' is not a valid pair scheme for sr");
    }
    if (train.sessions.empty()) throw DataError("cannot fit sr on an empty session log");

    // Ordered pairs at most `steps` apart; the weight depends only on the
    // distance between the two positions.
    std::unordered_map<ItemId, std::unordered_map<ItemId, double>> rules;
    for (const Session& s : train.sessions) {
      const std::size_t n = s.items.size();
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t stop = std::min(n, i + 1 + static_cast<std::size_t>(config.steps));
        for (std::size_t j = i + 1; j < stop; ++j) {
          rules[s.items[i]][s.items[j]] +=
              step_weight(config.weighting, static_cast<int>(j - i));
        }
      }
    }
    for (auto& [antecedent, consequents] : rules) {
      std::vector<ScoredEntry> entries;
      entries.reserve(consequents.size());
      for (const auto& [item, weight] : consequents) {
        // Pairs seen only at a distance the scheme weighs as zero carry no
        // evidence and stay out of the ranking.
        if (weight > 0.0) entries.push_back({item, weight});
      }
      rules_[antecedent] = make_scored(std::move(entries)).entries;
    }
  }

  SrModel(const SrConfig& config,
          std::unordered_map<ItemId, std::vector<ScoredEntry>> rules)
      : config_(config), rules_(std::move(rules)) {}

  std::string_view method() const override { return "sr"; }

  ScoredList predict(const PredictionContext& ctx) const override {
    if (ctx.current.items.empty()) return {};
    const auto it = rules_.find(ctx.current.items.back());
    if (it == rules_.end()) return {};
    return ScoredList{it->second};
  }

  std::string save_payload() const override {
    // Antecedents sorted for a stable byte form.
    std::map<ItemId, const std::vector<ScoredEntry>*> ordered;
    for (const auto& [antecedent, entries] : rules_) ordered[antecedent] = &entries;
    json rules = json::array();
    for (const auto& [antecedent, entries] : ordered) {
      json consequents = json::array();
      for (const ScoredEntry& e : *entries) consequents.push_back({e.item, e.score});
      rules.push_back({antecedent, std::move(consequents)});
    }
    const json payload{{"steps", config_.steps},
                       {"weighting", weighting_name(config_.weighting)},
                       {"rules", std::move(rules)}};
    return payload.dump();
  }

 private:
  SrConfig config_;
  std::unordered_map<ItemId, std::vector<ScoredEntry>> rules_;
};

}  // namespace

std::unique_ptr<Model> fit_sr(const SessionLog& train, const SrConfig& config) {
  return std::make_unique<SrModel>(train, config);
}

std::unique_ptr<Model> sr_from_payload(const std::string& payload) {
  try {
    const json doc = json::parse(payload);
    SrConfig config;
    config.steps = doc.at("steps").get<int>();
    config.weighting = parse_weighting(doc.at("weighting").get<std::string>());
    std::unordered_map<ItemId, std::vector<ScoredEntry>> rules;
    for (const json& rule : doc.at("rules")) {
      std::vector<ScoredEntry> entries;
      for (const json& consequent : rule.at(1)) {
        entries.push_back({consequent.at(0).get<ItemId>(), consequent.at(1).get<double>()});
      }
      rules[rule.at(0).get<ItemId>()] = std::move(entries);
    }
    return std::make_unique<SrModel>(config, std::move(rules));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed sr payload: ") + e.what());
  }
}

}  // namespace sessrec
