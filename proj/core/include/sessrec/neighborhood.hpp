#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sessrec/model.hpp"
#include "sessrec/weighting.hpp"

namespace sessrec {

// Session-neighborhood scorer with position-decayed cosine similarity, an
// in-neighbor item decay and an optional idf emphasis.
struct VsknnConfig {
  int k = 100;                             // neighbors kept
  int sample_size = 1000;                  // recency-sampled candidate pool cap
  Weighting weighting = Weighting::linear;       // context position decay
  Weighting weighting_score = Weighting::div;    // in-neighbor item decay
  int idf_weighting = 0;                   // 0 = off, else idf strength s: 1 + s*idf

  friend bool operator==(const VsknnConfig&, const VsknnConfig&) = default;
};

// Neighborhood scorer with three exponential decays: context position
// (lambda_spw), neighbor session age in days (lambda_snh) and in-neighbor
// distance to the latest shared item (lambda_inh).
struct StanConfig {
  int k = 100;
  int sample_size = 1000;
  double lambda_spw = 0.905;
  double lambda_snh = 40.0;  // days
  double lambda_inh = 0.905;

  friend bool operator==(const StanConfig&, const StanConfig&) = default;
};

enum class Similarity { cosine, vec };  // vec = decayed dot product, unnormalized

// StanConfig's decays plus a selectable similarity, an in-neighbor position
// decay (lambda_ipw) and an optional min-max-scaled idf bonus (lambda_idf).
struct VstanConfig {
  int k = 100;
  int sample_size = 1000;
  Similarity similarity = Similarity::cosine;
  double lambda_spw = 0.905;
  double lambda_snh = 40.0;  // days
  double lambda_inh = 0.905;
  double lambda_ipw = 0.905;
  int lambda_idf = 0;  // 0 = off, else bonus strength

  friend bool operator==(const VstanConfig&, const VstanConfig&) = default;
};

// The shared machinery behind the three neighborhood methods: a session store
// ordered oldest to newest, an inverted item index over it, and idf
// statistics. Scoring walks the candidate pool, ranks the top-k most similar
// sessions and accumulates their items with method-specific factors.
class NeighborhoodModel final : public Model {
 public:
  using AnyConfig = std::variant<VsknnConfig, StanConfig, VstanConfig>;

  NeighborhoodModel(const SessionLog& train, AnyConfig config);

  std::string_view method() const override;
  ScoredList predict(const PredictionContext& ctx) const override;
  std::optional<double> session_weight(const PredictionContext& ctx,
                                       const Session& past) const override;
  std::string save_payload() const override;

  // Sessions sharing at least one item with the context session; when more
  // than `sample_size` qualify, the most recently started are kept. Pointers
  // are into the model's own store, oldest first.
  std::vector<const Session*> neighbor_pool(const PredictionContext& ctx,
                                            int sample_size) const;

  // Natural-log inverse document frequency over stored sessions; 0 if unseen.
  double idf(ItemId item) const;

  std::size_t stored_sessions() const { return store_.size(); }
  const AnyConfig& config() const { return config_; }

 private:
  struct Stored {
    Session session;
    // Distinct items in first-occurrence order with their last 1-based
    // position; `distinct` is the distinct item count.
    std::vector<std::pair<ItemId, int>> last_position;
    int distinct = 0;
  };

  // How the current session weighs its positions and how neighbor items are
  // scored; filled once from the config.
  struct Scoring {
    int k = 0;
    int sample_size = 0;
    bool exp_positions = false;          // exp((pos-len)/lambda_spw) vs `weighting`
    double lambda_spw = 0.0;
    Weighting weighting = Weighting::same;
    bool normalize = true;               // cosine denominator on/off
    std::optional<double> lambda_snh;    // neighbor age decay, days
    std::optional<Weighting> weighting_score;
    int idf_strength = 0;                // multiply by 1 + s*idf(c)
    std::optional<double> lambda_inh;    // exp(-|pos(c)-pos(anchor)|/lambda)
    std::optional<double> lambda_ipw;    // exp((pos(c)-len)/lambda)
    int idf_bonus = 0;                   // multiply by 1 + s*minmax(idf(c))
  };

  struct ContextView;  // per-call digest of the current session

  void build(const SessionLog& train);
  ContextView view_of(const Session& current) const;
  double similarity_to(const ContextView& view, const Session& past,
                       Timestamp now) const;

  AnyConfig config_;
  Scoring scoring_;
  std::vector<Stored> store_;  // (start time, id) ascending
  std::unordered_map<ItemId, std::vector<std::uint32_t>> postings_;  // store_ rows, ascending
  std::unordered_map<ItemId, double> idf_;
  double idf_min_ = 0.0;
  double idf_max_ = 0.0;
};

// All three throw DataError on an empty training log and ConfigError on bad
// settings (k < 1, sample_size < 1, non-positive decays).
std::unique_ptr<NeighborhoodModel> fit_vsknn(const SessionLog& train, const VsknnConfig&);
std::unique_ptr<NeighborhoodModel> fit_stan(const SessionLog& train, const StanConfig&);
std::unique_ptr<NeighborhoodModel> fit_vstan(const SessionLog& train, const VstanConfig&);

// Rebuilds a model from its save_payload() string.
std::unique_ptr<NeighborhoodModel> neighborhood_from_payload(const std::string& payload);

Similarity parse_similarity(const std::string& name);  // throws ConfigError
std::string similarity_name(Similarity s);

}  // namespace sessrec
