#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "revguard/corpus.hpp"
#include "revguard/detection.hpp"
#include "revguard/mlp.hpp"
#include "revguard/prob_table.hpp"
#include "revguard/tagger.hpp"

namespace revguard {

struct TfFeatureOptions {
    /// Count every occurrence instead of each distinct token once.
    bool multiplicity = false;
    /// Divide both sums by token_count.
    bool normalized = false;
};

struct TFFeatures {
    double p_ai_sum = 0.0;
    double p_human_sum = 0.0;
    std::size_t token_count = 0;
};

TFFeatures featurize_tf(std::string_view text, const TokenProbTable& table, const Tagger& tagger,
                        const TfFeatureOptions& options = {});
inline TFFeatures featurize_tf(const ReviewRecord& review, const TokenProbTable& table, const Tagger& tagger,
                               const TfFeatureOptions& options = {}) {
    return featurize_tf(review.text, table, tagger, options);
}

struct TokenContribution {
    std::string token;
    std::size_t count = 0;
    double p_ai = 0.0;
    double p_human = 0.0;
};

/// Per-token terms of the feature sums, in token order.
std::vector<TokenContribution> tf_contributions(std::string_view text, const TokenProbTable& table,
                                                const Tagger& tagger);

struct LabeledTF {
    TFFeatures features;
    bool ai = false;
};

TrainHyperparams default_tf_hyperparams(std::uint64_t seed = 0);

struct TFModel {
    Mlp network;
    TrainHyperparams hyperparams;
    std::string table_hash;
    PosClass pos_class = PosClass::ADJECTIVE;
    TfFeatureOptions feature_options;
    double decision_threshold = 0.5;
    std::size_t best_epoch = 0;
    double best_val_f1 = 0.0;
};

TFModel train_tf(const std::vector<LabeledTF>& train, const std::vector<LabeledTF>& validation,
                 const TrainHyperparams& hp, const TokenProbTable& table, const TfFeatureOptions& options = {});

double tf_probability(const TFModel& model, const TFFeatures& features);

/// Throws ConfigError when `table` is not the table the model was trained with.
DetectionVerdict predict_tf(const TFModel& model, const ReviewRecord& review, const TokenProbTable& table,
                            const Tagger& tagger);

nlohmann::json to_json(const TFModel& model);
TFModel tf_model_from_json(const nlohmann::json& j);
void save_tf_model(const TFModel& model, const std::filesystem::path& path);
TFModel load_tf_model(const std::filesystem::path& path);

}  // namespace revguard
