#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "revguard/corpus.hpp"
#include "revguard/detection.hpp"
#include "revguard/gateway.hpp"
#include "revguard/mlp.hpp"

namespace revguard {

struct RRFeatures {
    double similarity = 0.0;
    std::string review_id;
    std::string regen_id;
};

/// Throws ArgumentError on a dimension mismatch, a zero vector or a
/// non-finite component.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    return cosine_similarity(a.values, b.values);
}

/// Regenerates a review for `paper_text` (venue template of `review`) and
/// compares its embedding with the embedding of the review text.
RRFeatures featurize_rr(const ReviewRecord& review, std::string_view paper_text, Gateway& gateway);

struct LabeledRR {
    RRFeatures features;
    bool ai = false;
};

TrainHyperparams default_rr_hyperparams(std::uint64_t seed = 0);

struct RRModel {
    Mlp network;
    TrainHyperparams hyperparams;
    std::string embedding_model_id;
    std::string generation_model_id;
    double decision_threshold = 0.5;
    std::size_t best_epoch = 0;
    double best_val_f1 = 0.0;
};

RRModel train_rr(const std::vector<LabeledRR>& train, const std::vector<LabeledRR>& validation,
                 const TrainHyperparams& hp, const Gateway* gateway = nullptr);

double rr_probability(const RRModel& model, double similarity);
DetectionVerdict predict_rr(const RRModel& model, const RRFeatures& features);

nlohmann::json to_json(const RRModel& model);
RRModel rr_model_from_json(const nlohmann::json& j);
void save_rr_model(const RRModel& model, const std::filesystem::path& path);
RRModel load_rr_model(const std::filesystem::path& path);

}  // namespace revguard
