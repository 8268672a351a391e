#include "revguard/rr_detector.hpp"

#include <cmath>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"

namespace revguard {

namespace {

constexpr int kModelVersion = 1;

}  // namespace

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ArgumentError("cosine similarity of vectors with dimensions " + std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
    }
    long double dot = 0.0L;
    long double na = 0.0L;
    long double nb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw ArgumentError("non-finite vector component");
        dot += static_cast<long double>(a[i]) * b[i];
        na += static_cast<long double>(a[i]) * a[i];
        nb += static_cast<long double>(b[i]) * b[i];
    }
    if (na == 0.0L || nb == 0.0L) throw ArgumentError("cosine similarity of a zero vector");
    return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

RRFeatures featurize_rr(const ReviewRecord& review, std::string_view paper_text, Gateway& gateway) {
    RRFeatures f;
    f.review_id = review.review_id;
    const std::string regenerated = gateway.regenerate_review(paper_text, review.venue);
    f.regen_id = gateway.regeneration_key(paper_text, review.venue);
    f.similarity = cosine_similarity(gateway.embed_text(regenerated), gateway.embed_text(review.text));
    return f;
}

TrainHyperparams default_rr_hyperparams(std::uint64_t seed) {
    TrainHyperparams hp;
    hp.hidden = {8};
    hp.learning_rate = 0.01;
    hp.seed = seed;
    return hp;
}

RRModel train_rr(const std::vector<LabeledRR>& train, const std::vector<LabeledRR>& validation,
                 const TrainHyperparams& hp, const Gateway* gateway) {
    auto to_samples = [](const std::vector<LabeledRR>& v) {
        std::vector<Sample> out;
        out.reserve(v.size());
        for (const auto& s : v) out.push_back({{s.features.similarity}, s.ai});
        return out;
    };
    RRModel model;
    model.hyperparams = hp;
    if (gateway != nullptr) {
        model.embedding_model_id = gateway->embedding_model_id();
        model.generation_model_id = gateway->generation_model_id();
    }
    auto result = train_mlp(to_samples(train), to_samples(validation), hp, model.decision_threshold);
    model.network = std::move(result.model);
    model.best_epoch = result.best_epoch;
    model.best_val_f1 = result.best_val_f1;
    return model;
}

double rr_probability(const RRModel& model, double similarity) { return model.network.predict({similarity}); }

DetectionVerdict predict_rr(const RRModel& model, const RRFeatures& features) {
    if (!std::isfinite(features.similarity)) throw ArgumentError("similarity is not finite");
    return make_verdict(features.review_id, DetectorKind::RR, rr_probability(model, features.similarity),
                        model.decision_threshold);
}

nlohmann::json to_json(const RRModel& model) {
    return {
        {"format", "revguard-detector"},
        {"version", kModelVersion},
        {"detector", "RR"},
        {"embedding_model", model.embedding_model_id},
        {"generation_model", model.generation_model_id},
        {"decision_threshold", model.decision_threshold},
        {"hyperparams", to_json(model.hyperparams)},
        {"training", {{"best_epoch", model.best_epoch}, {"best_val_f1", model.best_val_f1}}},
        {"network", model.network.to_json()},
    };
}

RRModel rr_model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "revguard-detector" || j.value("detector", "") != "RR") {
        throw ParseError("not an RR detector model");
    }
    if (j.value("version", 0) != kModelVersion) throw ParseError("unsupported RR model version");
    RRModel m;
    try {
        m.embedding_model_id = j.value("embedding_model", "");
        m.generation_model_id = j.value("generation_model", "");
        m.decision_threshold = j.at("decision_threshold").get<double>();
        m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        m.best_epoch = j.at("training").value("best_epoch", std::size_t{0});
        m.best_val_f1 = j.at("training").value("best_val_f1", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed RR model: ") + e.what());
    }
    m.network = Mlp::from_json(j.at("network"));
    if (m.network.input_dim() != 1) throw ParseError("RR model network must take 1 input");
    return m;
}

void save_rr_model(const RRModel& model, const std::filesystem::path& path) {
    io::write_file_atomic(path, to_json(model).dump(2) + "\n");
}

RRModel load_rr_model(const std::filesystem::path& path) {
    try {
        return rr_model_from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace revguard
