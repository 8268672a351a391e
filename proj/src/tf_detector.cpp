#include "revguard/tf_detector.hpp"

#include <set>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

constexpr int kModelVersion = 1;

std::vector<double> as_input(const TFFeatures& f) { return {f.p_ai_sum, f.p_human_sum}; }

}  // namespace

TFFeatures featurize_tf(std::string_view text, const TokenProbTable& table, const Tagger& tagger,
                        const TfFeatureOptions& options) {
    TFFeatures f;
    for (const auto& [tok, count] : extract_tokens(tagger, text, table.pos_class)) {
        const double weight = options.multiplicity ? static_cast<double>(count) : 1.0;
        f.p_ai_sum += weight * table.ai(tok);
        f.p_human_sum += weight * table.human(tok);
        f.token_count += options.multiplicity ? count : 1;
    }
    if (options.normalized && f.token_count > 0) {
        f.p_ai_sum /= static_cast<double>(f.token_count);
        f.p_human_sum /= static_cast<double>(f.token_count);
    }
    return f;
}

std::vector<TokenContribution> tf_contributions(std::string_view text, const TokenProbTable& table,
                                                const Tagger& tagger) {
    std::vector<TokenContribution> out;
    std::map<std::string, std::size_t> index;
    for (const auto& t : tagger.tag(text)) {
        if (pos_class_of(t.tag) != table.pos_class) continue;
        const auto lower = text::to_lower(t.text);
        auto [it, inserted] = index.try_emplace(lower, out.size());
        if (inserted) out.push_back({lower, 0, table.ai(lower), table.human(lower)});
        ++out[it->second].count;
    }
    return out;
}

TrainHyperparams default_tf_hyperparams(std::uint64_t seed) {
    TrainHyperparams hp;
    hp.hidden = {16, 8};
    hp.learning_rate = 1e-3;
    hp.seed = seed;
    return hp;
}

TFModel train_tf(const std::vector<LabeledTF>& train, const std::vector<LabeledTF>& validation,
                 const TrainHyperparams& hp, const TokenProbTable& table, const TfFeatureOptions& options) {
    auto to_samples = [](const std::vector<LabeledTF>& v) {
        std::vector<Sample> out;
        out.reserve(v.size());
        for (const auto& s : v) out.push_back({as_input(s.features), s.ai});
        return out;
    };
    TFModel model;
    model.hyperparams = hp;
    model.table_hash = table.hash();
    model.pos_class = table.pos_class;
    model.feature_options = options;
    auto result = train_mlp(to_samples(train), to_samples(validation), hp, model.decision_threshold);
    model.network = std::move(result.model);
    model.best_epoch = result.best_epoch;
    model.best_val_f1 = result.best_val_f1;
    return model;
}

double tf_probability(const TFModel& model, const TFFeatures& features) {
    return model.network.predict(as_input(features));
}

DetectionVerdict predict_tf(const TFModel& model, const ReviewRecord& review, const TokenProbTable& table,
                            const Tagger& tagger) {
    if (table.hash() != model.table_hash) {
        throw ConfigError("probability table does not match the one the TF model was trained with");
    }
    const auto features = featurize_tf(review.text, table, tagger, model.feature_options);
    return make_verdict(review.review_id, DetectorKind::TF, tf_probability(model, features), model.decision_threshold);
}

nlohmann::json to_json(const TFModel& model) {
    return {
        {"format", "revguard-detector"},
        {"version", kModelVersion},
        {"detector", "TF"},
        {"table_hash", model.table_hash},
        {"pos_class", std::string(to_string(model.pos_class))},
        {"features", {{"multiplicity", model.feature_options.multiplicity},
                      {"normalized", model.feature_options.normalized}}},
        {"decision_threshold", model.decision_threshold},
        {"hyperparams", to_json(model.hyperparams)},
        {"training", {{"best_epoch", model.best_epoch}, {"best_val_f1", model.best_val_f1}}},
        {"network", model.network.to_json()},
    };
}

TFModel tf_model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "revguard-detector" || j.value("detector", "") != "TF") {
        throw ParseError("not a TF detector model");
    }
    if (j.value("version", 0) != kModelVersion) throw ParseError("unsupported TF model version");
    TFModel m;
    try {
        m.table_hash = j.at("table_hash").get<std::string>();
        m.pos_class = parse_pos_class(j.at("pos_class").get<std::string>());
        m.feature_options.multiplicity = j.at("features").value("multiplicity", false);
        m.feature_options.normalized = j.at("features").value("normalized", false);
        m.decision_threshold = j.at("decision_threshold").get<double>();
        m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        m.best_epoch = j.at("training").value("best_epoch", std::size_t{0});
        m.best_val_f1 = j.at("training").value("best_val_f1", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed TF model: ") + e.what());
    }
    m.network = Mlp::from_json(j.at("network"));
    if (m.network.input_dim() != 2) throw ParseError("TF model network must take 2 inputs");
    return m;
}

void save_tf_model(const TFModel& model, const std::filesystem::path& path) {
    io::write_file_atomic(path, to_json(model).dump(2) + "\n");
}

TFModel load_tf_model(const std::filesystem::path& path) {
    try {
        return tf_model_from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace revguard
