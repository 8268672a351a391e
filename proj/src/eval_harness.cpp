#include "revguard/eval_harness.hpp"

#include <algorithm>
#include <cstdio>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/parallel.hpp"
#include "revguard/prob_table.hpp"
#include "revguard/rr_detector.hpp"
#include "revguard/tf_detector.hpp"

namespace revguard {

namespace {

constexpr int kReportVersion = 1;

struct ConditionName {
    Condition condition;
    std::string_view name;
};

constexpr ConditionName kConditionNames[] = {
    {Condition::CLEAN, "CLEAN"},
    {Condition::ADJ_ATTACK, "ADJ_ATTACK"},
    {Condition::PARAPHRASE, "PARAPHRASE"},
    {Condition::PARAPHRASE_DEFENDED, "PARAPHRASE_DEFENDED"},
};

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

void require_known(const nlohmann::json& j, const std::set<std::string>& known, const std::string& section) {
    if (!j.is_object()) throw ConfigError(section + " must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError("unknown " + section + " key: " + k);
    }
}

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::string percent(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *v * 100.0);
    return buf;
}

template <typename F>
auto run_stage(const std::string& name, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ExperimentError&) {
        throw;
    } catch (const std::exception& e) {
        throw ExperimentError("stage '" + name + "' failed: " + e.what());
    }
}

/// A labelled evaluation or training set.
struct LabeledSet {
    std::vector<ReviewRecord> records;
    std::vector<bool> ai;

    void add(ReviewRecord r, bool label) {
        records.push_back(std::move(r));
        ai.push_back(label);
    }
    std::set<std::string> ids() const {
        std::set<std::string> out;
        for (const auto& r : records) out.insert(r.review_id);
        return out;
    }
};

using Detectors = TrainedDetectors;

struct Context {
    const ExperimentConfig& config;
    const PaperTexts& papers;
    Gateway& gateway;
    const Resources& resources;
};

std::vector<TFFeatures> tf_features(const LabeledSet& set, const TokenProbTable& table, const Context& ctx) {
    std::vector<TFFeatures> out(set.records.size());
    parallel_for(out.size(), ctx.config.threads, [&](std::size_t i) {
        out[i] = featurize_tf(set.records[i], table, *ctx.resources.tagger);
    });
    return out;
}

std::vector<RRFeatures> rr_features(const LabeledSet& set, const Context& ctx) {
    require_paper_texts(set.records, ctx.papers);
    std::vector<RRFeatures> out(set.records.size());
    parallel_for(out.size(), ctx.config.threads, [&](std::size_t i) {
        const auto& r = set.records[i];
        out[i] = featurize_rr(r, ctx.papers.at(r.paper_id), ctx.gateway);
    });
    return out;
}

TokenProbTable table_from(const LabeledSet& set, PosClass pos, const Tagger& tagger) {
    std::vector<ReviewRecord> ai;
    std::vector<ReviewRecord> human;
    for (std::size_t i = 0; i < set.records.size(); ++i) (set.ai[i] ? ai : human).push_back(set.records[i]);
    return build_prob_table(ai, human, pos, tagger);
}

Detectors train_detectors(const LabeledSet& train, const LabeledSet& validation, const Context& ctx,
                          const std::string& label) {
    Detectors d;
    d.training_ids = train.ids();
    d.table = run_stage(label + "/build_table",
                        [&] { return table_from(train, ctx.config.table_pos, *ctx.resources.tagger); });
    d.tf = run_stage(label + "/train_tf", [&] {
        auto labeled = [&](const LabeledSet& set) {
            const auto features = tf_features(set, d.table, ctx);
            std::vector<LabeledTF> out;
            for (std::size_t i = 0; i < features.size(); ++i) out.push_back({features[i], set.ai[i]});
            return out;
        };
        return train_tf(labeled(train), labeled(validation), ctx.config.tf_hyperparams, d.table);
    });
    d.rr = run_stage(label + "/train_rr", [&] {
        auto labeled = [&](const LabeledSet& set) {
            const auto features = rr_features(set, ctx);
            std::vector<LabeledRR> out;
            for (std::size_t i = 0; i < features.size(); ++i) out.push_back({features[i], set.ai[i]});
            return out;
        };
        return train_rr(labeled(train), labeled(validation), ctx.config.rr_hyperparams, &ctx.gateway);
    });
    return d;
}

std::vector<MetricsReport> evaluate(const Detectors& d, const LabeledSet& test, Condition condition,
                                    const Context& ctx) {
    const std::string stage = "evaluate/" + std::string(to_string(condition));
    std::vector<DetectionVerdict> tf;
    std::vector<DetectionVerdict> rr;
    run_stage(stage, [&] {
        for (const auto& f : tf_features(test, d.table, ctx)) {
            tf.push_back(make_verdict("", DetectorKind::TF, tf_probability(d.tf, f), d.tf.decision_threshold));
        }
        for (std::size_t i = 0; i < test.records.size(); ++i) tf[i].review_id = test.records[i].review_id;
        for (const auto& f : rr_features(test, ctx)) rr.push_back(predict_rr(d.rr, f));
        return 0;
    });

    std::vector<std::optional<Venue>> venues{std::nullopt};
    if (ctx.config.stratify_by_venue) {
        for (Venue v : {Venue::ICLR2022, Venue::NEURIPS2022, Venue::OTHER}) {
            if (std::any_of(test.records.begin(), test.records.end(), [&](const auto& r) { return r.venue == v; })) {
                venues.emplace_back(v);
            }
        }
    }
    std::vector<MetricsReport> out;
    for (const auto& [kind, verdicts] : {std::pair{DetectorKind::TF, &tf}, std::pair{DetectorKind::RR, &rr}}) {
        for (const auto& venue : venues) {
            std::vector<DetectionVerdict> v;
            std::vector<bool> labels;
            for (std::size_t i = 0; i < test.records.size(); ++i) {
                if (venue && test.records[i].venue != *venue) continue;
                v.push_back((*verdicts)[i]);
                labels.push_back(test.ai[i]);
            }
            auto report = compute_metrics(v, labels);
            report.condition = condition;
            report.detector = kind;
            report.venue = venue;
            out.push_back(report);
        }
    }
    return out;
}

LeakageAudit audit(const Detectors& d, const LabeledSet& test, const std::set<std::string>& base_test_ids) {
    LeakageAudit a;
    a.table_sources = d.table.source_review_ids.size();
    a.training_reviews = d.training_ids.size();
    std::set<std::string> test_ids = base_test_ids;
    for (const auto& id : test.ids()) test_ids.insert(id);
    a.test_reviews = test_ids.size();
    for (const auto& id : test_ids) {
        if (d.table.source_review_ids.count(id) || d.training_ids.count(id)) a.overlap.push_back(id);
    }
    return a;
}

nlohmann::ordered_json to_json(const LeakageAudit& a, const std::string& models) {
    nlohmann::ordered_json j;
    j["models"] = models;
    j["table_sources"] = a.table_sources;
    j["training_reviews"] = a.training_reviews;
    j["test_reviews"] = a.test_reviews;
    j["overlap"] = a.overlap;
    j["passed"] = a.passed();
    return j;
}

nlohmann::ordered_json training_json(const Detectors& d) {
    nlohmann::ordered_json j;
    j["table_hash"] = d.table.hash();
    j["training_reviews"] = d.training_ids.size();
    j["TF"] = {{"best_epoch", d.tf.best_epoch}, {"best_val_f1", d.tf.best_val_f1}};
    j["RR"] = {{"best_epoch", d.rr.best_epoch}, {"best_val_f1", d.rr.best_val_f1}};
    return j;
}

LabeledSet label_records(const std::vector<ReviewRecord>& records, const Corpus& corpus) {
    LabeledSet set;
    for (const auto& r : records) set.add(r, corpus.is_ai(r));
    return set;
}

/// Human reviews as they are, AI reviews through `transform`.
template <typename F>
LabeledSet transform_ai(const LabeledSet& base, std::size_t threads, F&& transform) {
    std::vector<ReviewRecord> out(base.records.size());
    parallel_for(out.size(), threads, [&](std::size_t i) {
        out[i] = base.ai[i] ? transform(base.records[i]) : base.records[i];
    });
    LabeledSet set;
    for (std::size_t i = 0; i < out.size(); ++i) set.add(std::move(out[i]), base.ai[i]);
    return set;
}

LabeledSet defend_set(const LabeledSet& base, const Context& ctx, const DefenseContext& dctx) {
    LabeledSet set;
    set.ai = base.ai;
    set.records = defend_records(base.records, ctx.papers, dctx);
    return set;
}

}  // namespace

std::string_view to_string(Condition c) {
    for (const auto& n : kConditionNames) {
        if (n.condition == c) return n.name;
    }
    return "?";
}

Condition parse_condition(std::string_view s) {
    for (const auto& n : kConditionNames) {
        if (n.name == s) return n.condition;
    }
    throw ArgumentError("unknown condition: " + std::string(s));
}

MetricsReport compute_metrics(const std::vector<DetectionVerdict>& verdicts, const std::vector<bool>& ai_labels) {
    if (verdicts.size() != ai_labels.size()) {
        throw ArgumentError("compute_metrics: " + std::to_string(verdicts.size()) + " verdicts but " +
                            std::to_string(ai_labels.size()) + " labels");
    }
    MetricsReport r;
    r.n_reviews = verdicts.size();
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const bool predicted = verdicts[i].label == Label::AI;
        if (predicted && ai_labels[i]) ++r.tp;
        else if (predicted) ++r.fp;
        else if (ai_labels[i]) ++r.fn;
        else ++r.tn;
    }
    r.precision = ratio(r.tp, r.tp + r.fp);
    r.recall = ratio(r.tp, r.tp + r.fn);
    r.f1 = ratio(2 * r.tp, 2 * r.tp + r.fp + r.fn);
    r.accuracy = ratio(r.tp + r.tn, r.n_reviews);
    return r;
}

MetricsReport compute_metrics(const std::vector<DetectionVerdict>& verdicts, const std::vector<Origin>& labels) {
    std::vector<bool> ai;
    ai.reserve(labels.size());
    for (Origin o : labels) {
        if (o == Origin::DEFENDED_VARIANT) {
            throw ArgumentError("DEFENDED_VARIANT labels must be resolved through their parent first");
        }
        ai.push_back(is_ai_origin(o));
    }
    return compute_metrics(verdicts, ai);
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
    nlohmann::ordered_json j;
    j["detector"] = to_string(r.detector);
    j["condition"] = to_string(r.condition);
    j["venue"] = r.venue ? std::string(to_string(*r.venue)) : "ALL";
    j["n_reviews"] = r.n_reviews;
    j["precision"] = optional_number(r.precision);
    j["recall"] = optional_number(r.recall);
    j["f1"] = optional_number(r.f1);
    j["accuracy"] = optional_number(r.accuracy);
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["tn"] = r.tn;
    j["fn"] = r.fn;
    return j;
}

MetricsReport metrics_report_from_json(const nlohmann::json& j) {
    MetricsReport r;
    try {
        r.detector = parse_detector(j.at("detector").get<std::string>());
        r.condition = parse_condition(j.at("condition").get<std::string>());
        const auto venue = j.at("venue").get<std::string>();
        if (venue != "ALL") r.venue = parse_venue(venue);
        r.n_reviews = j.at("n_reviews").get<std::size_t>();
        r.precision = read_optional(j, "precision");
        r.recall = read_optional(j, "recall");
        r.f1 = read_optional(j, "f1");
        r.accuracy = read_optional(j, "accuracy");
        r.tp = j.at("tp").get<std::size_t>();
        r.fp = j.at("fp").get<std::size_t>();
        r.tn = j.at("tn").get<std::size_t>();
        r.fn = j.at("fn").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed metrics report: ") + e.what());
    }
    return r;
}

std::string render_table(const std::vector<MetricsReport>& reports) {
    std::vector<std::vector<std::string>> rows{
        {"Detector", "Condition", "Venue", "N", "Precision", "Recall", "F1", "Accuracy", "TP", "FP", "TN", "FN"}};
    for (const auto& r : reports) {
        rows.push_back({std::string(to_string(r.detector)), std::string(to_string(r.condition)),
                        r.venue ? std::string(to_string(*r.venue)) : "ALL", std::to_string(r.n_reviews),
                        percent(r.precision), percent(r.recall), percent(r.f1), percent(r.accuracy),
                        std::to_string(r.tp), std::to_string(r.fp), std::to_string(r.tn), std::to_string(r.fn)});
    }
    std::vector<std::size_t> width(rows.front().size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) line += "  ";
            const std::string pad(width[c] - row[c].size(), ' ');
            // Text columns align left, numbers right.
            line += c < 3 ? row[c] + pad : pad + row[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    };
    emit(rows.front());
    std::string rule;
    for (std::size_t c = 0; c < width.size(); ++c) {
        if (c > 0) rule += "  ";
        rule += std::string(width[c], '-');
    }
    out += rule + "\n";
    for (std::size_t i = 1; i < rows.size(); ++i) emit(rows[i]);
    return out;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    static const std::set<std::string> known = {"corpus", "split",   "gateway", "data_dir", "thesaurus_overlay",
                                                "conditions", "table", "attack", "defense", "tf", "rr",
                                                "seed", "stratify_by_venue", "threads"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError("unknown experiment config key: " + k);
    }
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path = p;
        if (!path.empty() && path.is_relative() && !base_dir.empty()) path = base_dir / path;
        return path;
    };
    ExperimentConfig c;
    try {
        const std::uint64_t seed = j.value("seed", std::uint64_t{42});
        c.synthetic_seed = seed;
        c.split_seed = seed;
        if (j.contains("corpus")) {
            const auto& cj = j.at("corpus");
            require_known(cj, {"synthetic", "path", "papers"}, "corpus");
            if (cj.contains("synthetic")) {
                const auto& sj = cj.at("synthetic");
                require_known(sj, {"papers", "seed", "ai_token_bias", "filler_zipf", "alternate_rate", "typo_rate"},
                              "corpus.synthetic");
                c.synthetic_papers = sj.value("papers", std::size_t{200});
                c.synthetic_seed = sj.value("seed", seed);
                c.synthetic.ai_token_bias = sj.value("ai_token_bias", c.synthetic.ai_token_bias);
                c.synthetic.filler_zipf = sj.value("filler_zipf", c.synthetic.filler_zipf);
                c.synthetic.alternate_rate = sj.value("alternate_rate", c.synthetic.alternate_rate);
                c.synthetic.typo_rate = sj.value("typo_rate", c.synthetic.typo_rate);
            } else {
                c.synthetic_papers.reset();
                c.corpus_path = resolve(cj.at("path").get<std::string>());
                c.papers_dir = resolve(cj.at("papers").get<std::string>());
            }
        }
        if (j.contains("split")) {
            const auto& sj = j.at("split");
            require_known(sj, {"train", "validation", "test", "seed"}, "split");
            c.split.train = sj.value("train", c.split.train);
            c.split.validation = sj.value("validation", c.split.validation);
            c.split.test = sj.value("test", c.split.test);
            c.split_seed = sj.value("seed", c.split_seed);
        }
        if (j.contains("gateway")) c.gateway = gateway_config_from_json(j.at("gateway"), base_dir);
        if (j.contains("data_dir")) c.data_dir = resolve(j.at("data_dir").get<std::string>());
        if (j.contains("thesaurus_overlay")) c.thesaurus_overlay = resolve(j.at("thesaurus_overlay").get<std::string>());
        if (j.contains("conditions")) {
            c.conditions.clear();
            for (const auto& name : j.at("conditions")) c.conditions.push_back(parse_condition(name.get<std::string>()));
        }
        if (j.contains("table")) require_known(j.at("table"), {"pos"}, "table");
        if (j.contains("attack")) require_known(j.at("attack"), {"k", "pos"}, "attack");
        if (j.contains("defense")) {
            require_known(j.at("defense"), {"original_raw", "original_defended", "paraphrase_defended"}, "defense");
        }
        if (j.contains("table")) c.table_pos = parse_pos_class(j.at("table").value("pos", "adjective"));
        if (j.contains("attack")) {
            c.attack_k = j.at("attack").value("k", c.attack_k);
            c.attack_pos = parse_pos_class(j.at("attack").value("pos", "adjective"));
        }
        if (j.contains("defense")) {
            const auto& dj = j.at("defense");
            c.defense.original_raw = dj.value("original_raw", c.defense.original_raw);
            c.defense.original_defended = dj.value("original_defended", c.defense.original_defended);
            c.defense.paraphrase_defended = dj.value("paraphrase_defended", c.defense.paraphrase_defended);
        }
        auto hyper = [&](const char* key, TrainHyperparams defaults) {
            nlohmann::json merged = to_json(defaults);
            if (j.contains(key)) {
                require_known(j.at(key), {"hidden", "dropout", "batch_size", "epochs", "learning_rate", "weight_decay",
                                          "beta1", "beta2", "epsilon", "seed", "standardize"},
                              key);
                merged.update(j.at(key));
            }
            return hyperparams_from_json(merged);
        };
        c.tf_hyperparams = hyper("tf", default_tf_hyperparams(seed));
        c.rr_hyperparams = hyper("rr", default_rr_hyperparams(seed));
        c.stratify_by_venue = j.value("stratify_by_venue", c.stratify_by_venue);
        c.threads = j.value("threads", c.threads);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    if (c.attack_k == 0) throw ConfigError("attack.k must be at least 1");
    if (c.conditions.empty()) throw ConfigError("no conditions configured");
    return c;
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    if (c.synthetic_papers) {
        j["corpus"] = {{"synthetic",
                        {{"papers", *c.synthetic_papers},
                         {"seed", c.synthetic_seed},
                         {"ai_token_bias", c.synthetic.ai_token_bias},
                         {"filler_zipf", c.synthetic.filler_zipf},
                         {"alternate_rate", c.synthetic.alternate_rate},
                         {"typo_rate", c.synthetic.typo_rate}}}};
    } else {
        j["corpus"] = {{"path", c.corpus_path.string()}, {"papers", c.papers_dir.string()}};
    }
    j["split"] = {{"train", c.split.train}, {"validation", c.split.validation}, {"test", c.split.test},
                  {"seed", c.split_seed}};
    std::vector<std::string> conditions;
    for (auto cond : c.conditions) conditions.emplace_back(to_string(cond));
    j["conditions"] = conditions;
    j["table"] = {{"pos", to_string(c.table_pos)}};
    j["attack"] = {{"k", c.attack_k}, {"pos", to_string(c.attack_pos)}};
    j["defense"] = {{"original_raw", c.defense.original_raw},
                    {"original_defended", c.defense.original_defended},
                    {"paraphrase_defended", c.defense.paraphrase_defended}};
    j["tf"] = to_json(c.tf_hyperparams);
    j["rr"] = to_json(c.rr_hyperparams);
    auto g = to_json(c.gateway);
    // Where responses are stored does not change them.
    g.erase("cache_dir");
    g.erase("prompts_dir");
    j["gateway"] = g;
    j["stratify_by_venue"] = c.stratify_by_venue;
    return j;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    Corpus corpus;
    PaperTexts papers;
    run_stage("load_corpus", [&] {
        if (config.synthetic_papers) {
            auto ds = make_synthetic_dataset(*config.synthetic_papers, config.synthetic_seed, config.synthetic);
            corpus = std::move(ds.corpus);
            papers = std::move(ds.papers);
        } else {
            corpus = load_corpus(config.corpus_path);
            papers = load_papers(config.papers_dir);
        }
        return 0;
    });
    const std::filesystem::path data_dir = config.data_dir.empty() ? default_data_dir() : config.data_dir;
    const Resources resources =
        run_stage("load_resources", [&] { return load_resources(data_dir, config.thesaurus_overlay); });
    GatewayConfig gateway_config = config.gateway;
    if (gateway_config.prompts_dir.empty()) gateway_config.prompts_dir = data_dir / "prompts";
    auto gateway = run_stage("gateway", [&] {
        return std::make_unique<Gateway>(gateway_config, resources.thesaurus, resources.tagger);
    });
    const Context ctx{config, papers, *gateway, resources};
    const DefenseContext dctx{gateway.get(), resources.thesaurus.get(), resources.tagger.get(), config.threads};

    const CorpusSplit split = run_stage("split", [&] { return split_corpus(corpus, config.split, config.split_seed); });
    auto partition = [&](const std::set<std::string>& ids) {
        std::vector<ReviewRecord> base;
        for (auto& r : corpus.select(ids)) {
            if (r.origin == Origin::HUMAN || r.origin == Origin::AI) base.push_back(std::move(r));
        }
        return label_records(base, corpus);
    };
    const LabeledSet train = partition(split.train);
    const LabeledSet validation = partition(split.validation);
    const LabeledSet test = partition(split.test);
    const auto base_test_ids = test.ids();

    ExperimentResult result;
    nlohmann::ordered_json training = nlohmann::ordered_json::object();
    nlohmann::ordered_json audits = nlohmann::ordered_json::array();
    auto record_audit = [&](const Detectors& d, const LabeledSet& evaluated, const std::string& models) {
        auto a = audit(d, evaluated, base_test_ids);
        if (!a.passed()) {
            throw ExperimentError("leakage audit failed for " + models + ": " + a.overlap.front() +
                                  " is both trained on and tested");
        }
        audits.push_back(to_json(a, models));
        result.audits.push_back(std::move(a));
    };

    const bool needs_clean_models = std::any_of(config.conditions.begin(), config.conditions.end(),
                                                [](Condition c) { return c != Condition::PARAPHRASE_DEFENDED; });
    std::optional<Detectors>& clean = result.clean_models;
    if (needs_clean_models) {
        clean = train_detectors(train, validation, ctx, "clean");
        training["clean"] = training_json(*clean);
    }
    std::optional<LabeledSet> paraphrased;
    auto paraphrased_test = [&]() -> const LabeledSet& {
        if (!paraphrased) {
            paraphrased = run_stage("paraphrase_test", [&] {
                return transform_ai(test, config.threads, [&](const ReviewRecord& r) {
                    return paraphrase_record(r, *gateway);
                });
            });
        }
        return *paraphrased;
    };

    bool clean_audited = false;
    for (Condition condition : config.conditions) {
        switch (condition) {
            case Condition::CLEAN: {
                if (!clean_audited) record_audit(*clean, test, "clean");
                clean_audited = true;
                auto reports = evaluate(*clean, test, condition, ctx);
                result.reports.insert(result.reports.end(), reports.begin(), reports.end());
                break;
            }
            case Condition::ADJ_ATTACK: {
                const LabeledSet attacked = run_stage("attack_test", [&] {
                    AttackConfig acfg;
                    acfg.pos_class = config.attack_pos;
                    acfg.k = config.attack_k;
                    acfg.table = std::make_shared<const TokenProbTable>(
                        config.attack_pos == clean->table.pos_class
                            ? clean->table
                            : table_from(train, config.attack_pos, *resources.tagger));
                    acfg.thesaurus = resources.thesaurus;
                    return transform_ai(test, config.threads, [&](const ReviewRecord& r) {
                        return token_attack(r, acfg, *resources.tagger).attacked;
                    });
                });
                if (!clean_audited) record_audit(*clean, attacked, "clean");
                clean_audited = true;
                auto reports = evaluate(*clean, attacked, condition, ctx);
                result.reports.insert(result.reports.end(), reports.begin(), reports.end());
                break;
            }
            case Condition::PARAPHRASE: {
                const LabeledSet& evaluated = paraphrased_test();
                if (!clean_audited) record_audit(*clean, evaluated, "clean");
                clean_audited = true;
                auto reports = evaluate(*clean, evaluated, condition, ctx);
                result.reports.insert(result.reports.end(), reports.begin(), reports.end());
                break;
            }
            case Condition::PARAPHRASE_DEFENDED: {
                const LabeledSet defended_train = run_stage("defended_train", [&] {
                    Corpus train_corpus = Corpus::from_records(train.records);
                    auto sets = build_defended_sets(train_corpus, papers, dctx, config.defense);
                    return label_records(sets.train.records(), sets.train);
                });
                const LabeledSet defended_validation = run_stage("defended_validation", [&] {
                    LabeledSet both = validation;
                    const auto paraphrases = paraphrase_records(validation.records, dctx);
                    for (std::size_t i = 0; i < paraphrases.size(); ++i) both.add(paraphrases[i], validation.ai[i]);
                    return defend_set(both, ctx, dctx);
                });
                const LabeledSet defended_test =
                    run_stage("defended_test", [&] { return defend_set(paraphrased_test(), ctx, dctx); });
                result.defended_models = train_detectors(defended_train, defended_validation, ctx, "defended");
                const Detectors& defended = *result.defended_models;
                training["defended"] = training_json(defended);
                record_audit(defended, defended_test, "defended");
                auto reports = evaluate(defended, defended_test, condition, ctx);
                result.reports.insert(result.reports.end(), reports.begin(), reports.end());
                break;
            }
        }
    }

    result.table = render_table(result.reports);
    result.gateway_stats = gateway->stats();

    nlohmann::ordered_json report;
    report["format"] = "revguard-report";
    report["version"] = kReportVersion;
    report["config"] = to_json(config);
    report["corpus"] = {{"reviews", corpus.size()},
                        {"papers", corpus.paper_ids().size()},
                        {"sha256", io::sha256_hex(to_jsonl(corpus))}};
    report["split"] = {{"seed", split.seed},
                       {"train_reviews", train.records.size()},
                       {"validation_reviews", validation.records.size()},
                       {"test_reviews", test.records.size()}};
    report["training"] = training;
    report["leakage_audit"] = audits;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r));
    report["reports"] = reports;
    result.report = std::move(report);
    return result;
}

void write_run(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    io::write_file_atomic(dir / "report.json", result.report.dump(2) + "\n");
    io::write_file_atomic(dir / "report.txt", result.table);
    for (const auto& [name, models] : {std::pair{"clean", &result.clean_models}, std::pair{"defended", &result.defended_models}}) {
        if (!*models) continue;
        save_table((*models)->table, dir / (std::string(name) + ".table.tsv"));
        save_tf_model((*models)->tf, dir / (std::string(name) + ".tf.json"));
        save_rr_model((*models)->rr, dir / (std::string(name) + ".rr.json"));
    }
}

std::string render_run_report(const std::filesystem::path& dir) {
    const auto path = dir / "report.json";
    if (!std::filesystem::exists(path)) throw ConfigError("no report.json in " + dir.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (j.value("format", "") != "revguard-report") throw ParseError(path.string() + " is not a run report");
    std::vector<MetricsReport> reports;
    for (const auto& r : j.at("reports")) reports.push_back(metrics_report_from_json(r));
    return render_table(reports);
}

}  // namespace revguard
