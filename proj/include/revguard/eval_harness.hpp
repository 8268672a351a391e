#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "revguard/attacks.hpp"
#include "revguard/corpus.hpp"
#include "revguard/defense.hpp"
#include "revguard/detection.hpp"
#include "revguard/gateway.hpp"
#include "revguard/mlp.hpp"
#include "revguard/prob_table.hpp"
#include "revguard/resources.hpp"
#include "revguard/rr_detector.hpp"
#include "revguard/synthetic.hpp"
#include "revguard/tf_detector.hpp"

namespace revguard {

enum class Condition { CLEAN, ADJ_ATTACK, PARAPHRASE, PARAPHRASE_DEFENDED };

std::string_view to_string(Condition c);
Condition parse_condition(std::string_view s);

/// AI is the positive class. Ratios whose denominator is zero are absent.
struct MetricsReport {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> accuracy;
    Condition condition = Condition::CLEAN;
    DetectorKind detector = DetectorKind::TF;
    /// Absent for the report over all venues.
    std::optional<Venue> venue;
    std::size_t n_reviews = 0;
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

/// `ai_labels[i]` is the ground truth of `verdicts[i]`. Throws ArgumentError
/// on a length mismatch.
MetricsReport compute_metrics(const std::vector<DetectionVerdict>& verdicts, const std::vector<bool>& ai_labels);
/// Origins are binarised with is_ai_origin; DEFENDED_VARIANT cannot be
/// resolved without its corpus and is rejected.
MetricsReport compute_metrics(const std::vector<DetectionVerdict>& verdicts, const std::vector<Origin>& labels);

nlohmann::ordered_json to_json(const MetricsReport& r);
MetricsReport metrics_report_from_json(const nlohmann::json& j);

/// Aligned plain-text table, one row per report, values in percent.
std::string render_table(const std::vector<MetricsReport>& reports);

struct ExperimentConfig {
    /// Either a synthetic corpus or a corpus file plus a paper directory.
    std::optional<std::size_t> synthetic_papers = 200;
    SyntheticOptions synthetic;
    std::uint64_t synthetic_seed = 42;
    std::filesystem::path corpus_path;
    std::filesystem::path papers_dir;

    SplitRatios split;
    std::uint64_t split_seed = 42;

    GatewayConfig gateway;
    std::filesystem::path data_dir;
    std::filesystem::path thesaurus_overlay;

    std::vector<Condition> conditions{Condition::CLEAN, Condition::ADJ_ATTACK, Condition::PARAPHRASE,
                                      Condition::PARAPHRASE_DEFENDED};
    PosClass table_pos = PosClass::ADJECTIVE;
    std::size_t attack_k = 100;
    PosClass attack_pos = PosClass::ADJECTIVE;
    DefenseComposition defense;

    TrainHyperparams tf_hyperparams;
    TrainHyperparams rr_hyperparams;
    bool stratify_by_venue = true;
    std::size_t threads = 4;
};

/// Reads the JSON experiment config. Relative paths resolve against
/// `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::ordered_json to_json(const ExperimentConfig& c);

struct LeakageAudit {
    std::size_t table_sources = 0;
    std::size_t training_reviews = 0;
    std::size_t test_reviews = 0;
    /// Test review ids found among the table sources or the training reviews.
    std::vector<std::string> overlap;
    bool passed() const { return overlap.empty(); }
};

struct TrainedDetectors {
    TokenProbTable table;
    TFModel tf;
    RRModel rr;
    std::set<std::string> training_ids;
};

struct ExperimentResult {
    std::vector<MetricsReport> reports;
    std::string table;
    std::vector<LeakageAudit> audits;
    /// The complete report; byte-identical across runs with equal inputs.
    nlohmann::ordered_json report;
    GatewayStats gateway_stats;
    /// Models trained on the training partition, and on the defended
    /// training set when PARAPHRASE_DEFENDED ran.
    std::optional<TrainedDetectors> clean_models;
    std::optional<TrainedDetectors> defended_models;
};

/// Trains both detectors on the training partition and evaluates them on
/// the test partition under every configured condition. A failure throws
/// ExperimentError naming the stage.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes report.json, report.txt and the trained models into `dir`.
void write_run(const ExperimentResult& result, const std::filesystem::path& dir);

/// Re-renders the table of a run directory from its report.json.
std::string render_run_report(const std::filesystem::path& dir);

}  // namespace revguard
