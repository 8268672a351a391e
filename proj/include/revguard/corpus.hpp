#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace revguard {

enum class Venue { ICLR2022, NEURIPS2022, OTHER };
enum class Origin { HUMAN, AI, AI_ATTACKED, AI_PARAPHRASED, DEFENDED_VARIANT };

std::string_view to_string(Venue v);
std::string_view to_string(Origin o);
Venue parse_venue(std::string_view s);
Origin parse_origin(std::string_view s);

/// True for origins whose ground truth is machine-written on their own.
/// DEFENDED_VARIANT is resolved through its parent (see Corpus::is_ai).
bool is_ai_origin(Origin o);

struct ReviewRecord {
    std::string review_id;
    std::string paper_id;
    Venue venue = Venue::OTHER;
    Origin origin = Origin::HUMAN;
    std::optional<std::string> source_model;
    std::string text;
    std::optional<std::string> parent_review_id;
    /// Fields not known to this version; written back unchanged.
    nlohmann::json extra = nlohmann::json::object();
};

nlohmann::ordered_json to_json(const ReviewRecord& r);
/// Throws ParseError with `what` describing the defect.
ReviewRecord record_from_json(const nlohmann::json& j);

/// An immutable, validated set of reviews.
class Corpus {
public:
    Corpus() = default;

    /// Validates ids, texts and parent links. Throws ValidationError.
    static Corpus from_records(std::vector<ReviewRecord> records);

    const std::vector<ReviewRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const ReviewRecord* find(std::string_view review_id) const;
    const ReviewRecord& at(std::string_view review_id) const;

    /// Ground-truth label; derived variants inherit their ancestor's label.
    bool is_ai(const ReviewRecord& r) const;

    std::map<Origin, std::size_t> origin_counts() const { return origin_counts_; }
    std::map<Venue, std::size_t> venue_counts() const { return venue_counts_; }

    /// Paper ids in first-appearance order.
    std::vector<std::string> paper_ids() const;

    /// Records whose id is in `ids`, in corpus order.
    std::vector<ReviewRecord> select(const std::set<std::string>& ids) const;

private:
    std::vector<ReviewRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<Origin, std::size_t> origin_counts_;
    std::map<Venue, std::size_t> venue_counts_;
};

Corpus parse_corpus(std::string_view jsonl);
Corpus load_corpus(const std::filesystem::path& path);
std::string to_jsonl(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

/// Parses "0.8,0.1,0.1".
SplitRatios parse_ratios(std::string_view s);

struct CorpusSplit {
    std::set<std::string> train;
    std::set<std::string> validation;
    std::set<std::string> test;
    std::uint64_t seed = 0;
};

/// Partitions by paper group so a paper's reviews never straddle partitions.
CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed);

/// Paper full texts keyed by paper_id.
using PaperTexts = std::map<std::string, std::string>;

/// Reads `<paper_id>.txt` files from a directory.
PaperTexts load_papers(const std::filesystem::path& dir);
void save_papers(const PaperTexts& papers, const std::filesystem::path& dir);

}  // namespace revguard
