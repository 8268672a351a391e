#include "revguard/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "revguard/errors.hpp"
#include "revguard/io.hpp"
#include "revguard/random.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 7> kKnownFields = {
    "review_id", "paper_id", "venue", "origin", "source_model", "text", "parent_review_id"};

bool is_known_field(std::string_view key) {
    return std::find(kKnownFields.begin(), kKnownFields.end(), key) != kKnownFields.end();
}

std::string required_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw ParseError(std::string("missing or non-string field '") + key + "'");
    }
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw ParseError(std::string("field '") + key + "' must be a string or null");
    }
    return it->get<std::string>();
}

bool needs_parent(Origin o) {
    return o == Origin::AI_ATTACKED || o == Origin::AI_PARAPHRASED || o == Origin::DEFENDED_VARIANT;
}

}  // namespace

std::string_view to_string(Venue v) {
    switch (v) {
        case Venue::ICLR2022: return "ICLR2022";
        case Venue::NEURIPS2022: return "NEURIPS2022";
        case Venue::OTHER: return "OTHER";
    }
    return "OTHER";
}

std::string_view to_string(Origin o) {
    switch (o) {
        case Origin::HUMAN: return "HUMAN";
        case Origin::AI: return "AI";
        case Origin::AI_ATTACKED: return "AI_ATTACKED";
        case Origin::AI_PARAPHRASED: return "AI_PARAPHRASED";
        case Origin::DEFENDED_VARIANT: return "DEFENDED_VARIANT";
    }
    return "HUMAN";
}

Venue parse_venue(std::string_view s) {
    const std::string up = [&] {
        std::string u(s);
        for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return u;
    }();
    if (up == "ICLR2022" || up == "ICLR") return Venue::ICLR2022;
    if (up == "NEURIPS2022" || up == "NEURIPS") return Venue::NEURIPS2022;
    if (up == "OTHER") return Venue::OTHER;
    throw ParseError("unknown venue '" + std::string(s) + "'");
}

Origin parse_origin(std::string_view s) {
    if (s == "HUMAN") return Origin::HUMAN;
    if (s == "AI") return Origin::AI;
    if (s == "AI_ATTACKED") return Origin::AI_ATTACKED;
    if (s == "AI_PARAPHRASED") return Origin::AI_PARAPHRASED;
    if (s == "DEFENDED_VARIANT") return Origin::DEFENDED_VARIANT;
    throw ParseError("unknown origin '" + std::string(s) + "'");
}

bool is_ai_origin(Origin o) {
    return o == Origin::AI || o == Origin::AI_ATTACKED || o == Origin::AI_PARAPHRASED;
}

nlohmann::ordered_json to_json(const ReviewRecord& r) {
    nlohmann::ordered_json j;
    j["review_id"] = r.review_id;
    j["paper_id"] = r.paper_id;
    j["venue"] = to_string(r.venue);
    j["origin"] = to_string(r.origin);
    j["source_model"] = r.source_model ? nlohmann::ordered_json(*r.source_model) : nlohmann::ordered_json();
    j["text"] = r.text;
    j["parent_review_id"] =
        r.parent_review_id ? nlohmann::ordered_json(*r.parent_review_id) : nlohmann::ordered_json();
    for (const auto& [key, value] : r.extra.items()) {
        j[key] = value;
    }
    return j;
}

ReviewRecord record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ParseError("record is not an object");
    }
    ReviewRecord r;
    r.review_id = required_string(j, "review_id");
    r.paper_id = required_string(j, "paper_id");
    r.venue = parse_venue(required_string(j, "venue"));
    r.origin = parse_origin(required_string(j, "origin"));
    r.source_model = optional_string(j, "source_model");
    r.text = required_string(j, "text");
    r.parent_review_id = optional_string(j, "parent_review_id");
    for (const auto& [key, value] : j.items()) {
        if (!is_known_field(key)) r.extra[key] = value;
    }
    return r;
}

Corpus Corpus::from_records(std::vector<ReviewRecord> records) {
    Corpus c;
    c.records_ = std::move(records);
    for (std::size_t i = 0; i < c.records_.size(); ++i) {
        const auto& r = c.records_[i];
        if (r.review_id.empty()) {
            throw ValidationError("record " + std::to_string(i + 1) + " has an empty review_id");
        }
        if (text::is_blank(r.text)) {
            throw ValidationError("review '" + r.review_id + "' has empty text");
        }
        if (!c.by_id_.emplace(r.review_id, i).second) {
            throw ValidationError("duplicate review_id '" + r.review_id + "'");
        }
        ++c.origin_counts_[r.origin];
        ++c.venue_counts_[r.venue];
    }
    for (const auto& r : c.records_) {
        if (needs_parent(r.origin) && !r.parent_review_id) {
            throw ValidationError("review '" + r.review_id + "' (" + std::string(to_string(r.origin)) +
                                  ") has no parent_review_id");
        }
        if (r.parent_review_id && !c.by_id_.contains(*r.parent_review_id)) {
            throw ValidationError("review '" + r.review_id + "' has dangling parent_review_id '" +
                                  *r.parent_review_id + "'");
        }
    }
    // A parent chain must terminate; reject cycles.
    for (const auto& r : c.records_) {
        const ReviewRecord* cur = &r;
        std::size_t steps = 0;
        while (cur->parent_review_id) {
            cur = &c.records_[c.by_id_.at(*cur->parent_review_id)];
            if (++steps > c.records_.size()) {
                throw ValidationError("parent cycle through review '" + r.review_id + "'");
            }
        }
    }
    return c;
}

const ReviewRecord* Corpus::find(std::string_view review_id) const {
    auto it = by_id_.find(std::string(review_id));
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

const ReviewRecord& Corpus::at(std::string_view review_id) const {
    const auto* r = find(review_id);
    if (r == nullptr) {
        throw ArgumentError("unknown review_id '" + std::string(review_id) + "'");
    }
    return *r;
}

bool Corpus::is_ai(const ReviewRecord& r) const {
    const ReviewRecord* cur = &r;
    while (cur->origin == Origin::DEFENDED_VARIANT) {
        cur = &at(*cur->parent_review_id);
    }
    return is_ai_origin(cur->origin);
}

std::vector<std::string> Corpus::paper_ids() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& r : records_) {
        if (seen.insert(r.paper_id).second) out.push_back(r.paper_id);
    }
    return out;
}

std::vector<ReviewRecord> Corpus::select(const std::set<std::string>& ids) const {
    std::vector<ReviewRecord> out;
    for (const auto& r : records_) {
        if (ids.contains(r.review_id)) out.push_back(r);
    }
    return out;
}

Corpus parse_corpus(std::string_view jsonl) {
    std::vector<ReviewRecord> records;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= jsonl.size()) {
        auto end = jsonl.find('\n', start);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (text::is_blank(line)) {
            if (end == jsonl.size()) break;
            continue;
        }
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (end == jsonl.size()) break;
    }
    return Corpus::from_records(std::move(records));
}

Corpus load_corpus(const fs::path& path) {
    if (!fs::exists(path)) {
        throw ConfigError("corpus file not found: " + path.string());
    }
    return parse_corpus(io::read_file(path));
}

std::string to_jsonl(const Corpus& corpus) {
    std::string out;
    for (const auto& r : corpus.records()) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

void save_corpus(const Corpus& corpus, const fs::path& path) {
    io::write_file_atomic(path, to_jsonl(corpus));
}

SplitRatios parse_ratios(std::string_view s) {
    auto parts = text::split(s, ',');
    if (parts.size() != 3) {
        throw ArgumentError("ratios must be three comma-separated fractions, got '" + std::string(s) + "'");
    }
    SplitRatios r;
    try {
        r.train = std::stod(parts[0]);
        r.validation = std::stod(parts[1]);
        r.test = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw ArgumentError("ratios must be numeric, got '" + std::string(s) + "'");
    }
    return r;
}

CorpusSplit split_corpus(const Corpus& corpus, const SplitRatios& ratios, std::uint64_t seed) {
    const double sum = ratios.train + ratios.validation + ratios.test;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ArgumentError("split ratios must sum to 1, got " + std::to_string(sum));
    }
    if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0) {
        throw ArgumentError("split ratios must be non-negative");
    }
    if (corpus.empty()) {
        throw ArgumentError("cannot split an empty corpus");
    }

    // Sorted first so the result does not depend on record order.
    auto papers = corpus.paper_ids();
    std::sort(papers.begin(), papers.end());
    Rng rng(seed);
    rng.shuffle(papers);

    const auto n = papers.size();
    auto n_train = static_cast<std::size_t>(std::llround(ratios.train * static_cast<double>(n)));
    auto n_val = static_cast<std::size_t>(std::llround(ratios.validation * static_cast<double>(n)));
    n_train = std::min(n_train, n);
    n_val = std::min(n_val, n - n_train);

    std::map<std::string, int> partition_of;
    for (std::size_t i = 0; i < n; ++i) {
        partition_of[papers[i]] = i < n_train ? 0 : (i < n_train + n_val ? 1 : 2);
    }

    CorpusSplit split;
    split.seed = seed;
    for (const auto& r : corpus.records()) {
        switch (partition_of.at(r.paper_id)) {
            case 0: split.train.insert(r.review_id); break;
            case 1: split.validation.insert(r.review_id); break;
            default: split.test.insert(r.review_id); break;
        }
    }
    return split;
}

PaperTexts load_papers(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw ConfigError("paper directory not found: " + dir.string());
    }
    PaperTexts out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        out[entry.path().stem().string()] = io::read_file(entry.path());
    }
    return out;
}

void save_papers(const PaperTexts& papers, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& [id, body] : papers) {
        io::write_file_atomic(dir / (id + ".txt"), body);
    }
}

}  // namespace revguard
