#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "revguard/tagger.hpp"

namespace revguard {

struct ThesaurusOptions {
    /// For adjectives, append lemmas of "similar to" satellite synsets after
    /// the head synsets' own lemmas.
    bool include_similar = true;
    /// Drop multi-word lemmas ("take_care").
    bool skip_multiword = true;
};

/// Synonym lookup over WordNet-format database files plus an optional overlay
/// of extra synonym groups. Immutable after loading; lookups are thread-safe.
class Thesaurus {
public:
    /// `wordnet_dir` holds index.{adj,adv,noun}, data.{adj,adv,noun} and the
    /// .exc files (plain or .gz). `overlay` may be empty.
    static std::shared_ptr<const Thesaurus> load(const std::filesystem::path& wordnet_dir,
                                                 const std::filesystem::path& overlay = {},
                                                 ThesaurusOptions options = {});

    /// A thesaurus backed only by explicit entries, for tests.
    static std::shared_ptr<const Thesaurus> from_entries(
        const std::map<std::pair<PosClass, std::string>, std::vector<std::string>>& entries);

    /// Synonyms of a lowercased token in database order, de-duplicated, never
    /// containing the token itself. Unknown tokens give an empty list.
    std::vector<std::string> synonyms(std::string_view token, PosClass pos) const;

    const std::string& source() const { return source_; }
    const std::string& version() const { return version_; }

    Thesaurus(const Thesaurus&) = delete;
    Thesaurus& operator=(const Thesaurus&) = delete;
    Thesaurus() = default;

private:
    struct PosData {
        std::unordered_map<std::string, std::vector<std::size_t>> index;
        std::unordered_map<std::string, std::vector<std::string>> exceptions;
        std::string data;
        std::unordered_map<std::size_t, std::size_t> line_at;  // only when offsets do not line up
    };
    struct Synset {
        char pos = 'n';
        std::vector<std::string> lemmas;
        std::vector<std::size_t> similar;
    };

    std::vector<std::string> morphy(const PosData& pd, PosClass pos, const std::string& form) const;
    Synset read_synset(const PosData& pd, std::size_t offset) const;
    std::vector<std::string> compute(const std::string& token, PosClass pos) const;

    bool has_wordnet_ = false;
    ThesaurusOptions options_;
    std::map<PosClass, PosData> wordnet_;
    std::map<std::pair<PosClass, std::string>, std::vector<std::string>> overlay_;
    std::string source_;
    std::string version_;

    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<PosClass, std::string>, std::vector<std::string>> memo_;
};

/// Free-function form used throughout: synonyms of `token` under `pos`.
std::vector<std::string> lookup_synonyms(std::string_view token, PosClass pos, const Thesaurus& thesaurus);

}  // namespace revguard
