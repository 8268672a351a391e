#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "revguard/corpus.hpp"
#include "revguard/tagger.hpp"

namespace revguard {

enum class CorpusSide { AI, HUMAN };

/// Per-token document frequencies of one part-of-speech class in an AI and a
/// human review corpus. Tokens are lowercased.
struct TokenProbTable {
    PosClass pos_class = PosClass::ADJECTIVE;
    std::size_t n_ai_reviews = 0;
    std::size_t n_human_reviews = 0;
    /// Number of reviews containing the token at least once.
    std::map<std::string, std::size_t> df_ai;
    std::map<std::string, std::size_t> df_human;
    std::map<std::string, double> p_ai;
    std::map<std::string, double> p_human;
    /// Reviews the table was built from (kept for leakage audits).
    std::set<std::string> source_review_ids;

    double ai(std::string_view token) const;
    double human(std::string_view token) const;
    bool in_ai_vocabulary(std::string_view token) const;

    /// Content hash of the serialised table; identifies the table in models.
    std::string hash() const;
};

/// Builds a table from the set of distinct tokens of each review.
TokenProbTable build_prob_table_from_tokens(const std::vector<std::set<std::string>>& ai_docs,
                                            const std::vector<std::set<std::string>>& human_docs,
                                            PosClass pos_class);

/// Tags every review and counts document frequencies. Both sets must be non-empty.
TokenProbTable build_prob_table(const std::vector<ReviewRecord>& ai_reviews,
                                const std::vector<ReviewRecord>& human_reviews, PosClass pos_class,
                                const Tagger& tagger);

/// Tokens by descending probability in the chosen corpus, ties in ascending
/// lexicographic order; at most k entries.
std::vector<std::string> top_k_tokens(const TokenProbTable& table, CorpusSide side, std::size_t k);

std::string serialize_table(const TokenProbTable& table);
TokenProbTable parse_table(std::string_view body);
TokenProbTable load_table(const std::filesystem::path& path);
void save_table(const TokenProbTable& table, const std::filesystem::path& path);

}  // namespace revguard
