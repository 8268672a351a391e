#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revguard/tagger.hpp"

// Shared vocabulary of the synthetic corpus and of the offline (MOCK) text
// generator. The synthetic AI reviews and the mock regenerations draw their
// characteristic sentences from the same list, which is what gives the
// offline pipeline its detection signal.
namespace revguard::style {

/// A characteristic sentence. `{K1}`/`{K2}` are paper keywords.
struct MarkerSentence {
    std::string frame;
    std::string marker;                    // the characteristic word
    PosClass pos = PosClass::ADJECTIVE;
    std::optional<std::string> alternate;  // rarely used synonym for adjective markers
};

const std::vector<MarkerSentence>& marker_sentences();

/// The adjective markers, in list order.
std::vector<std::string> marker_adjectives();
/// Alternates of the adjective markers, in the same order.
std::vector<std::string> marker_alternates();

const std::vector<std::string>& filler_adjectives();
const std::vector<std::string>& filler_nouns();
const std::vector<std::string>& filler_adverbs();
const std::vector<std::string>& keyword_pool();

/// Common English function words, ignored by keyword extraction and by the
/// mock embedding.
bool is_stopword(std::string_view lower_word);

/// Lowercased alphanumeric words (hyphens and apostrophes kept inside words).
std::vector<std::string> words(std::string_view text);

/// The `n` most frequent non-stopword words of a text; ties by first use.
std::vector<std::string> extract_keywords(std::string_view text, std::size_t n = 4);

/// Fills `{K1}`/`{K2}` of marker sentence `index` from `keywords`
/// (rotating through them).
std::string fill_marker(const MarkerSentence& m, std::size_t index, const std::vector<std::string>& keywords);

/// A review in the characteristic style: `headings`, each followed by its
/// share of the marker sentences, then `closing`.
std::string house_review(const std::vector<std::string>& keywords, const std::vector<std::string>& headings,
                         std::string_view closing);

/// Misspellings used by the synthetic generator, mapped to the correct word.
const std::map<std::string, std::string>& typo_corrections();

/// Proofreading pass of the offline pipeline: corrects the misspellings of
/// typo_corrections(), keeping the initial capital.
std::string light_edit(std::string_view text);

}  // namespace revguard::style
