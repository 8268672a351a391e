#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revguard {

enum class PosClass { ADJECTIVE, NOUN, ADVERB };

std::string_view to_string(PosClass p);
/// Accepts "adjective"/"noun"/"adverb" in any case.
PosClass parse_pos_class(std::string_view s);

/// {JJ,JJR,JJS} -> ADJECTIVE, {NN,NNS,NNP,NNPS} -> NOUN, {RB,RBR,RBS} -> ADVERB.
std::optional<PosClass> pos_class_of(std::string_view penn_tag);

/// A token as a byte span of the source text.
struct Token {
    std::string text;
    std::size_t offset = 0;
};

struct TaggedToken {
    std::string text;
    std::string tag;
    std::size_t offset = 0;
};

/// Treebank-style tokenisation, grouped into sentences.
std::vector<std::vector<Token>> tokenize_sentences(std::string_view text);

/// Part-of-speech tagger over Penn Treebank tags.
class Tagger {
public:
    virtual ~Tagger() = default;

    /// Word tokens in document order with their tags. Punctuation-only
    /// tokens take part in tagging context but are not returned.
    std::vector<TaggedToken> tag(std::string_view text) const;

    /// Tags one tokenised sentence; returns one tag per token.
    virtual std::vector<std::string> tag_sentence(const std::vector<Token>& sentence) const = 0;
};

/// Greedy averaged-perceptron tagger (the feature set and decoding used by
/// NLTK's PerceptronTagger), loaded from a tab-separated model file.
class PerceptronTagger final : public Tagger {
public:
    static PerceptronTagger load(const std::filesystem::path& model_path);

    std::vector<std::string> tag_sentence(const std::vector<Token>& sentence) const override;

    std::size_t feature_count() const { return weights_.size(); }

private:
    struct LabelWeight {
        std::uint16_t label;
        double weight;
    };

    std::string predict(const std::vector<std::string>& features) const;

    std::vector<std::string> classes_;
    std::unordered_map<std::string, std::string> tagdict_;
    std::unordered_map<std::string, std::vector<LabelWeight>> weights_;
};

/// Dictionary tagger for tests: known words get their listed tag,
/// everything else `fallback`.
class LookupTagger final : public Tagger {
public:
    LookupTagger(std::map<std::string, std::string> lexicon, std::string fallback = "NN")
        : lexicon_(std::move(lexicon)), fallback_(std::move(fallback)) {}

    std::vector<std::string> tag_sentence(const std::vector<Token>& sentence) const override;

private:
    std::map<std::string, std::string> lexicon_;
    std::string fallback_;
};

/// Wraps another tagger and remembers the tags of every sentence it has seen.
/// Safe for concurrent use.
class MemoTagger final : public Tagger {
public:
    explicit MemoTagger(std::shared_ptr<const Tagger> inner) : inner_(std::move(inner)) {}

    std::vector<std::string> tag_sentence(const std::vector<Token>& sentence) const override;

private:
    std::shared_ptr<const Tagger> inner_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, std::vector<std::string>> memo_;
};

/// Tagger::tag for a text that must contain something other than whitespace;
/// throws ArgumentError otherwise.
std::vector<TaggedToken> tag_tokens(const Tagger& tagger, std::string_view text);

/// Lower-cased tokens of `pos` with multiplicity.
std::map<std::string, std::size_t> extract_tokens(const Tagger& tagger, std::string_view text, PosClass pos);

}  // namespace revguard
