#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "revguard/attacks.hpp"
#include "revguard/corpus.hpp"
#include "revguard/gateway.hpp"
#include "revguard/tagger.hpp"
#include "revguard/thesaurus.hpp"

namespace revguard {

/// Lowercased tokens of a text.
std::set<std::string> token_vocabulary(std::string_view text);

struct DefenseResult {
    std::string text;
    std::vector<Substitution> reversions;
};

/// For each adjective, noun or adverb of the review that does not occur in
/// the regenerated review, substitutes the first thesaurus synonym that does.
DefenseResult defend_review(std::string_view review_text, std::string_view regenerated_text,
                            const Thesaurus& thesaurus, const Tagger& tagger);

struct DefenseContext {
    Gateway* gateway = nullptr;
    const Thesaurus* thesaurus = nullptr;
    const Tagger* tagger = nullptr;
    std::size_t threads = 1;
};

/// Paraphrase of a review with id `<id>-P` and the review as parent. AI
/// reviews become AI_PARAPHRASED; human reviews keep origin HUMAN and are
/// marked with extra.variant = "paraphrase".
ReviewRecord paraphrase_record(const ReviewRecord& review, Gateway& gateway);

/// Paraphrases every record (in parallel when ctx.threads > 1).
std::vector<ReviewRecord> paraphrase_records(const std::vector<ReviewRecord>& records, const DefenseContext& ctx);

/// Throws ConfigError naming every paper_id of `records` without text.
void require_paper_texts(const std::vector<ReviewRecord>& records, const PaperTexts& papers);

/// Defended copy of each record: id `<id>-D`, origin DEFENDED_VARIANT,
/// parent the input record.
std::vector<ReviewRecord> defend_records(const std::vector<ReviewRecord>& records, const PaperTexts& papers,
                                         const DefenseContext& ctx,
                                         std::vector<std::vector<Substitution>>* reversions = nullptr);

struct DefenseComposition {
    bool original_raw = true;
    bool original_defended = true;
    bool paraphrase_defended = true;
};

struct DefendedSets {
    /// Per original review, in corpus order: the raw review, `<id>-D` (its
    /// defended form) and `<id>-PD` (its defended paraphrase). Both derived
    /// records name the raw review as parent.
    Corpus train;
    /// Defends each evaluation record; see defend_records.
    std::function<std::vector<ReviewRecord>(const std::vector<ReviewRecord>&)> eval_transform;
};

/// The transform captures `papers` and `ctx` by reference.
DefendedSets build_defended_sets(const Corpus& train, const PaperTexts& papers, const DefenseContext& ctx,
                                 const DefenseComposition& composition = {});

}  // namespace revguard
