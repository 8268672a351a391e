#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "revguard/corpus.hpp"
#include "revguard/prob_table.hpp"
#include "revguard/tagger.hpp"
#include "revguard/thesaurus.hpp"

namespace revguard {

/// One token replaced in a text. `position` is the byte offset of the old
/// token in the text before replacement.
struct Substitution {
    std::size_t position = 0;
    std::string old_token;
    std::string new_token;
};

struct AttackConfig {
    PosClass pos_class = PosClass::ADJECTIVE;
    std::size_t k = 100;
    std::shared_ptr<const TokenProbTable> table;
    std::shared_ptr<const Thesaurus> thesaurus;
    /// Only use synonyms that occur in the AI side of the table.
    bool require_corpus_attested = true;
};

/// Throws ArgumentError when k is 0, a resource is missing or the table is
/// for another part of speech.
void validate(const AttackConfig& cfg);

/// Lowercased top-k token -> chosen replacement. Tokens without a usable
/// synonym are absent.
std::map<std::string, std::string> attack_plan(const AttackConfig& cfg);

struct AttackResult {
    std::string text;
    std::vector<Substitution> substitutions;
};

/// Replaces every occurrence of a planned token whose tag belongs to the
/// configured part of speech.
AttackResult attack_text(std::string_view text, const AttackConfig& cfg, const Tagger& tagger);

struct AttackedReview {
    ReviewRecord attacked;
    std::vector<Substitution> substitutions;
};

/// Requires origin AI. The result has origin AI_ATTACKED, id `<id>-ATK` and
/// the original as parent.
AttackedReview token_attack(const ReviewRecord& review, const AttackConfig& cfg, const Tagger& tagger);

/// One JSON object per substitution: review_id, position, old, new.
std::string substitution_log(const std::vector<std::pair<std::string, std::vector<Substitution>>>& per_review);

}  // namespace revguard
