#include "revguard/attacks.hpp"

#include <algorithm>

#include "revguard/errors.hpp"
#include "revguard/text.hpp"

namespace revguard {

void validate(const AttackConfig& cfg) {
    if (cfg.k == 0) throw ArgumentError("attack k must be at least 1");
    if (!cfg.table) throw ArgumentError("attack needs a probability table");
    if (!cfg.thesaurus) throw ArgumentError("attack needs a thesaurus");
    if (cfg.table->pos_class != cfg.pos_class) {
        throw ArgumentError("table part of speech " + std::string(to_string(cfg.table->pos_class)) +
                            " does not match attack part of speech " + std::string(to_string(cfg.pos_class)));
    }
}

std::map<std::string, std::string> attack_plan(const AttackConfig& cfg) {
    validate(cfg);
    std::map<std::string, std::string> plan;
    for (const auto& token : top_k_tokens(*cfg.table, CorpusSide::AI, cfg.k)) {
        for (const auto& syn : cfg.thesaurus->synonyms(token, cfg.pos_class)) {
            if (syn == token) continue;
            if (cfg.require_corpus_attested && !cfg.table->in_ai_vocabulary(syn)) continue;
            plan.emplace(token, syn);
            break;
        }
    }
    return plan;
}

AttackResult attack_text(std::string_view text, const AttackConfig& cfg, const Tagger& tagger) {
    const auto plan = attack_plan(cfg);
    AttackResult result;
    std::vector<text::Replacement> edits;
    for (const auto& tok : tagger.tag(text)) {
        if (pos_class_of(tok.tag) != cfg.pos_class) continue;
        const auto it = plan.find(text::to_lower(tok.text));
        if (it == plan.end()) continue;
        const std::string replacement = text::match_initial_case(tok.text, it->second);
        edits.push_back({tok.offset, tok.text.size(), replacement});
        result.substitutions.push_back({tok.offset, tok.text, replacement});
    }
    result.text = text::apply_replacements(text, std::move(edits));
    return result;
}

AttackedReview token_attack(const ReviewRecord& review, const AttackConfig& cfg, const Tagger& tagger) {
    if (review.origin != Origin::AI) {
        throw ArgumentError("token attack applies to AI reviews; " + review.review_id + " has origin " +
                            std::string(to_string(review.origin)));
    }
    auto r = attack_text(review.text, cfg, tagger);
    AttackedReview out;
    out.attacked = review;
    out.attacked.review_id = review.review_id + "-ATK";
    out.attacked.origin = Origin::AI_ATTACKED;
    out.attacked.parent_review_id = review.review_id;
    out.attacked.text = std::move(r.text);
    out.substitutions = std::move(r.substitutions);
    return out;
}

std::string substitution_log(const std::vector<std::pair<std::string, std::vector<Substitution>>>& per_review) {
    std::string out;
    for (const auto& [id, subs] : per_review) {
        for (const auto& s : subs) {
            nlohmann::ordered_json j;
            j["review_id"] = id;
            j["position"] = s.position;
            j["old"] = s.old_token;
            j["new"] = s.new_token;
            out += j.dump();
            out += '\n';
        }
    }
    return out;
}

}  // namespace revguard
