#include "revguard/defense.hpp"

#include <algorithm>

#include "revguard/errors.hpp"
#include "revguard/parallel.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

void require_context(const DefenseContext& ctx) {
    if (ctx.gateway == nullptr || ctx.thesaurus == nullptr || ctx.tagger == nullptr) {
        throw ArgumentError("defense needs a gateway, a thesaurus and a tagger");
    }
}

ReviewRecord derived(const ReviewRecord& source, std::string id, Origin origin, std::string parent, std::string text) {
    ReviewRecord r = source;
    r.review_id = std::move(id);
    r.origin = origin;
    r.parent_review_id = std::move(parent);
    r.text = std::move(text);
    return r;
}

}  // namespace

std::set<std::string> token_vocabulary(std::string_view text) {
    std::set<std::string> vocab;
    for (const auto& sentence : tokenize_sentences(text)) {
        for (const auto& tok : sentence) vocab.insert(text::to_lower(tok.text));
    }
    return vocab;
}

DefenseResult defend_review(std::string_view review_text, std::string_view regenerated_text,
                            const Thesaurus& thesaurus, const Tagger& tagger) {
    if (text::is_blank(regenerated_text)) throw ArgumentError("regenerated review is empty");
    const auto regen_vocab = token_vocabulary(regenerated_text);
    DefenseResult result;
    result.text = std::string(review_text);
    // A reversion can change how neighbouring words are tagged, so passes
    // repeat until nothing changes. Reverted words are in the regeneration
    // and are never touched again, which bounds the number of passes.
    while (true) {
        std::vector<text::Replacement> edits;
        for (const auto& tok : tagger.tag(result.text)) {
            const auto pos = pos_class_of(tok.tag);
            if (!pos) continue;
            const std::string lower = text::to_lower(tok.text);
            if (regen_vocab.count(lower)) continue;
            for (const auto& syn : thesaurus.synonyms(lower, *pos)) {
                if (syn == lower || !regen_vocab.count(syn)) continue;
                edits.push_back({tok.offset, tok.text.size(), text::match_initial_case(tok.text, syn)});
                break;
            }
        }
        if (edits.empty()) break;
        std::vector<Substitution> found;
        for (const auto& e : edits) {
            // Map the offset back to the input text through earlier passes.
            std::ptrdiff_t shift = 0;
            for (const auto& r : result.reversions) {
                if (static_cast<std::ptrdiff_t>(r.position) + shift >= static_cast<std::ptrdiff_t>(e.offset)) break;
                shift += static_cast<std::ptrdiff_t>(r.new_token.size()) - static_cast<std::ptrdiff_t>(r.old_token.size());
            }
            found.push_back({static_cast<std::size_t>(static_cast<std::ptrdiff_t>(e.offset) - shift),
                             result.text.substr(e.offset, e.length), e.replacement});
        }
        for (auto& f : found) {
            const auto at = std::lower_bound(result.reversions.begin(), result.reversions.end(), f.position,
                                             [](const Substitution& s, std::size_t p) { return s.position < p; });
            result.reversions.insert(at, std::move(f));
        }
        result.text = text::apply_replacements(result.text, std::move(edits));
    }
    return result;
}

ReviewRecord paraphrase_record(const ReviewRecord& review, Gateway& gateway) {
    const Origin origin = review.origin == Origin::HUMAN ? Origin::HUMAN : Origin::AI_PARAPHRASED;
    ReviewRecord r = derived(review, review.review_id + "-P", origin, review.review_id,
                             gateway.paraphrase_review(review.text));
    if (origin == Origin::HUMAN) r.extra["variant"] = "paraphrase";
    return r;
}

std::vector<ReviewRecord> paraphrase_records(const std::vector<ReviewRecord>& records, const DefenseContext& ctx) {
    if (ctx.gateway == nullptr) throw ArgumentError("paraphrasing needs a gateway");
    std::vector<ReviewRecord> out(records.size());
    parallel_for(records.size(), ctx.threads, [&](std::size_t i) { out[i] = paraphrase_record(records[i], *ctx.gateway); });
    return out;
}

void require_paper_texts(const std::vector<ReviewRecord>& records, const PaperTexts& papers) {
    std::set<std::string> missing;
    for (const auto& r : records) {
        if (!papers.count(r.paper_id)) missing.insert(r.paper_id);
    }
    if (missing.empty()) return;
    std::string list;
    for (const auto& id : missing) {
        if (!list.empty()) list += ", ";
        list += id;
    }
    throw ConfigError("missing paper text for paper_ids: " + list);
}

std::vector<ReviewRecord> defend_records(const std::vector<ReviewRecord>& records, const PaperTexts& papers,
                                         const DefenseContext& ctx,
                                         std::vector<std::vector<Substitution>>* reversions) {
    require_context(ctx);
    require_paper_texts(records, papers);
    std::vector<ReviewRecord> out(records.size());
    if (reversions != nullptr) reversions->assign(records.size(), {});
    parallel_for(records.size(), ctx.threads, [&](std::size_t i) {
        const auto& r = records[i];
        const std::string regen = ctx.gateway->regenerate_review(papers.at(r.paper_id), r.venue);
        auto d = defend_review(r.text, regen, *ctx.thesaurus, *ctx.tagger);
        out[i] = derived(r, r.review_id + "-D", Origin::DEFENDED_VARIANT, r.review_id, std::move(d.text));
        if (reversions != nullptr) (*reversions)[i] = std::move(d.reversions);
    });
    return out;
}

DefendedSets build_defended_sets(const Corpus& train, const PaperTexts& papers, const DefenseContext& ctx,
                                 const DefenseComposition& composition) {
    require_context(ctx);
    const auto& originals = train.records();
    require_paper_texts(originals, papers);

    std::vector<ReviewRecord> defended;
    if (composition.original_defended) defended = defend_records(originals, papers, ctx);
    std::vector<ReviewRecord> defended_paraphrases;
    if (composition.paraphrase_defended) {
        defended_paraphrases = defend_records(paraphrase_records(originals, ctx), papers, ctx);
    }

    // Without the raw reviews in the set, derived records cannot name them as
    // parent and carry the source label in their origin instead.
    auto attach = [&](ReviewRecord& rec, const ReviewRecord& source) {
        if (composition.original_raw) return;
        if (source.origin != Origin::HUMAN && source.origin != Origin::AI) {
            throw ArgumentError("defended set without raw reviews needs HUMAN or AI sources; " + source.review_id +
                                " is " + std::string(to_string(source.origin)));
        }
        rec.origin = source.origin;
        rec.parent_review_id.reset();
    };

    std::vector<ReviewRecord> records;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        const auto& r = originals[i];
        if (composition.original_raw) records.push_back(r);
        if (composition.original_defended) {
            records.push_back(defended[i]);
            attach(records.back(), r);
        }
        if (composition.paraphrase_defended) {
            ReviewRecord pd = derived(r, r.review_id + "-PD", Origin::DEFENDED_VARIANT, r.review_id,
                                      std::move(defended_paraphrases[i].text));
            pd.extra["variant"] = "defended_paraphrase";
            attach(pd, r);
            records.push_back(std::move(pd));
        }
    }

    DefendedSets sets;
    sets.train = Corpus::from_records(std::move(records));
    sets.eval_transform = [&papers, &ctx](const std::vector<ReviewRecord>& eval) {
        return defend_records(eval, papers, ctx);
    };
    return sets;
}

}  // namespace revguard
