#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "revguard/defense.hpp"
#include "revguard/errors.hpp"
#include "revguard/house_style.hpp"
#include "revguard/synthetic.hpp"
#include "revguard/text.hpp"
#include "support.hpp"

using namespace revguard;

namespace {

const Tagger& tagger() { return *testing::shared_resources().tagger; }
const Thesaurus& thesaurus() { return *testing::shared_resources().thesaurus; }

Gateway mock_gateway() {
    const auto& r = testing::shared_resources();
    return Gateway(testing::mock_gateway_config(), r.thesaurus, r.tagger);
}

std::map<std::string, int> word_counts(const std::string& text) {
    std::map<std::string, int> out;
    for (const auto& w : style::words(text)) ++out[w];
    return out;
}

/// Share of the words a paraphrase removed that the defense put back,
/// counted over word multisets (the mock paraphraser also reorders sentences).
struct Recovery {
    long removed = 0;
    long restored = 0;

    void add(const std::string& original, const std::string& paraphrased, const std::string& defended) {
        auto o = word_counts(original);
        auto p = word_counts(paraphrased);
        auto d = word_counts(defended);
        for (const auto& [w, n] : o) {
            const int lost = n - p[w];
            if (lost <= 0) continue;
            removed += lost;
            restored += std::max(0, std::min(lost, d[w] - p[w]));
        }
    }
    double rate() const { return static_cast<double>(restored) / static_cast<double>(removed); }
};

}  // namespace

TEST_CASE("a paraphrased experimental reverts to empirical") {
    const auto out = defend_review("The experimental results are strong.", "The empirical results are strong.",
                                   thesaurus(), tagger());
    CHECK(out.text == "The empirical results are strong.");
    REQUIRE(out.reversions.size() == 1);
    CHECK(out.reversions[0].old_token == "experimental");
    CHECK(out.reversions[0].new_token == "empirical");
    CHECK(out.reversions[0].position == 4);
}

TEST_CASE("foundation and diverse are reverted") {
    const std::string regenerated = "The work builds a solid foundation for diverse applications.";
    const auto out = defend_review("The work builds a solid base for various applications.", regenerated,
                                   thesaurus(), tagger());
    CHECK(out.text == regenerated);
    REQUIRE(out.reversions.size() == 2);
    CHECK(out.reversions[0].old_token == "base");
    CHECK(out.reversions[0].new_token == "foundation");
    CHECK(out.reversions[1].old_token == "various");
    CHECK(out.reversions[1].new_token == "diverse");
}

TEST_CASE("a review equal to its regeneration has no reversions") {
    const std::string text = "The thorough evaluation offers a rigorous foundation.";
    const auto out = defend_review(text, text, thesaurus(), tagger());
    CHECK(out.text == text);
    CHECK(out.reversions.empty());
}

TEST_CASE("reversion keeps the initial capital and needs a regeneration") {
    const auto out = defend_review("Experimental results look fine.", "empirical evidence", thesaurus(), tagger());
    CHECK(out.text == "Empirical results look fine.");
    CHECK_THROWS_AS(defend_review("text", " ", thesaurus(), tagger()), ArgumentError);
}

TEST_CASE("every reversion is a thesaurus synonym present in the regeneration") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(40, 42, 0.6);
    std::size_t total = 0;
    for (const auto& r : ds.corpus.records()) {
        const std::string regen = g.regenerate_review(ds.papers.at(r.paper_id), r.venue);
        const auto regen_vocab = token_vocabulary(regen);
        const std::string paraphrased = g.paraphrase_review(r.text);
        const auto out = defend_review(paraphrased, regen, thesaurus(), tagger());
        CHECK(style::words(out.text).size() == style::words(paraphrased).size());
        for (const auto& s : out.reversions) {
            ++total;
            CHECK(paraphrased.compare(s.position, s.old_token.size(), s.old_token) == 0);
            const std::string old_lower = text::to_lower(s.old_token);
            const std::string new_lower = text::to_lower(s.new_token);
            CHECK(regen_vocab.count(new_lower) == 1);
            bool synonym = false;
            for (PosClass pos : {PosClass::ADJECTIVE, PosClass::NOUN, PosClass::ADVERB}) {
                for (const auto& syn : thesaurus().synonyms(old_lower, pos)) synonym = synonym || syn == new_lower;
            }
            CHECK_MESSAGE(synonym, s.old_token << " -> " << s.new_token);
        }
    }
    CHECK(total > 0);
}

TEST_CASE("defense is idempotent on the synthetic corpus") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(40, 42, 0.6);
    for (const auto& r : ds.corpus.records()) {
        const std::string regen = g.regenerate_review(ds.papers.at(r.paper_id), r.venue);
        for (const std::string& text : {r.text, g.paraphrase_review(r.text)}) {
            const auto once = defend_review(text, regen, thesaurus(), tagger());
            const auto twice = defend_review(once.text, regen, thesaurus(), tagger());
            CHECK_MESSAGE(twice.text == once.text, r.review_id);
        }
    }
}

TEST_CASE("defense restores a stable share of paraphrased words") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(200, 42, 0.6);
    Recovery ai, human;
    for (const auto& r : ds.corpus.records()) {
        const std::string regen = g.regenerate_review(ds.papers.at(r.paper_id), r.venue);
        const std::string paraphrased = g.paraphrase_review(r.text);
        const auto defended = defend_review(paraphrased, regen, thesaurus(), tagger());
        (r.origin == Origin::AI ? ai : human).add(r.text, paraphrased, defended.text);
    }
    CHECK(ai.rate() == doctest::Approx(0.601).epsilon(0.02));
    CHECK(human.rate() == doctest::Approx(0.266).epsilon(0.04));
    CHECK(ai.rate() > human.rate());
}

TEST_CASE("paraphrase records keep their label and point to their source") {
    Gateway g = mock_gateway();
    const Corpus c = make_synthetic_corpus(2, 5, 0.6);
    for (const auto& r : c.records()) {
        const auto p = paraphrase_record(r, g);
        CHECK(p.review_id == r.review_id + "-P");
        CHECK(p.parent_review_id == r.review_id);
        if (r.origin == Origin::AI) {
            CHECK(p.origin == Origin::AI_PARAPHRASED);
        } else {
            CHECK(p.origin == Origin::HUMAN);
            CHECK(p.extra.at("variant") == "paraphrase");
        }
    }
}

TEST_CASE("defended training set triples and the evaluation set doubles") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(5, 42, 0.6);
    REQUIRE(ds.corpus.size() == 10);
    const DefenseContext ctx{&g, &thesaurus(), &tagger(), 2};
    const DefendedSets sets = build_defended_sets(ds.corpus, ds.papers, ctx);
    CHECK(sets.train.size() == 30);
    for (const auto& r : ds.corpus.records()) {
        const auto& d = sets.train.at(r.review_id + "-D");
        const auto& pd = sets.train.at(r.review_id + "-PD");
        CHECK(sets.train.is_ai(d) == ds.corpus.is_ai(r));
        CHECK(sets.train.is_ai(pd) == ds.corpus.is_ai(r));
        CHECK(d.parent_review_id == r.review_id);
        CHECK(pd.parent_review_id == r.review_id);
    }

    std::vector<ReviewRecord> eval = ds.corpus.records();
    for (const auto& p : paraphrase_records(ds.corpus.records(), ctx)) eval.push_back(p);
    const auto transformed = sets.eval_transform(eval);
    CHECK(transformed.size() == 20);
    for (std::size_t i = 0; i < eval.size(); ++i) {
        CHECK(transformed[i].review_id == eval[i].review_id + "-D");
        CHECK(transformed[i].origin == Origin::DEFENDED_VARIANT);
        CHECK(transformed[i].parent_review_id == eval[i].review_id);
    }
}

TEST_CASE("defended sets without raw reviews carry the source labels directly") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(3, 8, 0.6);
    const DefenseContext ctx{&g, &thesaurus(), &tagger(), 1};
    const DefendedSets sets = build_defended_sets(ds.corpus, ds.papers, ctx, {false, true, true});
    CHECK(sets.train.size() == 12);
    for (const auto& r : ds.corpus.records()) {
        const auto& d = sets.train.at(r.review_id + "-D");
        CHECK(d.origin == r.origin);
        CHECK_FALSE(d.parent_review_id.has_value());
    }
}

TEST_CASE("defense reports missing paper texts") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(2, 8, 0.6);
    const DefenseContext ctx{&g, &thesaurus(), &tagger(), 1};
    try {
        defend_records(ds.corpus.records(), {}, ctx);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(ds.corpus.records().front().paper_id) != std::string::npos);
    }
    CHECK_THROWS_AS(defend_records(ds.corpus.records(), ds.papers, DefenseContext{}), ArgumentError);
}
