#include <set>
#include <string>

#include "doctest.h"
#include "revguard/attacks.hpp"
#include "revguard/errors.hpp"
#include "revguard/house_style.hpp"
#include "revguard/synthetic.hpp"
#include "revguard/text.hpp"
#include "revguard/tf_detector.hpp"
#include "support.hpp"

using namespace revguard;

namespace {

const Tagger& tagger() { return *testing::shared_resources().tagger; }

/// AI side: "better" and "various" in every review, their attested
/// replacements in some; human side: unrelated adjectives.
std::shared_ptr<const TokenProbTable> crafted_table() {
    std::vector<std::set<std::string>> ai;
    for (int i = 0; i < 10; ++i) {
        std::set<std::string> doc{"better", "various"};
        if (i < 3) doc.insert("improved");
        if (i < 2) doc.insert("numerous");
        ai.push_back(doc);
    }
    return std::make_shared<TokenProbTable>(
        build_prob_table_from_tokens(ai, {{"plain"}, {"unclear"}}, PosClass::ADJECTIVE));
}

AttackConfig crafted_config() {
    AttackConfig cfg;
    cfg.table = crafted_table();
    cfg.thesaurus = testing::shared_resources().thesaurus;
    cfg.k = 100;
    return cfg;
}

ReviewRecord ai_review(const std::string& text) {
    ReviewRecord r;
    r.review_id = "R1";
    r.paper_id = "P1";
    r.venue = Venue::ICLR2022;
    r.origin = Origin::AI;
    r.text = text;
    return r;
}

}  // namespace

TEST_CASE("better and various become improved and numerous") {
    const auto out = token_attack(ai_review("The results are significantly better than various baselines."),
                                  crafted_config(), tagger());
    CHECK(out.attacked.text == "The results are significantly improved than numerous baselines.");
    REQUIRE(out.substitutions.size() == 2);
    CHECK(out.substitutions[0].old_token == "better");
    CHECK(out.substitutions[0].new_token == "improved");
    CHECK(out.substitutions[0].position == 30);
    CHECK(out.substitutions[1].old_token == "various");
    CHECK(out.substitutions[1].new_token == "numerous");
    CHECK(out.attacked.review_id == "R1-ATK");
    CHECK(out.attacked.origin == Origin::AI_ATTACKED);
    CHECK(out.attacked.parent_review_id == "R1");
    CHECK(out.attacked.paper_id == "P1");
}

TEST_CASE("initial capitals are kept") {
    const auto out = attack_text("Better results appear across various settings.", crafted_config(), tagger());
    CHECK(out.text == "Improved results appear across numerous settings.");
}

TEST_CASE("a review without planned tokens is left alone") {
    const std::string text = "The method is plain and the writing is unclear.";
    const auto out = token_attack(ai_review(text), crafted_config(), tagger());
    CHECK(out.attacked.text == text);
    CHECK(out.substitutions.empty());
}

TEST_CASE("only corpus-attested synonyms are planned") {
    AttackConfig cfg = crafted_config();
    const auto plan = attack_plan(cfg);
    CHECK(plan.at("better") == "improved");
    CHECK(plan.at("various") == "numerous");

    cfg.require_corpus_attested = false;
    const auto loose = attack_plan(cfg);
    CHECK(loose.at("better") == cfg.thesaurus->synonyms("better", PosClass::ADJECTIVE).front());
}

TEST_CASE("k limits the planned tokens") {
    AttackConfig cfg = crafted_config();
    cfg.k = 1;
    const auto plan = attack_plan(cfg);
    CHECK(plan.size() == 1);
    CHECK(plan.count("better") == 1);
    cfg.k = 2;
    CHECK(attack_plan(cfg).size() == 2);
    CHECK(attack_plan(cfg).count("improved") == 0);
}

TEST_CASE("attack configuration and inputs are checked") {
    AttackConfig cfg = crafted_config();
    cfg.k = 0;
    CHECK_THROWS_AS(validate(cfg), ArgumentError);
    cfg = crafted_config();
    cfg.pos_class = PosClass::NOUN;
    CHECK_THROWS_AS(validate(cfg), ArgumentError);
    cfg = crafted_config();
    cfg.thesaurus = nullptr;
    CHECK_THROWS_AS(attack_plan(cfg), ArgumentError);

    ReviewRecord human = ai_review("A better paper.");
    human.origin = Origin::HUMAN;
    CHECK_THROWS_AS(token_attack(human, crafted_config(), tagger()), ArgumentError);
}

TEST_CASE("attacked synthetic AI reviews lose AI probability mass") {
    const Corpus c = make_synthetic_corpus(100, 42, 0.6);
    std::vector<ReviewRecord> ai, human;
    for (const auto& r : c.records()) (r.origin == Origin::AI ? ai : human).push_back(r);
    AttackConfig cfg;
    cfg.table = std::make_shared<TokenProbTable>(build_prob_table(ai, human, PosClass::ADJECTIVE, tagger()));
    cfg.thesaurus = testing::shared_resources().thesaurus;
    std::size_t attacked = 0;
    for (const auto& r : ai) {
        const auto out = token_attack(r, cfg, tagger());
        if (out.substitutions.empty()) continue;
        ++attacked;
        CHECK_MESSAGE(featurize_tf(out.attacked, *cfg.table, tagger()).p_ai_sum <
                          featurize_tf(r, *cfg.table, tagger()).p_ai_sum,
                      r.review_id);
    }
    CHECK(attacked == ai.size());
}

TEST_CASE("substitution log has one line per substitution") {
    const auto out = token_attack(ai_review("The results are significantly better than various baselines."),
                                  crafted_config(), tagger());
    const std::string log = substitution_log({{out.attacked.review_id, out.substitutions}});
    CHECK(log ==
          "{\"review_id\":\"R1-ATK\",\"position\":30,\"old\":\"better\",\"new\":\"improved\"}\n"
          "{\"review_id\":\"R1-ATK\",\"position\":42,\"old\":\"various\",\"new\":\"numerous\"}\n");
}

TEST_CASE("a second attack only touches replacements that are themselves top-k") {
    const Corpus c = make_synthetic_corpus(100, 42, 0.6);
    std::vector<ReviewRecord> ai, human;
    for (const auto& r : c.records()) (r.origin == Origin::AI ? ai : human).push_back(r);
    AttackConfig cfg;
    cfg.table = std::make_shared<TokenProbTable>(build_prob_table(ai, human, PosClass::ADJECTIVE, tagger()));
    cfg.thesaurus = testing::shared_resources().thesaurus;
    const auto top = top_k_tokens(*cfg.table, CorpusSide::AI, cfg.k);
    const std::set<std::string> top_set(top.begin(), top.end());
    for (const auto& r : ai) {
        const auto once = attack_text(r.text, cfg, tagger());
        CHECK(style::words(once.text).size() == style::words(r.text).size());
        std::set<std::string> introduced;
        for (const auto& s : once.substitutions) introduced.insert(text::to_lower(s.new_token));
        for (const auto& s : attack_text(once.text, cfg, tagger()).substitutions) {
            const std::string old_lower = text::to_lower(s.old_token);
            CHECK_MESSAGE(introduced.count(old_lower) == 1, r.review_id << " " << s.old_token);
            CHECK(top_set.count(old_lower) == 1);
        }
    }
}
