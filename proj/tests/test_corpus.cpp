#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "revguard/corpus.hpp"
#include "revguard/errors.hpp"
#include "revguard/house_style.hpp"
#include "revguard/io.hpp"
#include "revguard/synthetic.hpp"
#include "support.hpp"

using namespace revguard;

namespace {

std::string record_line(const std::string& id, const std::string& origin, const std::string& parent = "") {
    std::string line = R"({"review_id":")" + id + R"(","paper_id":"P1","venue":"ICLR2022","origin":")" + origin +
                       R"(","source_model":null,"text":"Some review text.")";
    if (!parent.empty()) line += R"(,"parent_review_id":")" + parent + "\"";
    return line + "}\n";
}

std::size_t count_substring(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

std::set<std::string> word_set(const std::string& text) {
    const auto w = style::words(text);
    return {w.begin(), w.end()};
}

}  // namespace

TEST_CASE("two valid records load into a corpus of size two") {
    const Corpus c = parse_corpus(record_line("R1", "HUMAN") + record_line("R2", "AI"));
    CHECK(c.size() == 2);
    CHECK(c.at("R2").origin == Origin::AI);
    CHECK(c.is_ai(c.at("R2")));
    CHECK_FALSE(c.is_ai(c.at("R1")));
}

TEST_CASE("duplicate review ids are rejected with the id in the message") {
    try {
        parse_corpus(record_line("R1", "HUMAN") + record_line("R1", "AI"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("R1") != std::string::npos);
    }
}

TEST_CASE("derived records need a resolvable parent") {
    CHECK_THROWS_AS(parse_corpus(record_line("R1", "AI_ATTACKED")), ValidationError);
    CHECK_THROWS_AS(parse_corpus(record_line("R1", "AI_PARAPHRASED", "missing")), ValidationError);
    const Corpus c = parse_corpus(record_line("R1", "AI") + record_line("R1-D", "DEFENDED_VARIANT", "R1"));
    CHECK(c.is_ai(c.at("R1-D")));
}

TEST_CASE("blank text and malformed lines are rejected") {
    CHECK_THROWS_AS(parse_corpus(R"({"review_id":"R1","paper_id":"P","venue":"ICLR2022","origin":"HUMAN","text":"  "})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_corpus("{not json}\n"), ParseError);
    CHECK_THROWS_AS(parse_corpus(R"({"review_id":"R1","paper_id":"P","venue":"X","origin":"HUMAN","text":"t"})"),
                    ParseError);
}

TEST_CASE("unknown fields survive a round trip") {
    const std::string line =
        R"({"review_id":"R1","paper_id":"P1","venue":"NEURIPS2022","origin":"HUMAN","text":"Fine.","rating":6})";
    const Corpus c = parse_corpus(line + "\n");
    CHECK(c.at("R1").extra.at("rating") == 6);
    const Corpus again = parse_corpus(to_jsonl(c));
    CHECK(to_jsonl(again) == to_jsonl(c));
}

TEST_CASE("synthetic corpus of 40 records has the origin counts found by line counting") {
    const auto dir = testing::scratch_dir("corpus");
    const auto path = dir / "c.jsonl";
    save_corpus(make_synthetic_corpus(20, 3, 0.6), path);
    const std::string body = io::read_file(path);
    CHECK(count_substring(body, "\n") == 40);
    const auto human = count_substring(body, R"("origin":"HUMAN")");
    const auto ai = count_substring(body, R"("origin":"AI")");
    const Corpus c = load_corpus(path);
    CHECK(c.origin_counts().at(Origin::HUMAN) == human);
    CHECK(c.origin_counts().at(Origin::AI) == ai);
    CHECK(human == 20);
    CHECK(ai == 20);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gzip corpora load transparently") {
    const auto dir = testing::scratch_dir("gz");
    const Corpus c = make_synthetic_corpus(3, 1, 0.6);
    save_corpus(c, dir / "c.jsonl.gz");
    CHECK(to_jsonl(load_corpus(dir / "c.jsonl.gz")) == to_jsonl(c));
    std::filesystem::remove_all(dir);
}

TEST_CASE("ten papers split 8/1/1 by paper group") {
    const Corpus c = make_synthetic_corpus(10, 5, 0.6);
    const CorpusSplit s = split_corpus(c, {0.8, 0.1, 0.1}, 7);
    auto papers = [&](const std::set<std::string>& ids) {
        std::set<std::string> p;
        for (const auto& id : ids) p.insert(c.at(id).paper_id);
        return p;
    };
    CHECK(papers(s.train).size() == 8);
    CHECK(papers(s.validation).size() == 1);
    CHECK(papers(s.test).size() == 1);
    CHECK(s.train.size() + s.validation.size() + s.test.size() == c.size());

    const CorpusSplit again = split_corpus(c, {0.8, 0.1, 0.1}, 7);
    CHECK(again.train == s.train);
    CHECK(again.validation == s.validation);
    CHECK(again.test == s.test);
}

TEST_CASE("large split sizes match a recount and keep papers together") {
    const Corpus c = make_synthetic_corpus(1000, 11, 0.6);
    const CorpusSplit s = split_corpus(c, parse_ratios("0.7,0.15,0.15"), 3);
    std::map<std::string, int> partition_of_paper;
    std::map<int, std::set<std::string>> papers;
    int part = 0;
    for (const auto* ids : {&s.train, &s.validation, &s.test}) {
        for (const auto& id : *ids) {
            const auto& paper = c.at(id).paper_id;
            auto [it, inserted] = partition_of_paper.emplace(paper, part);
            CHECK(it->second == part);
            papers[part].insert(paper);
        }
        ++part;
    }
    CHECK(std::abs(static_cast<int>(papers[0].size()) - 700) <= 1);
    CHECK(std::abs(static_cast<int>(papers[1].size()) - 150) <= 1);
    CHECK(std::abs(static_cast<int>(papers[2].size()) - 150) <= 1);
    CHECK(partition_of_paper.size() == 1000);
}

TEST_CASE("split arguments are validated") {
    const Corpus c = make_synthetic_corpus(4, 1, 0.5);
    CHECK_THROWS_AS(split_corpus(c, {0.5, 0.1, 0.1}, 1), ArgumentError);
    CHECK_THROWS_AS(split_corpus(Corpus{}, {}, 1), ArgumentError);
    CHECK_THROWS_AS(parse_ratios("0.8,0.2"), ArgumentError);
}

TEST_CASE("bias 1 plants every marker in the AI review and none in the human review") {
    const Corpus c = make_synthetic_corpus(1, 9, 1.0);
    REQUIRE(c.size() == 2);
    const auto& ai = c.records()[0].origin == Origin::AI ? c.records()[0] : c.records()[1];
    const auto& human = c.records()[0].origin == Origin::AI ? c.records()[1] : c.records()[0];
    const auto ai_words = word_set(ai.text);
    const auto human_words = word_set(human.text);
    for (const auto& m : style::marker_sentences()) {
        CHECK_MESSAGE(ai_words.count(m.marker) == 1, m.marker);
        CHECK_MESSAGE(human_words.count(m.marker) == 0, m.marker);
    }
}

TEST_CASE("bias 0 leaves no marker in either review") {
    const Corpus c = make_synthetic_corpus(1, 9, 0.0);
    for (const auto& r : c.records()) {
        const auto w = word_set(r.text);
        for (const auto& m : style::marker_sentences()) CHECK_MESSAGE(w.count(m.marker) == 0, m.marker);
    }
}

TEST_CASE("marker document frequency is higher among AI reviews") {
    const Corpus c = make_synthetic_corpus(200, 42, 0.6);
    for (const auto& m : style::marker_sentences()) {
        std::size_t ai = 0;
        std::size_t human = 0;
        for (const auto& r : c.records()) {
            if (word_set(r.text).count(m.marker)) ++(r.origin == Origin::AI ? ai : human);
        }
        CHECK_MESSAGE(ai > human, m.marker);
    }
}

TEST_CASE("synthetic generation is deterministic and validates its bias") {
    CHECK(to_jsonl(make_synthetic_corpus(5, 2, 0.6)) == to_jsonl(make_synthetic_corpus(5, 2, 0.6)));
    CHECK(to_jsonl(make_synthetic_corpus(5, 2, 0.6)) != to_jsonl(make_synthetic_corpus(5, 3, 0.6)));
    CHECK_THROWS_AS(make_synthetic_corpus(5, 2, 1.5), ArgumentError);
}

TEST_CASE("paper texts round trip through a directory") {
    const auto dir = testing::scratch_dir("papers");
    const auto ds = make_synthetic_dataset(3, 4, 0.6);
    save_papers(ds.papers, dir);
    CHECK(load_papers(dir) == ds.papers);
    CHECK_THROWS_AS(load_papers(dir / "absent"), ConfigError);
    std::filesystem::remove_all(dir);
}
