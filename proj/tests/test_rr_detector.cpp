#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "revguard/errors.hpp"
#include "revguard/random.hpp"
#include "revguard/rr_detector.hpp"
#include "revguard/synthetic.hpp"
#include "support.hpp"

using namespace revguard;

namespace {

Gateway mock_gateway() {
    const auto& r = testing::shared_resources();
    return Gateway(testing::mock_gateway_config(), r.thesaurus, r.tagger);
}

std::vector<LabeledRR> clustered(std::size_t n, std::uint64_t seed, double ai_mean = 0.9, double human_mean = 0.3) {
    Rng rng(seed);
    std::vector<LabeledRR> out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool ai = i % 2 == 0;
        out.push_back({{rng.normal(ai ? ai_mean : human_mean, 0.02), "r" + std::to_string(i), ""}, ai});
    }
    return out;
}

double accuracy(const RRModel& m, const std::vector<LabeledRR>& set) {
    std::size_t correct = 0;
    for (const auto& s : set) correct += (predict_rr(m, s.features).label == Label::AI) == s.ai;
    return static_cast<double>(correct) / static_cast<double>(set.size());
}

const RRModel& toy_model() {
    static const RRModel m = train_rr(clustered(200, 1), clustered(60, 2), default_rr_hyperparams(3), nullptr);
    return m;
}

}  // namespace

TEST_CASE("cosine of the reference vectors") {
    CHECK(cosine_similarity(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) ==
          doctest::Approx(32.0 / (std::sqrt(14.0) * std::sqrt(77.0))).epsilon(1e-15));
    CHECK(cosine_similarity(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) ==
          doctest::Approx(0.974631846).epsilon(1e-9));
    CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    CHECK(cosine_similarity(std::vector<double>{0.3, -2, 7}, std::vector<double>{0.3, -2, 7}) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cosine_similarity(std::vector<double>{1, 1}, std::vector<double>{-1, -1}) == doctest::Approx(-1.0));
}

TEST_CASE("cosine rejects mismatched, zero and non-finite vectors") {
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), ArgumentError);
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 2}), ArgumentError);
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{std::nan(""), 1}, std::vector<double>{1, 2}),
                    ArgumentError);
}

TEST_CASE("a review identical to the regeneration has similarity one") {
    Gateway g = mock_gateway();
    ReviewRecord r;
    r.review_id = "R";
    r.venue = Venue::ICLR2022;
    const std::string paper = "A paper on contrastive pretraining for speech recognition.";
    r.text = g.regenerate_review(paper, r.venue);
    const auto f = featurize_rr(r, paper, g);
    CHECK(f.similarity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.review_id == "R");
    CHECK(f.regen_id == g.regeneration_key(paper, r.venue));
}

TEST_CASE("a review with disjoint vocabulary is dissimilar to the regeneration") {
    Gateway g = mock_gateway();
    ReviewRecord r;
    r.review_id = "R";
    r.venue = Venue::NEURIPS2022;
    r.text = "Zebras quokkas marmosets wombats lemurs ocelots tapirs okapis.";
    CHECK(featurize_rr(r, "A paper on contrastive pretraining for speech recognition.", g).similarity < 0.1);
}

TEST_CASE("AI reviews of the synthetic corpus are closer to their regenerations") {
    Gateway g = mock_gateway();
    const auto ds = make_synthetic_dataset(200, 42, 0.6);
    double ai = 0, human = 0;
    std::size_t n_ai = 0, n_human = 0;
    for (const auto& r : ds.corpus.records()) {
        const double s = featurize_rr(r, ds.papers.at(r.paper_id), g).similarity;
        if (r.origin == Origin::AI) {
            ai += s;
            ++n_ai;
        } else {
            human += s;
            ++n_human;
        }
    }
    ai /= static_cast<double>(n_ai);
    human /= static_cast<double>(n_human);
    CHECK(ai > human);
    CHECK(ai == doctest::Approx(0.697).epsilon(0.03));
    CHECK(human == doctest::Approx(0.290).epsilon(0.05));
}

TEST_CASE("separable similarities are learned perfectly") {
    CHECK(accuracy(toy_model(), clustered(100, 7)) == 1.0);
}

TEST_CASE("constant similarities give a constant prediction at the class prior") {
    std::vector<LabeledRR> train, val;
    for (std::size_t i = 0; i < 100; ++i) train.push_back({{0.5, "t", ""}, i % 10 < 7});
    for (std::size_t i = 0; i < 50; ++i) val.push_back({{0.5, "v", ""}, i % 10 < 7});
    const RRModel m = train_rr(train, val, default_rr_hyperparams(4), nullptr);
    const double acc = accuracy(m, val);
    CHECK((acc == doctest::Approx(0.7) || acc == doctest::Approx(0.3)));
}

TEST_CASE("probability never falls as similarity rises") {
    const RRModel& m = toy_model();
    double previous = -1;
    for (int i = 0; i <= 100; ++i) {
        const double p = rr_probability(m, i / 100.0);
        CHECK(p >= previous);
        previous = p;
    }
}

TEST_CASE("labels at the decision boundary follow the inclusive threshold") {
    const RRModel& m = toy_model();
    double lo = 0.0;
    double hi = 1.0;
    REQUIRE(rr_probability(m, lo) < m.decision_threshold);
    REQUIRE(rr_probability(m, hi) >= m.decision_threshold);
    while (std::nextafter(lo, hi) < hi) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        (rr_probability(m, mid) >= m.decision_threshold ? hi : lo) = mid;
    }
    CHECK(predict_rr(m, {hi, "h", ""}).label == Label::AI);
    CHECK(predict_rr(m, {lo, "l", ""}).label == Label::HUMAN);
}

TEST_CASE("predictions repeat and reject non-finite input") {
    const RRModel& m = toy_model();
    const auto a = predict_rr(m, {0.61, "r", ""});
    const auto b = predict_rr(m, {0.61, "r", ""});
    CHECK(a.probability_ai == b.probability_ai);
    CHECK(a.detector == DetectorKind::RR);
    CHECK_THROWS_AS(predict_rr(m, {std::numeric_limits<double>::infinity(), "r", ""}), ArgumentError);
}

TEST_CASE("models record their backends and survive serialisation") {
    Gateway g = mock_gateway();
    const RRModel m = train_rr(clustered(60, 1), clustered(20, 2), default_rr_hyperparams(3), &g);
    CHECK(m.embedding_model_id == g.embedding_model_id());
    CHECK(m.generation_model_id == g.generation_model_id());
    const auto dir = testing::scratch_dir("rr");
    save_rr_model(m, dir / "m.rr");
    const RRModel loaded = load_rr_model(dir / "m.rr");
    CHECK(loaded.embedding_model_id == m.embedding_model_id);
    for (int i = 0; i <= 10; ++i) CHECK(rr_probability(loaded, i / 10.0) == rr_probability(m, i / 10.0));
    CHECK_THROWS_AS(rr_model_from_json(nlohmann::json{{"format", "revguard-detector"}, {"detector", "TF"}}),
                    ParseError);
    std::filesystem::remove_all(dir);
}
