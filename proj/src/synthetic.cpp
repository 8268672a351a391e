#include "revguard/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "revguard/errors.hpp"
#include "revguard/house_style.hpp"
#include "revguard/random.hpp"
#include "revguard/text.hpp"

namespace revguard {

namespace {

// Ordinary review sentences shared by human and AI reviews.
// {A}/{A2} adjective, {N} noun, {R} adverb, {K} keyword, {d} small number.
const std::vector<std::string> kSummaryFrames = {
    "The paper studies {K} and proposes a method based on {K2}.",
    "The authors consider {K} in the setting of {K2} and report results on {K3}.",
    "This submission is about {K} with {K2}.",
    "The paper looks at {K} and tries a {A} {N} for {K2}.",
};

const std::vector<std::string> kBodyFrames = {
    "The {A} {N} in Section {d} needs more discussion.",
    "I am not sure the {N} is {A} enough for {K}.",
    "Why is the {A} {N} used for the {K} experiments?",
    "The {N} on {K} looks {A} to me.",
    "Please clarify the {A} {N} in Table {d}.",
    "The results on {K} are {A} but the {N} is {A2}.",
    "It would help to compare the {A} {N} with the work of others on {K}.",
    "Figure {d} shows a {A} {N} for {K}.",
    "The {N} in Equation {d} is {R} {A}.",
    "The authors claim that the {N} is {A}, which I doubt.",
    "My concern is the {A} {N} of the {K} part.",
    "The {K} setting is {A} and the {N} is {A2}.",
    "The {N} for {K} is {R} {A} in my view.",
    "I could not find the {A} {N} for {K} in the text.",
};

const std::vector<std::string> kQuestionFrames = {
    "How does the {N} change with {K}?",
    "Can the authors report the {A} {N} for {K}?",
    "What happens to the {N} if {K} is removed?",
};

const std::vector<std::string> kClosingFrames = {
    "In short, the {N} is {A} and the paper needs another round.",
    "My score reflects the {A} {N}.",
    "I would raise my score if the {N} were clarified.",
    "The paper is {R} {A} but the {N} on {K} is {A2}.",
};

const std::vector<std::string> kLimitationFrames = {
    "The limitations regarding {K} are {A}.",
    "The authors mention the {A} {N} as a limitation.",
    "The {N} of the method for {K} is not discussed.",
};

struct Filler {
    std::vector<double> cumulative;

    explicit Filler(std::size_t n, double exponent) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cumulative.push_back(total);
        }
        for (auto& c : cumulative) c /= total;
    }

    std::size_t draw(Rng& rng) const {
        const double u = rng.uniform();
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        return static_cast<std::size_t>(it - cumulative.begin());
    }
};

class ReviewWriter {
public:
    ReviewWriter(Rng& rng, const std::vector<std::string>& keywords, const Filler& adjectives,
                 const SyntheticOptions& options)
        : rng_(rng), keywords_(keywords), adjectives_(adjectives), options_(options) {}

    std::string sentence(const std::vector<std::string>& frames, const std::string* forced_adjective = nullptr) {
        std::string frame = rng_.pick(frames);
        if (forced_adjective != nullptr && frame.find("{A}") == std::string::npos) frame = kBodyFrames[0];
        std::string out;
        for (std::size_t i = 0; i < frame.size();) {
            if (frame[i] != '{') {
                out += frame[i++];
                continue;
            }
            const auto close = frame.find('}', i);
            const std::string slot = frame.substr(i + 1, close - i - 1);
            i = close + 1;
            if (slot == "A" && forced_adjective != nullptr) {
                out += *forced_adjective;
                forced_adjective = nullptr;
            } else if (slot == "A" || slot == "A2") {
                out += style::filler_adjectives()[adjectives_.draw(rng_)];
            } else if (slot == "N") {
                out += rng_.pick(style::filler_nouns());
            } else if (slot == "R") {
                out += rng_.pick(style::filler_adverbs());
            } else if (slot == "K") {
                out += rng_.pick(keywords_);
            } else if (slot == "K2") {
                out += keywords_[1 % keywords_.size()];
            } else if (slot == "K3") {
                out += keywords_[2 % keywords_.size()];
            } else if (slot == "d") {
                out += std::to_string(1 + rng_.index(6));
            }
        }
        return misspell(out);
    }

private:
    std::string misspell(const std::string& s) {
        static const std::map<std::string, std::string> forward = [] {
            std::map<std::string, std::string> m;
            for (const auto& [typo, word] : style::typo_corrections()) m[word] = typo;
            return m;
        }();
        std::string out;
        std::string word;
        auto flush = [&] {
            if (word.empty()) return;
            auto it = forward.find(word);
            if (it != forward.end() && rng_.bernoulli(options_.typo_rate)) {
                out += it->second;
            } else {
                out += word;
            }
            word.clear();
        };
        for (char c : s) {
            if (std::isalpha(static_cast<unsigned char>(c))) {
                word += c;
            } else {
                flush();
                out += c;
            }
        }
        flush();
        return out;
    }

    Rng& rng_;
    const std::vector<std::string>& keywords_;
    const Filler& adjectives_;
    const SyntheticOptions& options_;
};

std::string paper_text(const std::vector<std::string>& k) {
    // Keyword frequencies 6, 4, 4, 3 so keyword extraction recovers k in order.
    return "Title: " + k[0] + " meets " + k[1] + ": " + k[2] + " with " + k[3] + "\n\nAbstract. We study " + k[0] +
           " for " + k[1] + ". Existing approaches to " + k[0] + " ignore " + k[2] +
           ". We propose a method that couples " + k[0] + " with " + k[1] + " and " + k[2] + ". Experiments on " +
           k[3] + " benchmarks show that " + k[0] + " with " + k[1] + " improves over baselines. We also analyze " +
           k[2] + " and " + k[3] + " in detail, and discuss when " + k[0] + " fails.\n";
}

std::string write_review(Rng& rng, Venue venue, const std::vector<std::string>& keywords, const Filler& adjectives,
                         const SyntheticOptions& options, bool ai) {
    ReviewWriter writer(rng, keywords, adjectives, options);
    auto join = [](const std::vector<std::string>& sentences) {
        std::string out;
        for (const auto& s : sentences) {
            if (!out.empty()) out += ' ';
            out += s;
        }
        return out;
    };

    std::vector<std::string> summary{writer.sentence(kSummaryFrames)};
    if (rng.bernoulli(0.5)) summary.push_back(writer.sentence(kSummaryFrames));

    std::vector<std::string> body;
    const std::size_t n_body = 6 + rng.index(5);
    for (std::size_t i = 0; i < n_body; ++i) body.push_back(writer.sentence(kBodyFrames));
    for (const auto& alt : style::marker_alternates()) {
        if (rng.bernoulli(options.alternate_rate)) {
            body.insert(body.begin() + static_cast<long>(rng.index(body.size() + 1)), writer.sentence(kBodyFrames, &alt));
        }
    }

    const std::string closing = writer.sentence(kClosingFrames);
    std::vector<std::string> questions{writer.sentence(kQuestionFrames)};
    const std::string limitation = writer.sentence(kLimitationFrames);

    if (ai) {
        const auto& markers = style::marker_sentences();
        for (std::size_t i = 0; i < markers.size(); ++i) {
            if (rng.bernoulli(options.ai_token_bias)) {
                const auto at = static_cast<long>(rng.index(body.size() + 1));
                body.insert(body.begin() + at, style::fill_marker(markers[i], i, keywords));
            }
        }
    }

    if (venue == Venue::ICLR2022) {
        return "Summary of the paper:\n" + join(summary) + "\n\nMain review:\n" + join(body) +
               "\n\nSummary of the review:\n" + closing + "\n";
    }
    return "Summary:\n" + join(summary) + "\n\nStrengths and weaknesses:\n" + join(body) + "\n\nQuestions:\n" +
           join(questions) + "\n\nLimitations:\n" + limitation + "\n";
}

std::string paper_id_for(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "P%04zu", i + 1);
    return buf;
}

}  // namespace

SyntheticDataset make_synthetic_dataset(std::size_t n_papers, std::uint64_t seed, double ai_token_bias) {
    SyntheticOptions options;
    options.ai_token_bias = ai_token_bias;
    return make_synthetic_dataset(n_papers, seed, options);
}

SyntheticDataset make_synthetic_dataset(std::size_t n_papers, std::uint64_t seed, const SyntheticOptions& options) {
    if (n_papers < 1) throw ArgumentError("synthetic corpus needs at least one paper");
    if (!(options.ai_token_bias >= 0.0 && options.ai_token_bias <= 1.0)) {
        throw ArgumentError("ai_token_bias must lie in [0, 1]");
    }
    const Filler adjectives(style::filler_adjectives().size(), options.filler_zipf);
    const auto& pool = style::keyword_pool();

    SyntheticDataset out;
    std::vector<ReviewRecord> records;
    Rng paper_rng(seed);
    for (std::size_t i = 0; i < n_papers; ++i) {
        std::vector<std::string> keywords;
        while (keywords.size() < 4) {
            const auto& k = paper_rng.pick(pool);
            if (std::find(keywords.begin(), keywords.end(), k) == keywords.end()) keywords.push_back(k);
        }
        const std::string pid = paper_id_for(i);
        const Venue venue = i % 2 == 0 ? Venue::ICLR2022 : Venue::NEURIPS2022;
        out.papers[pid] = paper_text(keywords);

        Rng human_rng(fnv1a64(pid + "/human", seed));
        Rng ai_rng(fnv1a64(pid + "/ai", seed));

        ReviewRecord human;
        human.review_id = pid + "-H";
        human.paper_id = pid;
        human.venue = venue;
        human.origin = Origin::HUMAN;
        human.text = write_review(human_rng, venue, keywords, adjectives, options, false);
        records.push_back(std::move(human));

        ReviewRecord ai;
        ai.review_id = pid + "-A";
        ai.paper_id = pid;
        ai.venue = venue;
        ai.origin = Origin::AI;
        ai.source_model = "synthetic-house-style";
        ai.text = write_review(ai_rng, venue, keywords, adjectives, options, true);
        records.push_back(std::move(ai));
    }
    out.corpus = Corpus::from_records(std::move(records));
    return out;
}

Corpus make_synthetic_corpus(std::size_t n_papers, std::uint64_t seed, double ai_token_bias) {
    return make_synthetic_dataset(n_papers, seed, ai_token_bias).corpus;
}

}  // namespace revguard
