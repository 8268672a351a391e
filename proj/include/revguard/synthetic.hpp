#pragma once

#include <cstdint>

#include "revguard/corpus.hpp"

namespace revguard {

struct SyntheticOptions {
    /// Probability that an AI review carries each characteristic sentence.
    double ai_token_bias = 0.6;
    /// Zipf exponent of filler-adjective usage.
    double filler_zipf = 0.1;
    /// Per-review probability of using each rare alternate adjective.
    double alternate_rate = 0.025;
    /// Probability that a word with a known misspelling is misspelt
    /// (ordinary sentences only).
    double typo_rate = 0.15;
};

struct SyntheticDataset {
    Corpus corpus;
    PaperTexts papers;
};

/// One HUMAN and one AI review per synthetic paper, plus the paper texts.
/// Deterministic for a fixed seed. Papers alternate between ICLR2022 and
/// NEURIPS2022.
SyntheticDataset make_synthetic_dataset(std::size_t n_papers, std::uint64_t seed, double ai_token_bias);
SyntheticDataset make_synthetic_dataset(std::size_t n_papers, std::uint64_t seed, const SyntheticOptions& options);

Corpus make_synthetic_corpus(std::size_t n_papers, std::uint64_t seed, double ai_token_bias);

}  // namespace revguard
