#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

namespace revguard {

struct TrainHyperparams {
    std::vector<std::size_t> hidden{16, 8};
    double dropout = 0.1;
    std::size_t batch_size = 32;
    std::size_t epochs = 20;
    double learning_rate = 1e-3;
    double weight_decay = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    /// Shift and scale inputs by training-set mean and deviation.
    bool standardize = true;
};

nlohmann::json to_json(const TrainHyperparams& hp);
TrainHyperparams hyperparams_from_json(const nlohmann::json& j);

struct Sample {
    std::vector<double> x;
    bool ai = false;
};

/// Feed-forward network with rectifier hidden layers and a sigmoid output.
class Mlp {
public:
    struct Layer {
        std::vector<double> weights;  // out x in, row-major
        std::vector<double> bias;
        std::size_t in = 0;
        std::size_t out = 0;
    };

    Mlp() = default;
    Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden, std::uint64_t seed);

    std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }

    /// Probability of the positive (AI) class; inference mode, no dropout.
    double predict(const std::vector<double>& x) const;

    nlohmann::json to_json() const;
    static Mlp from_json(const nlohmann::json& j);

private:
    friend class MlpTrainer;
    std::vector<Layer> layers_;
    std::vector<double> input_mean_;
    std::vector<double> input_scale_;
};

struct EpochLog {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_f1 = 0.0;
    double val_loss = 0.0;
};

struct TrainingResult {
    Mlp model;
    std::size_t best_epoch = 0;
    double best_val_f1 = 0.0;
    std::vector<EpochLog> history;
};

/// Mini-batch training with binary cross-entropy and Adam (L2 penalty added
/// to the gradient). Returns the network of the epoch with the best
/// validation F1; ties go to the lower validation loss, then the earlier
/// epoch. Throws TrainingError unless the training set contains both labels.
TrainingResult train_mlp(const std::vector<Sample>& train, const std::vector<Sample>& validation,
                         const TrainHyperparams& hp, double threshold = 0.5);

}  // namespace revguard
