#include "revguard/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "revguard/errors.hpp"
#include "revguard/random.hpp"

namespace revguard {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double f1_at(const std::vector<double>& probs, const std::vector<Sample>& samples, double threshold) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const bool predicted = probs[i] >= threshold;
        if (predicted && samples[i].ai) ++tp;
        if (predicted && !samples[i].ai) ++fp;
        if (!predicted && samples[i].ai) ++fn;
    }
    if (tp == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

nlohmann::json vec_json(const std::vector<double>& v) { return nlohmann::json(v); }

}  // namespace

nlohmann::json to_json(const TrainHyperparams& hp) {
    return {
        {"hidden", hp.hidden},           {"dropout", hp.dropout},   {"batch_size", hp.batch_size},
        {"epochs", hp.epochs},           {"learning_rate", hp.learning_rate},
        {"weight_decay", hp.weight_decay}, {"beta1", hp.beta1},     {"beta2", hp.beta2},
        {"epsilon", hp.epsilon},         {"seed", hp.seed},         {"standardize", hp.standardize},
    };
}

TrainHyperparams hyperparams_from_json(const nlohmann::json& j) {
    TrainHyperparams hp;
    hp.hidden = j.value("hidden", hp.hidden);
    hp.dropout = j.value("dropout", hp.dropout);
    hp.batch_size = j.value("batch_size", hp.batch_size);
    hp.epochs = j.value("epochs", hp.epochs);
    hp.learning_rate = j.value("learning_rate", hp.learning_rate);
    hp.weight_decay = j.value("weight_decay", hp.weight_decay);
    hp.beta1 = j.value("beta1", hp.beta1);
    hp.beta2 = j.value("beta2", hp.beta2);
    hp.epsilon = j.value("epsilon", hp.epsilon);
    hp.seed = j.value("seed", hp.seed);
    hp.standardize = j.value("standardize", hp.standardize);
    return hp;
}

Mlp::Mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden, std::uint64_t seed) {
    if (input_dim == 0) throw ArgumentError("network input dimension must be positive");
    Rng rng(seed);
    std::size_t in = input_dim;
    auto sizes = hidden;
    sizes.push_back(1);
    for (auto out : sizes) {
        if (out == 0) throw ArgumentError("hidden layer sizes must be positive");
        Layer layer;
        layer.in = in;
        layer.out = out;
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        layer.weights.resize(in * out);
        layer.bias.resize(out);
        for (auto& w : layer.weights) w = (2.0 * rng.uniform() - 1.0) * bound;
        for (auto& b : layer.bias) b = (2.0 * rng.uniform() - 1.0) * bound;
        layers_.push_back(std::move(layer));
        in = out;
    }
    input_mean_.assign(input_dim, 0.0);
    input_scale_.assign(input_dim, 1.0);
}

double Mlp::predict(const std::vector<double>& x) const {
    if (x.size() != input_dim()) {
        throw ArgumentError("network expects " + std::to_string(input_dim()) + " inputs, got " +
                            std::to_string(x.size()));
    }
    std::vector<double> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = (x[i] - input_mean_[i]) / input_scale_[i];
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto& layer = layers_[l];
        std::vector<double> z(layer.out);
        for (std::size_t o = 0; o < layer.out; ++o) {
            double s = layer.bias[o];
            for (std::size_t i = 0; i < layer.in; ++i) s += layer.weights[o * layer.in + i] * a[i];
            z[o] = (l + 1 < layers_.size()) ? std::max(0.0, s) : s;
        }
        a = std::move(z);
    }
    return sigmoid(a[0]);
}

nlohmann::json Mlp::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : layers_) {
        layers.push_back({{"in", l.in}, {"out", l.out}, {"weights", vec_json(l.weights)}, {"bias", vec_json(l.bias)}});
    }
    return {{"input_mean", input_mean_}, {"input_scale", input_scale_}, {"layers", layers}};
}

Mlp Mlp::from_json(const nlohmann::json& j) {
    Mlp m;
    try {
        m.input_mean_ = j.at("input_mean").get<std::vector<double>>();
        m.input_scale_ = j.at("input_scale").get<std::vector<double>>();
        std::size_t expected_in = m.input_mean_.size();
        for (const auto& lj : j.at("layers")) {
            Layer l;
            l.in = lj.at("in").get<std::size_t>();
            l.out = lj.at("out").get<std::size_t>();
            l.weights = lj.at("weights").get<std::vector<double>>();
            l.bias = lj.at("bias").get<std::vector<double>>();
            if (l.in != expected_in || l.weights.size() != l.in * l.out || l.bias.size() != l.out) {
                throw ParseError("inconsistent layer shapes");
            }
            expected_in = l.out;
            m.layers_.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed network: ") + e.what());
    }
    if (m.layers_.empty() || m.layers_.back().out != 1 || m.input_scale_.size() != m.input_mean_.size()) {
        throw ParseError("malformed network: bad output layer or input normalisation");
    }
    return m;
}

class MlpTrainer {
public:
    MlpTrainer(Mlp& net, const TrainHyperparams& hp) : net_(net), hp_(hp), rng_(fnv1a64("dropout", hp.seed)) {
        for (const auto& l : net_.layers_) {
            m_w_.emplace_back(l.weights.size(), 0.0);
            v_w_.emplace_back(l.weights.size(), 0.0);
            m_b_.emplace_back(l.bias.size(), 0.0);
            v_b_.emplace_back(l.bias.size(), 0.0);
            g_w_.emplace_back(l.weights.size(), 0.0);
            g_b_.emplace_back(l.bias.size(), 0.0);
        }
    }

    double step(const std::vector<Sample>& data, const std::vector<std::size_t>& batch) {
        for (auto& g : g_w_) std::fill(g.begin(), g.end(), 0.0);
        for (auto& g : g_b_) std::fill(g.begin(), g.end(), 0.0);
        const auto& layers = net_.layers_;
        const std::size_t n_layers = layers.size();
        double loss = 0.0;

        for (auto idx : batch) {
            const auto& sample = data[idx];
            // Forward pass, keeping activations and dropout masks.
            std::vector<std::vector<double>> acts(n_layers + 1);
            std::vector<std::vector<double>> masks(n_layers);
            acts[0].resize(sample.x.size());
            for (std::size_t i = 0; i < sample.x.size(); ++i) {
                acts[0][i] = (sample.x[i] - net_.input_mean_[i]) / net_.input_scale_[i];
            }
            double logit = 0.0;
            for (std::size_t l = 0; l < n_layers; ++l) {
                const auto& layer = layers[l];
                std::vector<double> out(layer.out);
                for (std::size_t o = 0; o < layer.out; ++o) {
                    double s = layer.bias[o];
                    for (std::size_t i = 0; i < layer.in; ++i) s += layer.weights[o * layer.in + i] * acts[l][i];
                    out[o] = s;
                }
                if (l + 1 < n_layers) {
                    masks[l].assign(layer.out, 1.0);
                    for (std::size_t o = 0; o < layer.out; ++o) {
                        out[o] = std::max(0.0, out[o]);
                        if (hp_.dropout > 0.0) {
                            masks[l][o] = rng_.bernoulli(hp_.dropout) ? 0.0 : 1.0 / (1.0 - hp_.dropout);
                            out[o] *= masks[l][o];
                        }
                    }
                } else {
                    logit = out[0];
                }
                acts[l + 1] = std::move(out);
            }
            const double y = sample.ai ? 1.0 : 0.0;
            loss += softplus(logit) - y * logit;

            // Backward pass.
            std::vector<double> delta{sigmoid(logit) - y};
            for (std::size_t l = n_layers; l-- > 0;) {
                const auto& layer = layers[l];
                for (std::size_t o = 0; o < layer.out; ++o) {
                    g_b_[l][o] += delta[o];
                    for (std::size_t i = 0; i < layer.in; ++i) g_w_[l][o * layer.in + i] += delta[o] * acts[l][i];
                }
                if (l == 0) break;
                std::vector<double> prev(layer.in, 0.0);
                for (std::size_t i = 0; i < layer.in; ++i) {
                    double s = 0.0;
                    for (std::size_t o = 0; o < layer.out; ++o) s += layer.weights[o * layer.in + i] * delta[o];
                    // acts[l] is post-ReLU and post-dropout; zero where either zeroed it.
                    prev[i] = acts[l][i] > 0.0 ? s * masks[l - 1][i] : 0.0;
                }
                delta = std::move(prev);
            }
        }

        const double scale = 1.0 / static_cast<double>(batch.size());
        ++t_;
        const double bc1 = 1.0 - std::pow(hp_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(hp_.beta2, static_cast<double>(t_));
        auto update = [&](std::vector<double>& params, std::vector<double>& grad, std::vector<double>& m,
                          std::vector<double>& v) {
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double g = grad[i] * scale + hp_.weight_decay * params[i];
                m[i] = hp_.beta1 * m[i] + (1.0 - hp_.beta1) * g;
                v[i] = hp_.beta2 * v[i] + (1.0 - hp_.beta2) * g * g;
                const double m_hat = m[i] / bc1;
                const double v_hat = v[i] / bc2;
                params[i] -= hp_.learning_rate * m_hat / (std::sqrt(v_hat) + hp_.epsilon);
            }
        };
        for (std::size_t l = 0; l < n_layers; ++l) {
            update(net_.layers_[l].weights, g_w_[l], m_w_[l], v_w_[l]);
            update(net_.layers_[l].bias, g_b_[l], m_b_[l], v_b_[l]);
        }
        return loss;
    }

    static void fit_normalisation(Mlp& net, const std::vector<Sample>& data, bool standardize) {
        const std::size_t d = net.input_dim();
        net.input_mean_.assign(d, 0.0);
        net.input_scale_.assign(d, 1.0);
        if (!standardize) return;
        for (std::size_t k = 0; k < d; ++k) {
            double mean = 0.0;
            for (const auto& s : data) mean += s.x[k];
            mean /= static_cast<double>(data.size());
            double var = 0.0;
            for (const auto& s : data) var += (s.x[k] - mean) * (s.x[k] - mean);
            var /= static_cast<double>(data.size());
            net.input_mean_[k] = mean;
            net.input_scale_[k] = var > 1e-24 ? std::sqrt(var) : 1.0;
        }
    }

private:
    Mlp& net_;
    const TrainHyperparams& hp_;
    Rng rng_;
    std::size_t t_ = 0;
    std::vector<std::vector<double>> m_w_, v_w_, m_b_, v_b_, g_w_, g_b_;
};

TrainingResult train_mlp(const std::vector<Sample>& train, const std::vector<Sample>& validation,
                         const TrainHyperparams& hp, double threshold) {
    if (train.empty()) throw TrainingError("training set is empty");
    const bool has_ai = std::any_of(train.begin(), train.end(), [](const Sample& s) { return s.ai; });
    const bool has_human = std::any_of(train.begin(), train.end(), [](const Sample& s) { return !s.ai; });
    if (!has_ai || !has_human) throw TrainingError("training set must contain both AI and human samples");
    const std::size_t dim = train.front().x.size();
    for (const auto& s : train) {
        if (s.x.size() != dim) throw TrainingError("training samples have inconsistent dimensions");
    }
    for (const auto& s : validation) {
        if (s.x.size() != dim) throw TrainingError("validation samples have inconsistent dimensions");
    }
    if (hp.batch_size == 0 || hp.epochs == 0) throw TrainingError("batch size and epochs must be positive");
    if (hp.dropout < 0.0 || hp.dropout >= 1.0) throw TrainingError("dropout must lie in [0, 1)");

    Mlp net(dim, hp.hidden, fnv1a64("init", hp.seed));
    MlpTrainer::fit_normalisation(net, train, hp.standardize);
    MlpTrainer trainer(net, hp);
    Rng order_rng(fnv1a64("order", hp.seed));
    // Model selection falls back to the training set when no validation data exist.
    const auto& select_on = validation.empty() ? train : validation;

    TrainingResult result;
    bool have_best = false;
    double best_val_loss = 0.0;
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
        order_rng.shuffle(order);
        double loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
            const std::size_t end = std::min(order.size(), start + hp.batch_size);
            std::vector<std::size_t> batch(order.begin() + static_cast<long>(start), order.begin() + static_cast<long>(end));
            loss += trainer.step(train, batch);
        }
        std::vector<double> probs;
        probs.reserve(select_on.size());
        for (const auto& s : select_on) probs.push_back(net.predict(s.x));
        const double f1 = f1_at(probs, select_on, threshold);
        double val_loss = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double p = std::clamp(probs[i], 1e-12, 1.0 - 1e-12);
            val_loss -= select_on[i].ai ? std::log(p) : std::log(1.0 - p);
        }
        val_loss /= static_cast<double>(select_on.size());
        result.history.push_back({epoch, loss / static_cast<double>(train.size()), f1, val_loss});
        if (!have_best || f1 > result.best_val_f1 || (f1 == result.best_val_f1 && val_loss < best_val_loss)) {
            have_best = true;
            best_val_loss = val_loss;
            result.best_val_f1 = f1;
            result.best_epoch = epoch;
            result.model = net;
        }
    }
    return result;
}

}  // namespace revguard
