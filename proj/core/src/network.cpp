#include "nanodesign/network.hpp"

#include <cmath>
#include <random>

#include "nanodesign/errors.hpp"
#include "nanodesign/parallel.hpp"

namespace nanodesign {
namespace {

constexpr Eigen::Index kChunkColumns = 128;

Eigen::MatrixXd apply_selu(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return selu(v); });
}

Eigen::MatrixXd affine(const DenseLayer& layer, const Eigen::MatrixXd& a) {
    Eigen::MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    return z;
}

void check_finite(const Eigen::MatrixXd& m, int channel, std::size_t layer) {
    if (!m.allFinite()) {
        throw NumericError("non-finite activation in channel " + std::to_string(channel) +
                           ", layer " + std::to_string(layer));
    }
}

Eigen::MatrixXd channel_forward(const std::vector<DenseLayer>& layers, const Eigen::MatrixXd& x,
                                int channel) {
    Eigen::MatrixXd a = x;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        a = apply_selu(affine(layers[l], a));
        check_finite(a, channel, l);
    }
    Eigen::MatrixXd y = affine(layers.back(), a);
    check_finite(y, channel, layers.size() - 1);
    return y;
}

// Adds d(sum_j sum_i w_i (y_ij - t_ij)^2)/d(params) of one channel to `grad`
// when given, the same loss to `loss` and, if requested, the input gradient to
// `input_grad`.
void channel_backward(const std::vector<DenseLayer>& layers, const Eigen::MatrixXd& x,
                      const Eigen::Ref<const Eigen::MatrixXd>& target,
                      const Eigen::Ref<const Eigen::VectorXd>& weights, int channel,
                      std::vector<DenseLayer>* grad, double& loss, Eigen::MatrixXd* input_grad) {
    const std::size_t depth = layers.size();
    std::vector<Eigen::MatrixXd> acts(depth);  // input to layer l
    std::vector<Eigen::MatrixXd> pre(depth - 1);
    acts[0] = x;
    for (std::size_t l = 0; l + 1 < depth; ++l) {
        pre[l] = affine(layers[l], acts[l]);
        acts[l + 1] = apply_selu(pre[l]);
        check_finite(acts[l + 1], channel, l);
    }
    const Eigen::MatrixXd y = affine(layers.back(), acts.back());
    check_finite(y, channel, depth - 1);

    const Eigen::MatrixXd residual = y - target;
    loss += (residual.array().square().colwise() * weights.array()).sum();
    Eigen::MatrixXd delta = 2.0 * (residual.array().colwise() * weights.array()).matrix();

    for (std::size_t l = depth; l-- > 0;) {
        if (grad != nullptr) {
            (*grad)[l].weight.noalias() += delta * acts[l].transpose();
            (*grad)[l].bias += delta.rowwise().sum();
        }
        if (l == 0 && input_grad == nullptr) break;
        Eigen::MatrixXd back = layers[l].weight.transpose() * delta;
        if (l == 0) {
            *input_grad += back;
            break;
        }
        // selu'(z) = selu(z) + lambda * alpha for z <= 0, so reuse the stored activation.
        delta = back.array() * (pre[l - 1].array() > 0.0)
                                   .select(kSeluLambda, acts[l].array() + kSeluLambda * kSeluAlpha);
    }
}

}  // namespace

std::string to_string(ArchitectureKind kind) {
    return kind == ArchitectureKind::TwoChannel ? "tcnn" : "fcnn";
}

ArchitectureKind parse_architecture_kind(const std::string& text) {
    if (text == "tcnn") return ArchitectureKind::TwoChannel;
    if (text == "fcnn") return ArchitectureKind::SingleChannel;
    throw ArgumentError("unknown architecture '" + text + "' (expected tcnn or fcnn)");
}

Architecture Architecture::tcnn(int input_dim, int output_dim, int hidden_layers,
                                int hidden_width) {
    return {ArchitectureKind::TwoChannel, input_dim, hidden_layers, hidden_width, output_dim};
}

Architecture Architecture::fcnn(int input_dim, int output_dim, int hidden_layers,
                                int hidden_width) {
    return {ArchitectureKind::SingleChannel, input_dim, hidden_layers, hidden_width, output_dim};
}

void Architecture::validate() const {
    if (input_dim < 1 || hidden_layers < 1 || hidden_width < 1 || output_dim < 1) {
        throw ArgumentError("architecture dimensions and layer counts must be at least 1");
    }
    if (kind == ArchitectureKind::TwoChannel && output_dim % 2 != 0) {
        throw ArgumentError("two-channel network needs an even output dimension");
    }
}

std::size_t Parameters::count() const {
    std::size_t n = 0;
    for (const auto& ch : channels) {
        for (const auto& l : ch) n += l.weight.size() + l.bias.size();
    }
    return n;
}

bool Parameters::all_finite() const {
    for (const auto& ch : channels) {
        for (const auto& l : ch) {
            if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
        }
    }
    return true;
}

Parameters Parameters::zeros_like() const {
    Parameters out;
    out.channels.reserve(channels.size());
    for (const auto& ch : channels) {
        auto& dst = out.channels.emplace_back();
        for (const auto& l : ch) {
            dst.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                           Eigen::VectorXd::Zero(l.bias.size())});
        }
    }
    return out;
}

Parameters& Parameters::operator+=(const Parameters& other) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
        for (std::size_t l = 0; l < channels[c].size(); ++l) {
            channels[c][l].weight += other.channels[c][l].weight;
            channels[c][l].bias += other.channels[c][l].bias;
        }
    }
    return *this;
}

std::vector<double> Parameters::flatten() const {
    std::vector<double> flat;
    flat.reserve(count());
    for (const auto& ch : channels) {
        for (const auto& l : ch) {
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat.push_back(l.weight(r, c));
            }
            for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat.push_back(l.bias(r));
        }
    }
    return flat;
}

void Parameters::assign(std::span<const double> flat) {
    if (flat.size() != count()) throw ArgumentError("parameter vector has the wrong length");
    std::size_t k = 0;
    for (auto& ch : channels) {
        for (auto& l : ch) {
            for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
                for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
            }
            for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = flat[k++];
        }
    }
}

void TrainConfig::validate() const {
    if (!(m >= 0.0 && m <= 1.0)) throw ArgumentError("loss weight m must lie in [0, 1]");
    if (epochs < 1) throw ArgumentError("epochs must be at least 1");
    if (batch_size < 1) throw ArgumentError("batch size must be at least 1");
    if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
        throw ArgumentError("invalid Adam constants");
    }
}

MlpModel init_network(const Architecture& arch, std::uint64_t seed) {
    arch.validate();
    MlpModel model;
    model.arch = arch;
    model.init_seed = seed;
    std::mt19937_64 rng(seed);
    for (int c = 0; c < arch.channels(); ++c) {
        auto& layers = model.params.channels.emplace_back();
        int fan_in = arch.input_dim;
        for (int l = 0; l <= arch.hidden_layers; ++l) {
            const int fan_out = l == arch.hidden_layers ? arch.channel_output_dim() : arch.hidden_width;
            std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(fan_in)));
            DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
            for (int r = 0; r < fan_out; ++r) {
                for (int k = 0; k < fan_in; ++k) layer.weight(r, k) = normal(rng);
            }
            layers.push_back(std::move(layer));
            fan_in = fan_out;
        }
    }
    return model;
}

Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs) {
    if (inputs.rows() != model.arch.input_dim) {
        throw ArgumentError("input has " + std::to_string(inputs.rows()) + " features, model expects " +
                            std::to_string(model.arch.input_dim));
    }
    const int half = model.arch.channel_output_dim();
    Eigen::MatrixXd out(model.arch.output_dim, inputs.cols());
    for (int c = 0; c < model.arch.channels(); ++c) {
        out.middleRows(c * half, half) = channel_forward(model.params.channels[c], inputs, c);
    }
    return out;
}

Eigen::VectorXd forward(const MlpModel& model, std::span<const double> input) {
    const Eigen::Map<const Eigen::VectorXd> x(input.data(), static_cast<Eigen::Index>(input.size()));
    return forward_batch(model, Eigen::MatrixXd(x)).col(0);
}

double loss_tcnn(std::span<const double> predicted, std::span<const double> target, double m) {
    if (predicted.size() != target.size()) throw ArgumentError("spectrum length mismatch");
    if (predicted.size() % 2 != 0) throw ArgumentError("two-channel loss needs an even length");
    if (!(m >= 0.0 && m <= 1.0)) throw ArgumentError("loss weight m must lie in [0, 1]");
    const std::size_t half = predicted.size() / 2;
    return m * sum_squared_error(predicted.first(half), target.first(half)) +
           (1.0 - m) * sum_squared_error(predicted.subspan(half), target.subspan(half));
}

double validation_error(std::span<const double> predicted, std::span<const double> target) {
    return sum_squared_error(predicted, target);
}

Eigen::VectorXd loss_weights(const Architecture& arch, double m) {
    Eigen::VectorXd w = Eigen::VectorXd::Ones(arch.output_dim);
    if (arch.kind == ArchitectureKind::TwoChannel) {
        const int half = arch.output_dim / 2;
        w.head(half).setConstant(m);
        w.tail(half).setConstant(1.0 - m);
    }
    return w;
}

BatchGradient backprop(const MlpModel& model, const Eigen::MatrixXd& inputs,
                       const Eigen::MatrixXd& targets, const Eigen::VectorXd& weights,
                       unsigned workers) {
    const Eigen::Index batch = inputs.cols();
    if (batch == 0) throw ArgumentError("backprop needs a non-empty batch");
    if (inputs.rows() != model.arch.input_dim || targets.rows() != model.arch.output_dim ||
        targets.cols() != batch || weights.size() != model.arch.output_dim) {
        throw ArgumentError("backprop: batch shape disagrees with the architecture");
    }
    const int half = model.arch.channel_output_dim();
    const std::size_t chunks = static_cast<std::size_t>((batch + kChunkColumns - 1) / kChunkColumns);

    std::vector<Parameters> partial(chunks);
    std::vector<double> partial_loss(chunks, 0.0);
    parallel_for(chunks, workers, [&](std::size_t k) {
        const Eigen::Index begin = static_cast<Eigen::Index>(k) * kChunkColumns;
        const Eigen::Index cols = std::min(kChunkColumns, batch - begin);
        const Eigen::MatrixXd x = inputs.middleCols(begin, cols);
        partial[k] = model.params.zeros_like();
        for (int c = 0; c < model.arch.channels(); ++c) {
            channel_backward(model.params.channels[c], x,
                             targets.block(c * half, begin, half, cols), weights.segment(c * half, half),
                             c, &partial[k].channels[c], partial_loss[k], nullptr);
        }
    });

    BatchGradient out{std::move(partial[0]), partial_loss[0]};
    for (std::size_t k = 1; k < chunks; ++k) {
        out.gradient += partial[k];
        out.loss += partial_loss[k];
    }
    const double scale = 1.0 / static_cast<double>(batch);
    for (auto& ch : out.gradient.channels) {
        for (auto& l : ch) {
            l.weight *= scale;
            l.bias *= scale;
        }
    }
    out.loss *= scale;
    return out;
}

InputGradient input_gradient(const MlpModel& model, std::span<const double> input,
                             std::span<const double> target) {
    if (static_cast<int>(input.size()) != model.arch.input_dim ||
        static_cast<int>(target.size()) != model.arch.output_dim) {
        throw ArgumentError("input_gradient: dimension mismatch");
    }
    const Eigen::MatrixXd x =
        Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
    const Eigen::Map<const Eigen::VectorXd> t(target.data(), static_cast<Eigen::Index>(target.size()));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(model.arch.output_dim);
    const int half = model.arch.channel_output_dim();

    InputGradient out;
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(model.arch.input_dim, 1);
    for (int c = 0; c < model.arch.channels(); ++c) {
        channel_backward(model.params.channels[c], x, t.segment(c * half, half),
                         ones.segment(c * half, half), c, nullptr, out.sse, &grad);
    }
    out.gradient = grad.col(0);
    return out;
}

AdamState AdamState::for_parameters(const Parameters& params) {
    return AdamState{params.zeros_like(), params.zeros_like(), 0};
}

void adam_step(Parameters& params, const Parameters& gradient, AdamState& state,
               const TrainConfig& config) {
    ++state.step;
    const double b1 = config.beta1, b2 = config.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
    const double lr = config.learning_rate;
    const double eps = config.epsilon;
    auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
        m.array() = b1 * m.array() + (1.0 - b1) * g.array();
        v.array() = b2 * v.array() + (1.0 - b2) * g.array().square();
        p.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
    };
    for (std::size_t c = 0; c < params.channels.size(); ++c) {
        for (std::size_t l = 0; l < params.channels[c].size(); ++l) {
            update(params.channels[c][l].weight, gradient.channels[c][l].weight,
                   state.first_moment.channels[c][l].weight, state.second_moment.channels[c][l].weight);
            update(params.channels[c][l].bias, gradient.channels[c][l].bias,
                   state.first_moment.channels[c][l].bias, state.second_moment.channels[c][l].bias);
        }
    }
}

}  // namespace nanodesign
