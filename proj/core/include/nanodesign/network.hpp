#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nanodesign/normalizer.hpp"
#include "nanodesign/spectral.hpp"

namespace nanodesign {

inline constexpr double kSeluAlpha = 1.6732632423543772848170429916717;
inline constexpr double kSeluLambda = 1.0507009873554804934193349852946;

inline double selu(double x) {
    return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * (std::exp(x) - 1.0);
}

inline double selu_derivative(double x) {
    return x > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
}

enum class ArchitectureKind { TwoChannel, SingleChannel };

std::string to_string(ArchitectureKind kind);
ArchitectureKind parse_architecture_kind(const std::string& text);  // "tcnn" | "fcnn"

/// Stack of `hidden_layers` SELU layers of `hidden_width` units followed by a
/// linear output layer. A two-channel network runs two such stacks side by
/// side on the same input, the first predicting output[0, n/2) and the
/// second output[n/2, n).
struct Architecture {
    ArchitectureKind kind = ArchitectureKind::TwoChannel;
    int input_dim = 1;
    int hidden_layers = 7;
    int hidden_width = 250;
    int output_dim = 400;

    static Architecture tcnn(int input_dim, int output_dim = 400, int hidden_layers = 7,
                             int hidden_width = 250);
    static Architecture fcnn(int input_dim, int output_dim = 400, int hidden_layers = 7,
                             int hidden_width = 520);

    int channels() const noexcept { return kind == ArchitectureKind::TwoChannel ? 2 : 1; }
    int channel_output_dim() const noexcept { return output_dim / channels(); }
    void validate() const;

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct DenseLayer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
};

/// Parameters of every channel, layers ordered input to output.
struct Parameters {
    std::vector<std::vector<DenseLayer>> channels;

    std::size_t count() const;
    bool all_finite() const;
    /// Same shapes, all zeros.
    Parameters zeros_like() const;
    Parameters& operator+=(const Parameters& other);
    /// Flattened view in canonical order (channel, layer, weight row-major, bias).
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);
};

struct TrainConfig {
    double m = 0.6;  // weight of the first half of the spectrum in the two-channel loss
    int epochs = 1000;
    int batch_size = 256;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    unsigned workers = 1;  // gradient fan-out; never changes the result

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;        // mean per-example training loss
    double validation_error = 0.0;  // mean per-spectrum sum of squared errors
};

/// Where the model's training data came from; needed to interpret its output.
struct ModelProvenance {
    SpectralGrid grid;
    std::array<std::string, 2> material_cycle{"SiO2", "TiO2"};
    double host_index = 1.0;
    std::uint64_t dataset_seed = 0;
    std::uint64_t split_seed = 0;
    std::array<double, 3> split_fractions{0.90, 0.05, 0.05};
    std::size_t dataset_count = 0;

    friend bool operator==(const ModelProvenance&, const ModelProvenance&) = default;
};

struct MlpModel {
    Architecture arch;
    Parameters params;
    Normalizer normalizer;
    TrainConfig config;
    ModelProvenance provenance;
    std::uint64_t init_seed = 0;
    std::vector<EpochRecord> history;
};

/// Weights ~ N(0, 1/fan_in), biases zero.
MlpModel init_network(const Architecture& arch, std::uint64_t seed);

/// Normalised thicknesses in, normalised spectrum out.
Eigen::VectorXd forward(const MlpModel& model, std::span<const double> input);
/// Column-per-example batch version.
Eigen::MatrixXd forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// m * SSE(first half) + (1 - m) * SSE(second half).
double loss_tcnn(std::span<const double> predicted, std::span<const double> target, double m);
/// Plain SSE over every point.
double validation_error(std::span<const double> predicted, std::span<const double> target);
/// Per-output weights of the training loss: {m, 1 - m} halves for the
/// two-channel network, all ones (plain SSE) for the single-channel one.
Eigen::VectorXd loss_weights(const Architecture& arch, double m);

struct BatchGradient {
    Parameters gradient;
    double loss = 0.0;  // mean per-example weighted SSE
};

/// Reverse-mode gradient of the mean per-example weighted SSE over a batch
/// (columns of `inputs` / `targets`). Chunks of the batch are evaluated on
/// up to `workers` threads and reduced in chunk order.
BatchGradient backprop(const MlpModel& model, const Eigen::MatrixXd& inputs,
                       const Eigen::MatrixXd& targets, const Eigen::VectorXd& weights,
                       unsigned workers = 1);

struct InputGradient {
    double sse = 0.0;
    Eigen::VectorXd gradient;  // d SSE / d normalised input
};

/// Gradient of the plain SSE against `target` with respect to the input.
InputGradient input_gradient(const MlpModel& model, std::span<const double> input,
                             std::span<const double> target);

struct AdamState {
    Parameters first_moment;
    Parameters second_moment;
    long step = 0;

    static AdamState for_parameters(const Parameters& params);
};

/// One bias-corrected Adam update in place.
void adam_step(Parameters& params, const Parameters& gradient, AdamState& state,
               const TrainConfig& config);

}  // namespace nanodesign
