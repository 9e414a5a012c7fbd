#include "nanodesign/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "nanodesign/errors.hpp"

namespace nanodesign {
namespace {

void check_compatible(const MlpModel& model, const Dataset& ds) {
    if (!model.normalizer.fitted()) {
        throw ArgumentError("model normalizer is not fitted");
    }
    if (ds.manifest.num_layers != static_cast<std::size_t>(model.arch.input_dim) ||
        ds.manifest.grid.size() != static_cast<std::size_t>(model.arch.output_dim)) {
        throw ArgumentError("dataset (" + std::to_string(ds.manifest.num_layers) + " layers, " +
                            std::to_string(ds.manifest.grid.size()) +
                            " points) does not match the model architecture");
    }
}

constexpr Eigen::Index kEvalBlock = 1024;

}  // namespace

Eigen::MatrixXd normalized_inputs(const MlpModel& model, const Dataset& ds) {
    check_compatible(model, ds);
    Eigen::MatrixXd x(model.arch.input_dim, static_cast<Eigen::Index>(ds.size()));
    for (std::size_t j = 0; j < ds.size(); ++j) {
        const auto u = model.normalizer.normalize_stack(ds.records[j].thicknesses);
        x.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(u.data(), x.rows());
    }
    return x;
}

Eigen::MatrixXd normalized_targets(const MlpModel& model, const Dataset& ds) {
    check_compatible(model, ds);
    Eigen::MatrixXd y(model.arch.output_dim, static_cast<Eigen::Index>(ds.size()));
    for (std::size_t j = 0; j < ds.size(); ++j) {
        const auto s = model.normalizer.normalize_spectrum(ds.records[j].spectrum);
        y.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(s.data(), y.rows());
    }
    return y;
}

double evaluate_mean_error(const MlpModel& model, const Dataset& dataset) {
    if (dataset.records.empty()) throw ArgumentError("cannot evaluate on an empty dataset");
    const Eigen::MatrixXd x = normalized_inputs(model, dataset);
    const Eigen::MatrixXd y = normalized_targets(model, dataset);
    double total = 0.0;
    for (Eigen::Index begin = 0; begin < x.cols(); begin += kEvalBlock) {
        const Eigen::Index cols = std::min(kEvalBlock, x.cols() - begin);
        const Eigen::MatrixXd pred = forward_batch(model, x.middleCols(begin, cols));
        total += (pred - y.middleCols(begin, cols)).squaredNorm();
    }
    return total / static_cast<double>(x.cols());
}

Spectrum predict_spectrum(const MlpModel& model, std::span<const double> thicknesses_nm) {
    const auto u = model.normalizer.normalize_stack(thicknesses_nm);
    const Eigen::VectorXd y = forward(model, u);
    Spectrum s{model.provenance.grid, {}, false};
    s.values = model.normalizer.denormalize_spectrum(std::span(y.data(), static_cast<std::size_t>(y.size())));
    return s;
}

MlpModel train(MlpModel model, const Dataset& train_split, const Dataset& validation_split,
               const TrainConfig& config, const EpochCallback& on_epoch) {
    config.validate();
    if (train_split.records.empty()) throw ArgumentError("training split is empty");
    const Eigen::MatrixXd x = normalized_inputs(model, train_split);
    const Eigen::MatrixXd y = normalized_targets(model, train_split);
    const Eigen::VectorXd weights = loss_weights(model.arch, config.m);
    const bool has_validation = !validation_split.records.empty();

    const Eigen::Index n = x.cols();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(config.seed);
    AdamState state = AdamState::for_parameters(model.params);
    model.history.clear();
    model.history.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        for (Eigen::Index begin = 0; begin < n; begin += config.batch_size) {
            const Eigen::Index cols = std::min<Eigen::Index>(config.batch_size, n - begin);
            Eigen::MatrixXd xb(x.rows(), cols), yb(y.rows(), cols);
            for (Eigen::Index j = 0; j < cols; ++j) {
                xb.col(j) = x.col(order[static_cast<std::size_t>(begin + j)]);
                yb.col(j) = y.col(order[static_cast<std::size_t>(begin + j)]);
            }
            BatchGradient g;
            try {
                g = backprop(model, xb, yb, weights, config.workers);
            } catch (const NumericError& e) {
                throw TrainingError(std::string("training diverged at epoch ") +
                                        std::to_string(epoch) + ": " + e.what(),
                                    epoch);
            }
            if (!std::isfinite(g.loss)) {
                throw TrainingError("non-finite training loss at epoch " + std::to_string(epoch), epoch);
            }
            loss_sum += g.loss * static_cast<double>(cols);
            adam_step(model.params, g.gradient, state, config);
        }
        if (!model.params.all_finite()) {
            throw TrainingError("non-finite parameters after epoch " + std::to_string(epoch), epoch);
        }
        EpochRecord record{epoch, loss_sum / static_cast<double>(n),
                           has_validation ? evaluate_mean_error(model, validation_split)
                                          : std::numeric_limits<double>::quiet_NaN()};
        model.history.push_back(record);
        if (on_epoch) on_epoch(record);
    }
    model.config = config;
    return model;
}

}  // namespace nanodesign
