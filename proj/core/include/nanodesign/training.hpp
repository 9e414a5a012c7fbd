#pragma once

#include <functional>

#include "nanodesign/dataset.hpp"
#include "nanodesign/network.hpp"

namespace nanodesign {

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Mini-batch Adam on the architecture's training loss. The model's
/// normalizer must already be fitted on `train_split`. Returns the
/// final-epoch parameters with one history row per epoch.
MlpModel train(MlpModel model, const Dataset& train_split, const Dataset& validation_split,
               const TrainConfig& config, const EpochCallback& on_epoch = {});

/// Mean per-record SSE in normalised output units.
double evaluate_mean_error(const MlpModel& model, const Dataset& dataset);

/// Surrogate spectrum in physical units for a stack in nm.
Spectrum predict_spectrum(const MlpModel& model, std::span<const double> thicknesses_nm);

/// Normalised inputs / targets of a dataset as column matrices.
Eigen::MatrixXd normalized_inputs(const MlpModel& model, const Dataset& dataset);
Eigen::MatrixXd normalized_targets(const MlpModel& model, const Dataset& dataset);

}  // namespace nanodesign
