#pragma once

#include <span>
#include <vector>

#include "nanodesign/dataset.hpp"
#include "nanodesign/network.hpp"

namespace nanodesign {

struct FineTuneConfig {
    int steps = 500;
    double learning_rate = 0.5;  // in normalised input units
    int max_backtracks = 20;
    ThicknessBounds box = kDesignBox;
};

struct FineTuneResult {
    std::vector<double> thicknesses_nm;
    double error = 0.0;               // surrogate SSE, normalised units
    std::vector<double> error_trace;  // initial error, then one entry per accepted step
    int accepted_steps = 0;
};

/// Gradient descent on the network input with frozen weights, minimising the
/// surrogate SSE against `target`. Inputs are clamped to the box after every
/// step, and a step is kept only if it does not raise the error (the step
/// size is halved up to `max_backtracks` times, otherwise descent stops).
FineTuneResult fine_tune(const MlpModel& model, std::span<const double> start_nm,
                         const Spectrum& target, const FineTuneConfig& config = {});

}  // namespace nanodesign
