#include "nanodesign/fine_tune.hpp"

#include <algorithm>
#include <cmath>

#include "nanodesign/errors.hpp"

namespace nanodesign {

FineTuneResult fine_tune(const MlpModel& model, std::span<const double> start_nm,
                         const Spectrum& target, const FineTuneConfig& config) {
    if (start_nm.size() != static_cast<std::size_t>(model.arch.input_dim)) {
        throw ArgumentError("fine_tune: start has the wrong number of layers");
    }
    if (target.size() != static_cast<std::size_t>(model.arch.output_dim)) {
        throw ArgumentError("fine_tune: target length does not match the model");
    }
    for (double t : start_nm) {
        if (!(t >= config.box.min_nm && t <= config.box.max_nm)) {
            throw ArgumentError("fine_tune: start lies outside the thickness box");
        }
    }
    const Normalizer& norm = model.normalizer;
    const std::vector<double> target_n = norm.normalize_spectrum(target.values);
    const double lo = norm.normalize_stack(std::vector{config.box.min_nm})[0];
    const double hi = norm.normalize_stack(std::vector{config.box.max_nm})[0];

    auto surrogate_error = [&](const std::vector<double>& u) {
        const Eigen::VectorXd y = forward(model, u);
        return validation_error(std::span(y.data(), static_cast<std::size_t>(y.size())), target_n);
    };

    std::vector<double> u = norm.normalize_stack(start_nm);
    double error = surrogate_error(u);
    FineTuneResult result;
    result.error_trace.push_back(error);

    for (int step = 0; step < config.steps; ++step) {
        const InputGradient g = input_gradient(model, u, target_n);
        if (!g.gradient.allFinite()) throw NumericError("non-finite input gradient during fine-tuning");
        if (g.gradient.squaredNorm() == 0.0) break;

        double lr = config.learning_rate;
        bool accepted = false;
        std::vector<double> candidate(u.size());
        double candidate_error = error;
        for (int attempt = 0; attempt <= config.max_backtracks; ++attempt, lr *= 0.5) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                candidate[i] = std::clamp(u[i] - lr * g.gradient(static_cast<Eigen::Index>(i)), lo, hi);
            }
            candidate_error = surrogate_error(candidate);
            if (candidate_error <= error) {
                accepted = true;
                break;
            }
        }
        if (!accepted || candidate == u) break;
        u = candidate;
        error = candidate_error;
        result.error_trace.push_back(error);
        ++result.accepted_steps;
    }

    result.thicknesses_nm = norm.denormalize_stack(u);
    for (double& t : result.thicknesses_nm) t = std::clamp(t, config.box.min_nm, config.box.max_nm);
    result.error = error;
    return result;
}

}  // namespace nanodesign
