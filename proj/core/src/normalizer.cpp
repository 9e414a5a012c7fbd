#include "nanodesign/normalizer.hpp"

#include <algorithm>
#include <cmath>

#include "nanodesign/errors.hpp"

namespace nanodesign {

Normalizer::Normalizer(ThicknessBounds box, double output_scale)
    : box_(box), output_scale_(output_scale) {
    if (!(box.max_nm > box.min_nm)) throw ArgumentError("normalizer box must have max > min");
    if (!(output_scale > 0.0) || !std::isfinite(output_scale)) {
        throw NormalizationError("output scale must be positive and finite");
    }
}

Normalizer Normalizer::fit(const Dataset& train, ThicknessBounds box) {
    if (train.records.empty()) throw NormalizationError("cannot fit a normalizer on no records");
    double peak = 0.0;
    for (const auto& r : train.records) {
        for (double v : r.spectrum) peak = std::max(peak, v);
    }
    if (!(peak > 0.0)) {
        throw NormalizationError("training spectra are all zero; output scale undefined");
    }
    return Normalizer(box, peak);
}

std::vector<double> Normalizer::normalize_stack(std::span<const double> t) const {
    std::vector<double> out(t.size());
    const double c = input_center(), h = input_half_width();
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = (t[i] - c) / h;
    return out;
}

std::vector<double> Normalizer::denormalize_stack(std::span<const double> u) const {
    std::vector<double> out(u.size());
    const double c = input_center(), h = input_half_width();
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = c + h * u[i];
    return out;
}

std::vector<double> Normalizer::normalize_spectrum(std::span<const double> values) const {
    if (!fitted()) throw NormalizationError("normalizer not fitted");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / output_scale_;
    return out;
}

std::vector<double> Normalizer::denormalize_spectrum(std::span<const double> normalized) const {
    if (!fitted()) throw NormalizationError("normalizer not fitted");
    std::vector<double> out(normalized.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) out[i] = normalized[i] * output_scale_;
    return out;
}

}  // namespace nanodesign
