#include "nanodesign/spectral.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "nanodesign/errors.hpp"

namespace nanodesign {

double LayerStack::outer_radius() const noexcept {
    return std::accumulate(thicknesses.begin(), thicknesses.end(), 0.0);
}

std::vector<double> LayerStack::outer_radii() const {
    std::vector<double> radii(thicknesses.size());
    std::partial_sum(thicknesses.begin(), thicknesses.end(), radii.begin());
    return radii;
}

void validate(const LayerStack& stack) {
    if (stack.thicknesses.empty()) throw ArgumentError("layer stack is empty");
    for (std::size_t i = 0; i < stack.size(); ++i) {
        const double t = stack.thicknesses[i];
        if (!std::isfinite(t) || !(t > 0.0)) {
            throw ArgumentError("layer " + std::to_string(i) +
                                " thickness must be finite and positive");
        }
    }
}

SpectralGrid::SpectralGrid(double lambda_min, double lambda_max, std::size_t n_points)
    : lambda_min_(lambda_min), lambda_max_(lambda_max), n_points_(n_points) {
    if (n_points == 0) throw ArgumentError("spectral grid needs at least one point");
    if (!(lambda_min > 0.0) || !std::isfinite(lambda_max)) {
        throw ArgumentError("spectral grid bounds must be positive and finite");
    }
    if (n_points >= 2 && !(lambda_max > lambda_min)) {
        throw ArgumentError("spectral grid needs lambda_max > lambda_min");
    }
    if (n_points == 1 && lambda_max < lambda_min) {
        throw ArgumentError("spectral grid needs lambda_max >= lambda_min");
    }
}

double SpectralGrid::wavelength(std::size_t i) const {
    if (i >= n_points_) throw ArgumentError("grid index out of range");
    if (n_points_ == 1) return lambda_min_;
    if (i + 1 == n_points_) return lambda_max_;
    const double step = (lambda_max_ - lambda_min_) / static_cast<double>(n_points_ - 1);
    return lambda_min_ + static_cast<double>(i) * step;
}

std::vector<double> SpectralGrid::wavelengths() const {
    std::vector<double> out(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) out[i] = wavelength(i);
    return out;
}

double sum_squared_error(std::span<const double> predicted, std::span<const double> target) {
    if (predicted.size() != target.size()) {
        throw ArgumentError("spectrum length mismatch: " + std::to_string(predicted.size()) +
                            " vs " + std::to_string(target.size()));
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double r = predicted[i] - target[i];
        sse += r * r;
    }
    return sse;
}

double relative_rms_error(std::span<const double> predicted, std::span<const double> target) {
    const double sse = sum_squared_error(predicted, target);
    double norm = 0.0;
    for (double t : target) norm += t * t;
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(sse / norm);
}

}  // namespace nanodesign
