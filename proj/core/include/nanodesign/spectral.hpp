#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nanodesign {

/// Concentric shell thicknesses in nm, innermost first. Materials alternate
/// through `material_cycle` starting at the core.
struct LayerStack {
    std::vector<double> thicknesses;
    std::array<std::string, 2> material_cycle{"SiO2", "TiO2"};

    std::size_t size() const noexcept { return thicknesses.size(); }
    const std::string& material_of(std::size_t layer) const {
        return material_cycle[layer % 2];
    }
    double outer_radius() const noexcept;
    /// Cumulative outer radius of every shell.
    std::vector<double> outer_radii() const;

    friend bool operator==(const LayerStack&, const LayerStack&) = default;
};

/// Throws ArgumentError on an empty stack or a non-positive/non-finite thickness.
void validate(const LayerStack& stack);

/// Uniform wavelength sampling, endpoints included.
class SpectralGrid {
public:
    /// 400 points on [400, 800] nm.
    SpectralGrid() : SpectralGrid(400.0, 800.0, 400) {}
    /// n_points == 1 is accepted and samples lambda_min only.
    SpectralGrid(double lambda_min, double lambda_max, std::size_t n_points);

    double lambda_min() const noexcept { return lambda_min_; }
    double lambda_max() const noexcept { return lambda_max_; }
    std::size_t size() const noexcept { return n_points_; }
    double wavelength(std::size_t i) const;
    std::vector<double> wavelengths() const;

    friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

private:
    double lambda_min_;
    double lambda_max_;
    std::size_t n_points_;
};

/// Cross-section values on a grid; nm^2 unless `efficiency` is set.
struct Spectrum {
    SpectralGrid grid;
    std::vector<double> values;
    bool efficiency = false;

    std::size_t size() const noexcept { return values.size(); }
};

/// Sum of squared residuals over all points.
double sum_squared_error(std::span<const double> predicted, std::span<const double> target);

/// ||predicted - target|| / ||target||; +inf for an all-zero target.
double relative_rms_error(std::span<const double> predicted, std::span<const double> target);

}  // namespace nanodesign
