#pragma once

#include <span>
#include <vector>

#include "nanodesign/dataset.hpp"

namespace nanodesign {

/// Affine input map taking the design box to [-1, 1] and a single output
/// scale (largest training spectrum value) taking spectra to [0, 1].
class Normalizer {
public:
    Normalizer() = default;
    Normalizer(ThicknessBounds box, double output_scale);

    /// NormalizationError when the training spectra are all zero.
    static Normalizer fit(const Dataset& train, ThicknessBounds box = kDesignBox);

    bool fitted() const noexcept { return output_scale_ > 0.0; }
    const ThicknessBounds& box() const noexcept { return box_; }
    double output_scale() const noexcept { return output_scale_; }
    double input_center() const noexcept { return 0.5 * (box_.min_nm + box_.max_nm); }
    double input_half_width() const noexcept { return 0.5 * (box_.max_nm - box_.min_nm); }

    std::vector<double> normalize_stack(std::span<const double> thicknesses_nm) const;
    std::vector<double> denormalize_stack(std::span<const double> normalized) const;
    std::vector<double> normalize_spectrum(std::span<const double> values) const;
    std::vector<double> denormalize_spectrum(std::span<const double> normalized) const;

    friend bool operator==(const Normalizer&, const Normalizer&) = default;

private:
    ThicknessBounds box_{kDesignBox};
    double output_scale_ = 0.0;
};

}  // namespace nanodesign
