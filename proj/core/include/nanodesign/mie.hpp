#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nanodesign/materials.hpp"
#include "nanodesign/spectral.hpp"

namespace nanodesign {

/// External scattering coefficients a_n, b_n for n = 1..order (index 0 holds n = 1).
struct MieCoefficients {
    std::vector<Complex> a;
    std::vector<Complex> b;
    double size_parameter = 0.0;  // outer size parameter x = k r_outer
    double wavenumber = 0.0;      // k in the host, 1/nm

    int order() const noexcept { return static_cast<int>(a.size()); }
};

/// Series truncation ceil(x + 4 x^(1/3) + 2), never below 3.
int max_multipole_order(double size_parameter);

/// Layer-recursive Mie coefficients of a concentric sphere.
///
/// `outer_radii` are cumulative radii in nm (innermost first), `indices` the
/// complex refractive index of each shell. The recursion propagates
/// logarithmic derivatives of the Riccati-Bessel functions outward through
/// the shells, so no Bessel function of a complex argument is formed
/// explicitly. `order` overrides the default truncation when positive.
MieCoefficients mie_coefficients(std::span<const double> outer_radii,
                                 std::span<const Complex> indices, double wavelength_nm,
                                 double host_index = 1.0, int order = 0);

MieCoefficients mie_coefficients(const LayerStack& stack, const MaterialLibrary& materials,
                                 double wavelength_nm, double host_index = 1.0);

/// sigma = 2 pi / k^2 * sum (2n + 1)(|a_n|^2 + |b_n|^2), nm^2.
double scattering_cross_section(const MieCoefficients& coefficients);

double scattering_cross_section(const LayerStack& stack, const MaterialLibrary& materials,
                                double wavelength_nm, double host_index = 1.0);

Spectrum spectrum(const LayerStack& stack, const MaterialLibrary& materials,
                  const SpectralGrid& grid, double host_index = 1.0);

/// Resolved shell indices for a stack at one wavelength.
std::vector<Complex> shell_indices(const LayerStack& stack, const MaterialLibrary& materials,
                                   double wavelength_nm);

}  // namespace nanodesign
