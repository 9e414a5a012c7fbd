#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nanodesign::testing {

struct DirectCoefficients {
    std::vector<std::complex<double>> a;
    std::vector<std::complex<double>> b;
    double cross_section = 0.0;
};

/// Brute-force layered-sphere solution: for every multipole order the full
/// set of interface conditions is assembled into one dense linear system and
/// solved with full pivoting. Real (lossless) indices only; the Riccati-Bessel
/// functions come from the standard library's spherical Bessel functions.
DirectCoefficients boundary_matching_solve(std::span<const double> outer_radii,
                                           std::span<const double> indices,
                                           double wavelength_nm, double host_index, int order);

/// Small-particle limits used as closed-form checks.
std::complex<double> rayleigh_a1(double size_parameter, double relative_index);
double rayleigh_cross_section(double radius_nm, double wavelength_nm, double relative_index,
                              double host_index = 1.0);

}  // namespace nanodesign::testing
