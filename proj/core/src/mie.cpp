#include "nanodesign/mie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nanodesign/errors.hpp"

namespace nanodesign {
namespace {

constexpr Complex kI{0.0, 1.0};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Riccati-Bessel data at one complex argument for n = 0..order:
// psi_n = z j_n(z), xi_n = z h_n^(1)(z) and their logarithmic derivatives.
struct RiccatiSet {
    std::vector<Complex> psi;
    std::vector<Complex> xi;
    std::vector<Complex> d1;  // psi'_n / psi_n
    std::vector<Complex> d3;  // xi'_n / xi_n
};

RiccatiSet riccati_set(Complex z, int order) {
    const int top = std::max(order, 1);
    const int start = std::max(top, static_cast<int>(std::ceil(std::abs(z)))) + 15;
    RiccatiSet out;
    out.psi.assign(top + 1, Complex{});
    out.xi.assign(top + 1, Complex{});
    out.d1.assign(top + 1, Complex{});
    out.d3.assign(top + 1, Complex{});

    // D1 by the downward ratio recurrence, started from zero.
    Complex d = 0.0;
    for (int n = start; n >= 1; --n) {
        const Complex nz = static_cast<double>(n) / z;
        d = nz - 1.0 / (d + nz);
        if (n - 1 <= top) out.d1[n - 1] = d;
    }

    // psi_n by Miller's downward recurrence, normalised against psi_0 or
    // psi_1, whichever is farther from a zero.
    Complex upper = 0.0;
    Complex current = 1e-300;
    for (int n = start; n >= 1; --n) {
        const Complex lower = (2.0 * n + 1.0) / z * current - upper;
        upper = current;
        current = lower;
        if (n <= top) out.psi[n] = upper;
        if (std::abs(current) > 1e200) {
            for (int k = n; k <= top; ++k) out.psi[k] *= 1e-200;
            upper *= 1e-200;
            current *= 1e-200;
        }
    }
    out.psi[0] = current;
    const Complex psi0 = std::sin(z);
    const Complex psi1 = std::sin(z) / z - std::cos(z);
    const Complex scale =
        std::abs(psi0) > std::abs(psi1) ? psi0 / out.psi[0] : psi1 / out.psi[1];
    for (Complex& v : out.psi) v *= scale;

    // xi_n grows with n, so upward recurrence is stable.
    const Complex e = std::exp(kI * z);
    out.xi[0] = -kI * e;
    out.xi[1] = out.xi[0] / z - e;
    for (int n = 1; n < top; ++n) {
        out.xi[n + 1] = (2.0 * n + 1.0) / z * out.xi[n] - out.xi[n - 1];
    }
    out.d3[0] = kI;
    for (int n = 1; n <= top; ++n) {
        out.d3[n] = out.xi[n - 1] / out.xi[n] - static_cast<double>(n) / z;
    }
    return out;
}

// [psi_n(z1)/xi_n(z1)] / [psi_n(z2)/xi_n(z2)], formed as two moderate ratios.
Complex psi_xi_ratio(const RiccatiSet& at1, const RiccatiSet& at2, int n) {
    return (at1.psi[n] / at2.psi[n]) * (at2.xi[n] / at1.xi[n]);
}

std::string describe_overflow(std::size_t layer, int order) {
    std::ostringstream msg;
    msg << "non-finite value in layered-sphere recursion at layer " << layer << ", order "
        << order;
    return msg.str();
}

}  // namespace

int max_multipole_order(double size_parameter) {
    if (!(size_parameter > 0.0) || !std::isfinite(size_parameter)) {
        throw ArgumentError("size parameter must be positive and finite");
    }
    const double n = std::ceil(size_parameter + 4.0 * std::cbrt(size_parameter) + 2.0);
    return std::max(3, static_cast<int>(n));
}

MieCoefficients mie_coefficients(std::span<const double> outer_radii,
                                 std::span<const Complex> indices, double wavelength_nm,
                                 double host_index, int order) {
    if (outer_radii.empty() || outer_radii.size() != indices.size()) {
        throw ArgumentError(
            "mie_coefficients: radii and indices must be non-empty and of equal length");
    }
    if (!(wavelength_nm > 0.0)) throw ArgumentError("wavelength must be positive");
    if (!(host_index > 0.0)) throw ArgumentError("host index must be positive");
    double previous = 0.0;
    for (double r : outer_radii) {
        if (!(r > previous) || !std::isfinite(r)) {
            throw ArgumentError("shell radii must be finite and strictly increasing");
        }
        previous = r;
    }

    const std::size_t layers = outer_radii.size();
    const double k = 2.0 * std::numbers::pi * host_index / wavelength_nm;
    std::vector<double> x(layers);
    std::vector<Complex> m(layers);
    for (std::size_t j = 0; j < layers; ++j) {
        x[j] = k * outer_radii[j];
        m[j] = indices[j] / host_index;
    }
    const double x_outer = x.back();
    const int nmax = order > 0 ? order : max_multipole_order(x_outer);

    // H^a_n, H^b_n: log derivative of the field inside the current shell at
    // its outer boundary. In the core only the regular solution exists.
    const RiccatiSet core = riccati_set(m[0] * x[0], nmax);
    std::vector<Complex> ha = core.d1;
    std::vector<Complex> hb = core.d1;

    for (std::size_t j = 1; j < layers; ++j) {
        const Complex z1 = m[j] * x[j - 1];
        const Complex z2 = m[j] * x[j];
        const RiccatiSet at1 = riccati_set(z1, nmax);
        const RiccatiSet at2 = riccati_set(z2, nmax);
        for (int n = 1; n <= nmax; ++n) {
            const Complex q = psi_xi_ratio(at1, at2, n);
            {
                const Complex g1 = m[j] * ha[n] - m[j - 1] * at1.d1[n];
                const Complex g2 = m[j] * ha[n] - m[j - 1] * at1.d3[n];
                ha[n] = (g2 * at2.d1[n] - q * g1 * at2.d3[n]) / (g2 - q * g1);
            }
            {
                const Complex g1 = m[j - 1] * hb[n] - m[j] * at1.d1[n];
                const Complex g2 = m[j - 1] * hb[n] - m[j] * at1.d3[n];
                hb[n] = (g2 * at2.d1[n] - q * g1 * at2.d3[n]) / (g2 - q * g1);
            }
            if (!finite(ha[n]) || !finite(hb[n])) {
                throw SolverError(describe_overflow(j, n), j, n);
            }
        }
    }

    const RiccatiSet outer = riccati_set(Complex{x_outer, 0.0}, nmax);

    MieCoefficients out;
    out.size_parameter = x_outer;
    out.wavenumber = k;
    out.a.resize(nmax);
    out.b.resize(nmax);
    const Complex m_outer = m.back();
    for (int n = 1; n <= nmax; ++n) {
        const Complex psi_n = outer.psi[n].real();
        const Complex psi_prev = outer.psi[n - 1].real();
        const Complex& xi_n = outer.xi[n];
        const Complex& xi_prev = outer.xi[n - 1];
        const double nx = n / x_outer;
        const Complex ta = ha[n] / m_outer + nx;
        const Complex tb = m_outer * hb[n] + nx;
        out.a[n - 1] = (ta * psi_n - psi_prev) / (ta * xi_n - xi_prev);
        out.b[n - 1] = (tb * psi_n - psi_prev) / (tb * xi_n - xi_prev);
        if (!finite(out.a[n - 1]) || !finite(out.b[n - 1])) {
            throw SolverError(describe_overflow(layers, n), layers, n);
        }
    }
    return out;
}

std::vector<Complex> shell_indices(const LayerStack& stack, const MaterialLibrary& materials,
                                   double wavelength_nm) {
    std::vector<Complex> indices(stack.size());
    for (std::size_t j = 0; j < stack.size(); ++j) {
        indices[j] = refractive_index(materials.at(stack.material_of(j)), wavelength_nm);
    }
    return indices;
}

MieCoefficients mie_coefficients(const LayerStack& stack, const MaterialLibrary& materials,
                                 double wavelength_nm, double host_index) {
    validate(stack);
    const std::vector<double> radii = stack.outer_radii();
    const std::vector<Complex> indices = shell_indices(stack, materials, wavelength_nm);
    return mie_coefficients(radii, indices, wavelength_nm, host_index);
}

double scattering_cross_section(const MieCoefficients& c) {
    double sum = 0.0;
    for (int n = c.order(); n >= 1; --n) {
        sum += (2.0 * n + 1.0) * (std::norm(c.a[n - 1]) + std::norm(c.b[n - 1]));
    }
    return 2.0 * std::numbers::pi / (c.wavenumber * c.wavenumber) * sum;
}

double scattering_cross_section(const LayerStack& stack, const MaterialLibrary& materials,
                                double wavelength_nm, double host_index) {
    return scattering_cross_section(mie_coefficients(stack, materials, wavelength_nm, host_index));
}

Spectrum spectrum(const LayerStack& stack, const MaterialLibrary& materials,
                  const SpectralGrid& grid, double host_index) {
    validate(stack);
    Spectrum out{grid, std::vector<double>(grid.size()), false};
    const std::vector<double> radii = stack.outer_radii();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lambda = grid.wavelength(i);
        const std::vector<Complex> indices = shell_indices(stack, materials, lambda);
        out.values[i] =
            scattering_cross_section(mie_coefficients(radii, indices, lambda, host_index));
    }
    return out;
}

}  // namespace nanodesign
