#include "boundary_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace nanodesign::testing {
namespace {

using C = std::complex<double>;

struct Riccati {
    double psi, dpsi, chi, dchi;
};

Riccati riccati(int n, double z) {
    const double psi = z * std::sph_bessel(n, z);
    const double chi = z * std::sph_neumann(n, z);
    const double psi_m = n == 0 ? std::cos(z) : z * std::sph_bessel(n - 1, z);
    const double chi_m = n == 0 ? std::sin(z) : z * std::sph_neumann(n - 1, z);
    // f'_n = f_{n-1} - n f_n / z; for n = 0, psi' = cos and chi' = sin.
    return {psi, psi_m - n * psi / z, chi, chi_m - n * chi / z};
}

// Unknown layout: [c_0, (c_j, d_j) for j = 1..L-1, s]. Returns s.
C solve_order(int n, bool electric, std::span<const double> radii, std::span<const double> idx,
              double k0, double host) {
    const int layers = static_cast<int>(radii.size());
    const int unknowns = 2 * layers;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(unknowns, unknowns);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(unknowns);

    auto column_c = [](int j) { return j == 0 ? 0 : 2 * j - 1; };
    auto column_d = [](int j) { return 2 * j; };

    for (int j = 0; j < layers; ++j) {
        const double r = radii[j];
        const double m_in = idx[j];
        const double m_out = j + 1 < layers ? idx[j + 1] : host;
        // Interface conditions, derivatives taken with respect to each side's argument:
        //   electric: m_out u_out = m_in u_in, u'_out = u'_in
        //   magnetic: u_out = u_in, m_out u'_out = m_in u'_in
        const double value_in = electric ? m_in : 1.0;
        const double value_out = electric ? m_out : 1.0;
        const double deriv_in = electric ? 1.0 : m_in;
        const double deriv_out = electric ? 1.0 : m_out;
        const int row_v = 2 * j;
        const int row_d = 2 * j + 1;

        const Riccati in = riccati(n, m_in * k0 * r);
        A(row_v, column_c(j)) += value_in * in.psi;
        A(row_d, column_c(j)) += deriv_in * in.dpsi;
        if (j > 0) {
            A(row_v, column_d(j)) += value_in * in.chi;
            A(row_d, column_d(j)) += deriv_in * in.dchi;
        }

        const Riccati out = riccati(n, m_out * k0 * r);
        if (j + 1 < layers) {
            A(row_v, column_c(j + 1)) -= value_out * out.psi;
            A(row_d, column_c(j + 1)) -= deriv_out * out.dpsi;
            A(row_v, column_d(j + 1)) -= value_out * out.chi;
            A(row_d, column_d(j + 1)) -= deriv_out * out.dchi;
        } else {
            // u_out = psi - s xi, xi = psi + i chi; the incident part moves to the rhs.
            const C xi{out.psi, out.chi};
            const C dxi{out.dpsi, out.dchi};
            A(row_v, unknowns - 1) += value_out * xi;
            A(row_d, unknowns - 1) += deriv_out * dxi;
            rhs(row_v) += value_out * out.psi;
            rhs(row_d) += deriv_out * out.dpsi;
        }
    }

    // Equilibrate columns then rows; the chi columns of inner shells span
    // many decades at high order.
    Eigen::VectorXd col_scale(unknowns);
    for (int c = 0; c < unknowns; ++c) {
        const double s = A.col(c).cwiseAbs().maxCoeff();
        col_scale(c) = s > 0 ? 1.0 / s : 1.0;
        A.col(c) *= col_scale(c);
    }
    for (int r = 0; r < unknowns; ++r) {
        const double s = A.row(r).cwiseAbs().maxCoeff();
        if (s > 0) {
            A.row(r) /= s;
            rhs(r) /= s;
        }
    }
    const Eigen::VectorXcd sol = A.fullPivLu().solve(rhs);
    return sol(unknowns - 1) * col_scale(unknowns - 1);
}

}  // namespace

DirectCoefficients boundary_matching_solve(std::span<const double> outer_radii,
                                           std::span<const double> indices,
                                           double wavelength_nm, double host_index, int order) {
    const double k0 = 2.0 * std::numbers::pi / wavelength_nm;
    DirectCoefficients out;
    double sum = 0.0;
    for (int n = 1; n <= order; ++n) {
        const C a = solve_order(n, true, outer_radii, indices, k0, host_index);
        const C b = solve_order(n, false, outer_radii, indices, k0, host_index);
        out.a.push_back(a);
        out.b.push_back(b);
        sum += (2.0 * n + 1.0) * (std::norm(a) + std::norm(b));
    }
    const double k = k0 * host_index;
    out.cross_section = 2.0 * std::numbers::pi / (k * k) * sum;
    return out;
}

std::complex<double> rayleigh_a1(double x, double m) {
    const double m2 = m * m;
    return C{0.0, -2.0 * x * x * x / 3.0} * ((m2 - 1.0) / (m2 + 2.0));
}

double rayleigh_cross_section(double radius_nm, double wavelength_nm, double m,
                              double host_index) {
    const double k = 2.0 * std::numbers::pi * host_index / wavelength_nm;
    const double m2 = m * m;
    const double f = (m2 - 1.0) / (m2 + 2.0);
    return 8.0 / 3.0 * std::numbers::pi * std::pow(k, 4) * std::pow(radius_nm, 6) * f * f;
}

}  // namespace nanodesign::testing
