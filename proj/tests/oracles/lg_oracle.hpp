#pragma once

// Test-side reference values computed without the library: explicit
// Laguerre-Gauss fields and brute-force Gauss-Legendre quadrature.

#include <cmath>
#include <complex>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace oracle {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Radial part of LG_{0,L} at propagation distance z for a beam with waist w0
/// and Rayleigh range zr: rho^|L| (1 + i z/zr)^-(|L|+1) exp(-rho^2 / (w0^2 (1 + i z/zr))).
inline cplx lg_radial(int l, double rho, double z, double w0, double zr) {
    const cplx q(1.0, z / zr);
    return std::pow(rho, std::abs(l)) * std::pow(q, -(std::abs(l) + 1)) * std::exp(-rho * rho / (w0 * w0 * q));
}

/// Fraction of LG_{0,L} power inside radius r, by radial quadrature.
inline double lg_power_fraction(int l, double w0, double r) {
    auto dens = [&](double rho) { return std::norm(lg_radial(l, rho, 0.0, w0, 1.0)) * rho; };
    using gl = boost::math::quadrature::gauss<double, 30>;
    double inside = 0.0, total = 0.0;
    const int pieces = 40;
    const double outer = 12.0 * w0 * std::sqrt(std::abs(l) + 1.0);
    for (int i = 0; i < pieces; ++i) {
        const double a = r * i / pieces, b = r * (i + 1) / pieces;
        inside += gl::integrate(dens, a, b);
    }
    total = inside;
    for (int i = 0; i < pieces; ++i) {
        const double a = r + (outer - r) * i / pieces, b = r + (outer - r) * (i + 1) / pieces;
        total += gl::integrate(dens, a, b);
    }
    return inside / total;
}

/// <u(z1) | u(z2)> / <u(0) | u(0)> for LG_{0,L}, transverse integral by quadrature.
inline cplx lg_overlap(int l, double z1, double z2, double w0, double zr) {
    auto f = [&](double rho) { return std::conj(lg_radial(l, rho, z1, w0, zr)) * lg_radial(l, rho, z2, w0, zr) * rho; };
    auto n = [&](double rho) { return std::norm(lg_radial(l, rho, 0.0, w0, zr)) * rho; };
    using gl = boost::math::quadrature::gauss<double, 30>;
    const double outer = 14.0 * w0 * std::sqrt(std::abs(l) + 1.0);
    cplx num = 0.0;
    double den = 0.0;
    const int pieces = 60;
    for (int i = 0; i < pieces; ++i) {
        const double a = outer * i / pieces, b = outer * (i + 1) / pieces;
        num += gl::integrate([&](double r) { return f(r).real(); }, a, b);
        num += cplx(0.0, 1.0) * gl::integrate([&](double r) { return f(r).imag(); }, a, b);
        den += gl::integrate(n, a, b);
    }
    return num / den;
}

/// Double crystal-length integral of the generated-visible / signal overlap:
/// int_0^L int_0^L exp(i dk (z - z')) <u_I(z) | u_I(z' + (z - z') k_I / k_V)> dz dz',
/// the visible power at the exit facet for a source exp(-i dk z) A_P u_I(z).
/// The visible generated at z' diffracts with k_V, which over a distance s
/// looks like signal diffraction over s k_I / k_V.
inline double flat_top_longitudinal(int l, double length, double w0, double k_signal, double k_visible,
                                    double delta_k, int nodes_per_axis = 4) {
    const double zr = 0.5 * k_signal * w0 * w0;
    using gl = boost::math::quadrature::gauss<double, 20>;
    const double ratio = k_signal / k_visible;
    double total = 0.0;
    const int pieces = nodes_per_axis;
    for (int i = 0; i < pieces; ++i) {
        const double a = length * i / pieces, b = length * (i + 1) / pieces;
        auto outer = [&](double z) {
            double inner = 0.0;
            for (int k = 0; k < pieces; ++k) {
                const double c = length * k / pieces, d = length * (k + 1) / pieces;
                inner += gl::integrate(
                    [&](double zp) {
                        const cplx o = lg_overlap(l, z, zp + (z - zp) * ratio, w0, zr);
                        return (std::polar(1.0, delta_k * (z - zp)) * o).real();
                    },
                    c, d);
            }
            return inner;
        };
        total += gl::integrate(outer, a, b);
    }
    return total;
}

/// Peak field of a hard-edge flat-top, N0 = sqrt(P / (2 pi eps0 c n w^2)).
inline double flat_top_peak_field(double power, double width, double n) {
    const double eps0 = 8.8541878128e-12, c = 299792458.0;
    return std::sqrt(power / (2.0 * pi * eps0 * c * n * width * width));
}

}  // namespace oracle
