#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/kernels.hpp"
#include "hdqfc/optics.hpp"

namespace hdqfc::optics {

double OamSpectrum::weight(int charge) const {
    auto it = weights.find(charge);
    return it == weights.end() ? 0.0 : it->second;
}

int OamSpectrum::dominant() const {
    auto it = std::max_element(weights.begin(), weights.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    return it == weights.end() ? 0 : it->first;
}

namespace {

// Catmull-Rom cubic weights for fractional offset t in [0, 1).
std::array<double, 4> cubic_weights(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {-0.5 * t3 + t2 - 0.5 * t, 1.5 * t3 - 2.5 * t2 + 1.0, -1.5 * t3 + 2.0 * t2 + 0.5 * t, 0.5 * t3 - 0.5 * t2};
}

cplx sample_bicubic(const TransverseField& field, double x, double y) {
    const auto& g = field.grid();
    const double u = x / g.pitch + static_cast<double>(g.n_points / 2);
    const double v = y / g.pitch + static_cast<double>(g.n_points / 2);
    const auto c0 = static_cast<long>(std::floor(u));
    const auto r0 = static_cast<long>(std::floor(v));
    const auto wx = cubic_weights(u - static_cast<double>(c0));
    const auto wy = cubic_weights(v - static_cast<double>(r0));
    const auto n = static_cast<long>(g.n_points);
    cplx total{};
    for (int i = 0; i < 4; ++i) {
        const long r = r0 - 1 + i;
        if (r < 0 || r >= n) continue;
        cplx row{};
        for (int j = 0; j < 4; ++j) {
            const long c = c0 - 1 + j;
            if (c < 0 || c >= n) continue;
            row += wx[j] * field.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
        total += wy[i] * row;
    }
    return total;
}

}  // namespace

OamSpectrum oam_spectrum(const TransverseField& field, double waist_hint) {
    if (!(waist_hint > 0.0)) throw ValidationError("waist hint must be positive");
    if (!(field.power() > 0.0)) throw ValidationError("OAM spectrum of a zero field");

    const auto& g = field.grid();
    constexpr int n_theta = 256;
    const double dr = g.pitch / 2.0;
    const double r_max = std::min(6.0 * waist_hint, g.window() / 2.0 - 3.0 * g.pitch);
    const auto n_rings = static_cast<int>(r_max / dr);

    std::array<cplx, n_theta> twiddle;
    for (int k = 0; k < n_theta; ++k) twiddle[k] = std::polar(1.0, -constants::two_pi * k / n_theta);

    // per-ring storage, summed in ring order afterwards so the result does not
    // depend on the thread count
    std::vector<double> contrib(static_cast<std::size_t>(n_rings) * n_theta, 0.0);
#pragma omp parallel
    {
        std::array<cplx, n_theta> ring{};
#pragma omp for schedule(static)
        for (int k = 0; k < n_rings; ++k) {
            const double r = (k + 0.5) * dr;
            for (int t = 0; t < n_theta; ++t) {
                const double theta = constants::two_pi * t / n_theta;
                ring[t] = sample_bicubic(field, r * std::cos(theta), r * std::sin(theta));
            }
            for (int l = 0; l < n_theta; ++l) {
                cplx c{};
                for (int t = 0; t < n_theta; ++t) c += ring[t] * twiddle[(l * t) % n_theta];
                contrib[static_cast<std::size_t>(k) * n_theta + l] = std::norm(c) * r;
            }
        }
    }
    std::array<double, n_theta> accum{};
    for (int k = 0; k < n_rings; ++k)
        for (int l = 0; l < n_theta; ++l) accum[l] += contrib[static_cast<std::size_t>(k) * n_theta + l];

    double total = 0.0;
    for (double a : accum) total += a;
    OamSpectrum spectrum;
    for (int l = 0; l < n_theta; ++l) {
        const int charge = l < n_theta / 2 ? l : l - n_theta;
        spectrum.weights[charge] = accum[l] / total;
    }
    return spectrum;
}

cplx overlap(const TransverseField& a, const TransverseField& b) {
    if (!(a.grid() == b.grid())) throw ValidationError("overlap requires fields on the same grid");
    const double pa = kernels::omp::sum_abs2(a.amplitude());
    const double pb = kernels::omp::sum_abs2(b.amplitude());
    if (!(pa > 0.0) || !(pb > 0.0)) throw ValidationError("overlap of a zero field");
    return kernels::omp::inner_product(a.amplitude(), b.amplitude()) / std::sqrt(pa * pb);
}

double beam_radius(const TransverseField& field) {
    const auto m = kernels::omp::intensity_moments(field.amplitude(), field.grid().n_points);
    if (!(m.total > 0.0)) throw ValidationError("beam radius of a zero field");
    const double sigma2 = 0.5 * (m.x2 + m.y2) / m.total;
    return 2.0 * std::sqrt(sigma2) * field.grid().pitch;
}

double plateau_flatness(const TransverseField& field, double radius) {
    const auto& g = field.grid();
    std::vector<double> samples;
    for (std::size_t r = 0; r < g.n_points; ++r) {
        const double y = g.coordinate(r);
        for (std::size_t c = 0; c < g.n_points; ++c) {
            if (std::hypot(g.coordinate(c), y) <= radius) samples.push_back(std::norm(field.at(r, c)));
        }
    }
    double mean = 0.0;
    for (double s : samples) mean += s;
    if (samples.empty() || !(mean > 0.0)) throw ValidationError("plateau region is empty or dark");
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size());
    return std::sqrt(var) / mean;
}

double intensity_at(const TransverseField& field, double x, double y) {
    const auto& g = field.grid();
    const double u = x / g.pitch + static_cast<double>(g.n_points / 2);
    const double v = y / g.pitch + static_cast<double>(g.n_points / 2);
    const auto c0 = static_cast<long>(std::floor(u));
    const auto r0 = static_cast<long>(std::floor(v));
    const auto n = static_cast<long>(g.n_points);
    if (c0 < 0 || r0 < 0 || c0 + 1 >= n || r0 + 1 >= n) return 0.0;
    const double tx = u - static_cast<double>(c0), ty = v - static_cast<double>(r0);
    auto I = [&](long r, long c) { return std::norm(field.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c))); };
    return (1 - ty) * ((1 - tx) * I(r0, c0) + tx * I(r0, c0 + 1)) + ty * ((1 - tx) * I(r0 + 1, c0) + tx * I(r0 + 1, c0 + 1));
}

}  // namespace hdqfc::optics
