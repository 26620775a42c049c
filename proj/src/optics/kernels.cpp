#include "hdqfc/kernels.hpp"

#include <array>
#include <cmath>

namespace hdqfc::kernels {
namespace {

constexpr std::size_t reduction_blocks = 64;

inline void coupling_sample(cplx& signal, cplx& visible, cplx pump, const CouplingStep& step) {
    const double pump_abs = std::abs(pump);
    if (pump_abs == 0.0) return;
    const double g = pump_abs * std::sqrt(step.kappa_signal * step.kappa_visible);
    const double c = std::cos(g * step.dz);
    const double s = std::sin(g * step.dz);
    // unit phasor of pump * mismatch
    const cplx phase = pump * step.mismatch / pump_abs;
    const double ratio = std::sqrt(step.kappa_visible / step.kappa_signal);
    const cplx i_unit{0.0, 1.0};
    const cplx v = c * visible + i_unit * s * ratio * phase * signal;
    const cplx sg = c * signal + i_unit * s / ratio * std::conj(phase) * visible;
    visible = v;
    signal = sg;
}

inline std::size_t block_begin(std::size_t b, std::size_t total) { return total * b / reduction_blocks; }

}  // namespace

namespace serial {

void multiply(std::span<cplx> data, std::span<const cplx> factor) {
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= factor[i];
}

void scale(std::span<cplx> data, double factor) {
    for (auto& a : data) a *= factor;
}

double sum_abs2(std::span<const cplx> data) {
    double total = 0.0;
    for (const auto& a : data) total += std::norm(a);
    return total;
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    cplx total{};
    for (std::size_t i = 0; i < a.size(); ++i) total += std::conj(a[i]) * b[i];
    return total;
}

void sfg_coupling_step(std::span<cplx> signal, std::span<cplx> visible, std::span<const cplx> pump,
                       const CouplingStep& step) {
    for (std::size_t i = 0; i < signal.size(); ++i) coupling_sample(signal[i], visible[i], pump[i], step);
}

IntensityMoments intensity_moments(std::span<const cplx> data, std::size_t n) {
    IntensityMoments m;
    const double c = static_cast<double>(n / 2);
    for (std::size_t r = 0; r < n; ++r) {
        const double y = static_cast<double>(r) - c;
        for (std::size_t col = 0; col < n; ++col) {
            const double x = static_cast<double>(col) - c;
            const double w = std::norm(data[r * n + col]);
            m.total += w;
            m.x2 += x * x * w;
            m.y2 += y * y * w;
        }
    }
    return m;
}

}  // namespace serial

namespace omp {

void multiply(std::span<cplx> data, std::span<const cplx> factor) {
    const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= factor[i];
}

void scale(std::span<cplx> data, double factor) {
    const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) data[i] *= factor;
}

double sum_abs2(std::span<const cplx> data) {
    std::array<double, reduction_blocks> partial{};
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < reduction_blocks; ++b) {
        double s = 0.0;
        for (std::size_t i = block_begin(b, data.size()); i < block_begin(b + 1, data.size()); ++i)
            s += std::norm(data[i]);
        partial[b] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

cplx inner_product(std::span<const cplx> a, std::span<const cplx> b) {
    std::array<cplx, reduction_blocks> partial{};
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < reduction_blocks; ++blk) {
        cplx s{};
        for (std::size_t i = block_begin(blk, a.size()); i < block_begin(blk + 1, a.size()); ++i)
            s += std::conj(a[i]) * b[i];
        partial[blk] = s;
    }
    cplx total{};
    for (const auto& p : partial) total += p;
    return total;
}

void sfg_coupling_step(std::span<cplx> signal, std::span<cplx> visible, std::span<const cplx> pump,
                       const CouplingStep& step) {
    const auto n = static_cast<std::ptrdiff_t>(signal.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) coupling_sample(signal[i], visible[i], pump[i], step);
}

IntensityMoments intensity_moments(std::span<const cplx> data, std::size_t n) {
    // blocks of whole rows
    std::array<IntensityMoments, reduction_blocks> partial{};
    const double c = static_cast<double>(n / 2);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < reduction_blocks; ++b) {
        IntensityMoments m;
        for (std::size_t r = block_begin(b, n); r < block_begin(b + 1, n); ++r) {
            const double y = static_cast<double>(r) - c;
            for (std::size_t col = 0; col < n; ++col) {
                const double x = static_cast<double>(col) - c;
                const double w = std::norm(data[r * n + col]);
                m.total += w;
                m.x2 += x * x * w;
                m.y2 += y * y * w;
            }
        }
        partial[b] = m;
    }
    IntensityMoments total;
    for (const auto& m : partial) {
        total.total += m.total;
        total.x2 += m.x2;
        total.y2 += m.y2;
    }
    return total;
}

}  // namespace omp

}  // namespace hdqfc::kernels
