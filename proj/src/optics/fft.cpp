#include "hdqfc/fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "hdqfc/kernels.hpp"

namespace hdqfc {
namespace {

struct PlanPair {
    fftw_plan forward;
    fftw_plan inverse;
};

// fftw planning is not thread-safe; execution of an existing plan on new
// arrays (fftw_execute_dft) is.
PlanPair plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    FieldBuffer scratch(n * n);
    auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    PlanPair p{fftw_plan_dft_2d(ni, ni, data, data, FFTW_FORWARD, FFTW_ESTIMATE),
               fftw_plan_dft_2d(ni, ni, data, data, FFTW_BACKWARD, FFTW_ESTIMATE)};
    cache.emplace(n, p);
    return p;
}

}  // namespace

Fft2::Fft2(std::size_t n) : n_(n) {
    auto p = plans_for(n);
    forward_plan_ = p.forward;
    inverse_plan_ = p.inverse;
}

void Fft2::forward(std::span<cplx> data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), d, d);
}

void Fft2::inverse(std::span<cplx> data) const {
    auto* d = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), d, d);
    kernels::omp::scale(data, 1.0 / static_cast<double>(n_ * n_));
}

}  // namespace hdqfc
