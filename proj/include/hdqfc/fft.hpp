#pragma once

#include <cstddef>
#include <span>

#include "hdqfc/field.hpp"

namespace hdqfc {

/// Unnormalized in-place 2-D FFT on an n x n row-major buffer.
///
/// Plans are created once per size with FFTW_ESTIMATE (deterministic plan
/// choice, so results are bit-reproducible run to run) and shared across
/// threads. Buffers must be 64-byte aligned, which FieldBuffer guarantees.
class Fft2 {
public:
    explicit Fft2(std::size_t n);

    void forward(std::span<cplx> data) const;
    /// Inverse transform including the 1/n^2 normalization.
    void inverse(std::span<cplx> data) const;

    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    void* forward_plan_;
    void* inverse_plan_;
};

/// Signed FFT frequency index of bin k for length n (0, 1, ..., n/2-1, -n/2, ..., -1).
inline long fft_frequency_index(std::size_t k, std::size_t n) {
    auto kk = static_cast<long>(k);
    auto nn = static_cast<long>(n);
    return kk < nn / 2 ? kk : kk - nn;
}

}  // namespace hdqfc
