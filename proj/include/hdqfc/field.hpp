#pragma once

#include <complex>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <new>
#include <span>
#include <vector>

#include "hdqfc/grid.hpp"

namespace hdqfc {

using cplx = std::complex<double>;

/// 64-byte aligned storage so any buffer can be handed to a cached FFT plan.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        std::size_t bytes = (n * sizeof(T) + alignment - 1) / alignment * alignment;
        void* p = std::aligned_alloc(alignment, bytes);
        if (p == nullptr) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using FieldBuffer = std::vector<cplx, AlignedAllocator<cplx>>;

/// Scalar complex amplitude on a square grid.
///
/// Amplitudes are in sqrt(W/m^2): sum |E|^2 * pitch^2 is the optical power in
/// watts. Storage is row-major (row = y, col = x).
class TransverseField {
public:
    TransverseField(GridSpec grid, double wavelength, double refractive_index = 1.0);
    TransverseField(GridSpec grid, double wavelength, double refractive_index, FieldBuffer amplitude);

    const GridSpec& grid() const { return grid_; }
    double wavelength() const { return wavelength_; }
    double refractive_index() const { return refractive_index_; }
    /// Wavenumber in the medium, 2*pi*n/lambda.
    double wavenumber() const;

    std::span<const cplx> amplitude() const { return amplitude_; }
    std::span<cplx> amplitude() { return amplitude_; }
    const FieldBuffer& buffer() const { return amplitude_; }

    cplx& at(std::size_t row, std::size_t col) { return amplitude_[row * grid_.n_points + col]; }
    const cplx& at(std::size_t row, std::size_t col) const { return amplitude_[row * grid_.n_points + col]; }

    double power() const;
    double peak_intensity() const;
    /// Rescale in place so power() == target. Throws on a zero field.
    void normalize_power(double target);

    TransverseField with_amplitude(FieldBuffer amplitude) const;

private:
    GridSpec grid_;
    double wavelength_;
    double refractive_index_;
    FieldBuffer amplitude_;
};

/// Convert an intensity-normalized amplitude (|A|^2 = W/m^2) to a field in V/m
/// using I = 2 n eps0 c |E|^2.
double to_field_amplitude_vm(double amplitude, double refractive_index);

/// Little-endian dump: u32 n_points, f64 pitch_m, f64 wavelength_m, then
/// row-major interleaved (re, im) f64 pairs. A JSON sidecar with the same
/// metadata is written next to it as <path>.json.
void write_field_dump(const TransverseField& field, const std::filesystem::path& path);
TransverseField read_field_dump(const std::filesystem::path& path);

}  // namespace hdqfc
