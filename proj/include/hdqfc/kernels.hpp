#pragma once

// Pointwise and reduction kernels used inside the propagation and SFG loops.
//
// Every kernel has a plain serial reference in `serial::` and an OpenMP
// version in `omp::`. The library calls the OpenMP versions; tests check them
// against the serial ones and bench/ compares their throughput.
//
// OpenMP reductions are computed over a fixed number of contiguous blocks that
// does not depend on the thread count, then combined in block order, so their
// results are identical for any OMP_NUM_THREADS.

#include <complex>
#include <cstddef>
#include <span>

namespace hdqfc::kernels {

using cplx = std::complex<double>;

/// Coefficients of one full nonlinear step of the undepleted-pump SFG
/// equations, solved exactly per sample with the pump frozen over the step:
///   dA_V/dz = i kappa_visible * P * m * A_I
///   dA_I/dz = i kappa_signal * conj(P * m) * A_V
/// where m = exp(-i dk z_mid) is the phase-mismatch factor at the step midpoint.
struct CouplingStep {
    double kappa_signal = 0.0;
    double kappa_visible = 0.0;
    double dz = 0.0;
    cplx mismatch{1.0, 0.0};
};

struct IntensityMoments {
    double total = 0.0;  // sum |a|^2
    double x2 = 0.0;     // sum x^2 |a|^2 (in samples^2)
    double y2 = 0.0;     // sum y^2 |a|^2 (in samples^2)
};

namespace serial {
void multiply(std::span<cplx> data, std::span<const cplx> factor);
void scale(std::span<cplx> data, double factor);
double sum_abs2(std::span<const cplx> data);
cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);
void sfg_coupling_step(std::span<cplx> signal, std::span<cplx> visible, std::span<const cplx> pump,
                       const CouplingStep& step);
IntensityMoments intensity_moments(std::span<const cplx> data, std::size_t n);
}  // namespace serial

namespace omp {
void multiply(std::span<cplx> data, std::span<const cplx> factor);
void scale(std::span<cplx> data, double factor);
double sum_abs2(std::span<const cplx> data);
cplx inner_product(std::span<const cplx> a, std::span<const cplx> b);
void sfg_coupling_step(std::span<cplx> signal, std::span<cplx> visible, std::span<const cplx> pump,
                       const CouplingStep& step);
IntensityMoments intensity_moments(std::span<const cplx> data, std::size_t n);
}  // namespace omp

}  // namespace hdqfc::kernels
