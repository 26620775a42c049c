#pragma once

#include <map>
#include <optional>

#include "hdqfc/field.hpp"
#include "hdqfc/grid.hpp"

namespace hdqfc::optics {

/// Laguerre-Gauss mode LG_{p,L}. The p = 0 radial profile is
/// rho^|L| exp(-rho^2/w^2); negative L is the phase conjugate of +|L|.
struct LGModeSpec {
    int charge = 0;
    int radial_index = 0;
    double waist = 100e-6;  // m
};

/// Flat-top (super-Gaussian) pump profile.
struct FlatTopSpec {
    static constexpr int hard_edge = 0;

    double width = 200e-6;  // m, plateau radius
    int edge_order = 20;    // exp(-(rho/w)^order) amplitude rolloff, or hard_edge
    double power = 1.0;     // W

    void validate() const;
};

enum class AiryOrder {
    zero,  // J0(x)/x, the form printed for the pi-shaper output
    one,   // J1(x)/x, the standard Airy pattern
};

/// Paraxial ray-transfer matrix in reduced coordinates (distances divided by
/// the refractive index); det must be 1.
struct AbcdMatrix {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static AbcdMatrix free_space(double reduced_distance) { return {1.0, reduced_distance, 0.0, 1.0}; }
    static AbcdMatrix thin_lens(double focal_length) { return {1.0, 0.0, -1.0 / focal_length, 1.0}; }
    double determinant() const { return a * d - b * c; }
};

/// rhs is applied first: (lhs * rhs) describes rhs followed by lhs.
AbcdMatrix operator*(const AbcdMatrix& lhs, const AbcdMatrix& rhs);

TransverseField make_lg_mode(const LGModeSpec& spec, const GridSpec& grid, double wavelength, double power,
                             double refractive_index = 1.0);

TransverseField make_flat_top(const FlatTopSpec& spec, const GridSpec& grid, double wavelength,
                              double refractive_index = 1.0);

/// Amplitude J_nu(2 pi rho / scale) / (2 pi rho / scale), normalized to `power`.
/// The J0 form is singular on axis; samples closer than half a pitch to the
/// axis are evaluated at rho = pitch / 2.
TransverseField make_airy_disk(const GridSpec& grid, double scale, double wavelength, double power,
                               AiryOrder order = AiryOrder::zero, double refractive_index = 1.0);

/// Band-limited angular-spectrum propagation by `distance` (m, in the medium)
/// with the carrier exp(i k z) removed. Warns when the output has more than
/// 1e-6 of its peak intensity on the window edge.
TransverseField propagate_angular_spectrum(const TransverseField& field, double distance);

/// Collins diffraction integral through `system`. Evaluated as a separable
/// matrix Fourier transform so the output grid may differ from the input.
/// B = 0 is supported only for A = D = 1 (identity or thin lens).
TransverseField propagate_collins(const TransverseField& field, const AbcdMatrix& system,
                                  std::optional<GridSpec> output_grid = std::nullopt);

struct OamSpectrum {
    std::map<int, double> weights;

    double weight(int charge) const;
    int dominant() const;
};

/// Azimuthal Fourier decomposition on rings out to min(6 * waist_hint,
/// window edge), integrated radially. Weights sum to one.
OamSpectrum oam_spectrum(const TransverseField& field, double waist_hint);

/// Power-normalized inner product <a|b> / sqrt(P_a P_b).
cplx overlap(const TransverseField& a, const TransverseField& b);

/// 1/e^2 intensity radius from second moments (w = 2 sigma), averaged over x and y.
double beam_radius(const TransverseField& field);

/// std/mean of the intensity over samples with rho <= radius.
double plateau_flatness(const TransverseField& field, double radius);

/// Intensity at (x, y) by bilinear interpolation.
double intensity_at(const TransverseField& field, double x, double y);

}  // namespace hdqfc::optics
