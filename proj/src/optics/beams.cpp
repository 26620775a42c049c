#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/optics.hpp"

namespace hdqfc::optics {

void FlatTopSpec::validate() const {
    if (!(width > 0.0)) throw ValidationError("flat-top width must be positive");
    if (edge_order != hard_edge && edge_order < 8)
        throw ValidationError("flat-top edge_order must be >= 8 or hard-edge, got " + std::to_string(edge_order));
    if (!(power >= 0.0)) throw ValidationError("flat-top power must be non-negative");
}

TransverseField make_lg_mode(const LGModeSpec& spec, const GridSpec& grid, double wavelength, double power,
                             double refractive_index) {
    grid.validate();
    if (spec.radial_index < 0) throw ValidationError("LG radial index must be >= 0");
    if (!(spec.waist > 0.0)) throw ValidationError("LG waist must be positive");
    const int l = std::abs(spec.charge);
    const double extent = 6.0 * spec.waist * std::sqrt(2.0 * spec.radial_index + l + 1.0);
    if (grid.window() < extent)
        throw ValidationError("grid window " + std::to_string(grid.window()) + " m is smaller than " +
                              std::to_string(extent) + " m needed for LG(p=" + std::to_string(spec.radial_index) +
                              ", L=" + std::to_string(spec.charge) + ")");

    TransverseField field(grid, wavelength, refractive_index);
    const std::size_t n = grid.n_points;
    const double w = spec.waist;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = grid.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = grid.coordinate(c);
            const double rho2 = x * x + y * y;
            const double s = 2.0 * rho2 / (w * w);
            double radial = std::pow(std::sqrt(s), l) * std::exp(-rho2 / (w * w));
            if (spec.radial_index > 0)
                radial *= std::assoc_laguerre(static_cast<unsigned>(spec.radial_index), static_cast<unsigned>(l), s);
            const double theta = std::atan2(y, x);
            field.at(r, c) = std::polar(radial, spec.charge * theta);
        }
    }
    field.normalize_power(power);
    return field;
}

namespace {

// Fraction of the pixel centered at (x, y) lying inside rho <= radius.
double disk_coverage(double x, double y, double pitch, double radius) {
    const double rho = std::hypot(x, y);
    const double half_diag = pitch * std::numbers::sqrt2 / 2.0;
    if (rho + half_diag <= radius) return 1.0;
    if (rho - half_diag >= radius) return 0.0;
    constexpr int sub = 32;
    int inside = 0;
    for (int i = 0; i < sub; ++i) {
        const double yy = y + ((i + 0.5) / sub - 0.5) * pitch;
        for (int j = 0; j < sub; ++j) {
            const double xx = x + ((j + 0.5) / sub - 0.5) * pitch;
            if (xx * xx + yy * yy <= radius * radius) ++inside;
        }
    }
    return static_cast<double>(inside) / (sub * sub);
}

}  // namespace

TransverseField make_flat_top(const FlatTopSpec& spec, const GridSpec& grid, double wavelength,
                              double refractive_index) {
    grid.validate();
    spec.validate();
    if (!(spec.width < grid.window() / 3.0))
        throw ValidationError("flat-top width must be below a third of the grid window");

    TransverseField field(grid, wavelength, refractive_index);
    const std::size_t n = grid.n_points;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = grid.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = grid.coordinate(c);
            double amp;
            if (spec.edge_order == FlatTopSpec::hard_edge) {
                amp = std::sqrt(disk_coverage(x, y, grid.pitch, spec.width));
            } else {
                amp = std::exp(-std::pow(std::hypot(x, y) / spec.width, spec.edge_order));
            }
            field.at(r, c) = amp;
        }
    }
    if (spec.power > 0.0) field.normalize_power(spec.power);
    else field = field.with_amplitude(FieldBuffer(grid.size(), cplx{}));
    return field;
}

TransverseField make_airy_disk(const GridSpec& grid, double scale, double wavelength, double power, AiryOrder order,
                               double refractive_index) {
    grid.validate();
    if (!(scale > 0.0)) throw ValidationError("Airy disk scale must be positive");
    const double nu = order == AiryOrder::zero ? 0.0 : 1.0;
    TransverseField field(grid, wavelength, refractive_index);
    const std::size_t n = grid.n_points;
    for (std::size_t r = 0; r < n; ++r) {
        const double y = grid.coordinate(r);
        for (std::size_t c = 0; c < n; ++c) {
            const double x = grid.coordinate(c);
            double rho = std::hypot(x, y);
            double value;
            if (order == AiryOrder::zero) {
                rho = std::max(rho, grid.pitch / 2.0);
                const double arg = constants::two_pi * rho / scale;
                value = std::cyl_bessel_j(nu, arg) / arg;
            } else {
                const double arg = constants::two_pi * rho / scale;
                value = arg == 0.0 ? 0.5 : std::cyl_bessel_j(nu, arg) / arg;
            }
            field.at(r, c) = value;
        }
    }
    field.normalize_power(power);
    return field;
}

}  // namespace hdqfc::optics
