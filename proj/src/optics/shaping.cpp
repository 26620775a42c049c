#include "hdqfc/shaping.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"

namespace hdqfc::optics {

void ShaperGeometry::validate() const {
    if (!(input_diameter > 0.0)) throw ValidationError("input beam diameter must be positive");
    if (!(focal_length > 0.0)) throw ValidationError("Fourier lens focal length must be positive");
    if (!(shaper_to_lens >= 0.0)) throw ValidationError("shaper-to-lens distance must be non-negative");
    if (!(wavelength > 0.0)) throw ValidationError("wavelength must be positive");
    if (!(medium_index >= 1.0)) throw ValidationError("medium index must be >= 1");
    if (!(window_in_diameters > 2.0)) throw ValidationError("shaper window must exceed two input diameters");
}

ShapedPump shape_pipeline_flat_top(const ShaperGeometry& geo, double z_probe) {
    geo.validate();
    const double nu = geo.order == AiryOrder::zero ? 0.0 : 1.0;
    const double first_zero = boost::math::cyl_bessel_j_zero(nu, 1);
    const double scale = constants::two_pi * (geo.input_diameter / 2.0) / first_zero;

    const double window_in = geo.window_in_diameters * geo.input_diameter;
    const GridSpec in_grid{geo.n_points, window_in / static_cast<double>(geo.n_points)};
    auto airy = make_airy_disk(in_grid, scale, geo.wavelength, geo.power, geo.order);

    const auto system = AbcdMatrix::free_space(geo.focal_length + z_probe / geo.medium_index) *
                        AbcdMatrix::thin_lens(geo.focal_length) * AbcdMatrix::free_space(geo.shaper_to_lens);

    const GridSpec out_grid{geo.n_points, geo.wavelength * geo.focal_length / window_in};
    auto focused = propagate_collins(airy, system, out_grid);
    FieldBuffer amplitude = focused.buffer();
    TransverseField in_medium(out_grid, geo.wavelength, geo.medium_index, std::move(amplitude));
    return {std::move(in_medium), geo.wavelength * geo.focal_length / scale};
}

double shaped_plateau_flatness(const ShapedPump& pump) {
    return plateau_flatness(pump.field, 0.8 * pump.plateau_radius);
}

}  // namespace hdqfc::optics
