#pragma once

#include <cstddef>

#include "hdqfc/field.hpp"
#include "hdqfc/optics.hpp"

namespace hdqfc::optics {

/// Pi-shaper + Fourier lens geometry. The shaper is an ideal Airy-disk
/// generator whose first dark ring sits at input_diameter / 2.
struct ShaperGeometry {
    double input_diameter = 4e-3;    // m
    double focal_length = 0.3;       // m
    double shaper_to_lens = 0.1;     // m
    double wavelength = 794e-9;      // m
    double medium_index = 1.846;     // index of the crystal around the focus
    double power = 1.0;              // W
    AiryOrder order = AiryOrder::one;
    std::size_t n_points = 512;
    double window_in_diameters = 16.0;  // shaper-plane window / input_diameter

    void validate() const;
};

struct ShapedPump {
    TransverseField field;
    double plateau_radius;  // nominal flat-top radius at the Fourier plane
};

/// Airy disk -> free space -> Fourier lens -> focal plane + z_probe, where
/// z_probe is a physical distance inside the medium around the focus.
ShapedPump shape_pipeline_flat_top(const ShaperGeometry& geometry, double z_probe);

/// Flatness (std/mean) inside 0.8 of the nominal plateau radius.
double shaped_plateau_flatness(const ShapedPump& pump);

}  // namespace hdqfc::optics
