#pragma once

#include <cstddef>

namespace hdqfc {

/// Square transverse sampling grid centered on the optical axis.
///
/// Sample (row, col) sits at x = (col - n/2) * pitch, y = (row - n/2) * pitch,
/// so the axis falls exactly on sample (n/2, n/2).
struct GridSpec {
    std::size_t n_points = 512;
    double pitch = 2e-6;  // m

    double window() const { return static_cast<double>(n_points) * pitch; }
    double coordinate(std::size_t index) const {
        return (static_cast<double>(index) - static_cast<double>(n_points / 2)) * pitch;
    }
    std::size_t size() const { return n_points * n_points; }

    /// Throws ValidationError unless n_points >= 64 is a power of two and pitch > 0.
    void validate() const;

    /// n_points x n_points grid whose window is 8x the largest beam radius.
    static GridSpec for_beam_radius(double largest_radius, std::size_t n_points = 512);

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

}  // namespace hdqfc
