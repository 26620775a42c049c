#pragma once

#include <cstdint>
#include <vector>

#include "hdqfc/counting.hpp"

namespace hdqfc::qudit {

/// 0, 2pi/60, ..., 2pi.
std::vector<double> default_phase_grid(int steps = 60);

/// |d - 1 + e^{i phi}|^2 / d^2: a balanced qudit with phase phi on one mode,
/// projected back onto the balanced state.
double interference_probability(int dimension, double phase);

/// (d^2 - (d-2)^2) / (d^2 + (d-2)^2)
double analytic_visibility(int dimension);

struct InterferenceCurve {
    std::vector<double> phase;
    std::vector<double> coincidence;  // normalized probability
    double visibility;                // analytic
};
InterferenceCurve interference_curve(int dimension, const std::vector<double>& phases);

struct ScanParams {
    double source_rate = 1.0;  // Hz
    double duration = 1.0;     // s per phase point
    double dark_rate = 0.0;    // Hz
    std::uint64_t seed = 0;
};

/// Poisson-sampled coincidences along a phase scan.
std::vector<std::uint64_t> simulate_scan(int dimension, const std::vector<double>& phases, const ScanParams& params);

struct VisibilityFit {
    double visibility;  // min(1, amplitude / offset)
    double sigma;       // delta-method standard error
    double offset;
    double amplitude;
};

/// Weighted linear fit of A + B cos phi + C sin phi; background counts are
/// subtracted before fitting while Poisson weights use the raw counts.
VisibilityFit fit_visibility(const std::vector<double>& phases, const std::vector<std::uint64_t>& counts,
                             double background_per_point = 0.0);

struct CrosstalkParams {
    std::vector<int> charges{-3, -2, -1, 0, 1, 2, 3};
    CountingParams counting;
};

struct CrosstalkResult {
    std::vector<int> charges;
    Eigen::MatrixXd counts;  // [input][analyzer]
    double visibility;       // sum C_ii / sum C_ij
};

/// Eigenstate-in / eigenstate-analyzer coincidences through the channel.
/// The channel is indexed by `charges`.
CrosstalkResult crosstalk_matrix(const ChannelSpec& channel, const CrosstalkParams& params);

}  // namespace hdqfc::qudit
