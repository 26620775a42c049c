#include <algorithm>
#include <cmath>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/interference.hpp"

namespace hdqfc::qudit {

std::vector<double> default_phase_grid(int steps) {
    if (steps < 3) throw ValidationError("phase grid needs at least 3 steps");
    std::vector<double> out(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) out[i] = constants::two_pi * i / steps;
    return out;
}

double interference_probability(int dimension, double phase) {
    const QuditKet psi = balanced_qudit(dimension);
    ChannelSpec shift = ChannelSpec::uniform(dimension);
    shift.phase.back() = phase;
    const auto shifted = apply_channel(psi, shift);
    return projection_probability(DensityMatrix::from_ket(shifted.ket), psi.amplitudes);
}

double analytic_visibility(int dimension) {
    if (dimension < 2) throw ValidationError("visibility needs d >= 2");
    const double d2 = static_cast<double>(dimension) * dimension;
    const double m2 = static_cast<double>(dimension - 2) * (dimension - 2);
    return (d2 - m2) / (d2 + m2);
}

InterferenceCurve interference_curve(int dimension, const std::vector<double>& phases) {
    InterferenceCurve c{phases, {}, analytic_visibility(dimension)};
    c.coincidence.reserve(phases.size());
    for (double ph : phases) c.coincidence.push_back(interference_probability(dimension, ph));
    return c;
}

std::vector<std::uint64_t> simulate_scan(int dimension, const std::vector<double>& phases, const ScanParams& params) {
    if (!(params.source_rate >= 0.0) || !(params.duration >= 0.0) || !(params.dark_rate >= 0.0))
        throw ValidationError("scan rates and durations must be non-negative");
    std::vector<std::uint64_t> out(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double mean = params.source_rate * params.duration * interference_probability(dimension, phases[i]) +
                            params.dark_rate * params.duration;
        out[i] = draw_counts(mean, derive_seed(params.seed, dimension, static_cast<int>(i)));
    }
    return out;
}

VisibilityFit fit_visibility(const std::vector<double>& phases, const std::vector<std::uint64_t>& counts,
                             double background_per_point) {
    if (phases.size() != counts.size() || phases.size() < 3)
        throw ValidationError("visibility fit needs matching phase and count arrays of length >= 3");
    const auto n = static_cast<Eigen::Index>(phases.size());
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n), raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = std::cos(phases[i]);
        x(i, 2) = std::sin(phases[i]);
        raw[i] = static_cast<double>(counts[i]);
        y[i] = raw[i] - background_per_point;
    }

    // Iteratively reweighted least squares with Poisson variances taken from
    // the current model; the fixed point is the Poisson maximum likelihood fit.
    Eigen::VectorXd w = raw.cwiseMax(1.0).cwiseInverse();
    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
    Eigen::Matrix3d cov;
    for (int iter = 0; iter < 100; ++iter) {
        const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(xtw * x);
        if (ldlt.info() != Eigen::Success) throw NumericalError("visibility fit is singular");
        const Eigen::Vector3d next = ldlt.solve(xtw * y);
        cov = ldlt.solve(Eigen::MatrixXd::Identity(3, 3));
        const double change = (next - beta).norm();
        beta = next;
        if (change <= 1e-12 * std::max(1.0, beta.norm())) break;
        w = ((x * beta).array() + background_per_point).max(1.0).inverse().matrix();
    }

    const double a = beta[0];
    const double amp = std::hypot(beta[1], beta[2]);
    if (!(a > 0.0)) return {0.0, 0.0, a, amp};
    const double v = amp / a;
    // gradient of amp / a with respect to (a, b, c)
    Eigen::Vector3d g(-v / a, amp > 0.0 ? beta[1] / (amp * a) : 0.0, amp > 0.0 ? beta[2] / (amp * a) : 0.0);
    const double sigma = std::sqrt(std::max(0.0, g.dot(cov * g)));
    return {std::min(1.0, v), sigma, a, amp};
}

CrosstalkResult crosstalk_matrix(const ChannelSpec& channel, const CrosstalkParams& params) {
    params.counting.validate();
    channel.validate();
    const int d = static_cast<int>(params.charges.size());
    if (channel.dimension() != d) throw ValidationError("channel size differs from the crosstalk window");
    if (params.charges != oam_labels(d)) throw ValidationError("crosstalk window must be a symmetric range -h..h");

    CrosstalkResult out{params.charges, Eigen::MatrixXd::Zero(d, d), 0.0};
    const double t = params.counting.duration;
    for (int in = 0; in < d; ++in) {
        const auto converted = apply_channel({Ket::Unit(d, in)}, channel);
        const DensityMatrix rho = DensityMatrix::from_ket(converted.ket);
        for (int an = 0; an < d; ++an) {
            const double p = detection_probability(rho, Ket::Unit(d, an), params.counting.collection);
            const double mean = params.counting.source_rate * t * converted.survival * p + params.counting.dark_rate * t;
            out.counts(in, an) = static_cast<double>(draw_counts(mean, derive_seed(params.counting.seed, in, an)));
        }
    }
    const double total = out.counts.sum();
    out.visibility = total > 0.0 ? out.counts.trace() / total : 0.0;
    return out;
}

}  // namespace hdqfc::qudit
