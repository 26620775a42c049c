#include <cmath>
#include <complex>
#include <cstdlib>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::sfg {

FlatTopOverlap flat_top_overlap(int charge, double gamma, const CrystalSpec& crystal, const WaveTriplet& triplet,
                                double signal_waist, double delta_k) {
    crystal.validate();
    triplet.validate();
    if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
    if (!(signal_waist > 0.0)) throw ValidationError("signal waist must be positive");

    const int l = std::abs(charge);
    const double order = l + 1.0;
    const double truncation = boost::math::gamma_p(order, 2.0 * gamma * gamma);

    const double k_signal = constants::two_pi * crystal.n_signal / triplet.signal;
    const double k_visible = constants::two_pi * crystal.n_visible / triplet.visible;
    const double beta = 1.0 - k_signal / k_visible;
    const double z_signal = 0.5 * k_signal * signal_waist * signal_waist;
    const double length = crystal.length;

    // Overlap of the generated visible wave with the signal mode after a
    // separation s: the visible diffracts slower, leaving a residual beta*s.
    auto integrand = [&](double s) {
        const std::complex<double> kernel =
            std::polar(1.0, -delta_k * s) * std::pow(std::complex<double>(1.0, beta * s / (2.0 * z_signal)), -order);
        return (length - s) * kernel.real();
    };
    double error = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, length, 15, 1e-12, &error);
    if (!std::isfinite(integral) || error > 1e-9 * std::max(std::abs(integral), length * length * 1e-12))
        throw NumericalError("flat-top longitudinal quadrature did not converge");
    return {truncation, 2.0 * integral};
}

double analytic_nce_flat_top(int charge, double gamma, const CrystalSpec& crystal, const WaveTriplet& triplet,
                             double pump_width, double delta_k) {
    if (!(pump_width > 0.0)) throw ValidationError("pump width must be positive");
    const auto h = flat_top_overlap(charge, gamma, crystal, triplet, pump_width / gamma, delta_k);
    const double kappa = coupling_rates(crystal, triplet).visible;
    return 100.0 * kappa * kappa / (constants::pi * pump_width * pump_width) * h.value();
}

}  // namespace hdqfc::sfg
