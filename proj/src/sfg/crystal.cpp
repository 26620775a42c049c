#include <cmath>
#include <string>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::sfg {

void CrystalSpec::validate() const {
    if (!(length > 0.0)) throw ValidationError("crystal length must be positive");
    if (!(d_eff > 0.0)) throw ValidationError("crystal d_eff must be positive");
    if (poling_period && !(*poling_period > 0.0)) throw ValidationError("poling period must be positive");
    for (double n : {n_signal, n_visible, n_pump})
        if (!(n > 1.0 && n < 3.0)) throw ValidationError("refractive indices must lie in (1, 3)");
}

WaveTriplet WaveTriplet::from_pump_and_signal(double pump, double signal) {
    return {pump, signal, 1.0 / (1.0 / pump + 1.0 / signal)};
}

void WaveTriplet::validate() const {
    if (!(pump > 0.0 && signal > 0.0 && visible > 0.0)) throw ValidationError("wavelengths must be positive");
    const double lhs = 1.0 / visible;
    const double rhs = 1.0 / pump + 1.0 / signal;
    if (std::abs(lhs - rhs) > 1e-12 * lhs)
        throw ValidationError("triplet violates energy conservation 1/lambda_V = 1/lambda_P + 1/lambda_I");
}

void SfgRunConfig::validate(double crystal_length) const {
    grid.validate();
    if (z_steps < 50) throw ValidationError("z_steps must be >= 50");
    if (!(max_photon_drift > 0.0)) throw ValidationError("max_photon_drift must be positive");
    if (!(crystal_length > 0.0)) throw ValidationError("crystal length must be positive");
}

namespace {
double wavenumber(double n, double lambda) { return constants::two_pi * n / lambda; }
}  // namespace

double qpm_period(const CrystalSpec& crystal, const WaveTriplet& triplet) {
    const double mismatch = wavenumber(crystal.n_visible, triplet.visible) - wavenumber(crystal.n_pump, triplet.pump) -
                            wavenumber(crystal.n_signal, triplet.signal);
    if (!(mismatch > 0.0))
        throw ValidationError("k_V <= k_P + k_I: no positive first-order poling period exists for these indices");
    return constants::two_pi / mismatch;
}

double phase_mismatch(const CrystalSpec& crystal, const WaveTriplet& triplet) {
    const double period = crystal.poling_period.value_or(qpm_period(crystal, triplet));
    return wavenumber(crystal.n_pump, triplet.pump) + wavenumber(crystal.n_signal, triplet.signal) -
           wavenumber(crystal.n_visible, triplet.visible) + constants::two_pi / period;
}

CouplingRates coupling_rates(const CrystalSpec& crystal, const WaveTriplet& triplet) {
    using namespace constants;
    const double c3 = speed_of_light * speed_of_light * speed_of_light;
    const double kappa = crystal.d_eff *
                         std::sqrt(2.0 / (crystal.n_visible * crystal.n_pump * crystal.n_signal * vacuum_permittivity * c3));
    return {kappa * two_pi * speed_of_light / triplet.signal, kappa * two_pi * speed_of_light / triplet.visible};
}

double transit_time(const CrystalSpec& crystal) {
    return crystal.n_signal * crystal.length / constants::speed_of_light;
}

}  // namespace hdqfc::sfg
