#include <cmath>
#include <sstream>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/fft.hpp"
#include "hdqfc/kernels.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::sfg {
namespace {

// exp(-i q^2 h / (2k)), the Fourier-domain form of dE/dz = i/(2k) lap E.
FieldBuffer paraxial_transfer(const GridSpec& grid, double k, double h) {
    const std::size_t n = grid.n_points;
    const double dq = constants::two_pi / grid.window();
    FieldBuffer t(grid.size());
    for (std::size_t r = 0; r < n; ++r) {
        const double qy = static_cast<double>(fft_frequency_index(r, n)) * dq;
        for (std::size_t c = 0; c < n; ++c) {
            const double qx = static_cast<double>(fft_frequency_index(c, n)) * dq;
            t[r * n + c] = std::polar(1.0, -(qx * qx + qy * qy) * h / (2.0 * k));
        }
    }
    return t;
}

void diffract(const Fft2& fft, FieldBuffer& data, const FieldBuffer& transfer) {
    fft.forward(data);
    kernels::omp::multiply(data, transfer);
    fft.inverse(data);
}

double rayleigh_range(const TransverseField& f) {
    const double w = optics::beam_radius(f);
    return 0.5 * f.wavenumber() * w * w;
}

}  // namespace

TransverseField propagate_paraxial(const TransverseField& field, double distance) {
    FieldBuffer data = field.buffer();
    diffract(Fft2(field.grid().n_points), data, paraxial_transfer(field.grid(), field.wavenumber(), distance));
    return field.with_amplitude(std::move(data));
}

SplitStepResult run_split_step(const TransverseField& signal, const TransverseField& pump, const CrystalSpec& crystal,
                               const WaveTriplet& triplet, const SfgRunConfig& cfg) {
    crystal.validate();
    triplet.validate();
    cfg.validate(crystal.length);
    if (!(signal.grid() == cfg.grid) || !(pump.grid() == cfg.grid))
        throw ValidationError("signal, pump and run config must share one grid");

    const GridSpec& grid = cfg.grid;
    const double dz = crystal.length / static_cast<double>(cfg.z_steps);
    const double signal_power = signal.power();
    if (!(signal_power > 0.0)) throw ValidationError("signal field carries no power");
    const bool pump_on = pump.power() > 0.0;

    double z_r = rayleigh_range(signal);
    if (pump_on && cfg.pump_diffraction) z_r = std::min(z_r, rayleigh_range(pump));
    if (dz > 0.05 * z_r) {
        std::ostringstream msg;
        msg << "z step " << dz << " m is not small against the Rayleigh range " << z_r << " m";
        throw ValidationError(msg.str());
    }

    const double k_signal = constants::two_pi * crystal.n_signal / triplet.signal;
    const double k_visible = constants::two_pi * crystal.n_visible / triplet.visible;
    const double k_pump = constants::two_pi * crystal.n_pump / triplet.pump;
    const auto rates = coupling_rates(crystal, triplet);
    const double delta_k = cfg.delta_k_override.value_or(0.0);

    const auto sig_half = paraxial_transfer(grid, k_signal, dz / 2);
    const auto sig_full = paraxial_transfer(grid, k_signal, dz);
    const auto vis_half = paraxial_transfer(grid, k_visible, dz / 2);
    const auto vis_full = paraxial_transfer(grid, k_visible, dz);

    Fft2 fft(grid.n_points);
    FieldBuffer a_signal = signal.buffer();
    FieldBuffer a_visible(grid.size(), cplx{});
    FieldBuffer a_pump = pump.buffer();

    FieldBuffer pump_half, pump_full;
    const bool pump_moves = pump_on && cfg.pump_diffraction;
    if (pump_moves) {
        pump_half = paraxial_transfer(grid, k_pump, dz / 2);
        pump_full = paraxial_transfer(grid, k_pump, dz);
        diffract(fft, a_pump, pump_half);
    }

    // photon flux in units of W * m (P * lambda is proportional to P / omega)
    auto flux = [&] {
        const double p2 = grid.pitch * grid.pitch;
        return (kernels::omp::sum_abs2(a_signal) * triplet.signal + kernels::omp::sum_abs2(a_visible) * triplet.visible) *
               p2;
    };
    const double flux0 = flux();

    double max_drift = 0.0;
    std::vector<double> history;
    history.reserve(cfg.z_steps);

    diffract(fft, a_signal, sig_half);
    for (std::size_t j = 0; j < cfg.z_steps; ++j) {
        const double z_mid = -crystal.length / 2 + (static_cast<double>(j) + 0.5) * dz;
        if (pump_on) {
            kernels::CouplingStep step{rates.signal, rates.visible, dz, std::polar(1.0, -delta_k * z_mid)};
            kernels::omp::sfg_coupling_step(a_signal, a_visible, a_pump, step);
        }
        const bool last = j + 1 == cfg.z_steps;
        diffract(fft, a_signal, last ? sig_half : sig_full);
        diffract(fft, a_visible, last ? vis_half : vis_full);
        if (pump_moves && !last) diffract(fft, a_pump, pump_full);

        const double n_now = flux();
        history.push_back(n_now);
        const double drift = std::abs(n_now - flux0) / flux0;
        max_drift = std::max(max_drift, drift);
        if (drift > cfg.max_photon_drift) {
            std::ostringstream msg;
            msg << "photon balance drifted by " << drift << " at step " << j << "; reduce the z step";
            throw NumericalError(msg.str());
        }
    }

    return {signal.with_amplitude(std::move(a_signal)),
            TransverseField(grid, triplet.visible, crystal.n_visible, std::move(a_visible)), max_drift,
            std::move(history)};
}

}  // namespace hdqfc::sfg
