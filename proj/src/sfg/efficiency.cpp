#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "hdqfc/errors.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/sfg.hpp"

namespace hdqfc::sfg {

std::string to_string(PumpKind kind) { return kind == PumpKind::gaussian ? "gaussian" : "flat_top"; }

PumpKind pump_kind_from_string(const std::string& name) {
    if (name == "gaussian") return PumpKind::gaussian;
    if (name == "flat_top") return PumpKind::flat_top;
    throw ValidationError("unknown pump kind '" + name + "' (expected gaussian or flat_top)");
}

CEResult compute_nce(const TransverseField& signal_in, const TransverseField& pump_in,
                     const TransverseField& visible_out, PumpKind kind, double gamma) {
    const double p_signal = signal_in.power();
    const double p_pump = pump_in.power();
    if (!(p_signal > 0.0) || !(p_pump > 0.0)) throw ValidationError("conversion efficiency needs non-zero inputs");
    const double p_visible = visible_out.power();

    CEResult ce;
    ce.pump_power = p_pump;
    ce.eta_p = 100.0 * p_visible / (p_signal * p_pump);
    ce.eta_q = p_visible * visible_out.wavelength() / (p_signal * signal_in.wavelength());

    const auto spectrum = optics::oam_spectrum(signal_in, optics::beam_radius(signal_in));
    const int l = spectrum.dominant();
    if (spectrum.weight(l) > 0.999) ce.per_mode.push_back({l, ce.eta_p, ce.eta_q, kind, gamma});
    return ce;
}

void write_ce_csv(std::ostream& out, const std::vector<ModeEfficiency>& rows) {
    out << "L,eta_p_percent_per_watt,eta_q,pump_kind,gamma\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.9e,%.9e,%s,%.6g\n", r.charge, r.eta_p, r.eta_q,
                      to_string(r.pump_kind).c_str(), r.gamma);
        out << buf;
    }
}

GridSpec default_run_grid(double pump_radius, double signal_waist, int max_abs_charge, std::size_t n_points) {
    const double signal_radius = signal_waist * std::sqrt(std::abs(max_abs_charge) + 1.0);
    return GridSpec::for_beam_radius(std::max(pump_radius, signal_radius), n_points);
}

namespace {

NumericRun run_with_pump(int charge, double signal_waist, const TransverseField& pump_center, double pump_radius,
                         PumpKind kind, const GridSpec& grid, const CrystalSpec& crystal, const WaveTriplet& triplet,
                         const NumericOptions& options) {
    const double half = crystal.length / 2.0;
    auto signal_center = optics::make_lg_mode({charge, 0, signal_waist}, grid, triplet.signal, options.signal_power,
                                              crystal.n_signal);
    auto signal_in = propagate_paraxial(signal_center, -half);
    auto pump_in = options.pump_diffraction ? propagate_paraxial(pump_center, -half) : pump_center;

    SfgRunConfig cfg;
    cfg.z_steps = options.z_steps;
    cfg.delta_k_override = options.delta_k_override;
    cfg.grid = grid;
    cfg.pump_diffraction = options.pump_diffraction;
    auto run = run_split_step(signal_in, pump_in, crystal, triplet, cfg);

    const double gamma = pump_radius / signal_waist;
    auto ce = compute_nce(signal_in, pump_in, run.visible_out, kind, gamma);
    if (ce.per_mode.empty()) ce.per_mode.push_back({charge, ce.eta_p, ce.eta_q, kind, gamma});
    return {std::move(ce), run.max_photon_drift, std::move(run.visible_out), grid};
}

}  // namespace

NumericRun numeric_run_gaussian(int charge, double pump_waist, double signal_waist, const CrystalSpec& crystal,
                                const WaveTriplet& triplet, const NumericOptions& options) {
    if (!(pump_waist > 0.0) || !(signal_waist > 0.0)) throw ValidationError("beam waists must be positive");
    const GridSpec grid = options.grid.value_or(default_run_grid(pump_waist, signal_waist, charge, options.n_points));
    auto pump = optics::make_lg_mode({0, 0, pump_waist}, grid, triplet.pump, options.pump_power, crystal.n_pump);
    return run_with_pump(charge, signal_waist, pump, pump_waist, PumpKind::gaussian, grid, crystal, triplet, options);
}

NumericRun numeric_run_flat_top(int charge, double flat_top_width, double signal_waist, const CrystalSpec& crystal,
                                const WaveTriplet& triplet, const NumericOptions& options) {
    if (!(flat_top_width > 0.0) || !(signal_waist > 0.0)) throw ValidationError("beam sizes must be positive");
    const GridSpec grid =
        options.grid.value_or(default_run_grid(flat_top_width, signal_waist, charge, options.n_points));
    auto pump = optics::make_flat_top({flat_top_width, options.flat_top_edge_order, options.pump_power}, grid,
                                      triplet.pump, crystal.n_pump);
    return run_with_pump(charge, signal_waist, pump, flat_top_width, PumpKind::flat_top, grid, crystal, triplet,
                         options);
}

double numeric_nce_gaussian(int charge, double pump_waist, double signal_waist, const CrystalSpec& crystal,
                            const WaveTriplet& triplet, const NumericOptions& options) {
    return numeric_run_gaussian(charge, pump_waist, signal_waist, crystal, triplet, options).ce.eta_p;
}

double numeric_nce_flat_top(int charge, double flat_top_width, double signal_waist, const CrystalSpec& crystal,
                            const WaveTriplet& triplet, const NumericOptions& options) {
    return numeric_run_flat_top(charge, flat_top_width, signal_waist, crystal, triplet, options).ce.eta_p;
}

std::vector<ModeEfficiency> CeSurface::rows() const {
    std::vector<ModeEfficiency> out;
    for (std::size_t i = 0; i < charges.size(); ++i)
        for (std::size_t j = 0; j < gammas.size(); ++j) out.push_back({charges[i], eta_p[i][j], 0.0, kind, gammas[j]});
    return out;
}

CeSurface ce_surface(const std::vector<int>& charges, const std::vector<double>& gammas, PumpKind kind,
                     const SurfaceOptions& options) {
    if (charges.empty() || gammas.empty()) throw ValidationError("CE surface needs non-empty L and gamma ranges");
    for (double g : gammas)
        if (!(g > 0.0)) throw ValidationError("gamma values must be positive");

    CeSurface s{charges, gammas, std::vector<std::vector<double>>(charges.size(), std::vector<double>(gammas.size())),
                kind};
    int max_l = 0;
    for (int l : charges) max_l = std::max(max_l, std::abs(l));

    const auto n_l = static_cast<std::ptrdiff_t>(charges.size());
    const auto n_g = static_cast<std::ptrdiff_t>(gammas.size());
    const double w_i = options.signal_waist;
#pragma omp parallel for schedule(dynamic) collapse(2)
    for (std::ptrdiff_t i = 0; i < n_l; ++i) {
        for (std::ptrdiff_t j = 0; j < n_g; ++j) {
            const double w_p = gammas[j] * w_i;
            double eta;
            if (kind == PumpKind::flat_top) {
                eta = analytic_nce_flat_top(charges[i], gammas[j], options.crystal, options.triplet, w_p);
            } else {
                NumericOptions opts = options.numeric;
                // one grid per gamma so all charges at that gamma share it
                if (!opts.grid) opts.grid = default_run_grid(w_p, w_i, max_l, opts.n_points);
                eta = numeric_nce_gaussian(charges[i], w_p, w_i, options.crystal, options.triplet, opts);
            }
            s.eta_p[i][j] = eta;
        }
    }
    return s;
}

}  // namespace hdqfc::sfg
