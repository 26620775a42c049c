#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hdqfc/field.hpp"
#include "hdqfc/grid.hpp"

namespace hdqfc::sfg {

/// Nonlinear crystal. Indices are data (no Sellmeier evaluation); the 2/pi
/// quasi-phase-matching reduction is already folded into d_eff.
struct CrystalSpec {
    double length = 10e-3;                 // m
    double d_eff = 10.8e-12;               // m/V
    std::optional<double> poling_period;   // m; nullopt = first-order QPM period for the triplet
    double n_signal = 1.816;
    double n_visible = 1.889;
    double n_pump = 1.846;

    void validate() const;
};

/// Pump + signal -> visible wavelengths, tied by 1/lambda_V = 1/lambda_P + 1/lambda_I.
struct WaveTriplet {
    double pump = 794e-9;
    double signal = 1550e-9;
    double visible = 1.0 / (1.0 / 794e-9 + 1.0 / 1550e-9);

    static WaveTriplet from_pump_and_signal(double pump, double signal);
    void validate() const;
};

struct SfgRunConfig {
    std::size_t z_steps = 200;
    std::optional<double> delta_k_override;  // 1/m; default 0 (perfect QPM)
    GridSpec grid;
    bool pump_diffraction = true;
    double max_photon_drift = 1e-3;  // relative; larger drift aborts the run

    void validate(double crystal_length) const;
};

/// Delta k = k_P + k_I - k_V + 2 pi / Lambda with k = 2 pi n / lambda.
double phase_mismatch(const CrystalSpec& crystal, const WaveTriplet& triplet);
/// Poling period that makes phase_mismatch zero. Throws if k_V <= k_P + k_I.
double qpm_period(const CrystalSpec& crystal, const WaveTriplet& triplet);

/// Coupling rate kappa_j = omega_j d_eff sqrt(2 / (n_V n_P n_I eps0 c^3)) of the
/// intensity-normalized equations, for the signal and visible waves.
struct CouplingRates {
    double signal;
    double visible;
};
CouplingRates coupling_rates(const CrystalSpec& crystal, const WaveTriplet& triplet);

struct SplitStepResult {
    TransverseField signal_out;
    TransverseField visible_out;
    double max_photon_drift;           // max over z of |N(z) - N(0)| / N(0)
    std::vector<double> photon_flux;   // N_I + N_V after each step, arbitrary units
};

/// Undepleted-pump split-step Fourier solver over z in [-L/2, L/2]. The
/// fields are given at the input facet; the visible field starts at zero.
/// Strang splitting: half-step paraxial diffraction, exact per-sample
/// nonlinear rotation at the step midpoint, half-step diffraction.
SplitStepResult run_split_step(const TransverseField& signal, const TransverseField& pump,
                               const CrystalSpec& crystal, const WaveTriplet& triplet, const SfgRunConfig& cfg);

/// Paraxial free propagation inside the crystal (same transfer as the solver).
TransverseField propagate_paraxial(const TransverseField& field, double distance);

enum class PumpKind { gaussian, flat_top };
std::string to_string(PumpKind kind);
PumpKind pump_kind_from_string(const std::string& name);

struct ModeEfficiency {
    int charge = 0;
    double eta_p = 0.0;  // %/W
    double eta_q = 0.0;  // dimensionless
    PumpKind pump_kind = PumpKind::flat_top;
    double gamma = 0.0;  // pump/signal size ratio
};

struct CEResult {
    double eta_p = 0.0;       // %/W, P_V / (P_I P_P)
    double eta_q = 0.0;       // P_V lambda_V / (P_I lambda_I)
    double pump_power = 0.0;  // W
    std::vector<ModeEfficiency> per_mode;
};

/// Normalized conversion efficiency of a completed run. The per-mode table
/// gets one entry when the signal is an OAM eigenmode (weight > 0.999).
CEResult compute_nce(const TransverseField& signal_in, const TransverseField& pump_in,
                     const TransverseField& visible_out, PumpKind kind = PumpKind::flat_top, double gamma = 0.0);

void write_ce_csv(std::ostream& out, const std::vector<ModeEfficiency>& rows);

// ---------------------------------------------------------------------------
// Numeric efficiencies: build the beams at the crystal center, back-propagate
// them to the input facet and run the solver.

struct NumericOptions {
    std::size_t n_points = 512;
    std::size_t z_steps = 200;
    double pump_power = 0.2;     // W
    double signal_power = 1e-3;  // W
    bool pump_diffraction = true;
    int flat_top_edge_order = 20;
    std::optional<double> delta_k_override;
    std::optional<GridSpec> grid;  // overrides the 8x-largest-radius default
};

struct NumericRun {
    CEResult ce;
    double max_photon_drift;
    TransverseField visible_out;
    GridSpec grid;
};

NumericRun numeric_run_gaussian(int charge, double pump_waist, double signal_waist, const CrystalSpec& crystal,
                                const WaveTriplet& triplet, const NumericOptions& options = {});
NumericRun numeric_run_flat_top(int charge, double flat_top_width, double signal_waist, const CrystalSpec& crystal,
                                const WaveTriplet& triplet, const NumericOptions& options = {});

/// eta_p (%/W) for a Gaussian pump of waist w_p and an LG_{0,L} signal of waist w_i.
double numeric_nce_gaussian(int charge, double pump_waist, double signal_waist, const CrystalSpec& crystal,
                            const WaveTriplet& triplet, const NumericOptions& options = {});
double numeric_nce_flat_top(int charge, double flat_top_width, double signal_waist, const CrystalSpec& crystal,
                            const WaveTriplet& triplet, const NumericOptions& options = {});

/// Grid radius needed for a run: max(pump radius, w_i sqrt(|L|+1)).
GridSpec default_run_grid(double pump_radius, double signal_waist, int max_abs_charge, std::size_t n_points = 512);

// ---------------------------------------------------------------------------
// Flat-top analytic model (non-diffracting flat-top pump, diffracting LG signal)

struct FlatTopOverlap {
    double truncation;    // fraction of LG_{0,|L|} power inside the plateau, P(|L|+1, 2 gamma^2)
    double longitudinal;  // m^2, double crystal-length integral of the diffraction kernel
    double value() const { return truncation * longitudinal; }
};

/// h(L, gamma) split into its transverse and longitudinal factors.
FlatTopOverlap flat_top_overlap(int charge, double gamma, const CrystalSpec& crystal, const WaveTriplet& triplet,
                                double signal_waist, double delta_k = 0.0);

/// eta_p (%/W) for an OAM eigenstate under an ideal flat-top pump of radius w_p;
/// the signal waist is w_p / gamma. Negative charges are evaluated at |L|.
double analytic_nce_flat_top(int charge, double gamma, const CrystalSpec& crystal, const WaveTriplet& triplet,
                             double pump_width, double delta_k = 0.0);

// ---------------------------------------------------------------------------
// Beam-splitter mode picture

struct ModeBeamSplitter {
    std::array<std::array<double, 2>, 2> matrix;  // [[cos, -sin], [sin, cos]]
    double transmission;                          // cos^2
    double conversion;                            // sin^2
};

ModeBeamSplitter mode_beam_splitter(double xi, double tau);

struct ModeCoupling {
    std::map<int, double> xi;  // per-mode coupling rate, 1/s
    double tau = 1.0;          // interaction time, s

    double theta(int charge) const;
};

/// theta_L = asin(sqrt(eta_q,L)); xi_L = theta_L / tau.
ModeCoupling calibrate_xi(const std::map<int, double>& eta_q, double tau = 1.0);

/// Photon transit time n_I L / c through the crystal.
double transit_time(const CrystalSpec& crystal);

// ---------------------------------------------------------------------------

struct SurfaceOptions {
    double signal_waist = 100e-6;
    CrystalSpec crystal;
    WaveTriplet triplet;
    NumericOptions numeric;
};

struct CeSurface {
    std::vector<int> charges;
    std::vector<double> gammas;
    std::vector<std::vector<double>> eta_p;  // [charge][gamma], %/W
    PumpKind kind;

    std::vector<ModeEfficiency> rows() const;
};

/// Flat-top: analytic model. Gaussian: numeric solver with w_p = gamma * w_i.
CeSurface ce_surface(const std::vector<int>& charges, const std::vector<double>& gammas, PumpKind kind,
                     const SurfaceOptions& options = {});

}  // namespace hdqfc::sfg
