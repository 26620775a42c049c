#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/sfg.hpp"
#include "oracles/lg_oracle.hpp"

using namespace hdqfc;
using namespace hdqfc::sfg;

namespace {

const CrystalSpec crystal;
const WaveTriplet triplet;

NumericOptions coarse(std::size_t n = 256) {
    NumericOptions o;
    o.n_points = n;
    return o;
}

double k_of(double n, double lambda) { return constants::two_pi * n / lambda; }

}  // namespace

TEST_CASE("wave triplet and crystal validation") {
    CHECK(triplet.visible == doctest::Approx(525.04e-9).epsilon(1e-4));
    CHECK_NOTHROW(triplet.validate());
    CHECK_THROWS_AS((WaveTriplet{794e-9, 1550e-9, 530e-9}.validate()), ValidationError);
    const auto t = WaveTriplet::from_pump_and_signal(803e-9, 1475e-9);
    CHECK_NOTHROW(t.validate());

    CrystalSpec bad = crystal;
    bad.length = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = crystal;
    bad.n_visible = 3.2;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("phase mismatch vanishes at the QPM period and has the expected sign and symmetry") {
    const double kv = k_of(crystal.n_visible, triplet.visible);
    CHECK(std::abs(phase_mismatch(crystal, triplet)) <= 1e-6 * kv);

    const double period = qpm_period(crystal, triplet);
    CrystalSpec longer = crystal;
    longer.poling_period = period * (1.0 + 1e-3);
    const double dk = phase_mismatch(longer, triplet);
    CHECK(dk < 0.0);
    CHECK(dk == doctest::Approx(constants::two_pi / period * (1.0 / (1.0 + 1e-3) - 1.0)).epsilon(1e-6));

    CrystalSpec fixed = crystal;
    fixed.poling_period = period;
    CrystalSpec swapped = fixed;
    std::swap(swapped.n_signal, swapped.n_pump);
    const WaveTriplet t_swapped{triplet.signal, triplet.pump, triplet.visible};
    CHECK(phase_mismatch(swapped, t_swapped) == doctest::Approx(phase_mismatch(fixed, triplet)).epsilon(1e-12));

    CrystalSpec no_qpm = crystal;
    no_qpm.n_visible = 1.789;  // k_V < k_P + k_I: no positive first-order period
    CHECK_THROWS_AS(qpm_period(no_qpm, triplet), ValidationError);
}

TEST_CASE("coupling rates scale with frequency") {
    const auto k = coupling_rates(crystal, triplet);
    CHECK(k.visible / k.signal == doctest::Approx(triplet.signal / triplet.visible).epsilon(1e-12));
    CHECK(transit_time(crystal) == doctest::Approx(crystal.n_signal * crystal.length / constants::speed_of_light));
}

TEST_CASE("split-step without pump is plain diffraction") {
    const GridSpec grid = default_run_grid(200e-6, 100e-6, 1, 128);
    const auto signal = optics::make_lg_mode({1, 0, 100e-6}, grid, triplet.signal, 1e-3, crystal.n_signal);
    const auto pump = optics::make_flat_top({200e-6, 20, 0.0}, grid, triplet.pump, crystal.n_pump);
    SfgRunConfig cfg;
    cfg.grid = grid;
    const auto run = run_split_step(signal, pump, crystal, triplet, cfg);
    CHECK(run.visible_out.power() == 0.0);
    const auto expected = propagate_paraxial(signal, crystal.length);
    double diff = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        diff = std::max(diff, std::abs(run.signal_out.amplitude()[i] - expected.amplitude()[i]));
    CHECK(diff < 1e-10 * std::sqrt(signal.peak_intensity()));
}

TEST_CASE("split-step rejects inconsistent inputs") {
    const GridSpec grid{128, 4e-6};
    const auto signal = optics::make_lg_mode({0, 0, 50e-6}, grid, triplet.signal, 1e-3, crystal.n_signal);
    const auto pump = optics::make_lg_mode({0, 0, 50e-6}, GridSpec{128, 5e-6}, triplet.pump, 0.2, crystal.n_pump);
    SfgRunConfig cfg;
    cfg.grid = grid;
    CHECK_THROWS_AS(run_split_step(signal, pump, crystal, triplet, cfg), ValidationError);

    const auto pump_ok = optics::make_lg_mode({0, 0, 50e-6}, grid, triplet.pump, 0.2, crystal.n_pump);
    cfg.z_steps = 40;
    CHECK_THROWS_AS(run_split_step(signal, pump_ok, crystal, triplet, cfg), ValidationError);

    // 5 um waist: the step exceeds the tightest Rayleigh range budget
    const GridSpec fine{128, 0.5e-6};
    const auto tight = optics::make_lg_mode({0, 0, 5e-6}, fine, triplet.signal, 1e-3, crystal.n_signal);
    const auto tight_pump = optics::make_lg_mode({0, 0, 5e-6}, fine, triplet.pump, 0.2, crystal.n_pump);
    SfgRunConfig fine_cfg;
    fine_cfg.grid = fine;
    CHECK_THROWS_AS(run_split_step(tight, tight_pump, crystal, triplet, fine_cfg), ValidationError);
}

TEST_CASE("split-step conserves photons and OAM") {
    const auto run = numeric_run_flat_top(2, 200e-6, 100e-6, crystal, triplet, coarse());
    CHECK(run.max_photon_drift < 1e-3);
    CHECK(run.ce.per_mode.size() == 1);
    CHECK(run.ce.per_mode[0].charge == 2);
    const auto spectrum = optics::oam_spectrum(run.visible_out, 100e-6 * std::sqrt(3.0));
    CHECK(spectrum.weight(2) > 1.0 - 1e-3);
}

TEST_CASE("conversion efficiency is independent of pump power in the linear regime") {
    std::vector<double> eta;
    for (double p : {0.1, 0.2, 0.4}) {
        auto o = coarse();
        o.pump_power = p;
        eta.push_back(numeric_nce_flat_top(1, 200e-6, 100e-6, crystal, triplet, o));
    }
    CHECK(eta[0] == doctest::Approx(eta[1]).epsilon(1e-2));
    CHECK(eta[2] == doctest::Approx(eta[1]).epsilon(1e-2));
}

TEST_CASE("halving the z-step changes the efficiency by less than 1e-4") {
    auto o = coarse();
    const double base = numeric_nce_flat_top(1, 200e-6, 100e-6, crystal, triplet, o);
    o.z_steps = 400;
    const double fine = numeric_nce_flat_top(1, 200e-6, 100e-6, crystal, triplet, o);
    CHECK(std::abs(fine / base - 1.0) < 1e-4);
}

TEST_CASE("compute_nce definitions") {
    const GridSpec grid{128, 4e-6};
    const auto s = optics::make_lg_mode({0, 0, 50e-6}, grid, triplet.signal, 2e-3);
    const auto p = optics::make_lg_mode({0, 0, 50e-6}, grid, triplet.pump, 0.5);
    auto v = optics::make_lg_mode({0, 0, 50e-6}, grid, triplet.visible, 1e-8);

    const auto ce = compute_nce(s, p, v);
    CHECK(ce.eta_p == doctest::Approx(100.0 * 1e-8 / (2e-3 * 0.5)));
    CHECK(ce.eta_q == doctest::Approx(ce.eta_p / 100.0 * 0.5 * triplet.visible / triplet.signal).epsilon(1e-12));
    CHECK(ce.pump_power == doctest::Approx(0.5));

    const auto dark = v.with_amplitude(FieldBuffer(grid.size(), cplx{}));
    CHECK(compute_nce(s, p, dark).eta_p == 0.0);
    CHECK_THROWS_AS(compute_nce(dark, p, v), ValidationError);
}

TEST_CASE("CE table serializes to CSV") {
    std::ostringstream out;
    write_ce_csv(out, {{0, 0.37, 1e-3, PumpKind::flat_top, 2.0}, {-1, 0.5, 2e-3, PumpKind::gaussian, 1.0}});
    const std::string csv = out.str();
    CHECK(csv.rfind("L,eta_p_percent_per_watt,eta_q,pump_kind,gamma\n", 0) == 0);
    CHECK(csv.find("-1,5.000000000e-01,2.000000000e-03,gaussian,1\n") != std::string::npos);
    CHECK(pump_kind_from_string("flat_top") == PumpKind::flat_top);
    CHECK_THROWS_AS(pump_kind_from_string("tophat"), ValidationError);
}

TEST_CASE("flat-top model: truncation and longitudinal factors match brute-force quadrature") {
    const double wi = 100e-6, gamma = 2.0;
    const auto h = flat_top_overlap(1, gamma, crystal, triplet, wi);
    CHECK(h.truncation == doctest::Approx(oracle::lg_power_fraction(1, wi, gamma * wi)).epsilon(1e-10));
    const double ki = k_of(crystal.n_signal, triplet.signal), kv = k_of(crystal.n_visible, triplet.visible);
    const double ref = oracle::flat_top_longitudinal(1, crystal.length, wi, ki, kv, 0.0);
    CHECK(std::abs(h.longitudinal / ref - 1.0) < 1e-4);

    const auto hd = flat_top_overlap(2, gamma, crystal, triplet, wi, 300.0);
    const double ref_d = oracle::flat_top_longitudinal(2, crystal.length, wi, ki, kv, 300.0);
    CHECK(std::abs(hd.longitudinal / ref_d - 1.0) < 1e-4);
}

TEST_CASE("flat-top model: mirror symmetry and flattening with gamma") {
    for (int l : {1, 2, 3})
        CHECK(analytic_nce_flat_top(-l, 2.0, crystal, triplet, 200e-6) ==
              analytic_nce_flat_top(l, 2.0, crystal, triplet, 200e-6));
    double previous = 0.0;
    for (double gamma : {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}) {
        const double w = gamma * 100e-6;
        const double ratio = analytic_nce_flat_top(2, gamma, crystal, triplet, w) /
                             analytic_nce_flat_top(0, gamma, crystal, triplet, w);
        CHECK(ratio > previous);
        CHECK(ratio < 1.0);
        previous = ratio;
    }
    CHECK(previous > 0.99);
    CHECK_THROWS_AS(analytic_nce_flat_top(0, 0.0, crystal, triplet, 200e-6), ValidationError);
}

TEST_CASE("flat-top model agrees with the solver for an ideal non-diffracting pump") {
    auto o = coarse();
    o.pump_diffraction = false;
    o.flat_top_edge_order = optics::FlatTopSpec::hard_edge;
    for (int l : {0, 1, 2}) {
        const double numeric = numeric_nce_flat_top(l, 200e-6, 100e-6, crystal, triplet, o);
        const double model = analytic_nce_flat_top(l, 2.0, crystal, triplet, 200e-6);
        CAPTURE(l);
        CHECK(std::abs(numeric / model - 1.0) < 0.05);
    }
}

TEST_CASE("phase-mismatch detuning follows a sinc^2 envelope for wide beams") {
    auto o = coarse(128);
    const double w = 1e-3;
    const double eta0 = numeric_nce_gaussian(0, w, w, crystal, triplet, o);
    for (double half_phase : {0.5, 1.0, 2.0}) {
        o.delta_k_override = 2.0 * half_phase / crystal.length;
        const double eta = numeric_nce_gaussian(0, w, w, crystal, triplet, o);
        const double sinc = std::sin(half_phase) / half_phase;
        CAPTURE(half_phase);
        CHECK(std::abs(eta / eta0 / (sinc * sinc) - 1.0) < 0.02);
    }
}

TEST_CASE("Gaussian pump efficiency falls quickly with |L|, flat-top stays level") {
    const auto o = coarse();
    const double g0 = numeric_nce_gaussian(0, 100e-6, 100e-6, crystal, triplet, o);
    const double g1 = numeric_nce_gaussian(1, 100e-6, 100e-6, crystal, triplet, o);
    const double g2 = numeric_nce_gaussian(2, 100e-6, 100e-6, crystal, triplet, o);
    CHECK(g0 > g1);
    CHECK(g1 > g2);
    CHECK(g2 / g0 < 0.5);
    // single-pass literature reference: 1.8 %/W at L=0
    CHECK(g0 > 1.8 / 5.0);
    CHECK(g0 < 1.8 * 5.0);

    const double f0 = numeric_nce_flat_top(0, 200e-6, 100e-6, crystal, triplet, o);
    const double f2 = numeric_nce_flat_top(2, 200e-6, 100e-6, crystal, triplet, o);
    CHECK(f2 / f0 > 0.7);
}

TEST_CASE("CE surfaces") {
    const std::vector<int> charges{-2, -1, 0, 1, 2};
    const auto flat = ce_surface(charges, {2.0, 3.0, 4.0}, PumpKind::flat_top);
    for (std::size_t j = 0; j < flat.gammas.size(); ++j) {
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = 0; i < charges.size(); ++i) {
            lo = std::min(lo, flat.eta_p[i][j]);
            hi = std::max(hi, flat.eta_p[i][j]);
        }
        CHECK(hi / lo <= 1.5);
    }
    CHECK(flat.rows().size() == 15);

    SurfaceOptions so;
    so.numeric = coarse();
    const auto gauss = ce_surface({0, 1, 2}, {1.0}, PumpKind::gaussian, so);
    CHECK(gauss.eta_p[0][0] > gauss.eta_p[1][0]);
    CHECK(gauss.eta_p[1][0] > gauss.eta_p[2][0]);

    const auto single = ce_surface({1}, {2.5}, PumpKind::flat_top);
    REQUIRE(single.eta_p.size() == 1);
    REQUIRE(single.eta_p[0].size() == 1);
    CHECK(single.eta_p[0][0] == analytic_nce_flat_top(1, 2.5, crystal, triplet, 250e-6));

    CHECK_THROWS_AS(ce_surface({}, {1.0}, PumpKind::flat_top), ValidationError);
}

TEST_CASE("mode beam splitter and coupling calibration") {
    const auto id = mode_beam_splitter(0.3, 0.0);
    CHECK(id.matrix[0][0] == 1.0);
    CHECK(id.matrix[0][1] == 0.0);
    CHECK(id.conversion == 0.0);

    const auto swap = mode_beam_splitter(constants::pi / 2.0, 1.0);
    CHECK(swap.conversion == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(swap.matrix[0][0]) < 1e-15);

    for (double theta : {0.1, 0.7, 1.3, 2.9}) {
        const auto bs = mode_beam_splitter(theta, 1.0);
        CHECK(bs.transmission + bs.conversion == doctest::Approx(1.0).epsilon(1e-15));
    }

    const auto mc = calibrate_xi({{0, 0.0}, {1, 1.0}, {2, 0.5}}, 2e-11);
    CHECK(mc.theta(0) == 0.0);
    CHECK(mc.theta(1) == doctest::Approx(constants::pi / 2.0).epsilon(1e-14));
    CHECK(mc.theta(2) == doctest::Approx(constants::pi / 4.0).epsilon(1e-14));
    CHECK(mode_beam_splitter(mc.xi.at(2), mc.tau).conversion == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(calibrate_xi({{0, 1.2}}), ValidationError);
    CHECK_THROWS_AS(mc.theta(7), ValidationError);
}
