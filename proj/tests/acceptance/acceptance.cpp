// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hdqfc/constants.hpp"
#include "hdqfc/counting.hpp"
#include "hdqfc/interference.hpp"
#include "hdqfc/mub.hpp"
#include "hdqfc/optics.hpp"
#include "hdqfc/sfg.hpp"
#include "hdqfc/tomography.hpp"
#include "hdqfc/workbench.hpp"

using namespace hdqfc;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Solver runs shared by criteria 3, 4 and 5.
struct SolverRuns {
    std::map<int, sfg::NumericRun> flat, gauss;
    double worst_seconds = 0.0;
};

const sfg::CrystalSpec crystal;
const sfg::WaveTriplet triplet;
constexpr double signal_waist = 100e-6;
constexpr double flat_width = 200e-6;
constexpr double gauss_waist = 100e-6;

SolverRuns& solver_runs() {
    static SolverRuns runs = [] {
        SolverRuns r;
        for (int l : {-2, -1, 0, 1, 2, 3}) {
            auto t0 = std::chrono::steady_clock::now();
            r.flat.emplace(l, sfg::numeric_run_flat_top(l, flat_width, signal_waist, crystal, triplet));
            r.worst_seconds = std::max(r.worst_seconds, seconds_since(t0));
        }
        for (int l : {0, 1, 2}) {
            auto t0 = std::chrono::steady_clock::now();
            r.gauss.emplace(l, sfg::numeric_run_gaussian(l, gauss_waist, signal_waist, crystal, triplet));
            r.worst_seconds = std::max(r.worst_seconds, seconds_since(t0));
        }
        return r;
    }();
    return runs;
}

Verdict mub_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_intra = 0.0, worst_inter = 0.0;
    for (int d : {2, 3, 5}) {
        const auto mubs = qudit::generate_mubs(d);
        for (int j = 0; j <= d; ++j)
            for (int m = 0; m < d; ++m)
                for (int jj = 0; jj <= d; ++jj)
                    for (int mm = 0; mm < d; ++mm) {
                        const auto ov = mubs.analyzer(j, m).dot(mubs.analyzer(jj, mm));
                        if (j == jj) worst_intra = std::max(worst_intra, std::abs(ov - (m == mm ? 1.0 : 0.0)));
                        else worst_inter = std::max(worst_inter, std::abs(std::norm(ov) - 1.0 / d));
                    }
    }

    // Pauli eigenbases for d = 2, compared up to a global phase per ket.
    const double s = 1.0 / std::sqrt(2.0);
    const qudit::cplx i(0.0, 1.0);
    const std::vector<std::vector<qudit::Ket>> pauli = {
        {qudit::Ket::Unit(2, 0), qudit::Ket::Unit(2, 1)},
        {(qudit::Ket(2) << s, s).finished(), (qudit::Ket(2) << s, -s).finished()},
        {(qudit::Ket(2) << s, i * s).finished(), (qudit::Ket(2) << s, -i * s).finished()}};
    const auto m2 = qudit::generate_mubs(2);
    int matched = 0;
    for (const auto& target : pauli)
        for (const auto& basis : m2.bases) {
            bool all = true;
            for (const auto& k : target) {
                bool found = false;
                for (const auto& a : basis) found = found || std::abs(std::norm(a.dot(k)) - 1.0) < 1e-12;
                all = all && found;
            }
            if (all) {
                ++matched;
                break;
            }
        }
    const double t = seconds_since(t0);
    const bool pass = worst_intra < 1e-12 && worst_inter < 1e-12 && matched == 3 && t < 1.0;
    return {pass, "intra dev " + fmt("%.2e", worst_intra) + ", cross dev " + fmt("%.2e", worst_inter) +
                      ", Pauli bases matched " + std::to_string(matched) + "/3, " + fmt("%.3f s", t)};
}

Verdict diffraction_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const double w0 = signal_waist;
    const double n = crystal.n_signal;
    const double zr = constants::pi * w0 * w0 * n / triplet.signal;
    const GridSpec grid = sfg::default_run_grid(flat_width, w0, 0, 512);
    const auto beam = optics::make_lg_mode({0, 0, w0}, grid, triplet.signal, 1e-3, n);

    double worst = 0.0;
    auto check = [&](const TransverseField& f, double z) {
        const double expected = w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
        worst = std::max(worst, std::abs(optics::beam_radius(f) / expected - 1.0));
    };
    // angular spectrum, one step per sample point
    for (double frac : {0.5, 1.0, 1.5, 2.0}) check(optics::propagate_angular_spectrum(beam, frac * zr), frac * zr);

    // split-step solver with the pump switched off over a 2 z_R crystal
    sfg::CrystalSpec long_crystal = crystal;
    long_crystal.length = 2.0 * zr;
    const auto dark_pump = optics::make_lg_mode({0, 0, w0}, grid, triplet.pump, 1.0, crystal.n_pump);
    sfg::SfgRunConfig cfg;
    cfg.grid = grid;
    const auto run = sfg::run_split_step(beam, dark_pump.with_amplitude(FieldBuffer(grid.size(), cplx{})),
                                         long_crystal, triplet, cfg);
    check(run.signal_out, 2.0 * zr);

    const double t = seconds_since(t0);
    return {worst < 1e-3 && t < 10.0, "max |w/w(z) - 1| = " + fmt("%.2e", worst) + " over 2 z_R, " + fmt("%.2f s", t)};
}

Verdict conservation() {
    auto& runs = solver_runs();
    double worst_drift = 0.0, worst_leak = 0.0;
    auto inspect = [&](int l, const sfg::NumericRun& r) {
        worst_drift = std::max(worst_drift, r.max_photon_drift);
        const auto spec = optics::oam_spectrum(r.visible_out, signal_waist * std::sqrt(std::abs(l) + 1.0));
        worst_leak = std::max(worst_leak, 1.0 - spec.weight(l));
    };
    for (const auto& [l, r] : runs.flat) inspect(l, r);
    for (const auto& [l, r] : runs.gauss) inspect(l, r);

    sfg::NumericOptions half;
    half.z_steps = 400;
    double worst_step = 0.0;
    double worst_seconds = runs.worst_seconds;
    for (int l : {0, 2}) {
        auto t0 = std::chrono::steady_clock::now();
        const double fine = sfg::numeric_nce_flat_top(l, flat_width, signal_waist, crystal, triplet, half);
        worst_seconds = std::max(worst_seconds, seconds_since(t0) / 2.0);
        worst_step = std::max(worst_step, std::abs(fine / runs.flat.at(l).ce.eta_p - 1.0));
    }
    {
        auto t0 = std::chrono::steady_clock::now();
        const double fine = sfg::numeric_nce_gaussian(1, gauss_waist, signal_waist, crystal, triplet, half);
        worst_seconds = std::max(worst_seconds, seconds_since(t0) / 2.0);
        worst_step = std::max(worst_step, std::abs(fine / runs.gauss.at(1).ce.eta_p - 1.0));
    }
    const bool pass = worst_drift < 1e-3 && worst_leak < 1e-3 && worst_step < 1e-4 && worst_seconds < 60.0;
    return {pass, "photon drift " + fmt("%.2e", worst_drift) + ", OAM leakage " + fmt("%.2e", worst_leak) +
                      ", z-step halving " + fmt("%.2e", worst_step) + ", slowest run " +
                      fmt("%.1f s", worst_seconds) + " at 512^2 x 200"};
}

Verdict flattening() {
    auto& runs = solver_runs();
    double lo = 1e300, hi = 0.0;
    for (int l : {-2, -1, 0, 1, 2}) {
        const double e = runs.flat.at(l).ce.eta_p;
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    const double ratio = runs.gauss.at(2).ce.eta_p / runs.gauss.at(0).ce.eta_p;
    return {hi / lo <= 1.5 && ratio <= 0.5,
            "flat-top max/min " + fmt("%.3f", hi / lo) + " (<= 1.5), Gaussian eta2/eta0 " + fmt("%.3f", ratio) +
                " (<= 0.5)"};
}

Verdict magnitude() {
    auto& runs = solver_runs();
    const std::map<int, double> reported{{0, 0.37}, {1, 0.42}, {2, 0.33}, {3, 0.24}};
    bool pass = true;
    std::string detail;
    for (const auto& [l, ref] : reported) {
        const double e = runs.flat.at(l).ce.eta_p;
        const double ratio = e / ref;
        pass = pass && ratio >= 1.0 / 3.0 && ratio <= 3.0;
        detail += (detail.empty() ? "" : ", ") + std::string("L=") + std::to_string(l) + " " + fmt("%.3f", e) +
                  fmt(" (x%.2f)", ratio);
    }
    return {pass, detail + " %/W"};
}

Verdict visibilities() {
    const auto t0 = std::chrono::steady_clock::now();
    const bool exact = qudit::analytic_visibility(2) == 1.0 && qudit::analytic_visibility(3) == 0.8;
    const workbench::Fig3Block scan;  // 5 Hz, 0.1 Hz dark, 60 s and 150 s per phase point
    const auto phases = qudit::default_phase_grid(scan.phase_steps);
    constexpr int replicates = 100;
    bool pass = exact;
    std::string detail = std::string("analytic ") + (exact ? "1.0/0.8" : "mismatch");
    for (int d : {2, 3}) {
        const double truth = qudit::analytic_visibility(d);
        const qudit::ScanParams sp{scan.interference_rate, scan.interference_durations[d - 2],
                                   scan.interference_dark_rate, 0};
        int inside = 0;
        double sum = 0.0, sum_sigma2 = 0.0;
        for (int r = 0; r < replicates; ++r) {
            auto p = sp;
            p.seed = qudit::derive_seed(2024, d, r);
            const auto fit = qudit::fit_visibility(phases, qudit::simulate_scan(d, phases, p), p.dark_rate * p.duration);
            if (std::abs(fit.visibility - truth) <= 3.0 * fit.sigma) ++inside;
            sum += fit.amplitude / fit.offset;  // unclipped, so the ensemble mean is not pulled below 1 for d=2
            sum_sigma2 += fit.sigma * fit.sigma;
        }
        // A 3 sigma band holds 99.73% of replicates, so a few escapes in 100 are expected; 97 is the 1e-4 binomial tail.
        const double mean = sum / replicates;
        const double standard_error = std::sqrt(sum_sigma2) / replicates;
        const bool ensemble = std::abs(mean - truth) <= 3.0 * standard_error;
        pass = pass && inside >= 97 && ensemble;
        detail += ", d=" + std::to_string(d) + " " + std::to_string(inside) + "/" + std::to_string(replicates) +
                  " within 3 sigma, ensemble mean " + fmt("%.4f", mean) +
                  fmt(" (%+.2f standard errors)", (mean - truth) / standard_error);
    }
    const double t = seconds_since(t0);
    pass = pass && t < 30.0;
    return {pass, detail + ", " + fmt("%.2f s", t)};
}

Verdict tomography() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_noiseless = 1.0;
    for (int d : {2, 3, 5}) {
        const auto mubs = qudit::generate_mubs(d);
        const auto target = qudit::DensityMatrix::from_ket(qudit::balanced_qudit(d));
        qudit::CountingParams cp;
        cp.source_rate = 5.0;
        cp.duration = 300.0;
        const auto res = qudit::mle_reconstruct(qudit::expected_counts(target, mubs, cp), mubs);
        worst_noiseless = std::min(worst_noiseless, qudit::fidelity(target, res.rho));
    }

    // fig4 scenario at its default settings (flat-top channel, 16/20/40 dark counts).
    workbench::ScenarioConfig config;
    const auto out = workbench::run_fig4(config);
    const auto& fid = out.summary["fidelities"];
    auto with_dark = [&](int d) { return fid["d" + std::to_string(d)]["flat_top"]["fidelity_with_dark"].get<double>(); };
    auto subtracted = [&](int d) {
        return fid["d" + std::to_string(d)]["flat_top"]["fidelity_dark_subtracted"].get<double>();
    };
    const bool ordered = with_dark(2) > with_dark(3) && with_dark(3) > with_dark(5);
    bool degraded = true;
    std::string values;
    for (int d : {2, 3, 5}) {
        degraded = degraded && with_dark(d) < subtracted(d);
        values += (values.empty() ? "" : ", ") + std::string("d=") + std::to_string(d) + " " +
                  fmt("%.4f", subtracted(d)) + fmt("(%.4f)", with_dark(d));
    }
    const double t = seconds_since(t0);
    const bool pass = worst_noiseless >= 0.999 && ordered && degraded && t < 300.0;
    return {pass, "noiseless min " + fmt("%.6f", worst_noiseless) + "; subtracted(with dark): " + values +
                      (ordered ? "; ordered" : "; NOT ordered") + fmt(", %.1f s", t)};
}

Verdict determinism() {
    std::string detail;
    bool pass = true;
    for (const auto& name : workbench::scenario_names()) {
        workbench::ScenarioConfig c;
        c.seed = 7;
        // the solver-heavy scenarios use a coarser grid; the reproducibility contract is grid independent
        if (name == "fig1" || name == "fig4") c.grid.n_points = 128;
#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        const auto a = workbench::run_scenario(name, c);
#ifdef _OPENMP
        omp_set_num_threads(3);
#endif
        const auto b = workbench::run_scenario(name, c);
        bool same = a.files.size() == b.files.size() && a.summary.dump() == b.summary.dump();
        for (std::size_t i = 0; same && i < a.files.size(); ++i)
            same = a.files[i].name == b.files[i].name && a.files[i].content == b.files[i].content;
        pass = pass && same;
        detail += (detail.empty() ? "" : ", ") + name + (same ? " identical" : " DIFFERS");
    }
    return {pass, detail + " (1 vs 3 threads)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"MUB correctness", mub_correctness},
        {"Diffraction oracle", diffraction_oracle},
        {"Conservation", conservation},
        {"Flat-top flattening", flattening},
        {"Magnitude sanity", magnitude},
        {"Interference visibilities", visibilities},
        {"Tomography round trip", tomography},
        {"Determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
