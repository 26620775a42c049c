#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/optics.hpp"
#include "oracles/lg_oracle.hpp"

using namespace hdqfc;
using namespace hdqfc::optics;

namespace {

constexpr double lambda_p = 794e-9;
constexpr double lambda_i = 1550e-9;

double intensity(const TransverseField& f, std::size_t r, std::size_t c) { return std::norm(f.at(r, c)); }

double rel_l2(const TransverseField& a, const TransverseField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) {
        num += std::norm(a.amplitude()[i] - b.amplitude()[i]);
        den += std::norm(b.amplitude()[i]);
    }
    return std::sqrt(num / den);
}

struct CaptureWarnings {
    std::vector<std::string> messages;
    WarningHandler previous;
    CaptureWarnings() {
        previous = set_warning_handler([this](const std::string& m) { messages.push_back(m); });
    }
    ~CaptureWarnings() { set_warning_handler(previous); }
};

// Position of the first local intensity minimum along +x on the center row.
double first_minimum_x(const TransverseField& f) {
    const std::size_t n = f.grid().n_points, mid = n / 2;
    for (std::size_t c = mid + 1; c + 1 < n; ++c)
        if (intensity(f, mid, c) < intensity(f, mid, c - 1) && intensity(f, mid, c) <= intensity(f, mid, c + 1))
            return f.grid().coordinate(c);
    return -1.0;
}

}  // namespace

TEST_CASE("grid spec validation and sizing") {
    CHECK_THROWS_AS(GridSpec({100, 1e-6}).validate(), ValidationError);
    CHECK_THROWS_AS(GridSpec({32, 1e-6}).validate(), ValidationError);
    CHECK_THROWS_AS(GridSpec({128, 0.0}).validate(), ValidationError);
    CHECK_NOTHROW(GridSpec({128, 1e-6}).validate());
    const auto g = GridSpec::for_beam_radius(100e-6, 256);
    CHECK(g.window() == doctest::Approx(800e-6));
    CHECK(g.coordinate(128) == 0.0);
}

TEST_CASE("LG modes: on-axis behaviour, power and window precondition") {
    const GridSpec grid = GridSpec::for_beam_radius(100e-6 * std::sqrt(3.0), 256);
    const std::size_t mid = grid.n_points / 2;

    const auto g0 = make_lg_mode({0, 0, 100e-6}, grid, lambda_i, 1e-3);
    CHECK(g0.power() == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(intensity(g0, mid, mid) == doctest::Approx(g0.peak_intensity()).epsilon(1e-14));

    const auto g1 = make_lg_mode({1, 0, 100e-6}, grid, lambda_i, 1e-3);
    CHECK(intensity(g1, mid, mid) <= 1e-30 * g1.peak_intensity());

    const auto g2 = make_lg_mode({2, 0, 100e-6}, grid, lambda_i, 1.0);
    const auto spec = oam_spectrum(g2, 100e-6);
    CHECK(spec.weight(2) > 1.0 - 1e-6);
    for (const auto& [l, w] : spec.weights)
        if (l != 2) CHECK(w < 1e-6);

    CHECK_THROWS_AS(make_lg_mode({3, 0, 100e-6}, GridSpec{64, 1e-6}, lambda_i, 1.0), ValidationError);
    CHECK_THROWS_AS(make_lg_mode({0, -1, 100e-6}, grid, lambda_i, 1.0), ValidationError);
    CHECK_THROWS_AS(make_lg_mode({0, 0, 0.0}, grid, lambda_i, 1.0), ValidationError);
}

TEST_CASE("negative charge is the phase conjugate of positive charge") {
    const GridSpec grid = GridSpec::for_beam_radius(200e-6, 128);
    const auto plus = make_lg_mode({2, 0, 100e-6}, grid, lambda_i, 1.0);
    const auto minus = make_lg_mode({-2, 0, 100e-6}, grid, lambda_i, 1.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) diff = std::max(diff, std::abs(std::conj(plus.amplitude()[i]) - minus.amplitude()[i]));
    CHECK(diff < 1e-9 * std::sqrt(plus.peak_intensity()));
}

TEST_CASE("hard-edge flat-top: flat plateau, dark outside, peak field matches the closed form") {
    const GridSpec grid{256, 2e-6};
    const FlatTopSpec spec{150e-6, FlatTopSpec::hard_edge, 1.0};
    const auto f = make_flat_top(spec, grid, lambda_p, 1.846);
    const std::size_t mid = grid.n_points / 2;
    CHECK(f.power() == doctest::Approx(1.0).epsilon(1e-12));

    const double i0 = intensity_at(f, 0.0, 0.0);
    CHECK(std::abs(i0 / intensity_at(f, 0.9 * spec.width, 0.0) - 1.0) <= 1e-9);
    CHECK(intensity_at(f, 0.0, 2.0 * spec.width) < 1e-12 * i0);

    const double peak_vm = to_field_amplitude_vm(std::abs(f.at(mid, mid)), 1.846);
    CHECK(peak_vm == doctest::Approx(oracle::flat_top_peak_field(1.0, 150e-6, 1.846)).epsilon(1e-3));

    // plateau excluding the two outermost rings of samples
    CHECK(plateau_flatness(f, spec.width - 2.5 * grid.pitch) < 1e-6);
}

TEST_CASE("super-Gaussian flat-top edge falls below 1e-12 at twice the width") {
    const GridSpec grid{256, 2e-6};
    for (int order : {8, 20, 40}) {
        const auto f = make_flat_top({100e-6, order, 0.2}, grid, lambda_p);
        CHECK(intensity_at(f, 2.0 * 100e-6, 0.0) < 1e-12 * intensity_at(f, 0.0, 0.0));
        CHECK(f.power() == doctest::Approx(0.2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_flat_top({100e-6, 4, 1.0}, grid, lambda_p), ValidationError);
    CHECK_THROWS_AS(make_flat_top({-1.0, 20, 1.0}, grid, lambda_p), ValidationError);
    CHECK_THROWS_AS(make_flat_top({200e-6, 20, 1.0}, grid, lambda_p), ValidationError);
}

TEST_CASE("Airy disk first zeros follow the Bessel roots") {
    const GridSpec grid{512, 1e-6};
    const double scale = 100e-6;
    const auto one = make_airy_disk(grid, scale, lambda_p, 1.0, AiryOrder::one);
    const auto zero = make_airy_disk(grid, scale, lambda_p, 1.0, AiryOrder::zero);
    const double root1 = boost::math::cyl_bessel_j_zero(1.0, 1);
    const double root0 = boost::math::cyl_bessel_j_zero(0.0, 1);
    CHECK(root1 == doctest::Approx(3.8317).epsilon(1e-4));
    CHECK(root0 == doctest::Approx(2.4048).epsilon(1e-4));
    CHECK(std::abs(first_minimum_x(one) - root1 * scale / constants::two_pi) <= grid.pitch);
    CHECK(std::abs(first_minimum_x(zero) - root0 * scale / constants::two_pi) <= grid.pitch);
    CHECK(one.power() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(zero.power() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(zero.peak_intensity()));
    CHECK_THROWS_AS(make_airy_disk(grid, 0.0, lambda_p, 1.0), ValidationError);
}

TEST_CASE("angular spectrum: Gaussian width at one Rayleigh range") {
    const double w0 = 100e-6;
    const GridSpec grid = GridSpec::for_beam_radius(w0 * std::sqrt(5.0), 512);
    const auto g = make_lg_mode({0, 0, w0}, grid, lambda_p, 1.0);
    const double zr = constants::pi * w0 * w0 / lambda_p;
    CHECK(beam_radius(g) == doctest::Approx(w0).epsilon(1e-4));
    const auto out = propagate_angular_spectrum(g, zr);
    CHECK(beam_radius(out) == doctest::Approx(w0 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("angular spectrum: identity, unitarity and reversibility") {
    const GridSpec grid = GridSpec::for_beam_radius(150e-6, 256);
    const auto f = make_lg_mode({1, 0, 80e-6}, grid, lambda_i, 2.0, 1.8);

    const auto same = propagate_angular_spectrum(f, 0.0);
    CHECK(rel_l2(same, f) < 1e-12);

    const auto fwd = propagate_angular_spectrum(f, 5e-3);
    CHECK(fwd.power() == doctest::Approx(f.power()).epsilon(1e-9));
    const auto back = propagate_angular_spectrum(fwd, -5e-3);
    CHECK(rel_l2(back, f) < 1e-9);
}

TEST_CASE("angular spectrum warns when the beam reaches the window edge") {
    CaptureWarnings cap;
    const GridSpec grid{128, 2e-6};
    const auto f = make_lg_mode({0, 0, 20e-6}, grid, lambda_i, 1.0);
    propagate_angular_spectrum(f, 1e-4);
    CHECK(cap.messages.empty());
    propagate_angular_spectrum(f, 2e-2);
    CHECK_FALSE(cap.messages.empty());
}

TEST_CASE("OAM spectrum diagnostics") {
    const GridSpec grid = GridSpec::for_beam_radius(100e-6 * 2.0, 256);
    const auto l3 = make_lg_mode({3, 0, 100e-6}, grid, lambda_i, 1.0);
    CHECK(oam_spectrum(l3, 100e-6).weight(3) > 0.999);

    const auto lm = make_lg_mode({-1, 0, 100e-6}, grid, lambda_i, 0.5);
    const auto lp = make_lg_mode({1, 0, 100e-6}, grid, lambda_i, 0.5);
    FieldBuffer sum(grid.size());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = lm.amplitude()[i] + lp.amplitude()[i];
    const auto sup = oam_spectrum(lm.with_amplitude(sum), 100e-6);
    CHECK(sup.weight(-1) == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(sup.weight(1) == doctest::Approx(0.5).epsilon(2e-3));

    const auto ft = make_flat_top({150e-6, 20, 1.0}, GridSpec{256, 2e-6}, lambda_p);
    CHECK(oam_spectrum(ft, 150e-6).weight(0) > 0.999);

    const auto moved = propagate_angular_spectrum(l3, 5e-3);
    const auto a = oam_spectrum(l3, 100e-6), b = oam_spectrum(moved, 100e-6);
    for (const auto& [l, w] : a.weights) CHECK(std::abs(w - b.weight(l)) < 1e-6);

    const auto dark = l3.with_amplitude(FieldBuffer(grid.size(), cplx{}));
    CHECK_THROWS_AS(oam_spectrum(dark, 100e-6), ValidationError);
}

TEST_CASE("overlap: normalization, orthogonality, Gaussian waist mismatch, conjugate symmetry") {
    const double w = 100e-6;
    const GridSpec grid = GridSpec::for_beam_radius(2.0 * w, 256);
    const auto a = make_lg_mode({1, 0, w}, grid, lambda_i, 1.0);
    const auto b = make_lg_mode({2, 0, w}, grid, lambda_i, 3.0);
    CHECK(std::abs(overlap(a, a) - cplx(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(overlap(a, b)) < 1e-10);

    const auto g1 = make_lg_mode({0, 0, w}, grid, lambda_i, 1.0);
    const auto g2 = make_lg_mode({0, 0, 2.0 * w}, grid, lambda_i, 1.0);
    CHECK(std::abs(overlap(g1, g2)) == doctest::Approx(2.0 * w * 2.0 * w / (w * w + 4.0 * w * w)).epsilon(1e-6));

    const auto c = propagate_angular_spectrum(b, 3e-3);
    const auto ab = overlap(a, c), ba = overlap(c, a);
    CHECK(ab.real() == ba.real());
    CHECK(ab.imag() == -ba.imag());

    CHECK_THROWS_AS(overlap(a, make_lg_mode({0, 0, w}, GridSpec{256, 1e-5}, lambda_i, 1.0)), ValidationError);
}

TEST_CASE("Collins integral: identity, free space and lens focusing") {
    const double w0 = 100e-6;
    const GridSpec grid = GridSpec::for_beam_radius(3.0 * w0, 256);
    const auto g = make_lg_mode({1, 0, w0}, grid, lambda_p, 1.0);

    CHECK(rel_l2(propagate_collins(g, AbcdMatrix{}), g) < 1e-14);

    const double z = 0.02;
    const auto collins = propagate_collins(g, AbcdMatrix::free_space(z));
    const auto asm_out = propagate_angular_spectrum(g, z);
    CHECK(rel_l2(collins, asm_out) < 1e-4);

    // collimated 1 mm Gaussian through f = 100 mm, observed at the focal plane
    const double wl = 1e-3, f = 0.1;
    const GridSpec in_grid{256, 8.0 * wl / 256};
    const auto wide = make_lg_mode({0, 0, wl}, in_grid, lambda_p, 1.0);
    const double expected = lambda_p * f / (constants::pi * wl);
    const GridSpec out_grid{256, 8.0 * expected / 256 * 2.0};
    const auto focus = propagate_collins(wide, AbcdMatrix::free_space(f) * AbcdMatrix::thin_lens(f), out_grid);
    CHECK(beam_radius(focus) == doctest::Approx(expected).epsilon(1e-2));
    CHECK(focus.power() == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(propagate_collins(g, AbcdMatrix{2.0, 0.0, 0.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(propagate_collins(g, AbcdMatrix{1.0, 1.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("field dump round trip") {
    const GridSpec grid{64, 3e-6};
    const auto f = make_lg_mode({1, 0, 20e-6}, grid, lambda_i, 1.0, 1.816);
    const auto path = std::filesystem::temp_directory_path() / "hdqfc_dump_test.bin";
    write_field_dump(f, path);
    const auto g = read_field_dump(path);
    CHECK(g.grid() == f.grid());
    CHECK(g.wavelength() == f.wavelength());
    CHECK(rel_l2(g, f) == 0.0);
    CHECK(std::filesystem::exists(path.string() + ".json"));
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".json");
}
