#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/fft.hpp"
#include "hdqfc/kernels.hpp"
#include "hdqfc/optics.hpp"

namespace hdqfc::optics {

AbcdMatrix operator*(const AbcdMatrix& l, const AbcdMatrix& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

namespace {

void check_window(const TransverseField& field) {
    const std::size_t n = field.grid().n_points;
    double edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        edge = std::max({edge, std::norm(field.at(0, i)), std::norm(field.at(n - 1, i)), std::norm(field.at(i, 0)),
                         std::norm(field.at(i, n - 1))});
    }
    const double peak = field.peak_intensity();
    if (peak > 0.0 && edge > 1e-6 * peak) {
        std::ostringstream msg;
        msg << "field reaches the window edge (edge/peak intensity = " << edge / peak << ")";
        warn(msg.str());
    }
}

}  // namespace

TransverseField propagate_angular_spectrum(const TransverseField& field, double distance) {
    const auto& grid = field.grid();
    const std::size_t n = grid.n_points;
    const double k = field.wavenumber();
    const double lambda_medium = field.wavelength() / field.refractive_index();
    const double df = 1.0 / grid.window();
    // Band limit keeps the sampled transfer-function phase from aliasing.
    const double f_limit = 1.0 / (lambda_medium * std::sqrt(std::pow(2.0 * df * distance, 2) + 1.0));

    FieldBuffer spectrum = field.buffer();
    Fft2 fft(n);
    fft.forward(spectrum);

    FieldBuffer transfer(grid.size());
    for (std::size_t r = 0; r < n; ++r) {
        const double fy = static_cast<double>(fft_frequency_index(r, n)) * df;
        for (std::size_t c = 0; c < n; ++c) {
            const double fx = static_cast<double>(fft_frequency_index(c, n)) * df;
            const double kt2 = std::pow(constants::two_pi * fx, 2) + std::pow(constants::two_pi * fy, 2);
            cplx h{};
            if (kt2 < k * k && std::abs(fx) <= f_limit && std::abs(fy) <= f_limit) {
                // kz - k without cancellation
                const double kz_minus_k = -kt2 / (std::sqrt(k * k - kt2) + k);
                h = std::polar(1.0, kz_minus_k * distance);
            }
            transfer[r * n + c] = h;
        }
    }
    kernels::omp::multiply(spectrum, transfer);
    fft.inverse(spectrum);

    auto out = field.with_amplitude(std::move(spectrum));
    check_window(out);
    return out;
}

TransverseField propagate_collins(const TransverseField& field, const AbcdMatrix& system,
                                  std::optional<GridSpec> output_grid) {
    if (std::abs(system.determinant() - 1.0) > 1e-9)
        throw ValidationError("ABCD matrix must have unit determinant");
    const GridSpec in_grid = field.grid();
    const GridSpec out_grid = output_grid.value_or(in_grid);
    out_grid.validate();
    const double lambda = field.wavelength();

    if (system.b == 0.0) {
        if (system.a != 1.0 || system.d != 1.0)
            throw ValidationError("singular optical system: B = 0 with magnification is not supported");
        if (!(out_grid == in_grid)) throw ValidationError("B = 0 system cannot resample onto a different grid");
        if (system.c == 0.0) return field;
        FieldBuffer out = field.buffer();
        const std::size_t n = in_grid.n_points;
        for (std::size_t r = 0; r < n; ++r) {
            const double y = in_grid.coordinate(r);
            for (std::size_t c = 0; c < n; ++c) {
                const double x = in_grid.coordinate(c);
                out[r * n + c] *= std::polar(1.0, constants::pi * system.c * (x * x + y * y) / lambda);
            }
        }
        return field.with_amplitude(std::move(out));
    }

    using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto n_in = static_cast<Eigen::Index>(in_grid.n_points);
    const auto n_out = static_cast<Eigen::Index>(out_grid.n_points);
    const double lb = lambda * system.b;

    Matrix input(n_in, n_in);
    for (Eigen::Index r = 0; r < n_in; ++r) {
        const double y = in_grid.coordinate(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < n_in; ++c) {
            const double x = in_grid.coordinate(static_cast<std::size_t>(c));
            input(r, c) = field.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) *
                          std::polar(1.0, constants::pi * system.a * (x * x + y * y) / lb);
        }
    }

    // Separable kernel exp(-2 pi i x1 x2 / (lambda B)).
    Matrix kernel(n_out, n_in);
    for (Eigen::Index m = 0; m < n_out; ++m) {
        const double x2 = out_grid.coordinate(static_cast<std::size_t>(m));
        for (Eigen::Index j = 0; j < n_in; ++j) {
            const double x1 = in_grid.coordinate(static_cast<std::size_t>(j));
            kernel(m, j) = std::polar(1.0, -constants::two_pi * x1 * x2 / lb);
        }
    }
    Matrix transformed = kernel * input * kernel.transpose();

    const cplx prefactor = in_grid.pitch * in_grid.pitch / (cplx{0.0, 1.0} * lb);
    FieldBuffer out(out_grid.size());
    const std::size_t no = out_grid.n_points;
    for (std::size_t r = 0; r < no; ++r) {
        const double y = out_grid.coordinate(r);
        for (std::size_t c = 0; c < no; ++c) {
            const double x = out_grid.coordinate(c);
            out[r * no + c] = prefactor * std::polar(1.0, constants::pi * system.d * (x * x + y * y) / lb) *
                              transformed(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    TransverseField result(out_grid, lambda, field.refractive_index(), std::move(out));
    check_window(result);
    return result;
}

}  // namespace hdqfc::optics
