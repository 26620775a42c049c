#include "hdqfc/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/kernels.hpp"

namespace hdqfc {

void GridSpec::validate() const {
    if (n_points < 64 || !std::has_single_bit(n_points))
        throw ValidationError("grid n_points must be a power of two >= 64, got " + std::to_string(n_points));
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ValidationError("grid pitch must be positive");
}

GridSpec GridSpec::for_beam_radius(double largest_radius, std::size_t n_points) {
    if (!(largest_radius > 0.0)) throw ValidationError("beam radius must be positive");
    GridSpec g{n_points, 8.0 * largest_radius / static_cast<double>(n_points)};
    g.validate();
    return g;
}

TransverseField::TransverseField(GridSpec grid, double wavelength, double refractive_index)
    : TransverseField(grid, wavelength, refractive_index, FieldBuffer(grid.size(), cplx{})) {}

TransverseField::TransverseField(GridSpec grid, double wavelength, double refractive_index, FieldBuffer amplitude)
    : grid_(grid), wavelength_(wavelength), refractive_index_(refractive_index), amplitude_(std::move(amplitude)) {
    grid_.validate();
    if (!(wavelength_ > 0.0)) throw ValidationError("wavelength must be positive");
    if (!(refractive_index_ >= 1.0)) throw ValidationError("refractive index must be >= 1");
    if (amplitude_.size() != grid_.size()) throw ValidationError("amplitude size does not match grid");
}

double TransverseField::wavenumber() const { return constants::two_pi * refractive_index_ / wavelength_; }

double TransverseField::power() const { return kernels::omp::sum_abs2(amplitude_) * grid_.pitch * grid_.pitch; }

double TransverseField::peak_intensity() const {
    double peak = 0.0;
    for (const auto& a : amplitude_) peak = std::max(peak, std::norm(a));
    return peak;
}

void TransverseField::normalize_power(double target) {
    const double p = power();
    if (!(p > 0.0)) throw ValidationError("cannot normalize a zero field");
    kernels::omp::scale(amplitude_, std::sqrt(target / p));
}

TransverseField TransverseField::with_amplitude(FieldBuffer amplitude) const {
    return TransverseField(grid_, wavelength_, refractive_index_, std::move(amplitude));
}

double to_field_amplitude_vm(double amplitude, double refractive_index) {
    return amplitude / std::sqrt(2.0 * refractive_index * constants::vacuum_permittivity * constants::speed_of_light);
}

namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    auto bits = std::bit_cast<U>(value);
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    out.write(bytes, sizeof(U));
}

template <class T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    unsigned char bytes[sizeof(U)];
    in.read(reinterpret_cast<char*>(bytes), sizeof(U));
    if (!in) throw ValidationError("truncated field dump");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_field_dump(const TransverseField& field, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    put_le(out, static_cast<std::uint32_t>(field.grid().n_points));
    put_le(out, field.grid().pitch);
    put_le(out, field.wavelength());
    for (const auto& a : field.amplitude()) {
        put_le(out, a.real());
        put_le(out, a.imag());
    }

    nlohmann::json meta{{"n_points", field.grid().n_points},
                        {"pitch_m", field.grid().pitch},
                        {"wavelength_m", field.wavelength()},
                        {"refractive_index", field.refractive_index()},
                        {"power_w", field.power()},
                        {"layout", "row-major interleaved (re, im) f64 little-endian after 20-byte header"}};
    std::ofstream side(path.string() + ".json");
    side << meta.dump(2) << '\n';
}

TransverseField read_field_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    const auto n = get_le<std::uint32_t>(in);
    const auto pitch = get_le<double>(in);
    const auto wavelength = get_le<double>(in);
    GridSpec grid{n, pitch};
    grid.validate();

    double index = 1.0;
    if (std::ifstream side(path.string() + ".json"); side) {
        auto meta = nlohmann::json::parse(side, nullptr, false);
        if (!meta.is_discarded() && meta.contains("refractive_index")) index = meta["refractive_index"].get<double>();
    }

    FieldBuffer amplitude(grid.size());
    for (auto& a : amplitude) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        a = {re, im};
    }
    return TransverseField(grid, wavelength, index, std::move(amplitude));
}

}  // namespace hdqfc
