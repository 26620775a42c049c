#include <cmath>
#include <string>

#include "hdqfc/constants.hpp"
#include "hdqfc/errors.hpp"
#include "hdqfc/mub.hpp"

namespace hdqfc::qudit {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

MUBCollection generate_mubs(int dimension) {
    if (!is_prime(dimension))
        throw ValidationError("MUBs are generated for prime dimensions only; d = " + std::to_string(dimension) +
                              " is not prime");
    MUBCollection mc;
    mc.dimension = dimension;
    const int d = dimension;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));

    if (d == 2) {
        // omega^{j n^2} is trivial for d = 2, so the Gauss construction would
        // repeat the Fourier basis; use the Pauli eigenbases directly.
        const cplx i(0.0, 1.0);
        Ket x0(2), x1(2), y0(2), y1(2);
        x0 << norm, norm;
        x1 << norm, -norm;
        y0 << norm, i * norm;
        y1 << norm, -i * norm;
        mc.bases = {{x0, x1}, {y0, y1}};
    } else {
        for (int j = 0; j < d; ++j) {
            std::vector<Ket> basis;
            for (int m = 0; m < d; ++m) {
                Ket a(d);
                for (int n = 0; n < d; ++n) {
                    const long exponent = (static_cast<long>(j) * n * n + static_cast<long>(n) * m) % d;
                    a[n] = std::polar(norm, constants::two_pi * static_cast<double>(exponent) / d);
                }
                basis.push_back(std::move(a));
            }
            mc.bases.push_back(std::move(basis));
        }
    }
    std::vector<Ket> eigen;
    for (int m = 0; m < d; ++m) eigen.push_back(Ket::Unit(d, m));
    mc.bases.push_back(std::move(eigen));
    return mc;
}

}  // namespace hdqfc::qudit
