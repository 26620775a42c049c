#pragma once

#include <vector>

#include "hdqfc/qudit.hpp"

namespace hdqfc::qudit {

/// d + 1 mutually unbiased analyzer bases for prime d. Bases 0..d-1 carry the
/// phases omega^{j n^2 + n m} / sqrt(d); basis d is the OAM eigenbasis. For
/// d = 2 the bases are the Pauli X, Y and Z eigenbases.
struct MUBCollection {
    int dimension = 0;
    std::vector<std::vector<Ket>> bases;  // [j][m]

    const Ket& analyzer(int basis, int index) const { return bases.at(basis).at(index); }
    int basis_count() const { return dimension + 1; }
    int analyzer_count() const { return dimension * (dimension + 1); }
};

bool is_prime(int n);
MUBCollection generate_mubs(int dimension);

}  // namespace hdqfc::qudit
