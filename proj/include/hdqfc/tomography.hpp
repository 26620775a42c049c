#pragma once

#include <string>
#include <vector>

#include "hdqfc/mub.hpp"
#include "hdqfc/qudit.hpp"

namespace hdqfc::qudit {

/// Generalized Gell-Mann matrices (symmetric, antisymmetric, diagonal), d^2 - 1 of them.
std::vector<Matrix> gell_mann_basis(int dimension);

struct LinearInversion {
    DensityMatrix rho;  // Hermitian, unit trace, possibly not PSD
    double min_eigenvalue;
    bool physical;  // min_eigenvalue >= -1e-6
};

/// Counts are in (j, m) order, d (d + 1) entries; each basis is normalized to
/// its own total. Throws ValidationError on an incomplete or empty basis.
LinearInversion linear_inversion(const std::vector<double>& counts, const MUBCollection& mubs);

struct MleOptions {
    double tolerance = 1e-9;     // objective improvement that ends the search
    int max_iterations = 10000;
    double variance_floor = 1.0; // lower bound on the expected counts in the weights
    double initial_mixing = 1e-3;
};

enum class TomographyMethod { linear, mle };
std::string to_string(TomographyMethod method);

struct TomographyResult {
    DensityMatrix rho;
    TomographyMethod method = TomographyMethod::mle;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
};

/// Weighted least squares over rho = T^dag T / tr(T^dag T), T lower-triangular
/// with real diagonal, minimized by Levenberg-Marquardt from the PSD-projected
/// linear estimate. Non-convergence sets converged = false and returns the best iterate.
TomographyResult mle_reconstruct(const std::vector<double>& counts, const MUBCollection& mubs,
                                 const MleOptions& options = {});

}  // namespace hdqfc::qudit
