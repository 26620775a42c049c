#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace hdqfc::qudit {

using cplx = std::complex<double>;
using Ket = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// OAM labels of a d-dimensional qudit, ascending. Odd d spans -h..h with
/// h = d/2; d = 2 uses {-1, +1} (no L = 0 component).
std::vector<int> oam_labels(int dimension);

/// Normalized amplitude vector over oam_labels(d); entry i belongs to label i.
struct QuditKet {
    Ket amplitudes;

    int dimension() const { return static_cast<int>(amplitudes.size()); }
    std::vector<int> labels() const { return oam_labels(dimension()); }
    cplx amplitude(int charge) const;
};

/// Normalizes the input. Throws ValidationError on a zero or empty vector.
QuditKet make_qudit(const std::vector<cplx>& amplitudes);
/// (sum_L |L>) / sqrt(d)
QuditKet balanced_qudit(int dimension);
QuditKet haar_random_qudit(int dimension, std::mt19937_64& rng);

struct DensityMatrix {
    Matrix matrix;

    static DensityMatrix from_ket(const QuditKet& ket);
    static DensityMatrix maximally_mixed(int dimension);

    int dimension() const { return static_cast<int>(matrix.rows()); }
    double trace() const { return matrix.trace().real(); }
    double min_eigenvalue() const;
    bool is_hermitian(double tol = 1e-12) const;
    /// Hermitian, unit trace and eigenvalues >= -tol.
    bool is_physical(double tol = 1e-10) const;
};

/// Per-mode converter action c_L -> sqrt(eta_L) e^{i phi_L} c_L, indexed like
/// oam_labels(d).
struct ChannelSpec {
    std::vector<double> eta;
    std::vector<double> phase;

    static ChannelSpec uniform(int dimension, double eta = 1.0);
    /// eta_L taken from a per-charge efficiency table, scaled by its largest
    /// entry over the qudit's labels. Missing charges are a ValidationError.
    static ChannelSpec from_efficiencies(const std::map<int, double>& eta_by_charge, int dimension);

    int dimension() const { return static_cast<int>(eta.size()); }
    void validate() const;
};

struct ChannelOutput {
    QuditKet ket;     // renormalized
    double survival;  // sum eta_L |c_L|^2
};

ChannelOutput apply_channel(const QuditKet& ket, const ChannelSpec& channel);

/// <a|rho|a>, clipped to [0, 1] at round-off scale.
double projection_probability(const DensityMatrix& rho, const Ket& analyzer);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Rejects inputs
/// with eigenvalues below -1e-8 or trace away from one.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Closest PSD unit-trace matrix in Frobenius norm to a Hermitian input
/// (eigenvalues projected onto the simplex).
DensityMatrix project_to_physical(const Matrix& hermitian);

}  // namespace hdqfc::qudit
