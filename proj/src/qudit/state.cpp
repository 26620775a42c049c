#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hdqfc/errors.hpp"
#include "hdqfc/qudit.hpp"

namespace hdqfc::qudit {

std::vector<int> oam_labels(int dimension) {
    if (dimension < 2) throw ValidationError("qudit dimension must be >= 2");
    if (dimension == 2) return {-1, 1};
    if (dimension % 2 == 0) throw ValidationError("even dimensions other than 2 have no symmetric OAM window");
    const int h = dimension / 2;
    std::vector<int> labels(static_cast<std::size_t>(dimension));
    std::iota(labels.begin(), labels.end(), -h);
    return labels;
}

cplx QuditKet::amplitude(int charge) const {
    const auto l = labels();
    auto it = std::find(l.begin(), l.end(), charge);
    if (it == l.end()) throw ValidationError("charge " + std::to_string(charge) + " outside the qudit window");
    return amplitudes[it - l.begin()];
}

QuditKet make_qudit(const std::vector<cplx>& amplitudes) {
    Ket k = Eigen::Map<const Ket>(amplitudes.data(), static_cast<Eigen::Index>(amplitudes.size()));
    oam_labels(static_cast<int>(k.size()));
    const double norm = k.norm();
    if (!(norm > 0.0)) throw ValidationError("qudit amplitudes must not all vanish");
    return {k / norm};
}

QuditKet balanced_qudit(int dimension) {
    oam_labels(dimension);
    return {Ket::Constant(dimension, cplx(1.0 / std::sqrt(static_cast<double>(dimension)), 0.0))};
}

QuditKet haar_random_qudit(int dimension, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<cplx> a(static_cast<std::size_t>(dimension));
    for (auto& x : a) {
        const double re = g(rng);
        x = {re, g(rng)};
    }
    return make_qudit(a);
}

DensityMatrix DensityMatrix::from_ket(const QuditKet& ket) { return {ket.amplitudes * ket.amplitudes.adjoint()}; }

DensityMatrix DensityMatrix::maximally_mixed(int dimension) {
    return {Matrix::Identity(dimension, dimension) / static_cast<double>(dimension)};
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_hermitian(double tol) const { return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol; }

bool DensityMatrix::is_physical(double tol) const {
    return is_hermitian(std::max(tol, 1e-12)) && std::abs(trace() - 1.0) <= tol && min_eigenvalue() >= -tol;
}

ChannelSpec ChannelSpec::uniform(int dimension, double eta) {
    oam_labels(dimension);
    return {std::vector<double>(static_cast<std::size_t>(dimension), eta),
            std::vector<double>(static_cast<std::size_t>(dimension), 0.0)};
}

ChannelSpec ChannelSpec::from_efficiencies(const std::map<int, double>& eta_by_charge, int dimension) {
    ChannelSpec ch = uniform(dimension, 0.0);
    const auto labels = oam_labels(dimension);
    double peak = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = eta_by_charge.find(labels[i]);
        if (it == eta_by_charge.end())
            throw ValidationError("efficiency table has no entry for L = " + std::to_string(labels[i]));
        if (!(it->second >= 0.0)) throw ValidationError("efficiencies must be non-negative");
        ch.eta[i] = it->second;
        peak = std::max(peak, it->second);
    }
    if (!(peak > 0.0)) throw ValidationError("efficiency table is zero over the qudit window");
    for (double& e : ch.eta) e /= peak;
    return ch;
}

void ChannelSpec::validate() const {
    if (eta.size() != phase.size()) throw ValidationError("channel eta and phase sizes differ");
    oam_labels(dimension());
    for (double e : eta)
        if (!(e >= 0.0 && e <= 1.0)) throw ValidationError("channel eta must lie in [0, 1]");
}

ChannelOutput apply_channel(const QuditKet& ket, const ChannelSpec& channel) {
    channel.validate();
    if (channel.dimension() != ket.dimension()) throw ValidationError("channel and qudit dimensions differ");
    Ket out(ket.dimension());
    for (int i = 0; i < ket.dimension(); ++i)
        out[i] = std::sqrt(channel.eta[i]) * std::polar(1.0, channel.phase[i]) * ket.amplitudes[i];
    const double survival = out.squaredNorm();
    if (!(survival > 0.0)) throw NumericalError("channel annihilates the qudit");
    return {{out / std::sqrt(survival)}, survival};
}

double projection_probability(const DensityMatrix& rho, const Ket& analyzer) {
    if (analyzer.size() != rho.dimension()) throw ValidationError("analyzer and state dimensions differ");
    const double p = analyzer.dot(rho.matrix * analyzer).real();
    return std::clamp(p, 0.0, 1.0);
}

namespace {

Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXd ev = es.eigenvalues();
    for (auto& v : ev) v = v < 1e-12 ? 0.0 : std::sqrt(v);
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void require_state(const DensityMatrix& r, const char* name) {
    if (!r.is_hermitian(1e-9) || std::abs(r.trace() - 1.0) > 1e-8 || r.min_eigenvalue() < -1e-8)
        throw ValidationError(std::string("fidelity: ") + name + " is not a PSD unit-trace matrix");
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dimension() != sigma.dimension()) throw ValidationError("fidelity: dimensions differ");
    require_state(rho, "rho");
    require_state(sigma, "sigma");
    // tr sqrt(sqrt(rho) sigma sqrt(rho)) is the nuclear norm of sqrt(rho) sqrt(sigma).
    const Matrix prod = psd_sqrt(rho.matrix) * psd_sqrt(sigma.matrix);
    Eigen::JacobiSVD<Matrix> svd(prod);
    const double s = svd.singularValues().sum();
    return std::clamp(s * s, 0.0, 1.0);
}

DensityMatrix project_to_physical(const Matrix& hermitian) {
    const Matrix h = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd ev = es.eigenvalues();
    // Euclidean projection of the spectrum onto the probability simplex.
    std::vector<double> u(ev.data(), ev.data() + ev.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, shift = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) shift = t;
    }
    Eigen::VectorXd p = (ev.array() - shift).cwiseMax(0.0);
    return {es.eigenvectors() * p.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint()};
}

}  // namespace hdqfc::qudit
