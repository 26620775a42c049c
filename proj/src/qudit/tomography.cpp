#include <algorithm>
#include <cmath>

#include "hdqfc/errors.hpp"
#include "hdqfc/tomography.hpp"

namespace hdqfc::qudit {

std::vector<Matrix> gell_mann_basis(int dimension) {
    const int d = dimension;
    std::vector<Matrix> out;
    const cplx i(0.0, 1.0);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            Matrix s = Matrix::Zero(d, d);
            s(a, b) = s(b, a) = 1.0;
            out.push_back(s);
            Matrix t = Matrix::Zero(d, d);
            t(a, b) = -i;
            t(b, a) = i;
            out.push_back(t);
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix z = Matrix::Zero(d, d);
        const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int k = 0; k < l; ++k) z(k, k) = scale;
        z(l, l) = -l * scale;
        out.push_back(z);
    }
    return out;
}

std::string to_string(TomographyMethod method) { return method == TomographyMethod::linear ? "linear" : "mle"; }

namespace {

void check_counts(const std::vector<double>& counts, const MUBCollection& mubs) {
    if (static_cast<int>(counts.size()) != mubs.analyzer_count())
        throw ValidationError("tomography needs d(d+1) counts");
    for (double c : counts)
        if (!(c >= 0.0) || !std::isfinite(c)) throw ValidationError("counts must be finite and non-negative");
}

// Per-basis relative frequencies.
std::vector<double> frequencies(const std::vector<double>& counts, const MUBCollection& mubs) {
    const int d = mubs.dimension;
    std::vector<double> p(counts.size());
    for (int j = 0; j < mubs.basis_count(); ++j) {
        double total = 0.0;
        for (int m = 0; m < d; ++m) total += counts[j * d + m];
        if (!(total > 0.0)) throw ValidationError("basis " + std::to_string(j) + " recorded no counts");
        for (int m = 0; m < d; ++m) p[j * d + m] = counts[j * d + m] / total;
    }
    return p;
}

}  // namespace

LinearInversion linear_inversion(const std::vector<double>& counts, const MUBCollection& mubs) {
    check_counts(counts, mubs);
    const int d = mubs.dimension;
    const auto p = frequencies(counts, mubs);
    const auto lambda = gell_mann_basis(d);
    const int n_rows = mubs.analyzer_count();
    const int n_cols = static_cast<int>(lambda.size());

    // p = 1/d + (1/2) sum_k r_k <a|lambda_k|a>, with r_k = tr(rho lambda_k).
    Eigen::MatrixXd a(n_rows, n_cols);
    Eigen::VectorXd rhs(n_rows);
    for (int j = 0; j < mubs.basis_count(); ++j) {
        for (int m = 0; m < d; ++m) {
            const int row = j * d + m;
            const Ket& v = mubs.analyzer(j, m);
            for (int k = 0; k < n_cols; ++k) a(row, k) = 0.5 * v.dot(lambda[k] * v).real();
            rhs[row] = p[row] - 1.0 / d;
        }
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    if (cod.rank() < n_cols) throw NumericalError("measurement matrix is singular");
    const Eigen::VectorXd r = cod.solve(rhs);

    Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
    for (int k = 0; k < n_cols; ++k) rho += 0.5 * r[k] * lambda[k];
    rho = 0.5 * (rho + rho.adjoint()).eval();
    DensityMatrix out{rho};
    const double min_ev = out.min_eigenvalue();
    return {out, min_ev, min_ev >= -1e-6};
}

namespace {

// Lower-triangular T with real diagonal packed into d^2 reals: the diagonal
// first, then (re, im) of each strictly-lower entry in row-major order.
struct Cholesky {
    int d;

    int size() const { return d * d; }

    Matrix unpack(const Eigen::VectorXd& t) const {
        Matrix m = Matrix::Zero(d, d);
        int k = 0;
        for (int i = 0; i < d; ++i) m(i, i) = t[k++];
        for (int r = 1; r < d; ++r)
            for (int c = 0; c < r; ++c, k += 2) m(r, c) = {t[k], t[k + 1]};
        return m;
    }

    Eigen::VectorXd pack(const Matrix& m) const {
        Eigen::VectorXd t(size());
        int k = 0;
        for (int i = 0; i < d; ++i) t[k++] = m(i, i).real();
        for (int r = 1; r < d; ++r)
            for (int c = 0; c < r; ++c, k += 2) {
                t[k] = m(r, c).real();
                t[k + 1] = m(r, c).imag();
            }
        return t;
    }

    // (row, col, unit) of parameter k.
    void element(int k, int& r, int& c, cplx& e) const {
        if (k < d) {
            r = c = k;
            e = 1.0;
            return;
        }
        int idx = k - d;
        for (r = 1; r < d; ++r)
            for (c = 0; c < r; ++c, idx -= 2)
                if (idx < 2) {
                    e = idx == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
                    return;
                }
    }
};

struct Problem {
    const MUBCollection& mubs;
    const std::vector<double>& counts;
    double total;  // expected counts per basis
    double floor;
    Cholesky chol;

    // residuals and, when jac != nullptr, their Jacobian.
    void evaluate(const Eigen::VectorXd& t, Eigen::VectorXd& res, Eigen::MatrixXd* jac) const {
        const int d = mubs.dimension;
        const Matrix tm = chol.unpack(t);
        const double tau = tm.squaredNorm();
        const int n = mubs.analyzer_count();
        res.resize(n);
        if (jac) jac->resize(n, chol.size());
        for (int i = 0; i < n; ++i) {
            const Ket& a = mubs.analyzer(i / d, i % d);
            const Ket ta = tm * a;
            const double q = ta.squaredNorm();
            const double p = q / tau;
            const double u = total * p;
            const double obs = counts[static_cast<std::size_t>(i)];
            const bool floored = u < floor;
            const double w = floored ? floor : u;
            res[i] = (u - obs) / std::sqrt(2.0 * w);
            if (!jac) continue;
            const double dres_du = floored ? 1.0 / std::sqrt(2.0 * w) : (u + obs) / (2.0 * u * std::sqrt(2.0 * u));
            for (int k = 0; k < chol.size(); ++k) {
                int r = 0, c = 0;
                cplx e;
                chol.element(k, r, c, e);
                const double dq = 2.0 * (std::conj(ta[r]) * e * a[c]).real();
                const double dtau = 2.0 * (std::conj(tm(r, c)) * e).real();
                const double dp = (dq - p * dtau) / tau;
                (*jac)(i, k) = dres_du * total * dp;
            }
        }
    }
};

}  // namespace

TomographyResult mle_reconstruct(const std::vector<double>& counts, const MUBCollection& mubs,
                                 const MleOptions& options) {
    check_counts(counts, mubs);
    if (!(options.tolerance > 0.0) || options.max_iterations < 1 || !(options.variance_floor > 0.0))
        throw ValidationError("invalid MLE options");
    const int d = mubs.dimension;

    const auto linear = linear_inversion(counts, mubs);
    Matrix start = project_to_physical(linear.rho.matrix).matrix;
    start = (1.0 - options.initial_mixing) * start +
            options.initial_mixing * Matrix::Identity(d, d) / static_cast<double>(d);

    // rho = L L^dag with reversed index order gives rho = T^dag T, T lower.
    Matrix reversed = start.reverse();
    Eigen::LLT<Matrix> llt(reversed);
    if (llt.info() != Eigen::Success) throw NumericalError("MLE start point is not positive definite");
    const Matrix lower = llt.matrixL();
    const Matrix t0 = Matrix(lower.adjoint()).reverse();

    double sum = 0.0;
    for (double c : counts) sum += c;
    Problem prob{mubs, counts, sum / mubs.basis_count(), options.variance_floor, Cholesky{d}};

    Eigen::VectorXd t = prob.chol.pack(t0);
    Eigen::VectorXd res;
    Eigen::MatrixXd jac;
    prob.evaluate(t, res, &jac);
    double objective = res.squaredNorm();
    double lambda = 1e-3;
    TomographyResult out;
    out.method = TomographyMethod::mle;

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * res;
        bool accepted = false;
        double improvement = 0.0;
        while (lambda < 1e16) {
            Eigen::MatrixXd damped = jtj;
            for (int k = 0; k < damped.rows(); ++k) damped(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const Eigen::VectorXd trial = t + step;
            Eigen::VectorXd trial_res;
            prob.evaluate(trial, trial_res, nullptr);
            const double trial_obj = trial_res.squaredNorm();
            if (std::isfinite(trial_obj) && trial_obj < objective) {
                improvement = objective - trial_obj;
                t = trial;
                objective = trial_obj;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted || improvement < options.tolerance) {
            out.converged = true;
            ++it;
            break;
        }
        prob.evaluate(t, res, &jac);
    }

    const Matrix tm = prob.chol.unpack(t);
    Matrix rho = tm.adjoint() * tm;
    rho /= rho.trace().real();
    out.rho = {0.5 * (rho + rho.adjoint())};
    out.iterations = it;
    out.objective = objective;
    return out;
}

}  // namespace hdqfc::qudit
