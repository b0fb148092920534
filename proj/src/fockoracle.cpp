#include "qrs/fockoracle.hpp"

namespace qrs {

namespace {

FockOperator make_empty(FockModel model, int n_trunc) {
    if (n_trunc < 2) throw std::invalid_argument("build_hamiltonian: N must be >= 2");
    FockOperator op;
    op.model = model;
    op.n_trunc = n_trunc;
    op.dim = 2 * n_trunc;
    op.matrix.assign(static_cast<size_t>(op.dim) * op.dim, 0.0);
    return op;
}

/// Householder reduction of a symmetric matrix to tridiagonal form,
/// accumulating the orthogonal transform in a (EISPACK tred2 style).
void tred2(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(A(i, k));
            if (scale == 0.0) {
                e[static_cast<size_t>(i)] = A(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[static_cast<size_t>(i)] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    A(j, i) = A(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
                    for (int k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
                    e[static_cast<size_t>(j)] = g / h;
                    f += e[static_cast<size_t>(j)] * A(i, j);
                }
                double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = A(i, j);
                    e[static_cast<size_t>(j)] = g = e[static_cast<size_t>(j)] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        A(j, k) -= f * e[static_cast<size_t>(k)] + g * A(i, k);
                }
            }
        } else {
            e[static_cast<size_t>(i)] = A(i, l);
        }
        d[static_cast<size_t>(i)] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        int l = i - 1;
        if (d[static_cast<size_t>(i)] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += A(i, k) * A(k, j);
                for (int k = 0; k <= l; ++k) A(k, j) -= g * A(k, i);
            }
        }
        d[static_cast<size_t>(i)] = A(i, i);
        A(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) A(j, i) = A(i, j) = 0.0;
    }
}

/// Implicit-shift QL on the tridiagonal (d, e), vectors accumulated in a.
void tql2(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[static_cast<size_t>(i - 1)] = e[static_cast<size_t>(i)];
    e[static_cast<size_t>(n - 1)] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[static_cast<size_t>(m)]) +
                            std::abs(d[static_cast<size_t>(m + 1)]);
                if (std::abs(e[static_cast<size_t>(m)]) <= 1e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 60)
                    throw ConvergenceFailure("QL iteration did not converge");
                double g = (d[static_cast<size_t>(l + 1)] - d[static_cast<size_t>(l)]) /
                           (2.0 * e[static_cast<size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    e[static_cast<size_t>(l)] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[static_cast<size_t>(i)];
                    double b = c * e[static_cast<size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<size_t>(i + 1)] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i + 1)] -= p;
                        e[static_cast<size_t>(m)] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i + 1)] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i + 1)] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = A(k, i + 1);
                        A(k, i + 1) = s * A(k, i) + c * f;
                        A(k, i) = c * A(k, i) - s * f;
                    }
                }
                if (underflow) continue;
                d[static_cast<size_t>(l)] -= p;
                e[static_cast<size_t>(l)] = g;
                e[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

FockOperator build_hamiltonian(const RabiEpsParams& p, int n_trunc) {
    FockOperator op = make_empty(FockModel::RabiEps, n_trunc);
    for (int n = 0; n < n_trunc; ++n) {
        op.at(2 * n, 2 * n) = n + p.mu;
        op.at(2 * n + 1, 2 * n + 1) = n - p.mu;
        op.at(2 * n, 2 * n + 1) += p.eps;
        op.at(2 * n + 1, 2 * n) += p.eps;
        if (n + 1 < n_trunc) {
            double s = p.lambda * std::sqrt(n + 1.0);
            for (int spin = 0; spin < 2; ++spin) {
                op.at(2 * n + spin, 2 * (n + 1) + (1 - spin)) += s;
                op.at(2 * (n + 1) + (1 - spin), 2 * n + spin) += s;
            }
        }
    }
    return op;
}

FockOperator build_hamiltonian(const NonlinearUParams& p, int n_trunc) {
    FockOperator op = make_empty(FockModel::NonlinearU, n_trunc);
    for (int n = 0; n < n_trunc; ++n) {
        op.at(2 * n, 2 * n) = n * (p.omega + 0.5 * p.U) + 0.5 * p.omega0;
        op.at(2 * n + 1, 2 * n + 1) = n * (p.omega - 0.5 * p.U) - 0.5 * p.omega0;
        if (n + 1 < n_trunc) {
            double s = p.g * std::sqrt(n + 1.0);
            for (int spin = 0; spin < 2; ++spin) {
                op.at(2 * n + spin, 2 * (n + 1) + (1 - spin)) += s;
                op.at(2 * (n + 1) + (1 - spin), 2 * n + spin) += s;
            }
        }
    }
    return op;
}

std::vector<double> eigenvalues(const FockOperator& op, int k) {
    const int n = op.dim;
    if (k > n) throw std::invalid_argument("eigenvalues: k exceeds matrix dimension");
    std::vector<double> a = op.matrix;
    std::vector<double> d(static_cast<size_t>(n)), e(static_cast<size_t>(n));
    tred2(a, n, d, e);
    tql2(a, n, d, e);
    // residual check ||Hv - Ev|| <= 1e-10 ||H||_F for the k lowest pairs
    std::vector<int> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        return d[static_cast<size_t>(i)] < d[static_cast<size_t>(j)];
    });
    double hnorm = 0.0;
    for (double v : op.matrix) hnorm += v * v;
    hnorm = std::sqrt(hnorm);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        int col = idx[static_cast<size_t>(j)];
        double ev = d[static_cast<size_t>(col)];
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            double hv = 0.0;
            for (int l = 0; l < n; ++l)
                hv += op.at(i, l) * a[static_cast<size_t>(l) * n + col];
            double diff = hv - ev * a[static_cast<size_t>(i) * n + col];
            res += diff * diff;
        }
        if (std::sqrt(res) > 1e-10 * hnorm)
            throw ConvergenceFailure("eigenpair residual exceeds 1e-10 * ||H||");
        out.push_back(ev);
    }
    return out;
}

} // namespace qrs
