#ifndef QRS_FOCKORACLE_HPP
#define QRS_FOCKORACLE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrs {

struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class FockModel { RabiEps, NonlinearU };

/// Truncated Hamiltonian in the number basis {z^n/sqrt(n!)} tensor spin,
/// basis index = 2n + spin, spin 0 = up. Dense real symmetric.
struct FockOperator {
    FockModel model = FockModel::RabiEps;
    int n_trunc = 0;
    int dim = 0;
    std::vector<double> matrix;  // row-major dim x dim

    double& at(int i, int j) { return matrix[static_cast<size_t>(i) * dim + j]; }
    double at(int i, int j) const { return matrix[static_cast<size_t>(i) * dim + j]; }
};

struct RabiEpsParams {
    double lambda = 0.0, mu = 0.0, eps = 0.0;
};
struct NonlinearUParams {
    double omega = 1.0, omega0 = 0.0, g = 0.0, U = 0.0;
};

FockOperator build_hamiltonian(const RabiEpsParams& p, int n_trunc);
FockOperator build_hamiltonian(const NonlinearUParams& p, int n_trunc);

/// k lowest eigenvalues, ascending. Householder tridiagonalization followed
/// by implicit-shift QL; each returned pair satisfies ||Hv - Ev|| <= 1e-10 ||H||.
std::vector<double> eigenvalues(const FockOperator& op, int k);

struct ConvergenceRow {
    int n_trunc = 0;
    double max_drift = 0.0;  // max_i |E_i(N) - E_i(N_last)| over the lowest k
};

template <class Params>
std::vector<ConvergenceRow> convergence_check(const Params& p, const std::vector<int>& n_list,
                                              int k) {
    if (n_list.empty()) throw std::invalid_argument("convergence_check: empty N list");
    std::vector<std::vector<double>> evs;
    for (int n : n_list) evs.push_back(eigenvalues(build_hamiltonian(p, n), k));
    std::vector<ConvergenceRow> out;
    for (size_t j = 0; j < evs.size(); ++j) {
        double drift = 0.0;
        for (int i = 0; i < k; ++i)
            drift = std::max(drift, std::abs(evs[j][static_cast<size_t>(i)] -
                                             evs.back()[static_cast<size_t>(i)]));
        out.push_back({n_list[j], drift});
    }
    return out;
}

} // namespace qrs

#endif
