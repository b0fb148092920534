#ifndef QRS_HEUN_HPP
#define QRS_HEUN_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qrs/poly.hpp"

namespace qrs {

struct ResonantWithoutBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Divergent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutOfDisk : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GapMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameters of v'' + (alpha + (beta+1)/y + (gamma+1)/(y-1)) v'
///                 + (mu_tilde/y + nu_tilde/(y-1)) v = 0.
struct HeunParams {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0, eta = 0.0;

    double mu_tilde() const {
        return 0.5 * (alpha - beta - gamma + alpha * beta - beta * gamma) - eta;
    }
    double nu_tilde() const {
        return 0.5 * (alpha + beta + gamma + alpha * gamma + beta * gamma) + delta + eta;
    }
    /// Parameter set of the companion solution expanded at the other point,
    /// HeunC(a1; 1-y) with a1 = (-alpha, gamma, beta, -delta, delta+eta).
    HeunParams mirrored() const { return {-alpha, gamma, beta, -delta, delta + eta}; }
    /// Set for the large-exponent solution at y = 0 (the H3 prefactor set).
    HeunParams large_at_zero() const { return {alpha, -beta, -gamma, delta, eta}; }
    /// Set for the large-exponent solution at y = 1 (the H4 prefactor set).
    HeunParams large_at_one() const { return {-alpha, -gamma, beta, -delta, delta + eta}; }
};

enum class HeunBranch { ZeroExponent, LargeExponent };

struct TruncationPolicy {
    double tol = 1e-14;
    int max_terms = 2000;
    double eval_radius = 0.5;  // reference |t| at which term smallness is judged
};

/// A Frobenius expansion t^exponent * (1-t)^cofactor_exponent * sum a_n t^n
/// with t = y - center (center 0) or 1 - y (center 1). The optional
/// logarithmic companion adds log_coeff * [base series] * ln(t).
struct LocalSeries {
    int center = 0;  // 0 or 1 in y-coordinates
    cplx exponent = 0.0;
    double cofactor_exponent = 0.0;  // exponent of the prefactor at the other point
    std::vector<cplx> coeffs;
    double radius = 1.0;
    double truncation_error_estimate = 0.0;
    std::optional<cplx> log_coeff;
    cplx log_base_exponent = 0.0;
    std::vector<cplx> log_base_coeffs;
};

/// Frobenius series of the requested branch at the requested center.
/// ZeroExponent yields HeunC(a;.) (H1/H2); LargeExponent yields the
/// prefixed higher-exponent solution (H3/H4). The LargeExponent solutions
/// use the real prefactor (1-y)^{-gamma}; they differ from a complex-branch
/// convention by a constant factor only.
LocalSeries heun_series(const HeunParams& params, int center, HeunBranch branch,
                        const TruncationPolicy& policy = {});

/// Value and derivative (with respect to y) inside the guard-banded disk.
std::pair<cplx, cplx> heun_eval(const LocalSeries& s, cplx y);

/// Obstruction o_n of the zero-exponent recurrence at the resonant step n;
/// o_n = 0 means the logarithm is absent and both local solutions are
/// holomorphic. Requires the exponent gap at the center to equal n.
cplx log_obstruction(const HeunParams& params, int center, int n);

/// Same obstruction together with the magnitude of the terms feeding the
/// resonant step, for scale-free vanishing tests.
std::pair<cplx, double> log_obstruction_scaled(const HeunParams& params, int center, int n);

/// w[v1,v2](y) = v1' v2 - v1 v2'.
cplx wronskian_scalar(const LocalSeries& s1, const LocalSeries& s2, cplx y);

} // namespace qrs

#endif
