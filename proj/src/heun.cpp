#include "qrs/heun.hpp"

#include <cmath>

namespace qrs {

namespace {

bool is_pos_int(double v, double tol = 1e-12) {
    double r = std::round(v);
    return r >= 1.0 && std::abs(v - r) < tol;
}

/// Coefficients of HeunC(a,b,g,d,eta; t): a_0 = 1 and
/// (k+1)(k+b+1) a_{k+1} = [k(k+b+g+1-a) - mu~] a_k + [a(k-1) + mu~ + nu~] a_{k-1}.
std::vector<cplx> heunc_coeffs(const HeunParams& p, const TruncationPolicy& policy,
                               double& trunc_err) {
    const double mut = p.mu_tilde();
    const double nut = p.nu_tilde();
    std::vector<cplx> a;
    a.reserve(64);
    a.push_back(1.0);
    double partial = 1.0;
    int small_run = 0;
    double tpow = policy.eval_radius;
    double last_term = 0.0;
    for (int k = 0;; ++k) {
        if (std::abs(k + p.beta + 1.0) < 1e-12)
            throw ResonantWithoutBranch("singular recurrence step at n = " +
                                        std::to_string(k + 1));
        double denom = (k + 1.0) * (k + p.beta + 1.0);
        cplx rhs = (k * (k + p.beta + p.gamma + 1.0 - p.alpha) - mut) * a[static_cast<size_t>(k)];
        if (k >= 1) rhs += (p.alpha * (k - 1.0) + mut + nut) * a[static_cast<size_t>(k) - 1];
        cplx next = rhs / denom;
        a.push_back(next);
        last_term = std::abs(next) * tpow;
        partial += last_term;
        tpow *= policy.eval_radius;
        small_run = (last_term < policy.tol * partial) ? small_run + 1 : 0;
        if (small_run >= 3) break;
        if (static_cast<int>(a.size()) >= policy.max_terms)
            throw Divergent("series did not meet tolerance within max_terms");
    }
    trunc_err = last_term / partial;
    return a;
}

struct SeriesVal {
    cplx v, dv_dt;
};

SeriesVal eval_plain(const std::vector<cplx>& a, cplx t) {
    cplx v = 0.0, dv = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        dv = dv * t + v;
        v = v * t + *it;
    }
    return {v, dv};
}

/// t^rho * (1-t)^kappa * S(t) and its t-derivative; t assumed inside the disk.
SeriesVal eval_prefixed(const std::vector<cplx>& a, cplx rho, double kappa, cplx t) {
    SeriesVal s = eval_plain(a, t);
    cplx u = 1.0 - t;
    cplx pref = 1.0, dlog = 0.0;  // pref = t^rho (1-t)^kappa, dlog = pref'/pref
    if (rho != 0.0) {
        pref *= std::pow(t, rho);
        dlog += rho / t;
    }
    if (kappa != 0.0) {
        pref *= std::pow(u, cplx(kappa));
        dlog -= kappa / u;
    }
    return {pref * s.v, pref * (s.dv_dt + dlog * s.v)};
}

} // namespace

LocalSeries heun_series(const HeunParams& params, int center, HeunBranch branch,
                        const TruncationPolicy& policy) {
    if (center != 0 && center != 1)
        throw std::invalid_argument("heun_series: center must be 0 or 1");
    LocalSeries out;
    out.center = center;
    out.radius = 1.0;
    HeunParams set;
    if (branch == HeunBranch::ZeroExponent) {
        set = (center == 0) ? params : params.mirrored();
        out.exponent = 0.0;
        out.cofactor_exponent = 0.0;
    } else {
        set = (center == 0) ? params.large_at_zero() : params.large_at_one();
        out.exponent = (center == 0) ? -params.beta : -params.gamma;
        out.cofactor_exponent = (center == 0) ? -params.gamma : 0.0;
    }
    out.coeffs = heunc_coeffs(set, policy, out.truncation_error_estimate);
    return out;
}

std::pair<cplx, cplx> heun_eval(const LocalSeries& s, cplx y) {
    cplx t = (s.center == 0) ? y : 1.0 - y;
    double dt_dy = (s.center == 0) ? 1.0 : -1.0;
    if (std::abs(t) >= 0.95 * s.radius)
        throw OutOfDisk("evaluation point outside the guard-banded disk");
    SeriesVal r;
    if (std::abs(t) == 0.0 && s.exponent == 0.0) {
        r = {s.coeffs.empty() ? 0.0 : s.coeffs[0],
             s.coeffs.size() > 1 ? s.coeffs[1] : 0.0};
        if (s.cofactor_exponent != 0.0) {
            // at t = 0 the cofactor equals 1, its log-derivative is -kappa
            r.dv_dt -= s.cofactor_exponent * r.v;
        }
    } else {
        r = eval_prefixed(s.coeffs, s.exponent, s.cofactor_exponent, t);
    }
    if (s.log_coeff) {
        SeriesVal base = eval_prefixed(s.log_base_coeffs, s.log_base_exponent,
                                       s.cofactor_exponent, t);
        cplx lt = std::log(t);
        r.v += *s.log_coeff * (base.v * lt);
        r.dv_dt += *s.log_coeff * (base.dv_dt * lt + base.v / t);
    }
    return {r.v, r.dv_dt * dt_dy};
}

std::pair<cplx, double> log_obstruction_scaled(const HeunParams& params, int center, int n) {
    if (n < 1) throw GapMismatch("obstruction index must be a positive integer");
    HeunParams set = (center == 0) ? params : params.mirrored();
    double gap = -set.beta;  // exponent gap at the center
    if (!is_pos_int(gap) || static_cast<int>(std::round(gap)) != n)
        throw GapMismatch("exponent gap at the center does not equal n");
    const double mut = set.mu_tilde();
    const double nut = set.nu_tilde();
    std::vector<cplx> a{1.0};
    for (int k = 0; k < n - 1; ++k) {
        double denom = (k + 1.0) * (k + set.beta + 1.0);
        cplx rhs = (k * (k + set.beta + set.gamma + 1.0 - set.alpha) - mut) *
                   a[static_cast<size_t>(k)];
        if (k >= 1) rhs += (set.alpha * (k - 1.0) + mut + nut) * a[static_cast<size_t>(k) - 1];
        a.push_back(rhs / denom);
    }
    // inconsistency of the resonant step k = n-1: the would-be numerator of a_n
    int k = n - 1;
    cplx t1 = (k * (k + set.beta + set.gamma + 1.0 - set.alpha) - mut) * a[static_cast<size_t>(k)];
    cplx t2 = (k >= 1) ? (set.alpha * (k - 1.0) + mut + nut) * a[static_cast<size_t>(k) - 1]
                       : cplx(0.0);
    double scale = std::abs(t1) + std::abs(t2);
    for (const cplx& c : a) scale = std::max(scale, std::abs(c));
    return {t1 + t2, scale};
}

cplx log_obstruction(const HeunParams& params, int center, int n) {
    return log_obstruction_scaled(params, center, n).first;
}

cplx wronskian_scalar(const LocalSeries& s1, const LocalSeries& s2, cplx y) {
    auto [v1, d1] = heun_eval(s1, y);
    auto [v2, d2] = heun_eval(s2, y);
    return d1 * v2 - v1 * d2;
}

} // namespace qrs
