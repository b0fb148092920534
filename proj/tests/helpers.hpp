#ifndef QRS_TEST_HELPERS_HPP
#define QRS_TEST_HELPERS_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qrs/heun.hpp"
#include "qrs/odecore.hpp"

namespace qrstest {

using qrs::cplx;

/// Coefficient functions of v'' + p v' + q v = 0 in the confluent Heun form.
inline cplx heun_p(const qrs::HeunParams& h, cplx y) {
    return h.alpha + (h.beta + 1.0) / y + (h.gamma + 1.0) / (y - 1.0);
}
inline cplx heun_q(const qrs::HeunParams& h, cplx y) {
    return h.mu_tilde() / y + h.nu_tilde() / (y - 1.0);
}

/// Independent check on the series machinery: adaptive RK4 with step
/// doubling for the Heun ODE, integrating (v, v') from y0 to y1.
inline std::pair<cplx, cplx> integrate_heun(const qrs::HeunParams& h, double y0, cplx v0,
                                            cplx dv0, double y1, double tol = 1e-13) {
    auto rhs = [&](double y, cplx v, cplx dv, cplx& fv, cplx& fdv) {
        fv = dv;
        fdv = -heun_p(h, y) * dv - heun_q(h, y) * v;
    };
    auto rk4 = [&](double y, cplx v, cplx dv, double hh, cplx& ov, cplx& odv) {
        cplx k1v, k1d, k2v, k2d, k3v, k3d, k4v, k4d;
        rhs(y, v, dv, k1v, k1d);
        rhs(y + 0.5 * hh, v + 0.5 * hh * k1v, dv + 0.5 * hh * k1d, k2v, k2d);
        rhs(y + 0.5 * hh, v + 0.5 * hh * k2v, dv + 0.5 * hh * k2d, k3v, k3d);
        rhs(y + hh, v + hh * k3v, dv + hh * k3d, k4v, k4d);
        ov = v + hh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        odv = dv + hh / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    };
    double y = y0;
    cplx v = v0, dv = dv0;
    double dir = (y1 >= y0) ? 1.0 : -1.0;
    double h_step = dir * std::min(1e-3, std::abs(y1 - y0));
    int guard = 0;
    while (dir * (y1 - y) > 1e-15) {
        if (++guard > 2000000) throw std::runtime_error("integrate_heun: step cap hit");
        if (dir * (y + h_step - y1) > 0.0) h_step = y1 - y;
        cplx v1, d1, vh, dh, v2, d2;
        rk4(y, v, dv, h_step, v1, d1);
        rk4(y, v, dv, 0.5 * h_step, vh, dh);
        rk4(y + 0.5 * h_step, vh, dh, 0.5 * h_step, v2, d2);
        double scale = std::abs(v2) + std::abs(d2) + 1.0;
        double err = (std::abs(v2 - v1) + std::abs(d2 - d1)) / scale;
        if (err < tol) {
            y += h_step;
            v = v2;
            dv = d2;
            if (err < 0.1 * tol) h_step *= 1.6;
        } else {
            h_step *= 0.5;
        }
    }
    return {v, dv};
}

/// Value, first and second y-derivative of a log-free LocalSeries,
/// including the t^rho (1-t)^kappa prefactor.
inline std::array<cplx, 3> eval2(const qrs::LocalSeries& s, double y) {
    if (s.log_coeff) throw std::invalid_argument("eval2: log companion unsupported");
    cplx t = (s.center == 0) ? cplx(y) : cplx(1.0 - y);
    double sgn = (s.center == 0) ? 1.0 : -1.0;
    cplx S = 0.0, dS = 0.0, d2S = 0.0;
    for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) {
        d2S = d2S * t + 2.0 * dS;
        dS = dS * t + S;
        S = S * t + *it;
    }
    cplx rho = s.exponent;
    double kap = s.cofactor_exponent;
    cplx u = 1.0 - t;
    cplx pref = 1.0, dlog = 0.0, ddlog = 0.0;
    if (rho != 0.0) {
        pref *= std::pow(t, rho);
        dlog += rho / t;
        ddlog -= rho / (t * t);
    }
    if (kap != 0.0) {
        pref *= std::pow(u, cplx(kap));
        dlog -= kap / u;
        ddlog -= kap / (u * u);
    }
    cplx v = pref * S;
    cplx vt = pref * (dS + dlog * S);
    cplx vtt = pref * (d2S + 2.0 * dlog * dS + (dlog * dlog + ddlog) * S);
    return {v, sgn * vt, vtt};
}

/// Relative ODE residual of a log-free LocalSeries at a point.
inline double heun_residual(const qrs::HeunParams& h, const qrs::LocalSeries& s, double y) {
    auto [v, dv, d2v] = eval2(s, y);
    cplx r = d2v + heun_p(h, y) * dv + heun_q(h, y) * v;
    double scale = std::abs(d2v) + std::abs(heun_p(h, y) * dv) + std::abs(heun_q(h, y) * v);
    return std::abs(r) / (scale > 0.0 ? scale : 1.0);
}

/// The first model reduced to a single second-order equation in z, with
/// regular singular points at z = +-lambda.
inline qrs::RationalODE model1_ode(double lambda, double mu, double eps, double E) {
    const double l = lambda;
    qrs::Poly p_num{-l * (1.0 + 2.0 * eps), -(2.0 * E - 1.0 + 2.0 * l * l)};
    qrs::Poly q_num{-(eps * eps - E * E + l * l + mu * mu), -(2.0 * eps * l - l), -l * l};
    qrs::Poly den{-l * l, 0.0, 1.0};
    return qrs::RationalODE(p_num, den, q_num, den);
}

} // namespace qrstest

#endif
