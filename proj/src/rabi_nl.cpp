#include "qrs/rabi_nl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrs/spectral.hpp"

namespace qrs {

namespace {

constexpr double kIntTol = 1e-8;   // integer-x detection in scans
constexpr double kCondTol = 1e-8;  // normalized vanishing of W / J_m

void check(const Model2Params& p) {
    if (!(4.0 * p.omega * p.omega > p.U * p.U))
        throw std::invalid_argument("Model2Params: requires 4 omega^2 > U^2");
    if (p.g == 0.0)
        throw std::invalid_argument("Model2Params: g = 0 is handled by the oracle");
}

Vec2 matvec(const Mat2& m, const Vec2& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

Mat2 shifted(const Mat2& m, cplx lambda) {
    Mat2 r = m;
    r[0][0] -= lambda;
    r[1][1] -= lambda;
    return r;
}

Vec2 solve2(const Mat2& m, const Vec2& b) {
    cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return {(b[0] * m[1][1] - m[0][1] * b[1]) / det,
            (m[0][0] * b[1] - b[0] * m[1][0]) / det};
}

double vnorm(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

/// Unit kernel direction of a (numerically) rank-1 matrix, via the adjugate:
/// M adj(M) = det(M) I, so adj(M) e lies in the kernel for any e. The fixed
/// right-hand sides keep the orientation continuous in the parameters.
Vec2 null_direction(const Mat2& m) {
    Mat2 adj = {{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
    Vec2 c1 = matvec(adj, {1.0, 1.0});
    Vec2 c2 = matvec(adj, {1.0, -1.0});
    Vec2 v = (vnorm(c1) >= vnorm(c2)) ? c1 : c2;
    double n = vnorm(v);
    if (n == 0.0) throw std::runtime_error("null_direction: zero adjugate");
    return {v[0] / n, v[1] / n};
}

struct Jet {
    Vec2 c0{}, c1{}, c2{};
};

} // namespace

double energy_at_x(double x, double omega, double omega0, double g, double U) {
    return ((4.0 * omega * omega - U * U) * x - 4.0 * g * g - omega0 * U) / (4.0 * omega);
}

Mat2 coeff_matrix_A(const Model2Params& p, cplx y) {
    check(p);
    if (y == cplx(1.0) || y == cplx(-1.0))
        throw SingularY("coeff_matrix_A: y = +-1 is a singular point");
    const double D = p.U * p.U - 4.0 * p.omega * p.omega;
    const double s4 = std::sqrt(-D);
    const double E = p.E, om = p.omega, om0 = p.omega0, g = p.g, U = p.U;
    cplx y2m1 = y * y - 1.0;
    Mat2 a;
    a[0][0] = y * (-4.0 * g * g + (U - 2.0 * om) * (2.0 * E - om0)) / (D * y2m1);
    a[0][1] = -(4.0 * g * g * y * y + (U + 2.0 * om) * (2.0 * E + om0)) /
              ((U + 2.0 * om) * s4 * y2m1);
    a[1][0] = (4.0 * g * g * y * y - (U - 2.0 * om) * (2.0 * E - om0)) /
              ((U - 2.0 * om) * s4 * y2m1);
    a[1][1] = -y * (4.0 * g * g + (U + 2.0 * om) * (2.0 * E + om0)) / (D * y2m1);
    return a;
}

PartialFractionsA partial_fractions_A(const Model2Params& p) {
    check(p);
    const double D = p.U * p.U - 4.0 * p.omega * p.omega;
    const double s4 = std::sqrt(-D);
    const double E = p.E, om = p.omega, om0 = p.omega0, g = p.g, U = p.U;
    // entry = (n2 y^2 + n1 y + n0) / (K (y^2 - 1))
    struct Split {
        double C, P, M;
    };
    auto pf = [](double n2, double n1, double n0, double K) -> Split {
        return {n2 / K, (n2 + n1 + n0) / (2.0 * K), -(n2 - n1 + n0) / (2.0 * K)};
    };
    Split e11 = pf(0.0, -4.0 * g * g + (U - 2.0 * om) * (2.0 * E - om0), 0.0, D);
    Split e12 = pf(-4.0 * g * g, 0.0, -(U + 2.0 * om) * (2.0 * E + om0), (U + 2.0 * om) * s4);
    Split e21 = pf(4.0 * g * g, 0.0, -(U - 2.0 * om) * (2.0 * E - om0), (U - 2.0 * om) * s4);
    Split e22 = pf(0.0, -(4.0 * g * g + (U + 2.0 * om) * (2.0 * E + om0)), 0.0, D);
    PartialFractionsA out;
    out.C = {{{e11.C, e12.C}, {e21.C, e22.C}}};
    out.P = {{{e11.P, e12.P}, {e21.P, e22.P}}};
    out.M = {{{e11.M, e12.M}, {e21.M, e22.M}}};
    return out;
}

VectorSeries vector_frobenius(const Model2Params& p, int s, FrobeniusBranch branch,
                              int n_terms) {
    check(p);
    if (s != 1 && s != -1)
        throw std::invalid_argument("vector_frobenius: s must be +1 or -1");
    PartialFractionsA pfa = partial_fractions_A(p);
    const Mat2& As = (s == 1) ? pfa.P : pfa.M;
    const Mat2& Ao = (s == 1) ? pfa.M : pfa.P;
    const double x = p.x();

    // A(y) = As/t + sum_{j>=1} A_j t^{j-1} around t = y - s; the other pole
    // sits at t = -2s, so 1/(y + s) = sum_k (-1)^k t^k / (2s)^{k+1}.
    auto Aj = [&](int j) -> Mat2 {
        double f = ((j % 2 == 1) ? 1.0 : -1.0) / std::pow(2.0 * s, j);
        Mat2 m;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                m[r][c] = Ao[r][c] * f + ((j == 1) ? pfa.C[r][c] : cplx(0.0));
        return m;
    };

    VectorSeries out;
    out.point_s = s;
    out.radius = 2.0;

    if (branch == FrobeniusBranch::ZeroExponent || branch == FrobeniusBranch::ExponentX) {
        double rho = (branch == FrobeniusBranch::ZeroExponent) ? 0.0 : x;
        out.exponent = rho;
        Vec2 a0 = null_direction(shifted(As, rho));
        out.coeffs.push_back(a0);
        for (int n = 1; n < n_terms; ++n) {
            if (branch == FrobeniusBranch::ZeroExponent && std::abs(x - n) < kIntTol)
                throw ResonantStep("step matrix singular at n = " + std::to_string(n));
            Vec2 R{0.0, 0.0};
            for (int j = 1; j <= n; ++j) {
                Vec2 t = matvec(Aj(j), out.coeffs[static_cast<size_t>(n - j)]);
                R[0] += t[0];
                R[1] += t[1];
            }
            Vec2 an = solve2(shifted(As, rho + n), {-R[0], -R[1]});
            out.coeffs.push_back(an);
            if (n > 8 && vnorm(an) < 1e-30 &&
                vnorm(out.coeffs[static_cast<size_t>(n - 1)]) < 1e-30)
                break;
        }
        return out;
    }

    // LogDerivative: carry a_n(rho) as quadratic jets around rho = 0 with
    // a_0(rho) = rho v_0, so that the resonant step n = m stays finite and
    // dF/drho at rho = 0 is the logarithmic companion solution.
    int m = static_cast<int>(std::round(x));
    if (m < 1 || std::abs(x - m) > 1e-6)
        throw std::invalid_argument("LogDerivative requires x at a positive integer");
    if (n_terms < m + 20) n_terms = m + 20;
    Vec2 v0 = null_direction(As);
    std::vector<Jet> a;
    a.push_back({{0.0, 0.0}, v0, {0.0, 0.0}});
    for (int n = 1; n < n_terms; ++n) {
        Jet b;  // b = -R(rho)
        for (int j = 1; j <= n; ++j) {
            Mat2 A = Aj(j);
            const Jet& prev = a[static_cast<size_t>(n - j)];
            Vec2 t0 = matvec(A, prev.c0), t1 = matvec(A, prev.c1), t2 = matvec(A, prev.c2);
            for (int r = 0; r < 2; ++r) {
                b.c0[static_cast<size_t>(r)] -= t0[static_cast<size_t>(r)];
                b.c1[static_cast<size_t>(r)] -= t1[static_cast<size_t>(r)];
                b.c2[static_cast<size_t>(r)] -= t2[static_cast<size_t>(r)];
            }
        }
        Mat2 M0 = shifted(As, cplx(n));
        Jet an;
        if (n != m) {
            // (M0 - rho I) a = b: a0 = M0^{-1} b0, a1 = M0^{-1}(b1 + a0), ...
            an.c0 = solve2(M0, b.c0);
            an.c1 = solve2(M0, {b.c1[0] + an.c0[0], b.c1[1] + an.c0[1]});
            an.c2 = solve2(M0, {b.c2[0] + an.c1[0], b.c2[1] + an.c1[1]});
        } else {
            // det(M0 - rho I) = rho (rho + m) and adj(M0 - rho I) = adj(M0) - rho I;
            // b0 vanishes identically because every a_k(0) with k < m does.
            Mat2 adj0 = {{{M0[1][1], -M0[0][1]}, {-M0[1][0], M0[0][0]}}};
            Vec2 N1 = matvec(adj0, b.c1);
            Vec2 N2 = matvec(adj0, b.c2);
            N1[0] -= b.c0[0];
            N1[1] -= b.c0[1];
            N2[0] -= b.c1[0];
            N2[1] -= b.c1[1];
            for (int r = 0; r < 2; ++r) {
                an.c0[static_cast<size_t>(r)] = N1[static_cast<size_t>(r)] / double(m);
                an.c1[static_cast<size_t>(r)] = N2[static_cast<size_t>(r)] / double(m) -
                                                N1[static_cast<size_t>(r)] / double(m * m);
                an.c2[static_cast<size_t>(r)] = 0.0;
            }
        }
        a.push_back(an);
    }
    out.exponent = 0.0;
    out.has_log = true;
    for (const Jet& j : a) {
        out.coeffs.push_back(j.c0);    // F(0, y): zero below the resonant step
        out.dcoeffs.push_back(j.c1);   // a_n'(0)
    }
    return out;
}

std::pair<Vec2, Vec2> vector_eval(const VectorSeries& f, cplx y) {
    cplx t = y - cplx(static_cast<double>(f.point_s));
    if (std::abs(t) >= 0.95 * f.radius)
        throw OutOfDisk("evaluation point outside the guard-banded disk");
    auto horner = [&](const std::vector<Vec2>& c, Vec2& v, Vec2& dv) {
        v = {0.0, 0.0};
        dv = {0.0, 0.0};
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            for (int r = 0; r < 2; ++r) {
                dv[static_cast<size_t>(r)] = dv[static_cast<size_t>(r)] * t +
                                             v[static_cast<size_t>(r)];
                v[static_cast<size_t>(r)] = v[static_cast<size_t>(r)] * t +
                                            (*it)[static_cast<size_t>(r)];
            }
        }
    };
    Vec2 S, dS;
    horner(f.coeffs, S, dS);
    if (!f.has_log) {
        cplx pref = (f.exponent == 0.0) ? cplx(1.0) : std::pow(t, cplx(f.exponent));
        Vec2 v, dv;
        for (int r = 0; r < 2; ++r) {
            v[static_cast<size_t>(r)] = pref * S[static_cast<size_t>(r)];
            cplx d = dS[static_cast<size_t>(r)];
            if (f.exponent != 0.0) d += f.exponent / t * S[static_cast<size_t>(r)];
            dv[static_cast<size_t>(r)] = pref * d;
        }
        return {v, dv};
    }
    Vec2 D, dD;
    horner(f.dcoeffs, D, dD);
    cplx lt = std::log(t);
    Vec2 v, dv;
    for (int r = 0; r < 2; ++r) {
        v[static_cast<size_t>(r)] = D[static_cast<size_t>(r)] +
                                    lt * S[static_cast<size_t>(r)];
        dv[static_cast<size_t>(r)] = dD[static_cast<size_t>(r)] +
                                     lt * dS[static_cast<size_t>(r)] +
                                     S[static_cast<size_t>(r)] / t;
    }
    return {v, dv};
}

double wronskian_model2(const Model2Params& p, double y) {
    check(p);
    double x = p.x();
    double m = std::round(x);
    if (m >= 1.0 && std::abs(x - m) < kIntTol)
        throw IntegerX("x is a positive integer: use integer_x_condition");
    VectorSeries f = vector_frobenius(p, 1, FrobeniusBranch::ZeroExponent);
    Vec2 u = vector_eval(f, y).first;
    Vec2 w = vector_eval(f, -y).first;
    // det[u, sigma_z w] with sigma_z w = (w_1, -w_2)
    return (-(u[0] * w[1] + u[1] * w[0])).real();
}

IntegerXResult integer_x_condition(const Model2Params& p) {
    check(p);
    double x = p.x();
    int m = static_cast<int>(std::round(x));
    if (m < 1 || std::abs(x - m) > 1e-6)
        throw std::invalid_argument("integer_x_condition: x must be a positive integer");
    IntegerXResult out;
    out.m = m;

    VectorSeries fx = vector_frobenius(p, 1, FrobeniusBranch::ExponentX);
    Vec2 u = vector_eval(fx, 0.0).first;
    out.wronskian = (-2.0 * u[0] * u[1]).real();
    out.wronskian_scale = std::norm(u[0]) + std::norm(u[1]);

    VectorSeries fl = vector_frobenius(p, 1, FrobeniusBranch::LogDerivative);
    const Vec2& am = fl.coeffs[static_cast<size_t>(m)];
    const Vec2& vx = fx.coeffs[0];  // unit higher-exponent eigenvector
    out.judd_factor = (am[0] * std::conj(vx[0]) + am[1] * std::conj(vx[1])).real();
    double scale = 1.0;
    for (int n = 0; n <= m; ++n) {
        scale = std::max(scale, vnorm(fl.dcoeffs[static_cast<size_t>(n)]));
        scale = std::max(scale, vnorm(fl.coeffs[static_cast<size_t>(n)]));
    }
    out.judd_scale = scale;
    return out;
}

std::vector<JuddCurvePoint> judd_curves(int m, double omega, double U, double omega0_lo,
                                        double omega0_hi, double g_lo, double g_hi,
                                        int n_omega0, int n_g) {
    if (m < 1) throw std::invalid_argument("judd_curves: m must be a positive integer");
    if (!(4.0 * omega * omega > U * U))
        throw std::invalid_argument("judd_curves: requires 4 omega^2 > U^2");
    if (n_omega0 < 2 || n_g < 2)
        throw std::invalid_argument("judd_curves: grid needs at least 2 points per axis");
    const double denom = 4.0 * omega * omega - U * U;
    auto parabola = [&](double g) { return 4.0 * g * g * U / denom - U * m; };

    std::vector<JuddCurvePoint> out;
    const int n_par = 2 * n_g - 1;
    for (int i = 0; i < n_par; ++i) {
        double g = g_lo + (g_hi - g_lo) * i / (n_par - 1.0);
        double om0 = parabola(g);
        if (om0 >= omega0_lo && om0 <= omega0_hi) out.push_back({om0, g, "parabola"});
    }

    // Remaining factor of J_m: divide the numeric common factor by the
    // parabola factor and contour its sign changes on the grid.
    auto jfun = [&](double om0, double g) -> double {
        double pfac = om0 - parabola(g);
        if (std::abs(pfac) < 1e-6 * (1.0 + std::abs(om0)) || g == 0.0)
            return std::numeric_limits<double>::quiet_NaN();
        Model2Params p;
        p.omega = omega;
        p.omega0 = om0;
        p.g = g;
        p.U = U;
        p.E = energy_at_x(m, omega, om0, g, U);
        try {
            return integer_x_condition(p).judd_factor / pfac;
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    std::vector<double> om0s(static_cast<size_t>(n_omega0)), gs(static_cast<size_t>(n_g));
    for (int i = 0; i < n_omega0; ++i)
        om0s[static_cast<size_t>(i)] = omega0_lo + (omega0_hi - omega0_lo) * i /
                                                       (n_omega0 - 1.0);
    for (int j = 0; j < n_g; ++j)
        gs[static_cast<size_t>(j)] = g_lo + (g_hi - g_lo) * j / (n_g - 1.0);
    std::vector<double> val(static_cast<size_t>(n_omega0) * n_g);
    for (int i = 0; i < n_omega0; ++i)
        for (int j = 0; j < n_g; ++j)
            val[static_cast<size_t>(i) * n_g + j] =
                jfun(om0s[static_cast<size_t>(i)], gs[static_cast<size_t>(j)]);
    auto at = [&](int i, int j) { return val[static_cast<size_t>(i) * n_g + j]; };

    // Bisect jfun along a grid edge so the reported point actually sits on
    // the zero set, not on its secant approximation.
    auto refine = [](const std::function<double(double)>& f, double lo, double hi,
                     double flo, double fhi) -> double {
        for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = f(mid);
            if (!std::isfinite(fm)) break;
            if ((flo < 0.0) != (fm < 0.0)) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        (void)fhi;
        return 0.5 * (lo + hi);
    };

    for (int i = 0; i < n_omega0; ++i) {
        for (int j = 0; j < n_g; ++j) {
            double v = at(i, j);
            if (!std::isfinite(v)) continue;
            if (i + 1 < n_omega0) {
                double w = at(i + 1, j);
                if (std::isfinite(w) && v * w < 0.0) {
                    double gj = gs[static_cast<size_t>(j)];
                    double om0 = refine([&](double t) { return jfun(t, gj); },
                                        om0s[static_cast<size_t>(i)],
                                        om0s[static_cast<size_t>(i + 1)], v, w);
                    out.push_back({om0, gj, "contour"});
                }
            }
            if (j + 1 < n_g) {
                double w = at(i, j + 1);
                if (std::isfinite(w) && v * w < 0.0) {
                    double om0i = om0s[static_cast<size_t>(i)];
                    double g = refine([&](double t) { return jfun(om0i, t); },
                                      gs[static_cast<size_t>(j)],
                                      gs[static_cast<size_t>(j + 1)], v, w);
                    out.push_back({om0i, g, "contour"});
                }
            }
        }
    }
    return out;
}

Model2SpectrumResult spectrum_model2(const Model2Params& base, double e_lo, double e_hi,
                                     double scan_step, double refine_tol) {
    check(base);
    if (!(e_hi > e_lo)) throw std::invalid_argument("spectrum_model2: empty E range");
    if (!(scan_step > 0.0) || !(refine_tol > 0.0))
        throw std::invalid_argument("spectrum_model2: step and tolerance must be positive");

    std::vector<double> candidates;  // integer-x energies E_m, m >= 1
    const double margin = 5.0 * scan_step;
    for (int m = 1;; ++m) {
        double em = energy_at_x(m, base.omega, base.omega0, base.g, base.U);
        if (em > e_hi + margin) break;
        if (em >= e_lo - margin) candidates.push_back(em);
    }

    const double excl = 10.0 * refine_tol;
    auto condition = [&](double E) -> double {
        for (double c : candidates)
            if (std::abs(E - c) < excl) return std::numeric_limits<double>::quiet_NaN();
        Model2Params p = base;
        p.E = E;
        try {
            return wronskian_model2(p);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    Model2SpectrumResult out;
    out.sigma = 2.0 * base.g / std::sqrt(4.0 * base.omega * base.omega - base.U * base.U);
    AsymptoticData ad;
    ad.poincare_rank = 1;
    ad.pairs = {{out.sigma, base.x()}, {-out.sigma, base.x()}};
    ad.growth_order = 1.0;
    ad.has_growth_type = true;
    ad.growth_type = out.sigma;
    out.verdict = bargmann_admissibility(ad);

    ScanConfig cfg;
    cfg.step = scan_step;
    cfg.refine_tol = refine_tol;
    cfg.pole_filter = true;
    try {
        ScanResult sr = scan_zeros(condition, e_lo, e_hi, cfg);
        for (const ZeroBracket& zb : sr.roots) {
            SpectrumPoint pt;
            pt.energy = zb.refined_root;
            Model2Params p = base;
            p.E = zb.refined_root;
            pt.x_value = p.x();
            pt.kind = SpectrumKind::Generic;
            out.set.points.push_back(pt);
        }
        out.set.pole_skipped = sr.pole_skipped;
    } catch (const NoEvaluations&) {
    }

    for (double c : candidates) {
        if (c < e_lo || c > e_hi) continue;
        Model2Params p = base;
        p.E = c;
        IntegerXResult r;
        try {
            r = integer_x_condition(p);
        } catch (const std::exception&) {
            continue;
        }
        SpectrumPoint pt;
        pt.energy = c;
        pt.x_value = p.x();
        bool judd_zero = std::abs(r.judd_factor) < kCondTol * r.judd_scale;
        bool wron_zero = std::abs(r.wronskian) < kCondTol * std::max(r.wronskian_scale, 1.0);
        if (judd_zero) {
            // J_m = 0 removes the logarithm at both points simultaneously
            // (mirror symmetry), so the whole two-dimensional solution space
            // is entire: Juddian levels here are doubly degenerate.
            pt.kind = SpectrumKind::JuddianEntire;
            pt.multiplicity = 2;
        } else if (wron_zero) {
            pt.kind = SpectrumKind::DegenerateSingle;
        } else {
            continue;
        }
        out.set.points.push_back(pt);
    }

    std::sort(out.set.points.begin(), out.set.points.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) {
                  return a.energy < b.energy;
              });
    std::vector<SpectrumPoint> merged;
    for (const SpectrumPoint& pt : out.set.points) {
        if (!merged.empty() && std::abs(pt.energy - merged.back().energy) <= refine_tol) {
            if (merged.back().kind == SpectrumKind::Generic &&
                pt.kind != SpectrumKind::Generic)
                merged.back() = pt;
            continue;
        }
        merged.push_back(pt);
    }
    out.set.points = std::move(merged);
    return out;
}

} // namespace qrs
