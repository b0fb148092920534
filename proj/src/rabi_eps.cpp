#include "qrs/rabi_eps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrs/spectral.hpp"

namespace qrs {

namespace {

constexpr double kIntTol = 1e-8;        // integer-gap detection
constexpr double kDeltaTol = 1e-9;      // normalized obstruction vanishing
constexpr double kDegWTol = 1e-8;       // normalized degenerate Wronskian zero

bool is_nonneg_int(double v, double tol = kIntTol) {
    double r = std::round(v);
    return r > -0.5 && std::abs(v - r) < tol;
}

struct EvalPair {
    cplx v, dv;
};

EvalPair eval(const LocalSeries& s, double y) {
    auto [v, dv] = heun_eval(s, y);
    return {v, dv};
}

/// a b' - a' b together with the magnitude scale of the two products.
std::pair<double, double> signed_wronskian(const LocalSeries& a, const LocalSeries& b,
                                           double y) {
    EvalPair ea = eval(a, y), eb = eval(b, y);
    cplx w = ea.v * eb.dv - ea.dv * eb.v;
    double scale = std::abs(ea.v) * std::abs(eb.dv) + std::abs(ea.dv) * std::abs(eb.v);
    return {w.real(), scale};
}

} // namespace

HeunParams Model1Params::heun() const {
    const double l2 = lambda * lambda;
    HeunParams h;
    h.alpha = 4.0 * l2;
    h.beta = -x + eps;
    h.gamma = -1.0 - x - eps;
    h.delta = 2.0 * (1.0 - 2.0 * eps) * l2;
    h.eta = 0.5 * (1.0 - 2.0 * mu * mu + (1.0 + x) * (x - 4.0 * l2) +
                   eps * (1.0 + 4.0 * l2) - eps * eps);
    return h;
}

double wronskian_W(const Model1Params& p, double y) {
    if (is_nonneg_int(p.x - p.eps) || is_nonneg_int(1.0 + p.x + p.eps))
        throw DegenerateExponent("integer exponent gap: use degenerate_case_W");
    HeunParams h = p.heun();
    LocalSeries H1 = heun_series(h, 0, HeunBranch::ZeroExponent);
    LocalSeries H2 = heun_series(h, 1, HeunBranch::ZeroExponent);
    return signed_wronskian(H1, H2, y).first;
}

DegenerateCaseResult degenerate_case_W(const Model1Params& p, double y) {
    const double gap0 = p.x - p.eps;
    const double gap1 = 1.0 + p.x + p.eps;
    const bool int0 = is_nonneg_int(gap0);
    const bool int1 = is_nonneg_int(gap1);
    if (!int0 && !int1)
        throw std::invalid_argument("degenerate_case_W: no integer exponent gap");
    HeunParams h = p.heun();

    // A coincident exponent pair (gap 0) always carries the logarithm, so only
    // positive gaps can have a vanishing obstruction.
    auto delta_vanishes = [&](int center, double gap) {
        int n = static_cast<int>(std::round(gap));
        if (n == 0) return false;
        auto [o, scale] = log_obstruction_scaled(h, center, n);
        return std::abs(o) <= kDeltaTol * std::max(scale, 1.0);
    };
    int entire_count = (int0 && delta_vanishes(0, gap0) ? 1 : 0) +
                       (int1 && delta_vanishes(1, gap1) ? 1 : 0);
    if (entire_count > 0) {
        DegenerateCaseResult r;
        r.entire_by_delta = true;
        r.case_index = 3;
        r.entire_count = entire_count;
        return r;
    }

    LocalSeries v0 = heun_series(h, 0, int0 ? HeunBranch::LargeExponent
                                            : HeunBranch::ZeroExponent);
    LocalSeries v1 = heun_series(h, 1, int1 ? HeunBranch::LargeExponent
                                            : HeunBranch::ZeroExponent);
    DegenerateCaseResult r;
    r.case_index = (int0 && int1) ? 2 : 1;
    auto [w, scale] = signed_wronskian(v0, v1, y);
    r.wronskian = w;
    r.scale = scale;
    return r;
}

SpectrumSet spectrum_model1(const Model1Params& base, double x_lo, double x_hi,
                            double scan_step, double refine_tol) {
    if (!(x_hi > x_lo)) throw std::invalid_argument("spectrum_model1: empty x range");
    if (!(scan_step > 0.0) || !(refine_tol > 0.0))
        throw std::invalid_argument("spectrum_model1: step and tolerance must be positive");

    // Integer-gap candidates x = eps + n and x = n - 1 - eps; a margin catches
    // exclusion zones straddling the range ends.
    std::vector<double> candidates;
    const double margin = 5.0 * scan_step;
    for (int n = 0;; ++n) {
        double c = base.eps + n;
        if (c > x_hi + margin) break;
        if (c >= x_lo - margin) candidates.push_back(c);
    }
    for (int n = 0;; ++n) {
        double c = n - 1.0 - base.eps;
        if (c > x_hi + margin) break;
        if (c >= x_lo - margin) candidates.push_back(c);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                     candidates.end());

    const double excl = 10.0 * refine_tol;
    auto condition = [&](double x) -> double {
        for (double c : candidates)
            if (std::abs(x - c) < excl) return std::numeric_limits<double>::quiet_NaN();
        Model1Params p = base;
        p.x = x;
        try {
            return wronskian_W(p);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    SpectrumSet out;
    ScanConfig cfg;
    cfg.step = scan_step;
    cfg.refine_tol = refine_tol;
    cfg.pole_filter = true;
    try {
        ScanResult sr = scan_zeros(condition, x_lo, x_hi, cfg);
        for (const ZeroBracket& zb : sr.roots) {
            SpectrumPoint pt;
            pt.x_value = zb.refined_root;
            pt.energy = zb.refined_root - base.lambda * base.lambda;
            pt.kind = SpectrumKind::Generic;
            out.points.push_back(pt);
        }
        out.pole_skipped = sr.pole_skipped;
    } catch (const NoEvaluations&) {
        // the whole range sat inside exclusion zones; candidates still apply
    }

    // W has a simple pole at each integer-gap candidate c, so a root in the
    // same scan cell leaves no net sign change there (pole and root flip the
    // sign twice) and the global scan misses it. Probe each side of c on a
    // geometric grid: one side of the pole holds no further singularity, so
    // sign changes of W itself are genuine and arbitrarily close roots are
    // resolved down to the exponent-gap guard.
    auto wval = [&](double x) {
        Model1Params p = base;
        p.x = x;
        return wronskian_W(p);
    };
    auto refine_w = [&](double lo, double hi, double flo) {
        for (int it = 0; it < 80 && hi - lo > refine_tol; ++it) {
            double mid = 0.5 * (lo + hi);
            double fm;
            try {
                fm = wval(mid);
            } catch (const std::exception&) {
                break;
            }
            if (!std::isfinite(fm)) break;
            if ((flo < 0.0) != (fm < 0.0))
                hi = mid;
            else {
                lo = mid;
                flo = fm;
            }
        }
        return 0.5 * (lo + hi);
    };
    for (double c : candidates) {
        for (double s : {-1.0, 1.0}) {
            double prev_x = 0.0, prev_f = 0.0;
            bool have_prev = false;
            // the global scan is blind only inside the cell holding the pole,
            // so reaching just past one step suffices
            for (double d = 3e-8; d < 1.6 * scan_step; d *= 1.25) {
                double x = c + s * d;
                if (x < x_lo || x > x_hi) {
                    have_prev = false;
                    continue;
                }
                double f;
                try {
                    f = wval(x);
                } catch (const std::exception&) {
                    have_prev = false;
                    continue;
                }
                if (!std::isfinite(f)) {
                    have_prev = false;
                    continue;
                }
                if (have_prev && (prev_f < 0.0) != (f < 0.0)) {
                    double lo = std::min(prev_x, x), hi = std::max(prev_x, x);
                    double flo = (prev_x < x) ? prev_f : f;
                    SpectrumPoint pt;
                    pt.x_value = refine_w(lo, hi, flo);
                    pt.energy = pt.x_value - base.lambda * base.lambda;
                    pt.kind = SpectrumKind::Generic;
                    out.points.push_back(pt);
                }
                prev_x = x;
                prev_f = f;
                have_prev = true;
            }
        }
    }

    for (double c : candidates) {
        if (c < x_lo || c > x_hi) continue;
        Model1Params p = base;
        p.x = c;
        DegenerateCaseResult r;
        try {
            r = degenerate_case_W(p);
        } catch (const std::exception&) {
            continue;
        }
        SpectrumPoint pt;
        pt.x_value = c;
        pt.energy = c - base.lambda * base.lambda;
        if (r.entire_by_delta) {
            // both obstructions vanishing makes every solution entire, so the
            // level is doubly degenerate (possible only when 2 eps is integer);
            // a single vanishing obstruction gives one entire eigenstate
            pt.kind = (r.entire_count == 2) ? SpectrumKind::DoublyDegenerate
                                            : SpectrumKind::JuddianEntire;
            pt.multiplicity = (r.entire_count == 2) ? 2 : 1;
        } else if (std::abs(r.wronskian) < kDegWTol * std::max(r.scale, 1.0)) {
            // the glued higher-exponent solution is one entire eigenstate;
            // with the logarithms present the entire space stays 1-dimensional
            pt.kind = SpectrumKind::DegenerateSingle;
            pt.multiplicity = 1;
        } else {
            continue;  // integer gap but not in the spectrum
        }
        out.points.push_back(pt);
    }

    std::sort(out.points.begin(), out.points.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) {
                  return a.x_value < b.x_value;
              });
    std::vector<SpectrumPoint> merged;
    for (const SpectrumPoint& pt : out.points) {
        if (!merged.empty() && std::abs(pt.x_value - merged.back().x_value) <= refine_tol) {
            SpectrumPoint& prev = merged.back();
            if (prev.kind == SpectrumKind::Generic && pt.kind != SpectrumKind::Generic)
                prev = pt;
            else
                prev.multiplicity = std::max(prev.multiplicity, pt.multiplicity);
            continue;
        }
        merged.push_back(pt);
    }
    out.points = std::move(merged);

    if (base.eps == 0.0 && base.mu != 0.0) {
        for (SpectrumPoint& pt : out.points) {
            if (pt.multiplicity != 1) continue;
            Model1Params p = base;
            p.x = pt.x_value;
            try {
                pt.parity = eigenfunction_model1(p).parity;
            } catch (const std::exception&) {
            }
        }
    }
    return out;
}

Eigenfunction eigenfunction_model1(const Model1Params& p) {
    if (p.mu == 0.0)
        throw MuZero("mu = 0 decouples the system; handled in closed form elsewhere");
    HeunParams h = p.heun();
    const bool deg0 = is_nonneg_int(p.x - p.eps);
    LocalSeries v = heun_series(h, 0, deg0 ? HeunBranch::LargeExponent
                                           : HeunBranch::ZeroExponent);
    const double lam = p.lambda;
    const double l2 = lam * lam;
    const double E = p.E();
    const double eps = p.eps;
    const double mu = p.mu;

    auto psi1 = [v, lam, l2](double z) -> cplx {
        double y = 0.5 * (z / lam + 1.0);
        auto [val, dv] = heun_eval(v, y);
        (void)dv;
        return std::exp(2.0 * l2 * y) * val;
    };
    auto dpsi1 = [v, lam, l2](double z) -> cplx {
        double y = 0.5 * (z / lam + 1.0);
        auto [val, dv] = heun_eval(v, y);
        return std::exp(2.0 * l2 * y) * (2.0 * l2 * val + dv) / (2.0 * lam);
    };
    auto psi2 = [psi1, dpsi1, E, eps, lam, mu](double z) -> cplx {
        return ((E - eps - lam * z) * psi1(z) - (z + lam) * dpsi1(z)) / mu;
    };

    Eigenfunction out;
    out.psi1 = psi1;
    out.psi2 = psi2;
    if (eps == 0.0) {
        const double samples[] = {0.1 * lam, 0.25 * lam, -0.2 * lam};
        double sigma = 0.0;
        bool ok = true;
        for (double z : samples) {
            cplx p1 = psi1(z), p2m = psi2(-z);
            cplx p2 = psi2(z), p1m = psi1(-z);
            if (std::abs(p1) < 1e-14 || std::abs(p2) < 1e-14) {
                ok = false;
                break;
            }
            double r1 = (p2m / p1).real();
            double r2 = (p1m / p2).real();
            double s = (r1 > 0.0) ? 1.0 : -1.0;
            if (std::abs(r1 - s) > 1e-4 || std::abs(r2 - s) > 1e-4 ||
                (sigma != 0.0 && s != sigma)) {
                ok = false;
                break;
            }
            sigma = s;
        }
        if (ok && sigma != 0.0) out.parity = static_cast<int>(sigma);
    }
    return out;
}

} // namespace qrs
