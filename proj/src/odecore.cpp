#include "qrs/odecore.hpp"

#include <algorithm>
#include <cmath>

namespace qrs {

namespace {

void reduce_pair(Poly& num, Poly& den, double tol) {
    if (num.is_zero()) {
        den = Poly{1.0};
        return;
    }
    Poly g = poly_gcd(num, den, tol);
    if (g.degree() > 0) {
        num = num.divmod(g).first;
        den = den.divmod(g).first;
    }
}

/// Multiplicity of s as a (numerically clustered) root of p.
int mult_at(const Poly& p, cplx s, double tol) {
    if (p.is_zero()) return 0;
    int m = 0;
    for (cplx r : p.roots())
        if (std::abs(r - s) < tol) ++m;
    return m;
}

} // namespace

RationalODE::RationalODE(Poly p_num, Poly p_den, Poly q_num, Poly q_den, double tol)
    : p_num_(std::move(p_num)),
      p_den_(std::move(p_den)),
      q_num_(std::move(q_num)),
      q_den_(std::move(q_den)),
      tol_(tol) {
    if (p_den_.is_zero() || q_den_.is_zero())
        throw std::invalid_argument("RationalODE: zero denominator polynomial");
    reduce_pair(p_num_, p_den_, tol_);
    reduce_pair(q_num_, q_den_, tol_);
}

std::vector<SingularPointInfo> classify_singularities(const RationalODE& ode,
                                                      bool require_regular) {
    const double tol = 1e-8;  // root clustering tolerance
    std::vector<cplx> points;
    auto add_roots = [&](const Poly& den) {
        for (cplx r : den.roots()) {
            bool seen = false;
            for (cplx s : points)
                if (std::abs(r - s) < tol) seen = true;
            if (!seen) points.push_back(r);
        }
    };
    add_roots(ode.p_den());
    add_roots(ode.q_den());
    std::sort(points.begin(), points.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    std::vector<SingularPointInfo> out;
    for (cplx s : points) {
        int mp = mult_at(ode.p_den(), s, tol);
        int mq = mult_at(ode.q_den(), s, tol);
        if (mp == 0 && mq == 0) continue;
        SingularPointInfo info;
        info.location = s;
        info.is_regular = (mp <= 1 && mq <= 2);
        if (!info.is_regular) {
            if (require_regular)
                throw IrregularFinitePoint("finite pole of order too high at z = " +
                                           std::to_string(s.real()));
            out.push_back(info);
            continue;
        }
        // p_{-1} = lim (z-s) p(z), q_{-2} = lim (z-s)^2 q(z)
        cplx pm1 = 0.0;
        if (mp == 1) {
            Poly defl = ode.p_den();
            // deflating at a complex point only arises for complex-conjugate
            // pairs; both models have real poles, so deflate on the real part
            // when imag is negligible, else fall back to a limit estimate.
            if (std::abs(s.imag()) < tol) {
                defl = defl.deflate(s.real());
                pm1 = ode.p_num().eval(s) / defl.eval(s);
            } else {
                cplx h = 1e-7;
                pm1 = (s + h - s) * ode.p(s + h);
            }
        }
        cplx qm2 = 0.0;
        if (mq == 2) {
            if (std::abs(s.imag()) < tol) {
                Poly defl = ode.q_den().deflate(s.real()).deflate(s.real());
                qm2 = ode.q_num().eval(s) / defl.eval(s);
            } else {
                cplx h = 1e-7;
                qm2 = h * h * ode.q(s + h);
            }
        }
        // rho^2 + (p_{-1} - 1) rho + q_{-2} = 0
        cplx b = pm1 - 1.0;
        cplx disc = std::sqrt(b * b - 4.0 * qm2);
        cplx r1 = (-b + disc) / 2.0;
        cplx r2 = (-b - disc) / 2.0;
        if (r1.real() < r2.real()) std::swap(r1, r2);
        info.exponents = {r1, r2};
        cplx gap = r1 - r2;
        info.exponent_gap_integer = std::abs(gap.imag()) < ode.tol() &&
                                    std::abs(gap.real() - std::round(gap.real())) < ode.tol();
        out.push_back(info);
    }
    return out;
}

AsymptoticData irregular_infinity_data(const RationalODE& ode) {
    // expansion at infinity: p(z) = p_inf + p1/z + ..., same for q
    auto expand = [](const Poly& num, const Poly& den, double& lim, double& c1) {
        if (num.degree() > den.degree())
            throw UnsupportedRank("coefficient has no finite limit at infinity");
        if (num.is_zero()) {
            lim = 0.0;
            c1 = 0.0;
            return;
        }
        lim = (num.degree() == den.degree()) ? num.lead() / den.lead() : 0.0;
        Poly r = num - den * lim;
        c1 = (r.degree() == den.degree() - 1) ? r.lead() / den.lead() : 0.0;
    };
    double p_inf, p1, q_inf, q1;
    expand(ode.p_num(), ode.p_den(), p_inf, p1);
    expand(ode.q_num(), ode.q_den(), q_inf, q1);

    if (p_inf == 0.0 && q_inf == 0.0) {
        // either a regular point at infinity or a structure beyond rank 1
        // regularity test: p ~ 2/z + O(1/z^2) and q ~ O(1/z^3) keep infinity regular
        if (std::abs(p1 - 2.0) < ode.tol() || std::abs(p1) + std::abs(q1) < ode.tol())
            throw NotIrregular("infinity is not a rank-1 irregular point (growth order 0)");
        throw UnsupportedRank("(p_inf, q_inf) = (0, 0): not the rank-1 case");
    }

    AsymptoticData data;
    data.poincare_rank = 1;
    cplx disc = std::sqrt(cplx(p_inf * p_inf - 4.0 * q_inf, 0.0));
    for (cplx c : {(-p_inf + disc) / 2.0, (-p_inf - disc) / 2.0}) {
        cplx denom = 2.0 * c + p_inf;
        if (std::abs(denom) < ode.tol())
            throw UnsupportedRank("degenerate exponential rate: 2c + p_inf = 0");
        data.pairs.push_back({c, -(p1 * c + q1) / denom});
    }
    bool some_nonzero = std::abs(data.pairs[0].c) > ode.tol() ||
                        std::abs(data.pairs[1].c) > ode.tol();
    data.growth_order = some_nonzero ? 1.0 : 0.0;
    data.has_growth_type = true;
    data.growth_type = std::max(std::abs(data.pairs[0].c), std::abs(data.pairs[1].c));
    return data;
}

BargmannVerdict bargmann_admissibility(const AsymptoticData& a, double tol) {
    if (a.growth_order < 2.0 - tol) return BargmannVerdict::Admissible;
    if (std::abs(a.growth_order - 2.0) <= tol && a.has_growth_type) {
        if (a.growth_type < 0.5 - tol) return BargmannVerdict::Admissible;
        if (std::abs(a.growth_type - 0.5) <= tol) return BargmannVerdict::Inconclusive;
    }
    return BargmannVerdict::NotAdmissible;
}

} // namespace qrs
