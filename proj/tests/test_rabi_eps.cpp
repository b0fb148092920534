#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrs/fockoracle.hpp"
#include "qrs/rabi_eps.hpp"

using namespace qrs;

namespace {

Model1Params make(double lambda, double mu, double eps, double x = 0.0) {
    Model1Params p;
    p.lambda = lambda;
    p.mu = mu;
    p.eps = eps;
    p.x = x;
    return p;
}

} // namespace

TEST_CASE("integer exponent gaps are routed away from the generic Wronskian") {
    CHECK_THROWS_AS(wronskian_W(make(0.5, 0.4, 0.2, 1.2)), DegenerateExponent);  // x-eps=1
    CHECK_THROWS_AS(wronskian_W(make(0.5, 0.4, 0.2, 1.8)), DegenerateExponent);  // 1+x+eps=3
    CHECK_NOTHROW(wronskian_W(make(0.5, 0.4, 0.2, 1.5)));
}

TEST_CASE("degenerate case dispatch follows the integer-gap pattern") {
    // eps = 0.2, x = 1.2: only x - eps = 1 is an integer -> one-sided case
    DegenerateCaseResult r1 = degenerate_case_W(make(0.5, 0.4, 0.2, 1.2));
    CHECK_FALSE(r1.entire_by_delta);
    CHECK(r1.case_index == 1);

    // eps = 0.5, x = 1.5: both x - eps = 1 and 1 + x + eps = 3 are integers
    DegenerateCaseResult r2 = degenerate_case_W(make(0.5, 0.4, 0.5, 1.5));
    CHECK_FALSE(r2.entire_by_delta);
    CHECK(r2.case_index == 2);

    // mu = 0 with lambda^2 = 0.35: the obstruction itself vanishes
    DegenerateCaseResult r3 = degenerate_case_W(make(std::sqrt(0.35), 0.0, 0.2, 1.2));
    CHECK(r3.entire_by_delta);
    CHECK(r3.case_index == 3);

    CHECK_THROWS_AS(degenerate_case_W(make(0.5, 0.4, 0.2, 1.5)), std::invalid_argument);
}

TEST_CASE("Wronskian zero set does not depend on the evaluation point") {
    Model1Params base = make(0.4, 0.7, 0.2);
    SpectrumSet set = spectrum_model1(base, 0.0, 4.0);
    int checked = 0;
    for (const SpectrumPoint& pt : set.points) {
        if (pt.kind != SpectrumKind::Generic) continue;
        for (double y : {0.4, 0.6}) {
            Model1Params lo = base, hi = base;
            lo.x = pt.x_value - 1e-7;
            hi.x = pt.x_value + 1e-7;
            CHECK(wronskian_W(lo, y) * wronskian_W(hi, y) < 0.0);
        }
        ++checked;
    }
    CHECK(checked >= 4);
}

TEST_CASE("spectrum matches the truncated-basis oracle over a parameter grid") {
    const double x_lo = 0.0, x_hi = 6.0;
    for (double lambda : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (double mu : {0.3, 0.7, 1.0}) {
            for (double eps : {0.0, 0.2, 0.5}) {
                Model1Params base = make(lambda, mu, eps);
                // scan slightly beyond the window so boundary levels match too
                SpectrumSet set = spectrum_model1(base, x_lo - 0.05, x_hi + 0.05);
                std::vector<double> method;
                for (const SpectrumPoint& pt : set.points)
                    for (int m = 0; m < pt.multiplicity; ++m) method.push_back(pt.energy);

                RabiEpsParams op{lambda, mu, eps};
                std::vector<double> oracle = eigenvalues(build_hamiltonian(op, 120), 40);

                const double l2 = lambda * lambda;
                auto near_some = [](const std::vector<double>& v, double t) {
                    for (double u : v)
                        if (std::abs(u - t) < 1e-6) return true;
                    return false;
                };
                for (double E : method) {
                    double x = E + l2;
                    if (x < x_lo || x > x_hi) continue;
                    CAPTURE(lambda);
                    CAPTURE(mu);
                    CAPTURE(eps);
                    CAPTURE(E);
                    CHECK(near_some(oracle, E));
                }
                for (double ev : oracle) {
                    double x = ev + l2;
                    if (x < x_lo || x > x_hi) continue;
                    CAPTURE(lambda);
                    CAPTURE(mu);
                    CAPTURE(eps);
                    CAPTURE(ev);
                    CHECK(near_some(method, ev));
                }
            }
        }
    }
}

TEST_CASE("mu = 0 spectrum is the displaced-oscillator closed form") {
    Model1Params base = make(0.5, 0.0, 0.2);
    SpectrumSet set = spectrum_model1(base, 0.0, 4.0);
    std::vector<double> expected;  // x = n +- eps inside the window
    for (int n = 0; n <= 4; ++n)
        for (double s : {-0.2, 0.2}) {
            double x = n + s;
            if (x >= 0.0 && x <= 4.0) expected.push_back(x);
        }
    std::sort(expected.begin(), expected.end());
    REQUIRE(set.points.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(set.points[i].x_value - expected[i]) < 1e-8);
        CHECK(set.points[i].kind != SpectrumKind::Generic);
    }
}

TEST_CASE("small-coupling limit approaches n +- mu") {
    Model1Params base = make(0.01, 0.7, 0.0);
    SpectrumSet set = spectrum_model1(base, 0.0, 3.0);
    std::vector<double> expected;  // E = n +- mu in the window
    for (int n = 0; n <= 3; ++n)
        for (double s : {-0.7, 0.7}) {
            double E = n + s;
            if (E + 1e-4 >= 0.0 && E - 1e-4 <= 3.0) expected.push_back(E);
        }
    std::sort(expected.begin(), expected.end());
    REQUIRE(set.points.size() >= expected.size() - 1);
    for (const SpectrumPoint& pt : set.points) {
        double best = 1.0;
        for (double e : expected) best = std::min(best, std::abs(pt.energy - e));
        CHECK(best < 5e-3);
    }
}

TEST_CASE("double degeneracy on the symmetric Judd oval carries multiplicity 2") {
    // eps = 0, 4 lambda^2 + mu^2 = 1: entire level at x = 1
    Model1Params base = make(0.4, 0.6, 0.0);
    SpectrumSet set = spectrum_model1(base, 0.5, 1.5);
    bool found = false;
    for (const SpectrumPoint& pt : set.points) {
        if (std::abs(pt.x_value - 1.0) < 1e-9) {
            found = true;
            CHECK(pt.kind == SpectrumKind::DoublyDegenerate);
            CHECK(pt.multiplicity == 2);
        } else {
            CHECK(pt.multiplicity == 1);
        }
    }
    CHECK(found);

    // oracle confirmation: two eigenvalues at E = 1 - lambda^2
    std::vector<double> evs = eigenvalues(build_hamiltonian(RabiEpsParams{0.4, 0.6, 0.0}, 120), 16);
    int close = 0;
    for (double ev : evs)
        if (std::abs(ev - 0.84) < 1e-6) ++close;
    CHECK(close == 2);
}

TEST_CASE("eigenfunction satisfies both system equations") {
    Model1Params base = make(0.7, 0.4, 0.0);
    SpectrumSet set = spectrum_model1(base, 0.0, 3.0);
    REQUIRE(!set.points.empty());
    Model1Params p = base;
    p.x = set.points[1].x_value;
    Eigenfunction ef = eigenfunction_model1(p);
    const double lam = p.lambda, mu = p.mu, eps = p.eps, E = p.E();
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
        double z = -0.5 * lam + lam * i / 19.0;
        // five-point stencils for the derivatives
        auto d5 = [&](const std::function<cplx(double)>& f, double zz) {
            return (-f(zz + 2 * h) + 8.0 * f(zz + h) - 8.0 * f(zz - h) + f(zz - 2 * h)) /
                   (12.0 * h);
        };
        cplx p1 = ef.psi1(z), p2 = ef.psi2(z);
        cplx dp1 = d5(ef.psi1, z), dp2 = d5(ef.psi2, z);
        cplx r1 = (z + lam) * dp1 - (E - eps - lam * z) * p1 + mu * p2;
        cplx r2 = (z - lam) * dp2 - (E + eps + lam * z) * p2 + mu * p1;
        double scale = std::abs(p1) + std::abs(p2) + std::abs(dp1) + std::abs(dp2);
        CHECK(std::abs(r1) / scale < 1e-8);
        CHECK(std::abs(r2) / scale < 1e-8);
    }
}

TEST_CASE("parity involution applied twice is the identity") {
    Model1Params base = make(0.7, 0.4, 0.0);
    SpectrumSet set = spectrum_model1(base, 0.0, 2.0);
    REQUIRE(!set.points.empty());
    Model1Params p = base;
    p.x = set.points[0].x_value;
    Eigenfunction ef = eigenfunction_model1(p);
    for (double z : {0.1, 0.25, -0.2}) {
        // tau: (psi1, psi2)(z) -> (psi2(-z), psi1(-z)); tau^2 = id
        cplx a = ef.psi1(z), b = ef.psi2(z);
        cplx ta = ef.psi2(-z), tb = ef.psi1(-z);
        cplx tta = ef.psi1(-(-z)), ttb = ef.psi2(-(-z));
        CHECK(std::abs(tta - a) < 1e-12 * (1.0 + std::abs(a)));
        CHECK(std::abs(ttb - b) < 1e-12 * (1.0 + std::abs(b)));
        (void)ta;
        (void)tb;
    }
    REQUIRE(ef.parity.has_value());
    CHECK((*ef.parity == 1 || *ef.parity == -1));
}

TEST_CASE("parity labels are populated at eps = 0 and consistent") {
    Model1Params base = make(0.7, 0.4, 0.0);
    SpectrumSet set = spectrum_model1(base, 0.0, 3.0);
    int labeled = 0;
    for (const SpectrumPoint& pt : set.points)
        if (pt.parity) {
            ++labeled;
            CHECK((*pt.parity == 1 || *pt.parity == -1));
        }
    CHECK(labeled >= 3);
}

TEST_CASE("parity is constant along a continuously tracked level") {
    // follow the lowest level in the scan window as lambda varies
    int ref = 0;
    for (double lambda : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        SpectrumSet set = spectrum_model1(make(lambda, 0.4, 0.0), 0.0, 1.0);
        REQUIRE(!set.points.empty());
        REQUIRE(set.points[0].parity.has_value());
        if (ref == 0)
            ref = *set.points[0].parity;
        else
            CHECK(*set.points[0].parity == ref);
    }
}

TEST_CASE("mu = 0 eigenfunction reconstruction is rejected") {
    CHECK_THROWS_AS(eigenfunction_model1(make(0.5, 0.0, 0.2, 1.2)), MuZero);
}
