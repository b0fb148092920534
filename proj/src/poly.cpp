#include "qrs/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrs {

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

cplx Poly::eval(cplx z) const {
    cplx v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * z + *it;
    return v;
}

double Poly::eval(double x) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<double> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly{};
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Poly(std::move(r));
}

Poly Poly::operator*(double s) const {
    std::vector<double> r = c_;
    for (double& v : r) v *= s;
    return Poly(std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero()) throw std::invalid_argument("Poly::divmod: division by zero polynomial");
    std::vector<double> rem = c_;
    int dq = degree() - d.degree();
    if (dq < 0) return {Poly{}, *this};
    std::vector<double> quo(static_cast<size_t>(dq) + 1, 0.0);
    for (int k = dq; k >= 0; --k) {
        double f = rem[static_cast<size_t>(k + d.degree())] / d.lead();
        quo[static_cast<size_t>(k)] = f;
        for (int j = 0; j <= d.degree(); ++j)
            rem[static_cast<size_t>(k + j)] -= f * d[j];
    }
    return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly Poly::deflate(double r) const {
    if (c_.size() <= 1) return Poly{};
    std::vector<double> q(c_.size() - 1, 0.0);
    double carry = c_.back();
    for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) {
        q[static_cast<size_t>(k)] = carry;
        carry = c_[static_cast<size_t>(k)] + carry * r;
    }
    return Poly(std::move(q));
}

std::vector<cplx> Poly::roots() const {
    int n = degree();
    if (n <= 0) return {};
    std::vector<cplx> m(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) m[static_cast<size_t>(k)] = c_[static_cast<size_t>(k)] / lead();
    std::vector<cplx> r(static_cast<size_t>(n));
    // seed on a circle of radius ~ coefficient bound, off the real axis
    double rad = 0.0;
    for (int k = 0; k < n; ++k) rad = std::max(rad, std::abs(m[static_cast<size_t>(k)]));
    rad = 1.0 + rad;
    for (int k = 0; k < n; ++k)
        r[static_cast<size_t>(k)] = rad * std::polar(1.0, 0.4 + 2.0 * M_PI * k / n);
    auto evalm = [&](cplx z) {
        cplx v = 0.0;
        for (int k = n; k >= 0; --k) v = v * z + m[static_cast<size_t>(k)];
        return v;
    };
    for (int it = 0; it < 500; ++it) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx d = 1.0;
            for (int j = 0; j < n; ++j)
                if (j != i) d *= r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)];
            cplx step = evalm(r[static_cast<size_t>(i)]) / d;
            r[static_cast<size_t>(i)] -= step;
            shift = std::max(shift, std::abs(step));
        }
        if (shift < 1e-14 * rad) break;
    }
    // snap nearly-real roots
    for (auto& z : r)
        if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z.real()))) z = cplx(z.real(), 0.0);
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return r;
}

int Poly::root_multiplicity(cplx r, double tol) const {
    int mult = 0;
    Poly p = *this;
    double scale = 0.0;
    for (double v : c_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    while (!p.is_zero() && std::abs(p.eval(r)) < tol * scale * (1.0 + std::pow(std::abs(r), p.degree()))) {
        ++mult;
        p = p.derivative();
    }
    return mult;
}

Poly poly_gcd(Poly a, Poly b, double tol) {
    auto norm = [](const Poly& p) {
        double s = 0.0;
        for (double v : p.coeffs()) s = std::max(s, std::abs(v));
        return s;
    };
    double scale = std::max(norm(a), norm(b));
    if (scale == 0.0) return Poly{};
    while (!b.is_zero() && norm(b) > tol * scale) {
        Poly r = a.divmod(b).second;
        // truncate tiny trailing coefficients so degrees keep dropping
        std::vector<double> rc = r.coeffs();
        while (!rc.empty() && std::abs(rc.back()) < tol * scale) rc.pop_back();
        a = b;
        b = Poly(std::move(rc));
    }
    if (a.is_zero()) return Poly{1.0};
    return a * (1.0 / a.lead());
}

} // namespace qrs
