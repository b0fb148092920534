#ifndef QRS_POLY_HPP
#define QRS_POLY_HPP

#include <complex>
#include <vector>

namespace qrs {

using cplx = std::complex<double>;

/// Dense real-coefficient polynomial, c[k] is the coefficient of z^k.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly{}; }
    static Poly constant(double a) { return Poly{a}; }

    const std::vector<double>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double lead() const { return c_.empty() ? 0.0 : c_.back(); }
    double operator[](int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : 0.0;
    }

    cplx eval(cplx z) const;
    double eval(double x) const;
    Poly derivative() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(double s) const;

    /// Quotient and remainder of *this / d (d nonzero).
    std::pair<Poly, Poly> divmod(const Poly& d) const;

    /// Synthetic division by (z - r); remainder discarded.
    Poly deflate(double r) const;

    /// All complex roots via the Durand-Kerner iteration (low degrees only).
    std::vector<cplx> roots() const;

    /// Multiplicity of r as a root, relative to the given tolerance.
    int root_multiplicity(cplx r, double tol = 1e-8) const;

private:
    void trim();
    std::vector<double> c_;
};

/// Monic GCD via the Euclidean algorithm with a degree-truncation tolerance.
Poly poly_gcd(Poly a, Poly b, double tol = 1e-12);

} // namespace qrs

#endif
