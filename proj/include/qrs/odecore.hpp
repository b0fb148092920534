#ifndef QRS_ODECORE_HPP
#define QRS_ODECORE_HPP

#include <stdexcept>
#include <vector>

#include "qrs/poly.hpp"

namespace qrs {

struct IrregularFinitePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedRank : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotIrregular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// phi'' + p(z) phi' + q(z) phi = 0 with rational p, q.
/// Numerator/denominator pairs are reduced on construction.
class RationalODE {
public:
    RationalODE(Poly p_num, Poly p_den, Poly q_num, Poly q_den, double tol = 1e-12);

    const Poly& p_num() const { return p_num_; }
    const Poly& p_den() const { return p_den_; }
    const Poly& q_num() const { return q_num_; }
    const Poly& q_den() const { return q_den_; }
    double tol() const { return tol_; }

    cplx p(cplx z) const { return p_num_.eval(z) / p_den_.eval(z); }
    cplx q(cplx z) const { return q_num_.eval(z) / q_den_.eval(z); }

private:
    Poly p_num_, p_den_, q_num_, q_den_;
    double tol_;
};

struct SingularPointInfo {
    cplx location;
    bool is_regular = false;
    std::pair<cplx, cplx> exponents;  // (rho, sigma), valid only when regular
    bool exponent_gap_integer = false;
};

struct AsymptoticPair {
    cplx c;    // exponential rate of e^{c z}
    cplx rho;  // power exponent of z^rho
};

struct AsymptoticData {
    std::vector<AsymptoticPair> pairs;
    int poincare_rank = 0;
    double growth_order = 0.0;
    bool has_growth_type = false;
    double growth_type = 0.0;
};

enum class BargmannVerdict { Admissible, Inconclusive, NotAdmissible };

/// One entry per distinct finite pole of p or q. A point is regular iff the
/// pole of p has order <= 1 and the pole of q has order <= 2; exponents come
/// from rho(rho-1) + p_{-1} rho + q_{-2} = 0. With require_regular set, an
/// irregular finite pole raises IrregularFinitePoint instead of being reported.
std::vector<SingularPointInfo> classify_singularities(const RationalODE& ode,
                                                      bool require_regular = false);

/// Leading asymptotic data at the rank-1 irregular point at infinity:
/// c solves c^2 + p_inf c + q_inf = 0 and rho = -(p1 c + q1)/(2c + p_inf).
AsymptoticData irregular_infinity_data(const RationalODE& ode);

BargmannVerdict bargmann_admissibility(const AsymptoticData& a, double tol = 1e-12);

} // namespace qrs

#endif
