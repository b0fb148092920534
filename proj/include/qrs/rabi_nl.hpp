#ifndef QRS_RABI_NL_HPP
#define QRS_RABI_NL_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrs/heun.hpp"
#include "qrs/odecore.hpp"
#include "qrs/rabi_eps.hpp"

namespace qrs {

struct SingularY : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResonantStep : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegerX : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Vec2 = std::array<cplx, 2>;
using Mat2 = std::array<std::array<cplx, 2>, 2>;

/// Nonlinear-coupling model parameters. The spectral variable is
/// x = (4g^2 + 4 omega E + omega0 U)/(4 omega^2 - U^2); the y-pipeline needs
/// 4 omega^2 > U^2 and g != 0 (the remaining cases live in the oracle).
struct Model2Params {
    double E = 0.0;
    double omega = 1.0;
    double omega0 = 0.0;
    double g = 0.1;
    double U = 0.0;

    double x() const {
        return (4.0 * g * g + 4.0 * omega * E + omega0 * U) /
               (4.0 * omega * omega - U * U);
    }
    double kappa() const { return std::sqrt(4.0 * omega * omega - U * U) / (2.0 * g); }
};

/// Energy at which x equals the given value (inverse of Model2Params::x).
double energy_at_x(double x, double omega, double omega0, double g, double U);

/// Coefficient matrix of the first-order system d psi / dy = A(y) psi.
Mat2 coeff_matrix_A(const Model2Params& p, cplx y);

/// A(y) = C + P/(y-1) + M/(y+1); P and M are the residue matrices with
/// eigenvalues {0, x} at the regular singular points y = +1 and y = -1.
struct PartialFractionsA {
    Mat2 C, P, M;
};
PartialFractionsA partial_fractions_A(const Model2Params& p);

enum class FrobeniusBranch { ZeroExponent, ExponentX, LogDerivative };

/// F(rho, y) = (y - s)^rho sum_n a_n (y - s)^n with 2-vector coefficients.
/// For LogDerivative the stored object is dF/drho at rho = 0: the solution is
/// sum_n dcoeffs_n t^n + ln(t) sum_n coeffs_n t^n, whose ln-free prefactor
/// series coeffs carries the common factor J_m.
struct VectorSeries {
    int point_s = 1;  // expansion point y = s, s in {-1, +1}
    double exponent = 0.0;
    std::vector<Vec2> coeffs;
    double radius = 2.0;  // distance to the other singular point
    bool has_log = false;
    std::vector<Vec2> dcoeffs;
};

/// Frobenius series of the requested branch at y = s. ZeroExponent throws
/// ResonantStep when x is a positive integer (the step matrix degenerates);
/// ExponentX builds the higher-exponent solution; LogDerivative applies the
/// rho-derivative construction at integer x = m.
VectorSeries vector_frobenius(const Model2Params& p, int s, FrobeniusBranch branch,
                              int n_terms = 250);

/// Value and y-derivative of the series solution inside the guard-banded disk.
std::pair<Vec2, Vec2> vector_eval(const VectorSeries& f, cplx y);

/// Spectral condition det[psi(y), sigma_z psi(-y)] with psi the zero-exponent
/// solution based at s = +1. Throws IntegerX for x within tolerance of a
/// positive integer (route to integer_x_condition).
double wronskian_model2(const Model2Params& p, double y = 0.0);

struct IntegerXResult {
    int m = 0;
    double wronskian = 0.0;        // det of the higher-exponent pair at y = 0
    double wronskian_scale = 1.0;  // |psi(0)|^2
    double judd_factor = 0.0;      // projection of the resonant coefficient
    double judd_scale = 1.0;       // largest jet coefficient entering it
};

/// Both spectral conditions at integer x = m: the Wronskian of the
/// higher-exponent solutions (entire solution despite a possible logarithm)
/// and the extracted common factor J_m (Juddian, log-free) from the
/// LogDerivative construction.
IntegerXResult integer_x_condition(const Model2Params& p);

struct JuddCurvePoint {
    double omega0 = 0.0;
    double g = 0.0;
    std::string branch;  // "parabola" or "contour"
};

/// Juddian curves of index m in the (omega0, g) plane at fixed omega, U:
/// the explicit parabola omega0 = 4 g^2 U/(4 omega^2 - U^2) - U m plus
/// sign-change contour points of the remaining factor of J_m on the grid.
std::vector<JuddCurvePoint> judd_curves(int m, double omega, double U, double omega0_lo,
                                        double omega0_hi, double g_lo, double g_hi,
                                        int n_omega0 = 61, int n_g = 61);

struct Model2SpectrumResult {
    SpectrumSet set;       // x_value = x(E), energy = E
    double sigma = 0.0;    // asymptotic scale 2g/sqrt(4 omega^2 - U^2)
    BargmannVerdict verdict = BargmannVerdict::Admissible;
};

/// Spectrum over E: generic Wronskian zeros away from the integer-x energies,
/// plus the integer-x candidates classified through integer_x_condition.
Model2SpectrumResult spectrum_model2(const Model2Params& base, double e_lo, double e_hi,
                                     double scan_step = 0.005, double refine_tol = 1e-10);

} // namespace qrs

#endif
