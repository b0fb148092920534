#ifndef QRS_RABI_EPS_HPP
#define QRS_RABI_EPS_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qrs/heun.hpp"

namespace qrs {

struct DegenerateExponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MuZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Broken-symmetry Rabi model parameters. The spectral variable is
/// x = E + lambda^2; lambda > 0 (lambda = 0 is the displaced-oscillator
/// closed form and lives in the oracle).
struct Model1Params {
    double x = 0.0;
    double lambda = 0.5;
    double mu = 0.0;
    double eps = 0.0;

    double E() const { return x - lambda * lambda; }

    /// Map to the confluent-Heun parameter set a0 of the gauged equation.
    HeunParams heun() const;
};

enum class SpectrumKind { Generic, JuddianEntire, DegenerateSingle, DoublyDegenerate };

struct SpectrumPoint {
    double x_value = 0.0;
    double energy = 0.0;
    SpectrumKind kind = SpectrumKind::Generic;
    int multiplicity = 1;
    std::optional<int> parity;  // populated only when eps = 0
};

struct SpectrumSet {
    std::vector<SpectrumPoint> points;       // x-ascending
    std::vector<double> pole_skipped;        // rejected sign changes (diagnostic)
};

/// Generic spectral condition W(p) = w(p; y) with w = H1 H2' - H1' H2,
/// H1 the zero-exponent solution at y = 0 and H2 the one at y = 1.
/// Throws DegenerateExponent when x - eps or 1 + x + eps is a nonnegative
/// integer (route those to degenerate_case_W).
double wronskian_W(const Model1Params& p, double y = 0.5);

struct DegenerateCaseResult {
    bool entire_by_delta = false;  // some obstruction Delta_s vanished
    int case_index = 0;            // 1: one integer gap, 2: both, 3: entire-by-Delta
    int entire_count = 0;          // integer-gap points with vanishing obstruction
    double wronskian = 0.0;        // valid when !entire_by_delta
    double scale = 1.0;            // |v1||v2'| + |v1'||v2| at the evaluation point
};

/// Degenerate-exponent dispatch. Case 1 (one point with integer gap and
/// nonvanishing obstruction): Wronskian of the higher-exponent solution
/// there against the generic solution at the other point. Case 2 (both
/// integer gaps): Wronskian of the two higher-exponent solutions. Case 3
/// (some obstruction vanishes): no Wronskian is needed, the local solution
/// is already entire.
DegenerateCaseResult degenerate_case_W(const Model1Params& p, double y = 0.5);

/// Spectrum over x in [x_lo, x_hi]: refined sign changes of wronskian_W on
/// the generic set (exclusion zones of half-width 10*refine_tol around the
/// integer-gap candidates x = eps + n and x = n - 1 - eps), plus the
/// candidates themselves through degenerate_case_W. Points within
/// refine_tol are merged, degenerate kinds winning over Generic. Parity
/// labels are attached when eps = 0 and mu != 0.
SpectrumSet spectrum_model1(const Model1Params& base, double x_lo, double x_hi,
                            double scan_step = 0.005, double refine_tol = 1e-10);

struct Eigenfunction {
    std::function<cplx(double)> psi1;
    std::function<cplx(double)> psi2;
    std::optional<int> parity;  // set when eps = 0 and the ratio test is clean
};

/// Eigenfunction at a spectrum point: psi1(z) = e^{2 lambda^2 y} v(y) with
/// y = (z/lambda + 1)/2, and psi2 recovered algebraically from the first
/// system equation. Throws MuZero when mu = 0 (decoupled case).
Eigenfunction eigenfunction_model1(const Model1Params& p);

} // namespace qrs

#endif
