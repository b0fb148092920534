#ifndef QRS_SPECTRAL_HPP
#define QRS_SPECTRAL_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrs {

struct NoEvaluations : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroBracket {
    double lo = 0.0, hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
    double refined_root = 0.0;
    double residual = 0.0;
};

struct ScanConfig {
    double step = 0.005;
    double refine_tol = 1e-10;
    bool pole_filter = true;
};

struct ScanResult {
    std::vector<ZeroBracket> roots;
    std::vector<double> pole_skipped;  // refined locations rejected by the pole filter
};

/// Sign-change scan on a uniform grid, bisection refinement to width
/// <= refine_tol, then a bounded secant polish. NaN values mark exclusion
/// zones and are skipped. With the pole filter on, a bracket whose refined
/// |f| exceeds the median |f| seen while refining it is reported in
/// pole_skipped instead of roots.
ScanResult scan_zeros(const std::function<double(double)>& f, double lo, double hi,
                      const ScanConfig& cfg);

struct SweepRow {
    double parameter = 0.0;
    double root = 0.0;
    std::string kind = "root";
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::pair<double, std::string>> failures;  // (parameter, message)
};

/// Per-parameter zero scan over a family of condition functions; rows are
/// ordered parameter-ascending then root-ascending. Failed grid points are
/// tolerated and reported.
SweepResult sweep(const std::function<std::function<double(double)>(double)>& family,
                  const std::vector<double>& parameter_grid, double lo, double hi,
                  const ScanConfig& cfg);

} // namespace qrs

#endif
