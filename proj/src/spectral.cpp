#include "qrs/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qrs {

ScanResult scan_zeros(const std::function<double(double)>& f, double lo, double hi,
                      const ScanConfig& cfg) {
    if (!(cfg.step > 0.0)) throw std::invalid_argument("scan_zeros: step must be positive");
    ScanResult result;
    int evaluated = 0;

    double x_prev = lo;
    double f_prev = f(lo);
    if (std::isfinite(f_prev)) ++evaluated;
    for (double x = lo + cfg.step; x_prev < hi; x += cfg.step) {
        if (x > hi) x = hi;
        double fx = f(x);
        if (std::isfinite(fx)) ++evaluated;
        if (std::isfinite(f_prev) && std::isfinite(fx) && f_prev * fx < 0.0) {
            double a = x_prev, b = x, fa = f_prev, fb = fx;
            std::vector<double> mags{std::abs(fa), std::abs(fb)};
            while (b - a > cfg.refine_tol) {
                double m = 0.5 * (a + b);
                double fm = f(m);
                if (!std::isfinite(fm)) break;
                mags.push_back(std::abs(fm));
                if (fa * fm <= 0.0) {
                    b = m;
                    fb = fm;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            // secant polish, kept inside the final bracket
            double root = 0.5 * (a + b);
            if (fb != fa) {
                double sec = b - fb * (b - a) / (fb - fa);
                if (sec > a && sec < b) root = sec;
            }
            double fr = f(root);
            double res = std::isfinite(fr) ? std::abs(fr) : std::numeric_limits<double>::infinity();
            bool accept = true;
            if (cfg.pole_filter) {
                std::vector<double> sorted = mags;
                std::sort(sorted.begin(), sorted.end());
                double median = sorted[sorted.size() / 2];
                accept = res < median;
            }
            if (accept)
                result.roots.push_back({x_prev, x, f_prev, fx, root, res});
            else
                result.pole_skipped.push_back(root);
        }
        if (x >= hi) break;
        x_prev = x;
        f_prev = fx;
    }
    if (evaluated == 0) throw NoEvaluations("no finite evaluations on the scan interval");
    return result;
}

SweepResult sweep(const std::function<std::function<double(double)>(double)>& family,
                  const std::vector<double>& parameter_grid, double lo, double hi,
                  const ScanConfig& cfg) {
    if (parameter_grid.empty()) throw std::invalid_argument("sweep: empty parameter grid");
    std::vector<double> grid = parameter_grid;
    std::sort(grid.begin(), grid.end());
    SweepResult out;
    for (double p : grid) {
        try {
            ScanResult sr = scan_zeros(family(p), lo, hi, cfg);
            for (const ZeroBracket& zb : sr.roots) out.rows.push_back({p, zb.refined_root, "root"});
        } catch (const std::exception& e) {
            out.failures.push_back({p, e.what()});
        }
    }
    return out;
}

} // namespace qrs
