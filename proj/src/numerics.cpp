#include "ousldp/numerics.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace ousldp {

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 32) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

double simpson(double fl, double fm, double fr, double h) {
    return h / 6.0 * (fl + 4.0 * fm + fr);
}

double simpson_adaptive(const std::function<double(double)>& f, double lo, double hi,
                        double fl, double fm, double fr, double whole, double tol,
                        int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fl, flm, fm, mid - lo);
    const double right = simpson(fm, frm, fr, hi - mid);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw NumericError("adaptive_simpson: depth exhausted on [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
    return simpson_adaptive(f, lo, mid, fl, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_adaptive(f, mid, hi, fm, frm, fr, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double rel_tol, double abs_tol, int max_depth, int initial_panels) {
    if (!(hi > lo)) return 0.0;
    // Coarse pass fixes the scale for the relative tolerance.
    const int m = initial_panels;
    const double h = (hi - lo) / m;
    double coarse = 0.0;
    std::vector<double> fs(static_cast<std::size_t>(2 * m + 1));
    for (int i = 0; i <= 2 * m; ++i) fs[i] = f(lo + 0.5 * h * i);
    for (int i = 0; i < m; ++i) coarse += simpson(fs[2 * i], fs[2 * i + 1], fs[2 * i + 2], h);
    const double tol_total = std::max(abs_tol, rel_tol * std::abs(coarse));
    const double tol_panel = tol_total / m;

    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = lo + i * h;
        const double whole = simpson(fs[2 * i], fs[2 * i + 1], fs[2 * i + 2], h);
        total += simpson_adaptive(f, a, a + h, fs[2 * i], fs[2 * i + 1], fs[2 * i + 2],
                                  whole, tol_panel, max_depth);
    }
    return total;
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int max_iter) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol,
              int max_iter) {
    double fl = f(lo);
    double fh = f(hi);
    if (fl == 0.0) return lo;
    if (fh == 0.0) return hi;
    if ((fl > 0.0) == (fh > 0.0))
        throw NumericError("bisect: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    for (int it = 0; it < max_iter && (hi - lo) > x_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fl > 0.0)) {
            lo = mid;
            fl = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ousldp
