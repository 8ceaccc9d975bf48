#include "baq/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "baq/errors.hpp"

namespace baq {
namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || (b - a) < 1e-300)
        return left + right + err / 15.0;
    if (depth <= 0)
        throw QuadratureError("adaptive quadrature: depth limit before tolerance met");
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    if (!(a <= b)) throw std::invalid_argument("integrate: a > b");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return adapt(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints,
                           double abs_tol, int max_depth) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("integrate_segmented: need at least two breakpoints");
    double total = 0.0;
    const double per_segment = abs_tol / static_cast<double>(breakpoints.size() - 1);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        total += integrate(f, breakpoints[i], breakpoints[i + 1], per_segment, max_depth);
    return total;
}

}  // namespace baq
