#include "baq/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "baq/quadrature.hpp"

namespace baq {

CdfCurve make_cdf_curve(const Distribution& d) {
    auto [lo, hi] = d.effective_support(1e-13);
    return CdfCurve{[d](double x) { return d.cdf(x); }, lo, hi};
}

CdfCurve make_cdf_curve(const FoldedDistribution& fd) {
    const double lam = fd.params().half_range;
    auto value = [fd, lam](double x) {
        if (x < -lam) return 0.0;
        if (x >= lam) return 1.0;
        return fd.cdf(x);
    };
    return CdfCurve{value, -lam, lam};
}

double w1_numeric(const CdfCurve& f, const CdfCurve& g, double abs_tol) {
    const double lo = std::min(f.lo, g.lo);
    const double hi = std::max(f.hi, g.hi);
    if (!(lo < hi)) throw std::domain_error("w1_numeric: empty union support");
    auto integrand = [&](double x) {
        const double fx = x <= f.lo ? 0.0 : (x >= f.hi ? 1.0 : f.value(x));
        const double gx = x <= g.lo ? 0.0 : (x >= g.hi ? 1.0 : g.value(x));
        return std::abs(fx - gx);
    };
    // a moderate initial mesh keeps the |.| kinks from defeating the
    // error estimate on the first few levels
    std::vector<double> mesh;
    const int segments = 32;
    for (int i = 0; i <= segments; ++i)
        mesh.push_back(lo + (hi - lo) * i / segments);
    return integrate_segmented(integrand, mesh, abs_tol);
}

double w2_numeric(const std::function<double(double)>& quantile_x,
                  const std::function<double(double)>& quantile_y,
                  double abs_tol) {
    auto integrand = [&](double u) {
        const double d = quantile_x(u) - quantile_y(u);
        return d * d;
    };
    // graded mesh toward both (integrable) endpoint singularities
    std::vector<double> mesh = {1e-13, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
    const std::size_t head = mesh.size();
    for (int i = 1; i <= 9; ++i) mesh.push_back(0.1 * i);
    for (std::size_t i = head; i-- > 0;) mesh.push_back(1.0 - mesh[i]);
    const double sq = integrate_segmented(integrand, mesh, abs_tol, 52);
    return std::sqrt(std::max(sq, 0.0));
}

double w2_numeric(const Distribution& x, const Distribution& y) {
    return w2_numeric([x](double u) { return x.quantile(u); },
                      [y](double u) { return y.quantile(u); });
}

double w2_gaussian(double mu1, double sigma1, double mu2, double sigma2) {
    if (!(sigma1 > 0) || !(sigma2 > 0))
        throw std::domain_error("w2_gaussian: stddevs must be positive");
    return std::hypot(mu2 - mu1, sigma2 - sigma1);
}

double w2_exponential(double rate1, double rate2) {
    if (!(rate1 > 0) || !(rate2 > 0))
        throw std::domain_error("w2_exponential: rates must be positive");
    return std::sqrt(2.0) * std::abs(1.0 / rate1 - 1.0 / rate2);
}

double w2_uniform_exponential(double upper, double rate) {
    if (!(upper > 0) || !(rate > 0))
        throw std::domain_error("w2_uniform_exponential: parameters must be positive");
    const double radicand =
        2.0 / (rate * rate) - 1.5 * upper / rate + upper * upper / 3.0;
    // a squared L2 norm; tiny negative values are rounding only
    return std::sqrt(std::max(radicand, 0.0));
}

double w1_folded_to_uniform(const Distribution& base, const FoldParams& p,
                            double abs_tol) {
    const double lam = p.half_range;
    FoldedDistribution fd(base, p);
    auto integrand = [&](double theta) {
        const double u = (theta + lam) / (2.0 * lam);
        const double t = std::min(theta, std::nextafter(lam, 0.0));
        return std::abs(fd.cdf(t) - u);
    };
    std::vector<double> mesh;
    const int segments = 16;
    for (int i = 0; i <= segments; ++i)
        mesh.push_back(-lam + 2.0 * lam * i / segments);
    return integrate_segmented(integrand, mesh, abs_tol);
}

}  // namespace baq
