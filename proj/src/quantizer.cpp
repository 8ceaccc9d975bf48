#include "baq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "baq/errors.hpp"
#include "baq/quadrature.hpp"

namespace baq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

struct PartialMoments {
    double m0 = 0;  // mass
    double m1 = 0;  // first moment
    double m2 = 0;  // second moment
};

// Integrals of {1, x, x^2} f(x) over (a, b], a and b possibly infinite.
PartialMoments partial_moments(const Distribution& d, double a, double b) {
    PartialMoments pm;
    if (!(a < b)) return pm;
    switch (d.family()) {
        case DistFamily::Normal: {
            const double mu = d.param1(), sg = d.param2();
            const double za = std::isinf(a) ? -kInf : (a - mu) / sg;
            const double zb = std::isinf(b) ? kInf : (b - mu) / sg;
            const double Fa = std::isinf(za) ? 0.0 : normal_cdf(za);
            const double Fb = std::isinf(zb) ? 1.0 : normal_cdf(zb);
            const double fa = std::isinf(za) ? 0.0 : normal_pdf(za);
            const double fb = std::isinf(zb) ? 0.0 : normal_pdf(zb);
            const double afa = std::isinf(za) ? 0.0 : za * fa;
            const double bfb = std::isinf(zb) ? 0.0 : zb * fb;
            const double mass = Fb - Fa;
            const double zmean = fa - fb;                // int z phi
            const double zsq = mass + afa - bfb;         // int z^2 phi
            pm.m0 = mass;
            pm.m1 = mu * mass + sg * zmean;
            pm.m2 = mu * mu * mass + 2.0 * mu * sg * zmean + sg * sg * zsq;
            return pm;
        }
        case DistFamily::Uniform: {
            const double lo = std::max(a, d.param1());
            const double hi = std::min(b, d.param2());
            if (!(lo < hi)) return pm;
            const double beta = 1.0 / (d.param2() - d.param1());
            pm.m0 = beta * (hi - lo);
            pm.m1 = beta * 0.5 * (hi * hi - lo * lo);
            pm.m2 = beta * (hi * hi * hi - lo * lo * lo) / 3.0;
            return pm;
        }
        case DistFamily::Exponential: {
            const double p = d.param1();
            const double lo = std::max(a, 0.0);
            if (!(lo < b)) return pm;
            auto e = [p](double x) { return std::isinf(x) ? 0.0 : std::exp(-p * x); };
            auto g1 = [p, &e](double x) {  // -d/dx antiderivative pieces
                return std::isinf(x) ? 0.0 : (x + 1.0 / p) * e(x);
            };
            auto g2 = [p, &e](double x) {
                return std::isinf(x) ? 0.0 : (x * x + 2.0 * x / p + 2.0 / (p * p)) * e(x);
            };
            pm.m0 = e(lo) - e(b);
            pm.m1 = g1(lo) - g1(b);
            pm.m2 = g2(lo) - g2(b);
            return pm;
        }
        case DistFamily::Lognormal: {
            const double mu = d.param1(), sg = d.param2();
            if (!(b > 0)) return pm;
            const double lo = std::max(a, 0.0);
            auto Z = [mu, sg](double x, double shift) {
                if (x <= 0.0) return -kInf;
                if (std::isinf(x)) return kInf;
                return (std::log(x) - mu - shift) / sg;
            };
            auto Phi = [](double z) {
                if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
                return normal_cdf(z);
            };
            pm.m0 = Phi(Z(b, 0.0)) - Phi(Z(lo, 0.0));
            pm.m1 = std::exp(mu + 0.5 * sg * sg) *
                    (Phi(Z(b, sg * sg)) - Phi(Z(lo, sg * sg)));
            pm.m2 = std::exp(2.0 * mu + 2.0 * sg * sg) *
                    (Phi(Z(b, 2.0 * sg * sg)) - Phi(Z(lo, 2.0 * sg * sg)));
            return pm;
        }
    }
    return pm;
}

double cell_distortion2(const PartialMoments& pm, double level) {
    return pm.m2 - 2.0 * level * pm.m1 + level * level * pm.m0;
}

}  // namespace

Quantizer::Quantizer(std::vector<double> boundaries, std::vector<double> levels)
    : boundaries_(std::move(boundaries)), levels_(std::move(levels)) {
    if (levels_.empty() || boundaries_.size() != levels_.size() + 1)
        throw std::domain_error("Quantizer: need N levels and N+1 boundaries");
    for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i)
        if (!(boundaries_[i] < boundaries_[i + 1]))
            throw std::domain_error("Quantizer: boundaries must be strictly increasing");
    for (std::size_t i = 0; i < levels_.size(); ++i)
        if (!(levels_[i] > boundaries_[i] && levels_[i] <= boundaries_[i + 1]))
            throw std::domain_error("Quantizer: each level must lie inside its cell");
}

Quantizer Quantizer::uniform(int n_levels, double lo, double hi) {
    if (n_levels < 1) throw std::domain_error("Quantizer::uniform: need n_levels >= 1");
    if (!(hi > lo)) throw std::domain_error("Quantizer::uniform: need hi > lo");
    const double step = (hi - lo) / n_levels;
    std::vector<double> bounds(n_levels + 1);
    std::vector<double> levels(n_levels);
    for (int i = 0; i <= n_levels; ++i) bounds[i] = lo + i * step;
    bounds[n_levels] = hi;  // avoid accumulated rounding at the top edge
    for (int i = 0; i < n_levels; ++i) levels[i] = lo + (i + 0.5) * step;
    return Quantizer(std::move(bounds), std::move(levels));
}

double Quantizer::quantize(double x) const {
    if (std::isnan(x)) throw std::domain_error("Quantizer::quantize: NaN input");
    if (x <= boundaries_.front()) return levels_.front();
    if (x > boundaries_.back()) return levels_.back();
    // first boundary >= x; x lands in the cell below it
    const auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), x);
    const auto cell = static_cast<std::size_t>(it - boundaries_.begin());
    return levels_[cell - 1];
}

double nmse(std::span<const double> signal, const Quantizer& q) {
    if (signal.empty()) throw std::domain_error("nmse: empty signal");
    double err = 0.0, energy = 0.0;
    for (double x : signal) {
        const double e = x - q.quantize(x);
        err += e * e;
        energy += x * x;
    }
    if (energy <= 0.0) throw std::domain_error("nmse: zero-energy signal");
    return err / energy;
}

double expected_distortion(const Quantizer& q, const Distribution& d, int r) {
    if (r < 1) throw std::domain_error("expected_distortion: r must be >= 1");
    auto [slo, shi] = d.effective_support(1e-15);
    const auto& c = q.boundaries();
    const auto& b = q.levels();
    double total = 0.0;
    auto segment = [&](double a0, double b0, double level) {
        const double lo = std::max(a0, slo);
        const double hi = std::min(b0, shi);
        if (!(lo < hi)) return;
        auto f = [&](double u) { return std::pow(std::abs(u - level), r) * d.pdf(u); };
        total += integrate(f, lo, hi, 1e-13 * std::max(1.0, hi - lo));
    };
    segment(-kInf, c.front(), b.front());  // lower saturation tail
    for (int i = 0; i < q.n_levels(); ++i) segment(c[i], c[i + 1], b[i]);
    segment(c.back(), kInf, b.back());     // upper saturation tail
    return total;
}

double mismatch_bound(double e_y, double w, int r) {
    if (e_y < 0 || w < 0) throw std::domain_error("mismatch_bound: inputs must be nonnegative");
    if (r < 1) throw std::domain_error("mismatch_bound: r must be >= 1");
    return std::pow(std::pow(e_y, 1.0 / r) + w, r);
}

double gaussian_uniform_bound(double sigma, int n_levels) {
    if (!(sigma > 0)) throw std::domain_error("gaussian_uniform_bound: sigma must be positive");
    if (n_levels < 1) throw std::domain_error("gaussian_uniform_bound: need n_levels >= 1");
    const double w2sq = sigma * sigma + 1.0 / 12.0 - sigma / std::sqrt(M_PI);
    if (w2sq < 0)
        throw std::domain_error("gaussian_uniform_bound: negative radicand");
    const double n = n_levels;
    return w2sq + 1.0 / (12.0 * n * n) + 2.0 * std::sqrt(w2sq) / (n * std::sqrt(12.0));
}

double compander(double x, const Distribution& source, const Distribution& target) {
    double u = source.cdf(x);
    // the support interior maps to (0,1); nudge exact endpoints inward
    u = std::clamp(u, std::numeric_limits<double>::min(),
                   1.0 - std::numeric_limits<double>::epsilon() / 2);
    return target.quantile(u);
}

LloydMaxResult lloyd_max(const Distribution& d, int n_levels, double lo, double hi,
                         double tol, int max_iter) {
    if (n_levels < 1) throw std::domain_error("lloyd_max: need n_levels >= 1");
    if (!(hi > lo)) throw std::domain_error("lloyd_max: need hi > lo");
    if (!std::isfinite(d.stddev()))
        throw std::domain_error("lloyd_max: distribution needs a finite second moment");

    // High-rate companding initialization: boundaries at equal quantiles
    // of the normalized f^{1/3} density (the asymptotically optimal point
    // density). Starting near the optimum matters — from a uniform start
    // the iteration redistributes mass diffusively and needs O(N^2)
    // passes to converge at large N.
    std::vector<double> bounds(n_levels + 1);
    std::vector<double> levels(n_levels);
    {
        const int grid = std::max(16 * n_levels, 4096);
        const double h = (hi - lo) / grid;
        // small uniform floor keeps the map strictly increasing across
        // zero-density stretches of [lo, hi]
        const double floor_w = 1e-9 / (hi - lo);
        std::vector<double> cum(static_cast<std::size_t>(grid) + 1, 0.0);
        double prev_w = std::cbrt(d.pdf(lo)) + floor_w;
        for (int i = 1; i <= grid; ++i) {
            const double w = std::cbrt(d.pdf(lo + i * h)) + floor_w;
            cum[i] = cum[i - 1] + 0.5 * h * (prev_w + w);
            prev_w = w;
        }
        const double total = cum[grid];
        bounds[0] = lo;
        bounds[n_levels] = hi;
        int j = 0;
        for (int i = 1; i < n_levels; ++i) {
            const double target = total * i / n_levels;
            while (j + 1 < grid && cum[j + 1] < target) ++j;
            const double frac = (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
            double b = lo + (j + frac) * h;
            b = std::max(b, std::nextafter(bounds[i - 1], hi));
            bounds[i] = std::min(b, hi);
        }
        for (int i = 0; i < n_levels; ++i) levels[i] = 0.5 * (bounds[i] + bounds[i + 1]);
    }

    auto cell_moments = [&](int i) {
        // end cells absorb the saturating mass beyond [lo, hi]
        const double a = (i == 0) ? -kInf : bounds[i];
        const double b = (i == n_levels - 1) ? kInf : bounds[i + 1];
        return partial_moments(d, a, b);
    };
    auto distortion = [&]() {
        double e = 0.0;
        for (int i = 0; i < n_levels; ++i)
            e += cell_distortion2(cell_moments(i), levels[i]);
        return e;
    };

    LloydMaxResult res{Quantizer(bounds, levels), false, 0, {}};
    double move = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        move = 0.0;
        for (int i = 0; i < n_levels; ++i) {
            const PartialMoments pm = cell_moments(i);
            double target;
            if (pm.m0 > 1e-300) {
                target = pm.m1 / pm.m0;
                // numeric guard: keep the centroid inside its cell
                target = std::clamp(target, std::nextafter(bounds[i], hi), bounds[i + 1]);
            } else {
                target = 0.5 * (bounds[i] + bounds[i + 1]);  // empty cell: collapse to midpoint
            }
            move = std::max(move, std::abs(target - levels[i]));
            levels[i] = target;
        }
        for (int i = 1; i < n_levels; ++i)
            bounds[i] = 0.5 * (levels[i - 1] + levels[i]);
        res.distortion_history.push_back(distortion());
        if (move < tol) {
            res.converged = true;
            ++it;
            break;
        }
    }
    res.iterations = it;
    res.quantizer = Quantizer(bounds, levels);
    return res;
}

}  // namespace baq
