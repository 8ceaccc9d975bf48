#include "baq/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "baq/errors.hpp"

namespace baq {

namespace {

double sinc_kernel(double u) {  // sin(u)/u with the removable singularity
    if (std::abs(u) < 1e-9) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

}  // namespace

BandlimitedSignal::BandlimitedSignal(double omega_max, std::vector<double> coeffs, double t0)
    : omega_max_(omega_max), coeffs_(std::move(coeffs)), t0_(t0) {
    if (!(omega_max > 0)) throw std::domain_error("BandlimitedSignal: omega_max must be positive");
    if (coeffs_.empty()) throw std::domain_error("BandlimitedSignal: need at least one coefficient");
}

double BandlimitedSignal::nyquist_interval() const { return M_PI / omega_max_; }

double BandlimitedSignal::duration() const {
    return static_cast<double>(coeffs_.size() - 1) * nyquist_interval();
}

double BandlimitedSignal::operator()(double t) const {
    const double tn = nyquist_interval();
    double acc = 0.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        acc += coeffs_[k] * sinc_kernel(omega_max_ * (t - t0_ - static_cast<double>(k) * tn));
    return acc;
}

BandlimitedSignal generate_bandlimited(double omega_max, double duration,
                                       const Distribution& amplitude, RngStream& rng) {
    if (!(omega_max > 0) || !(duration > 0))
        throw std::domain_error("generate_bandlimited: omega_max and duration must be positive");
    const double tn = M_PI / omega_max;
    const auto n_anchors = static_cast<std::size_t>(std::floor(duration / tn)) + 1;
    return BandlimitedSignal(omega_max, sample(amplitude, rng, n_anchors));
}

SampledSignal sample_signal(const BandlimitedSignal& s, double dt,
                            double t_begin, double t_end, bool allow_sub_nyquist) {
    if (!(dt > 0)) throw std::domain_error("sample_signal: dt must be positive");
    if (!(t_end >= t_begin)) throw std::domain_error("sample_signal: empty window");
    if (dt > s.nyquist_interval() * (1.0 + 1e-12) && !allow_sub_nyquist)
        throw std::domain_error("sample_signal: sub-Nyquist spacing rejected");
    SampledSignal out;
    out.dt = dt;
    out.t0 = t_begin;
    const auto n = static_cast<std::size_t>(std::floor((t_end - t_begin) / dt + 1e-9)) + 1;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.samples[i] = s(t_begin + static_cast<double>(i) * dt);
    return out;
}

double sinc_reconstruct(const SampledSignal& ss, double omega_max, double t) {
    if (ss.samples.empty()) throw std::domain_error("sinc_reconstruct: empty signal");
    const double nyquist_dt = M_PI / omega_max;
    // rate of the interpolation kernel: omega_max at Nyquist spacing,
    // pi/dt when oversampled
    const double rate = (ss.dt >= nyquist_dt * (1.0 - 1e-12)) ? omega_max : M_PI / ss.dt;
    double acc = 0.0;
    for (std::size_t n = 0; n < ss.samples.size(); ++n)
        acc += ss.samples[n] * sinc_kernel(rate * (t - ss.t0 - static_cast<double>(n) * ss.dt));
    return acc;
}

namespace {

// Reduction of v into [-lam, lam): returns the integer q with
// v - 2*lam*q in range.
std::int64_t fold_count(double v, double lam) {
    return static_cast<std::int64_t>(std::floor((v + lam) / (2.0 * lam)));
}

// Leading coefficient (of n^deg) of the least-squares polynomial fit of
// the given degree. Centered/scaled basis keeps the normal equations
// well conditioned for the small degrees used here.
double leading_coeff_fit(const std::vector<double>& y, int deg) {
    const std::size_t n = y.size();
    const double center = 0.5 * static_cast<double>(n - 1);
    const double scale = std::max(1.0, 0.5 * static_cast<double>(n - 1));
    const int dim = deg + 1;
    std::vector<double> gram(static_cast<std::size_t>(dim) * dim, 0.0);
    std::vector<double> rhs(dim, 0.0);
    std::vector<double> pow(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(i) - center) / scale;
        pow[0] = 1.0;
        for (int j = 1; j < dim; ++j) pow[j] = pow[j - 1] * u;
        for (int r = 0; r < dim; ++r) {
            rhs[r] += pow[r] * y[i];
            for (int c = 0; c < dim; ++c) gram[r * dim + c] += pow[r] * pow[c];
        }
    }
    // Gaussian elimination with partial pivoting on the small system
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(gram[r * dim + col]) > std::abs(gram[piv * dim + col])) piv = r;
        for (int c = 0; c < dim; ++c) std::swap(gram[col * dim + c], gram[piv * dim + c]);
        std::swap(rhs[col], rhs[piv]);
        const double d = gram[col * dim + col];
        for (int r = col + 1; r < dim; ++r) {
            const double f = gram[r * dim + col] / d;
            for (int c = col; c < dim; ++c) gram[r * dim + c] -= f * gram[col * dim + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> coeff(dim);
    for (int r = dim - 1; r >= 0; --r) {
        double v = rhs[r];
        for (int c = r + 1; c < dim; ++c) v -= gram[r * dim + c] * coeff[c];
        coeff[r] = v / gram[r * dim + r];
    }
    return coeff[deg] / std::pow(scale, deg);
}

double binomial(std::size_t n, int k) {
    if (n < static_cast<std::size_t>(k)) return 0.0;
    double v = 1.0;
    for (int j = 0; j < k; ++j) v = v * static_cast<double>(n - static_cast<std::size_t>(j)) / (j + 1);
    return v;
}

std::vector<double> unfold_impl(std::span<const double> folded, double lam, int order) {
    const std::size_t len = folded.size();
    const auto k = static_cast<std::size_t>(order);
    if (len < k + 2) throw std::domain_error("unfold: sequence too short for this order");

    // order-k finite difference of the folded samples
    std::vector<double> d(folded.begin(), folded.end());
    for (std::size_t pass = 0; pass < k; ++pass) {
        for (std::size_t i = 0; i + 1 < d.size(); ++i) d[i] = d[i + 1] - d[i];
        d.pop_back();
    }

    // re-fold each difference into [-lam, lam); the subtracted multiples
    // are the order-k differences of the fold counts
    std::vector<std::int64_t> counts(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) counts[i] = -fold_count(d[i], lam);

    // invert the difference operator k times, zero integration constants
    for (std::size_t pass = 0; pass < k; ++pass) {
        std::vector<std::int64_t> acc(counts.size() + 1, 0);
        for (std::size_t i = 0; i < counts.size(); ++i) acc[i + 1] = acc[i] + counts[i];
        counts = std::move(acc);
    }

    auto rebuild = [&] {
        std::vector<double> x(len);
        for (std::size_t i = 0; i < len; ++i)
            x[i] = folded[i] + 2.0 * lam * static_cast<double>(counts[i]);
        return x;
    };

    // the zeroed constants leave a spurious polynomial of degree < k in
    // fold-count units; estimate and remove it degree by degree, leaving
    // only the global 2*lam ambiguity
    std::vector<double> x = rebuild();
    for (int deg = order - 1; deg >= 1; --deg) {
        double lead = leading_coeff_fit(x, deg);
        double factorial = 1.0;
        for (int j = 2; j <= deg; ++j) factorial *= j;
        const auto mult = static_cast<std::int64_t>(std::llround(lead * factorial / (2.0 * lam)));
        if (mult != 0) {
            for (std::size_t i = 0; i < len; ++i)
                counts[i] -= mult * static_cast<std::int64_t>(std::llround(binomial(i, deg)));
            x = rebuild();
        }
    }

    // residual consistency: re-folding the recovery must reproduce the input
    for (std::size_t i = 0; i < len; ++i) {
        const double refolded = x[i] - 2.0 * lam * static_cast<double>(fold_count(x[i], lam));
        if (std::abs(refolded - folded[i]) > 1e-9 * std::max(1.0, lam))
            throw UnfoldError("unfold: re-folded recovery does not match the input");
    }
    return x;
}

}  // namespace

std::vector<double> unfold(std::span<const double> folded, double half_range,
                           const UnfoldOptions& opts) {
    if (!(half_range > 0)) throw std::domain_error("unfold: half_range must be positive");
    if (opts.order < 1 || opts.order > 4) throw std::domain_error("unfold: order must be in [1,4]");
    for (double v : folded)
        if (!(v >= -half_range && v < half_range))
            throw std::domain_error("unfold: folded samples must lie in [-half_range, half_range)");

    std::vector<double> x = unfold_impl(folded, half_range, opts.order);
    if (opts.cross_check && folded.size() >= static_cast<std::size_t>(opts.order) + 3) {
        const std::vector<double> alt = unfold_impl(folded, half_range, opts.order + 1);
        const double base = x[0] - alt[0];
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::abs((x[i] - alt[i]) - base) > half_range)
                throw UnfoldError("unfold: order-K and order-(K+1) recoveries disagree");
        }
    }
    return x;
}

PipelineReport run_pipeline(const BandlimitedSignal& s, const PipelineConfig& cfg) {
    validate(cfg.fold);
    const double lam = cfg.fold.half_range;
    const double dt = s.nyquist_interval() / cfg.oversampling;
    const SampledSignal truth = sample_signal(s, dt, s.t0(), s.t0() + s.duration());

    const Quantizer q = Quantizer::uniform(cfg.levels, -lam, lam);

    std::vector<double> folded_q(truth.samples.size());
    for (std::size_t i = 0; i < folded_q.size(); ++i)
        folded_q[i] = q.quantize(fold(truth.samples[i], cfg.fold));

    std::vector<double> recovered =
        unfold(folded_q, lam, UnfoldOptions{cfg.order, true});
    for (double& v : recovered) v /= cfg.fold.gain;

    // remove the single global 2*lam/a multiple left by the modulo
    double mean_diff = 0.0;
    for (std::size_t i = 0; i < recovered.size(); ++i)
        mean_diff += recovered[i] - truth.samples[i];
    mean_diff /= static_cast<double>(recovered.size());
    const double grid = 2.0 * lam / cfg.fold.gain;
    const double offset = grid * std::round(mean_diff / grid);
    for (double& v : recovered) v -= offset;

    double err_folded = 0.0, err_direct = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < truth.samples.size(); ++i) {
        const double x = truth.samples[i];
        const double ef = x - recovered[i];
        const double ed = x - q.quantize(x);
        err_folded += ef * ef;
        err_direct += ed * ed;
        energy += x * x;
    }
    if (energy <= 0.0) throw std::domain_error("run_pipeline: zero-energy signal");

    PipelineReport rep;
    rep.true_samples = truth.samples;
    rep.recovered = std::move(recovered);
    rep.nmse_folded_path = err_folded / energy;
    rep.nmse_direct_path = err_direct / energy;
    return rep;
}

}  // namespace baq
