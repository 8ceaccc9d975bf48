#include "baq/fold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "baq/errors.hpp"

namespace baq {

void validate(const FoldParams& p) {
    if (!(p.gain > 0) || !std::isfinite(p.gain))
        throw std::domain_error("FoldParams: gain must be positive and finite");
    if (!(p.half_range > 0) || !std::isfinite(p.half_range))
        throw std::domain_error("FoldParams: half_range must be positive and finite");
}

double fold(double x, const FoldParams& p) {
    const double lam = p.half_range;
    double r = std::fmod(p.gain * x + lam, 2.0 * lam);
    if (r < 0) r += 2.0 * lam;
    double out = r - lam;
    if (out >= lam) out = -lam;  // seam maps to the closed left endpoint
    return out;
}

namespace {

// Truncation half-width such that the omitted base-distribution mass
// beyond [-(2M+1), (2M-1)]*lambda/gain is certified below tol.
int choose_half_width(const Distribution& base, const FoldParams& p, double tol) {
    if (!(tol > 0))
        throw TruncationError("FoldedDistribution: tail tolerance must be positive");
    const double lam = p.half_range;
    const double a = p.gain;
    const double reach = a * (std::abs(base.mean()) + 10.0 * base.stddev()) + lam;
    long long m = static_cast<long long>(std::ceil(reach / (2.0 * lam)));
    m = std::max<long long>(m, 1);
    for (int tries = 0; tries < 64; ++tries) {
        const double lo_tail = base.cdf((-2.0 * static_cast<double>(m) - 1.0) * lam / a);
        const double hi_tail = 1.0 - base.cdf((2.0 * static_cast<double>(m) - 1.0) * lam / a);
        if (lo_tail + hi_tail <= tol && m <= (1LL << 30))
            return static_cast<int>(m);
        m *= 2;
    }
    throw TruncationError("FoldedDistribution: cannot certify tail below tolerance");
}

}  // namespace

FoldedDistribution::FoldedDistribution(Distribution base, FoldParams params, double tail_tol)
    : base_(std::move(base)), params_(params), tol_(tail_tol) {
    validate(params_);
    half_width_ = choose_half_width(base_, params_, tol_);
}

double FoldedDistribution::cdf(double theta) const {
    const double lam = params_.half_range;
    const double a = params_.gain;
    if (!(theta >= -lam && theta < lam))
        throw std::domain_error("FoldedDistribution::cdf: theta outside [-lambda, lambda)");
    double acc = 0.0;
    for (int m = -half_width_; m <= half_width_; ++m) {
        acc += base_.cdf((2.0 * m * lam + theta) / a) -
               base_.cdf((2.0 * m - 1.0) * lam / a);
    }
    return std::clamp(acc, 0.0, 1.0);
}

double FoldedDistribution::pdf(double theta) const {
    const double lam = params_.half_range;
    const double a = params_.gain;
    if (!(theta >= -lam && theta < lam))
        throw std::domain_error("FoldedDistribution::pdf: theta outside [-lambda, lambda)");
    double acc = 0.0;
    for (int m = -half_width_; m <= half_width_; ++m)
        acc += base_.pdf((2.0 * m * lam + theta) / a);
    return acc / a;
}

double folded_pdf_gaussian(double mean, double stddev, const FoldParams& p, double theta) {
    validate(p);
    if (!(stddev > 0)) throw std::domain_error("folded_pdf_gaussian: stddev must be positive");
    const double lam = p.half_range;
    const double a = p.gain;
    // Periodization of N(a*mean, a*stddev) with period 2*lambda; terms
    // beyond 40 standard deviations are below double precision.
    const double s = a * stddev;
    const double c = a * mean;
    const long long m_lo = static_cast<long long>(std::floor((c - theta - 40.0 * s) / (2.0 * lam)));
    const long long m_hi = static_cast<long long>(std::ceil((c - theta + 40.0 * s) / (2.0 * lam)));
    double acc = 0.0;
    for (long long m = m_lo; m <= m_hi; ++m) {
        const double z = (2.0 * static_cast<double>(m) * lam + theta - c) / s;
        acc += normal_pdf(z);
    }
    return acc / s;
}

double folded_cdf_exponential(double rate, const FoldParams& p, double theta) {
    validate(p);
    if (!(rate > 0)) throw std::domain_error("folded_cdf_exponential: rate must be positive");
    const double lam = p.half_range;
    if (!(theta >= -lam && theta < lam))
        throw std::domain_error("folded_cdf_exponential: theta outside [-lambda, lambda)");
    const double q = rate / p.gain;
    // expm1 keeps the q -> 0 limit (theta+lambda)/(2 lambda) accurate.
    const double shared = (std::expm1(q * lam) - std::expm1(-q * theta)) / std::expm1(2.0 * q * lam);
    if (theta < 0) return shared;
    return shared - std::expm1(-q * theta);
}

double folded_pdf_uniform(double lo, double hi, const FoldParams& p, double theta) {
    validate(p);
    if (!(lo < hi)) throw std::domain_error("folded_pdf_uniform: need lo < hi");
    const double lam = p.half_range;
    if (!(theta >= -lam && theta < lam))
        throw std::domain_error("folded_pdf_uniform: theta outside [-lambda, lambda)");
    const double a = p.gain;
    const double beta = 1.0 / (hi - lo);
    const double m1 = std::floor((a * lo + lam) / (2.0 * lam));
    const double m2 = std::floor((a * hi + lam) / (2.0 * lam));
    const double t1 = fold(lo, p);
    const double t2 = fold(hi, p);
    if (m1 == m2)
        return (theta >= t1 && theta <= t2) ? beta / a : 0.0;
    double acc = m2 - m1 - 1.0;
    if (theta >= t1) acc += 1.0;            // left segment, mapped onto [t1, lambda)
    if (theta <= t2) acc += 1.0;            // right segment, mapped onto [-lambda, t2]
    return beta / a * acc;
}

}  // namespace baq
