#include "baq/distribution.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace baq {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

double normal_pdf(double z) {
    return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) {
    // erfc keeps full relative accuracy in the lower tail; mirror for the upper.
    if (z < 0) return 0.5 * std::erfc(-z / kSqrt2);
    return 1.0 - 0.5 * std::erfc(z / kSqrt2);
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("normal_quantile: u outside (0,1)");
    // Acklam's rational approximation, then one Newton step through the
    // erfc-based cdf. Final absolute error is at machine level.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (u < plow) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - u;
    x -= e / normal_pdf(x);
    return x;
}

Distribution Distribution::normal(double mean, double stddev) {
    if (!(stddev > 0) || !std::isfinite(mean) || !std::isfinite(stddev))
        throw std::domain_error("Distribution::normal: stddev must be positive and finite");
    return Distribution(DistFamily::Normal, mean, stddev);
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::domain_error("Distribution::uniform: need finite lo < hi");
    return Distribution(DistFamily::Uniform, lo, hi);
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0) || !std::isfinite(rate))
        throw std::domain_error("Distribution::exponential: rate must be positive");
    return Distribution(DistFamily::Exponential, rate, 0.0);
}

Distribution Distribution::lognormal(double log_mean, double log_stddev) {
    if (!(log_stddev > 0) || !std::isfinite(log_mean) || !std::isfinite(log_stddev))
        throw std::domain_error("Distribution::lognormal: log_stddev must be positive");
    return Distribution(DistFamily::Lognormal, log_mean, log_stddev);
}

double Distribution::pdf(double x) const {
    switch (family_) {
        case DistFamily::Normal:
            return normal_pdf((x - p1_) / p2_) / p2_;
        case DistFamily::Uniform:
            return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
        case DistFamily::Exponential:
            return x >= 0.0 ? p1_ * std::exp(-p1_ * x) : 0.0;
        case DistFamily::Lognormal:
            if (x <= 0.0) return 0.0;
            return normal_pdf((std::log(x) - p1_) / p2_) / (p2_ * x);
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    if (std::isnan(x)) throw std::domain_error("Distribution::cdf: NaN argument");
    switch (family_) {
        case DistFamily::Normal:
            if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
            return normal_cdf((x - p1_) / p2_);
        case DistFamily::Uniform:
            if (x <= p1_) return 0.0;
            if (x >= p2_) return 1.0;
            return (x - p1_) / (p2_ - p1_);
        case DistFamily::Exponential:
            if (x <= 0.0) return 0.0;
            return -std::expm1(-p1_ * x);
        case DistFamily::Lognormal:
            if (x <= 0.0) return 0.0;
            if (std::isinf(x)) return 1.0;
            return normal_cdf((std::log(x) - p1_) / p2_);
    }
    return 0.0;
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("Distribution::quantile: u outside (0,1)");
    switch (family_) {
        case DistFamily::Normal:
            return p1_ + p2_ * normal_quantile(u);
        case DistFamily::Uniform:
            return p1_ + u * (p2_ - p1_);
        case DistFamily::Exponential:
            return -std::log1p(-u) / p1_;
        case DistFamily::Lognormal:
            return std::exp(p1_ + p2_ * normal_quantile(u));
    }
    return 0.0;
}

double Distribution::mean() const {
    switch (family_) {
        case DistFamily::Normal: return p1_;
        case DistFamily::Uniform: return 0.5 * (p1_ + p2_);
        case DistFamily::Exponential: return 1.0 / p1_;
        case DistFamily::Lognormal: return std::exp(p1_ + 0.5 * p2_ * p2_);
    }
    return 0.0;
}

double Distribution::stddev() const {
    switch (family_) {
        case DistFamily::Normal: return p2_;
        case DistFamily::Uniform: return (p2_ - p1_) / std::sqrt(12.0);
        case DistFamily::Exponential: return 1.0 / p1_;
        case DistFamily::Lognormal: {
            const double s2 = p2_ * p2_;
            return std::exp(p1_ + 0.5 * s2) * std::sqrt(std::expm1(s2));
        }
    }
    return 0.0;
}

std::pair<double, double> Distribution::effective_support(double tail_mass) const {
    switch (family_) {
        case DistFamily::Uniform:
            return {p1_, p2_};
        case DistFamily::Exponential:
            return {0.0, quantile(1.0 - tail_mass)};
        case DistFamily::Lognormal:
            return {quantile(tail_mass), quantile(1.0 - tail_mass)};
        case DistFamily::Normal:
            return {quantile(tail_mass), quantile(1.0 - tail_mass)};
    }
    return {0.0, 0.0};
}

std::string Distribution::describe() const {
    std::ostringstream os;
    switch (family_) {
        case DistFamily::Normal: os << "normal(" << p1_ << "," << p2_ << ")"; break;
        case DistFamily::Uniform: os << "uniform(" << p1_ << "," << p2_ << ")"; break;
        case DistFamily::Exponential: os << "exponential(" << p1_ << ")"; break;
        case DistFamily::Lognormal: os << "lognormal(" << p1_ << "," << p2_ << ")"; break;
    }
    return os.str();
}

std::vector<double> sample(const Distribution& d, RngStream& rng, std::size_t n) {
    if (n == 0) throw std::domain_error("sample: n must be at least 1");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = d.quantile(rng.next_uniform());
    return out;
}

}  // namespace baq
