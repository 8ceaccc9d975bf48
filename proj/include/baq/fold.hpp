#pragma once

#include "baq/distribution.hpp"

namespace baq {

// Scale-and-modulo transform parameters: amplifier gain and folding
// half-range. The transform maps any real into [-half_range, half_range).
struct FoldParams {
    double gain;        // a > 0
    double half_range;  // lambda > 0
};

void validate(const FoldParams& p);

// (a*x + lambda) mod 2*lambda - lambda, with the mod taken into
// [0, 2*lambda) so negative inputs land in range too. The seam value
// +lambda is mapped to -lambda (half-open support).
double fold(double x, const FoldParams& p);

// Exact law of the folded random variable, evaluated by truncated
// periodization of the base cdf/pdf. The truncation half-width is chosen
// so the omitted tail mass is certified below tail_tol.
class FoldedDistribution {
public:
    FoldedDistribution(Distribution base, FoldParams params, double tail_tol = 1e-12);

    double cdf(double theta) const;  // theta in [-lambda, lambda); clamped to [0,1]
    double pdf(double theta) const;

    int term_half_width() const { return half_width_; }
    const Distribution& base() const { return base_; }
    const FoldParams& params() const { return params_; }

private:
    Distribution base_;
    FoldParams params_;
    double tol_;
    int half_width_;
};

// Closed forms for the folded law. Each agrees with the generic series
// pointwise; the specializations are cheaper and numerically hardened.
double folded_pdf_gaussian(double mean, double stddev, const FoldParams& p, double theta);
double folded_cdf_exponential(double rate, const FoldParams& p, double theta);
double folded_pdf_uniform(double lo, double hi, const FoldParams& p, double theta);

}  // namespace baq
