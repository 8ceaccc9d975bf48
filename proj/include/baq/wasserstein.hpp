#pragma once

#include <functional>

#include "baq/distribution.hpp"
#include "baq/fold.hpp"

namespace baq {

// An evaluable nondecreasing cdf with a declared effective support
// outside which it is numerically 0 or 1.
struct CdfCurve {
    std::function<double(double)> value;
    double lo = 0.0;
    double hi = 0.0;
};

CdfCurve make_cdf_curve(const Distribution& d);
CdfCurve make_cdf_curve(const FoldedDistribution& fd);

// W1 = integral of |F - G| over the union support (Earth Mover's
// Distance in cdf form).
double w1_numeric(const CdfCurve& f, const CdfCurve& g, double abs_tol = 1e-8);

// W2 from the quantile form: sqrt of the L2 norm of the quantile
// difference over (0,1). Endpoints are handled by a graded mesh.
double w2_numeric(const std::function<double(double)>& quantile_x,
                  const std::function<double(double)>& quantile_y,
                  double abs_tol = 1e-10);
double w2_numeric(const Distribution& x, const Distribution& y);

// Closed forms. The exp-exp value carries the sqrt(2) factor of the
// quantile-integral derivation, which the numeric route confirms.
double w2_gaussian(double mu1, double sigma1, double mu2, double sigma2);
double w2_exponential(double rate1, double rate2);
double w2_uniform_exponential(double upper, double rate);  // U[0,C] vs exp(p)

// Earth Mover's Distance between the folded law of the base variable
// and U[-lambda, lambda], restricted to [-lambda, lambda].
double w1_folded_to_uniform(const Distribution& base, const FoldParams& p,
                            double abs_tol = 1e-9);

}  // namespace baq
