#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "baq/distribution.hpp"

namespace baq {

// Scalar quantizer: strictly increasing boundaries c_0 < ... < c_N with
// one representation level per cell. Inputs on an interior boundary go
// to the lower cell (c_{i-1} < x <= c_i); inputs outside [c_0, c_N]
// saturate to the end levels. Immutable after construction.
class Quantizer {
public:
    Quantizer(std::vector<double> boundaries, std::vector<double> levels);

    // N equal cells on [lo, hi], levels at cell midpoints.
    static Quantizer uniform(int n_levels, double lo, double hi);

    double quantize(double x) const;

    int n_levels() const { return static_cast<int>(levels_.size()); }
    const std::vector<double>& boundaries() const { return boundaries_; }
    const std::vector<double>& levels() const { return levels_; }
    double step(int cell) const { return boundaries_[cell + 1] - boundaries_[cell]; }

private:
    std::vector<double> boundaries_;
    std::vector<double> levels_;
};

// Quantization error energy over signal energy. Throws on an empty or
// zero-energy signal.
double nmse(std::span<const double> signal, const Quantizer& q);

inline double to_db(double ratio) { return 10.0 * std::log10(ratio); }

// E^(r) = integral of |u - Q(u)|^r f(u) du, per-cell adaptive quadrature
// including the two saturation tails.
double expected_distortion(const Quantizer& q, const Distribution& d, int r);

// (E_Y^{1/r} + W)^r: distortion bound for quantizing X with a quantizer
// matched to Y, given their Wasserstein-r distance W.
double mismatch_bound(double e_y, double w, int r);

// Printed bound for a zero-mean Gaussian under the N-level uniform
// quantizer on [-1/2, 1/2]. The radicand sigma^2 + 1/12 - sigma/sqrt(pi)
// is a squared W2 distance and is positive for every real sigma.
double gaussian_uniform_bound(double sigma, int n_levels);

// Inverse-quantile compander G(x) = F_target^{-1}(F_source(x)).
double compander(double x, const Distribution& source, const Distribution& target);

struct LloydMaxResult {
    Quantizer quantizer;
    bool converged = false;
    int iterations = 0;
    // Expected r=2 distortion after each iteration (analytic moments).
    std::vector<double> distortion_history;
};

// Alternating centroid/midpoint iteration over [lo, hi]; probability
// mass beyond the range is assigned to the end cells. Zero-mass cells
// keep their midpoint level. Stops when the largest level movement
// drops below tol; non-convergence returns the last iterate flagged.
LloydMaxResult lloyd_max(const Distribution& d, int n_levels, double lo, double hi,
                         double tol = 1e-10, int max_iter = 2000);

}  // namespace baq
