#pragma once

#include <span>
#include <vector>

#include "baq/distribution.hpp"
#include "baq/fold.hpp"
#include "baq/quantizer.hpp"

namespace baq {

// Finite sinc expansion anchored on the Nyquist grid of omega_max;
// exactly bandlimited by construction and evaluable at any t.
class BandlimitedSignal {
public:
    BandlimitedSignal(double omega_max, std::vector<double> coeffs, double t0 = 0.0);

    double operator()(double t) const;

    double omega_max() const { return omega_max_; }
    double nyquist_interval() const;  // pi / omega_max
    double t0() const { return t0_; }
    double duration() const;          // anchor span
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    double omega_max_;
    std::vector<double> coeffs_;
    double t0_;
};

// Anchor amplitudes drawn from the given catalog distribution.
BandlimitedSignal generate_bandlimited(double omega_max, double duration,
                                       const Distribution& amplitude, RngStream& rng);

struct SampledSignal {
    std::vector<double> samples;
    double dt = 0.0;
    double t0 = 0.0;
};

// Pointwise evaluation on the uniform grid t0 + n*dt covering
// [t_begin, t_end]. Sub-Nyquist dt is rejected unless explicitly allowed.
SampledSignal sample_signal(const BandlimitedSignal& s, double dt,
                            double t_begin, double t_end,
                            bool allow_sub_nyquist = false);

// Truncated cardinal-series reconstruction from the available samples.
// At the Nyquist rate the kernel is sin(omega_max u)/(omega_max u); for
// oversampled input the kernel rate follows the sample spacing instead
// (the fixed-rate kernel is not an interpolating family there).
double sinc_reconstruct(const SampledSignal& ss, double omega_max, double t);

struct UnfoldOptions {
    int order = 2;           // finite-difference order K
    bool cross_check = true; // also recover at order K+1 and compare
};

// Recover the pre-fold sequence from folded samples in
// [-half_range, half_range) via order-K modulo-reduced differences and
// grid-rounded anti-differencing. The result equals the true sequence
// up to one global additive multiple of 2*half_range, provided the K-th
// difference of the true sequence stays inside the fold range. Throws
// UnfoldError when the consistency checks fail.
std::vector<double> unfold(std::span<const double> folded, double half_range,
                           const UnfoldOptions& opts = {});

struct PipelineConfig {
    FoldParams fold{1.0, 1.0};
    int levels = 256;
    int oversampling = 16;
    int order = 2;
};

struct PipelineReport {
    std::vector<double> true_samples;
    std::vector<double> recovered;   // de-scaled and globally aligned
    double nmse_folded_path = 0.0;
    double nmse_direct_path = 0.0;
};

// sample -> fold -> uniform quantizer on [-lambda, lambda] -> unfold ->
// de-scale, against the direct path that quantizes the raw samples with
// the same quantizer (clipping out-of-range amplitudes).
PipelineReport run_pipeline(const BandlimitedSignal& s, const PipelineConfig& cfg);

}  // namespace baq
