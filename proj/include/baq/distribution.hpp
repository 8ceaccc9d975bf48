#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "baq/rng.hpp"

namespace baq {

enum class DistFamily { Normal, Uniform, Exponential, Lognormal };

// Catalog of the amplitude distributions used throughout: exact
// pdf/cdf/quantile evaluation plus analytic moments. Values are
// immutable and freely shareable across threads.
class Distribution {
public:
    static Distribution normal(double mean, double stddev);
    static Distribution uniform(double lo, double hi);
    static Distribution exponential(double rate);
    static Distribution lognormal(double log_mean, double log_stddev);

    DistFamily family() const { return family_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    double pdf(double x) const;        // zero outside support
    double cdf(double x) const;        // accepts +-inf
    double quantile(double u) const;   // u in (0,1), throws otherwise
    double mean() const;
    double stddev() const;

    // [lo, hi] outside which each cdf tail is below tail_mass.
    std::pair<double, double> effective_support(double tail_mass = 1e-12) const;

    std::string describe() const;

private:
    Distribution(DistFamily f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
    DistFamily family_;
    double p1_, p2_;
};

// n i.i.d. draws by inverse transform; deterministic for a fixed stream.
// Every variant shares the quantile code path. Throws on n == 0.
std::vector<double> sample(const Distribution& d, RngStream& rng, std::size_t n);

// Standard-normal helpers used across modules.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double u);

}  // namespace baq
