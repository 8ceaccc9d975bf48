// End-to-end acceptance checks. Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
// argv[1] must be the path to the CLI binary (used by the determinism
// check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "baq/distribution.hpp"
#include "baq/experiments.hpp"
#include "baq/fold.hpp"
#include "baq/quantizer.hpp"
#include "baq/rng.hpp"
#include "baq/signal.hpp"
#include "baq/wasserstein.hpp"

using namespace baq;

namespace {

int g_failures = 0;

void report(const char* name, bool ok) {
    std::printf("%s - %s\n", ok ? "PASS" : "FAIL", name);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

bool expect(bool cond, const char* what) {
    if (!cond) std::fprintf(stderr, "  check failed: %s\n", what);
    return cond;
}

bool near(double got, double want, double tol, const char* what) {
    if (std::abs(got - want) <= tol) return true;
    std::fprintf(stderr, "  check failed: %s (got %.12g, want %.12g +/- %.3g)\n",
                 what, got, want, tol);
    return false;
}

// 101 interior points that avoid the rational seam/jump images of the
// piecewise closed forms (odd numerator over an odd prime denominator).
std::vector<double> theta_grid(double lam, int n = 101) {
    std::vector<double> g;
    const double den = 2.0 * n + 1.0;
    for (int j = 0; j < n; ++j) g.push_back(-lam + 2.0 * lam * (2.0 * j + 1.0) / den);
    return g;
}

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double aligned_error(const std::vector<double>& rec, const std::vector<double>& truth,
                     double grid) {
    const double offset = grid * std::round((rec[0] - truth[0]) / grid);
    double err = 0;
    for (std::size_t i = 0; i < rec.size(); ++i)
        err = std::max(err, std::abs(rec[i] - offset - truth[i]));
    return err;
}

// --- criterion 1: the twelve-row reference table ------------------------

bool check_reference_table() {
    const auto start = std::chrono::steady_clock::now();
    cli::ExperimentConfig cfg;  // defaults reproduce the table
    const auto rows = cli::run_table2(cfg);
    bool ok = expect(rows.size() == 12, "twelve table rows");
    for (const auto& r : rows) {
        std::ostringstream tag;
        tag << r.family << "(" << r.param1 << "," << r.param2 << ")";
        ok &= near(r.measured_qn_db, r.ref_qn_db, 1.0, (tag.str() + " Qn").c_str());
        ok &= near(r.measured_qu_db, r.ref_qu_db, 1.0, (tag.str() + " Qu").c_str());
        // analytically pinned rows, tighter
        if (r.family == "uniform" && r.param1 == -5.0)
            ok &= near(r.measured_qu_db, -48.1, 0.2, "uniform(-5,5) Qu pinned");
        if (r.family == "normal" && r.param2 == 2.0)
            ok &= near(r.measured_qu_db, -26.2, 0.3, "normal(0,2) Qu pinned");
        if (r.family == "exponential" && r.param1 == 1.0)
            ok &= near(r.measured_qu_db, -21.8, 0.3, "exponential(1) Qu pinned");
        if (r.family == "normal" && r.param2 == 1.0)
            ok &= near(r.measured_qn_db, -43.9, 0.5, "normal(0,1) Qn pinned");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok &= expect(secs < 120.0, "table runtime under two minutes");
    return ok;
}

// --- criterion 2: exact distortion of the matched uniform case ----------

bool check_uniform_exactness() {
    bool ok = true;
    for (int n : {2, 10, 100, 256}) {
        const Quantizer q = Quantizer::uniform(n, -0.5, 0.5);
        const double e = expected_distortion(q, Distribution::uniform(-0.5, 0.5), 2);
        const double exact = 1.0 / (12.0 * n * n);
        if (std::abs(e - exact) > 1e-3 * exact) {
            std::fprintf(stderr, "  N=%d: %.12g vs %.12g\n", n, e, exact);
            ok = false;
        }
    }
    return ok;
}

// --- criterion 3: closed-form distances vs the quadrature oracle --------

bool check_wasserstein_closed_forms() {
    bool ok = true;
    const std::vector<double> mus = {-2.0, -0.5, 0.0, 1.0, 2.5};
    const std::vector<double> sgs = {0.3, 0.7, 1.0, 1.8, 3.0};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double m2 = mus[j], s2 = sgs[(i + j) % 5];
            const double closed = w2_gaussian(mus[i], sgs[i], m2, s2);
            const double numeric =
                w2_numeric(Distribution::normal(mus[i], sgs[i]), Distribution::normal(m2, s2));
            ok &= near(closed, numeric, 1e-6, "gaussian w2 grid");
        }
    const std::vector<double> cs = {0.5, 1.0, 2.0, 3.0, 5.0};
    const std::vector<double> ps = {0.5, 1.0, 1.5, 2.0, 4.0};
    for (double c : cs)
        for (double p : ps)
            ok &= near(w2_uniform_exponential(c, p),
                       w2_numeric(Distribution::uniform(0, c), Distribution::exponential(p)),
                       1e-6, "uniform-exponential w2 grid");
    for (double p1 : {0.5, 1.0, 2.0})
        for (double p2 : {0.8, 1.0, 3.0})
            ok &= near(w2_numeric(Distribution::exponential(p1), Distribution::exponential(p2)),
                       std::sqrt(2.0) * std::abs(1.0 / p1 - 1.0 / p2), 1e-6,
                       "exponential pair sqrt(2) factor");
    return ok;
}

// --- criterion 4: series cdf derivative equals series pdf ---------------

bool check_cdf_derivative() {
    bool ok = true;
    const double h = 1e-6;
    const std::vector<Distribution> bases = {Distribution::normal(0, 1),
                                             Distribution::exponential(1),
                                             Distribution::uniform(-1, 1)};
    for (const auto& base : bases)
        for (double a : {1.0, 5.0, 25.0}) {
            FoldedDistribution fd(base, {a, 1.0});
            double worst = 0.0;
            for (double t : theta_grid(1.0, 99)) {
                const double num = (fd.cdf(t + h) - fd.cdf(t - h)) / (2.0 * h);
                worst = std::max(worst, std::abs(num - fd.pdf(t)));
            }
            if (worst > 1e-6) {
                std::fprintf(stderr, "  base=%d a=%g worst=%.3g\n",
                             static_cast<int>(base.family()), a, worst);
                ok = false;
            }
        }
    return ok;
}

// --- criterion 5: specializations equal the generic series --------------

bool check_closed_forms_match_series() {
    bool ok = true;
    const auto grid = theta_grid(1.0);
    // gaussian pdf
    for (double a : {1.0, 2.5, 10.0})
        for (auto [mu, sg] : {std::pair{0.0, 1.0}, {0.7, 0.4}, {-1.2, 2.0}}) {
            const FoldParams p{a, 1.0};
            FoldedDistribution fd(Distribution::normal(mu, sg), p);
            for (double t : grid)
                if (std::abs(folded_pdf_gaussian(mu, sg, p, t) - fd.pdf(t)) > 1e-9) {
                    std::fprintf(stderr, "  gaussian pdf mismatch at t=%g\n", t);
                    ok = false;
                }
        }
    // exponential cdf
    for (double a : {1.0, 3.0, 10.0})
        for (double rate : {0.5, 1.0, 2.0}) {
            const FoldParams p{a, 1.0};
            FoldedDistribution fd(Distribution::exponential(rate), p);
            for (double t : grid)
                if (std::abs(folded_cdf_exponential(rate, p, t) - fd.cdf(t)) > 1e-9) {
                    std::fprintf(stderr, "  exponential cdf mismatch at t=%g\n", t);
                    ok = false;
                }
        }
    // uniform pdf, non-wrapping branch (single surviving term)
    {
        const FoldParams p{2.0, 1.0};
        FoldedDistribution fd(Distribution::uniform(0.1, 0.3), p);
        for (double t : grid)
            if (std::abs(folded_pdf_uniform(0.1, 0.3, p, t) - fd.pdf(t)) > 1e-9) {
                std::fprintf(stderr, "  uniform pdf (narrow) mismatch at t=%g\n", t);
                ok = false;
            }
    }
    // uniform pdf, wrapping branch
    for (auto [lo, hi, a] : {std::tuple{0.0, 4.0, 1.0}, {-1.0, 1.0, 3.0}}) {
        const FoldParams p{a, 1.0};
        FoldedDistribution fd(Distribution::uniform(lo, hi), p);
        for (double t : grid)
            if (std::abs(folded_pdf_uniform(lo, hi, p, t) - fd.pdf(t)) > 1e-9) {
                std::fprintf(stderr, "  uniform pdf (wrap) mismatch at t=%g\n", t);
                ok = false;
            }
    }
    return ok;
}

// --- criterion 6: strong gain flattens the folded law -------------------

bool check_uniformization() {
    bool ok = true;
    double dev = 0.0;
    for (double t : theta_grid(1.0, 1001))
        dev = std::max(dev, std::abs(folded_pdf_gaussian(0, 1, {100, 1}, t) - 0.5));
    ok &= expect(dev <= 1e-4, "flatness at gain 100");

    cli::ExperimentConfig cfg;
    for (double sg : cfg.sigma_grid) {
        double prev = 1e300;
        for (double a : cfg.a_grid) {
            const double w = w1_folded_to_uniform(Distribution::normal(0, sg), {a, cfg.lambda});
            ok &= expect(w <= prev + 1e-9, "w1 nonincreasing in gain (sigma row)");
            prev = w;
        }
    }
    for (double mu : cfg.mu_grid) {
        double prev = 1e300;
        for (double a : cfg.a_grid) {
            const double w = w1_folded_to_uniform(Distribution::normal(mu, 1), {a, cfg.lambda});
            ok &= expect(w <= prev + 1e-9, "w1 nonincreasing in gain (mu row)");
            prev = w;
        }
    }
    return ok;
}

// --- criterion 7: folded draws vs the folded density --------------------

bool check_folded_histogram() {
    bool ok = true;
    const std::size_t n = 10'000'000;
    const int bins = 100;
    const double lam = 1.0;
    std::uint64_t stream = 470;
    for (const auto& base : {Distribution::normal(0, 1), Distribution::exponential(1),
                             Distribution::uniform(-1, 1)})
        for (double a : {1.0, 4.0}) {
            const FoldParams p{a, lam};
            FoldedDistribution fd(base, p);
            // exact bin masses from cdf differences; the density jumps
            // all land on bin edges for these configurations
            std::vector<double> mass(bins);
            double prev_cdf = 0.0;
            for (int b = 0; b < bins; ++b) {
                const double hi = -lam + 2.0 * lam * (b + 1) / bins;
                const double cur = (b + 1 == bins) ? 1.0 : fd.cdf(hi);
                mass[b] = cur - prev_cdf;
                prev_cdf = cur;
            }
            std::vector<std::uint64_t> count(bins, 0);
            RngStream rng(20250824, stream++);
            for (std::size_t i = 0; i < n; ++i) {
                const double v = fold(base.quantile(rng.next_uniform()), p);
                int b = static_cast<int>((v + lam) / (2.0 * lam) * bins);
                if (b < 0) b = 0;
                if (b >= bins) b = bins - 1;
                ++count[b];
            }
            double worst_ratio = 0.0;
            for (int b = 0; b < bins; ++b) {
                const double se =
                    std::sqrt(mass[b] * (1.0 - mass[b]) / static_cast<double>(n));
                const double dev =
                    std::abs(static_cast<double>(count[b]) / static_cast<double>(n) - mass[b]);
                worst_ratio = std::max(worst_ratio, dev / se);
            }
            if (worst_ratio > 3.0) {
                std::fprintf(stderr, "  base=%d a=%g worst dev = %.3f standard errors\n",
                             static_cast<int>(base.family()), a, worst_ratio);
                ok = false;
            }
        }
    return ok;
}

// --- criterion 8: optimal quantizer design sanity -----------------------

bool check_lloyd_max() {
    bool ok = true;
    {
        const auto res = lloyd_max(Distribution::normal(0, 1), 2, -5, 5);
        const double fp = std::sqrt(2.0 / M_PI);
        ok &= near(res.quantizer.levels()[0], -fp, 1e-6, "two-level fixed point (low)");
        ok &= near(res.quantizer.levels()[1], fp, 1e-6, "two-level fixed point (high)");
    }
    for (const auto& d : {Distribution::normal(0, 1), Distribution::exponential(1)}) {
        auto [lo, hi] = d.effective_support(1e-9);
        const auto res = lloyd_max(d, 64, lo, hi);
        for (std::size_t i = 1; i < res.distortion_history.size(); ++i)
            ok &= expect(res.distortion_history[i] <=
                             res.distortion_history[i - 1] * (1.0 + 1e-12) + 1e-18,
                         "distortion nonincreasing");
    }
    {
        const auto res = lloyd_max(Distribution::normal(0, 1), 256, -5, 5);
        const double panter_dite = std::sqrt(3.0) * M_PI / 2.0 / (256.0 * 256.0);
        const double rel = std::abs(res.distortion_history.back() - panter_dite) / panter_dite;
        ok &= expect(rel <= 0.05, "high-rate distortion near the asymptotic value");
    }
    return ok;
}

// --- criterion 9: mismatch bound never violated -------------------------

bool check_mismatch_bound() {
    bool ok = true;
    RngStream pick(20250824, 500);
    auto random_dist = [&]() {
        switch (pick.next_u64() % 4) {
            case 0:
                return Distribution::normal(2.0 * (pick.next_uniform() - 0.5),
                                            0.5 + 1.5 * pick.next_uniform());
            case 1: {
                const double lo = -3.0 * pick.next_uniform();
                return Distribution::uniform(lo, lo + 1.0 + 3.0 * pick.next_uniform());
            }
            case 2:
                return Distribution::exponential(0.5 + 1.5 * pick.next_uniform());
            default:
                return Distribution::lognormal(pick.next_uniform() - 0.5,
                                               0.25 + 0.5 * pick.next_uniform());
        }
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Distribution x = random_dist();
        const Distribution y = random_dist();
        auto [lo, hi] = y.effective_support(1e-9);
        const auto design = lloyd_max(y, 64, lo, hi);
        const double e_y = expected_distortion(design.quantizer, y, 2);
        const double w = w2_numeric(x, y);
        const double bound = mismatch_bound(e_y, w, 2);
        RngStream rng(20250824, 520 + static_cast<std::uint64_t>(trial));
        double acc = 0.0;
        const std::size_t n = 1'000'000;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = x.quantile(rng.next_uniform());
            const double e = v - design.quantizer.quantize(v);
            acc += e * e;
        }
        const double measured = acc / static_cast<double>(n);
        if (measured > bound) {
            std::fprintf(stderr, "  trial %d: measured %.6g exceeds bound %.6g\n", trial,
                         measured, bound);
            ok = false;
        }
    }
    return ok;
}

// --- criterion 10: the full fold/unfold pipeline ------------------------

bool check_pipeline() {
    bool ok = true;
    // pre-quantization unfolding is exact for signals spanning 3x the range
    for (std::uint64_t seed : {21ULL, 22ULL, 23ULL}) {
        RngStream rng(seed, 0);
        const BandlimitedSignal s =
            generate_bandlimited(M_PI, 63.0, Distribution::normal(0, 1), rng);
        auto truth = sample_signal(s, 1.0 / 16.0, 0.0, s.duration()).samples;
        const double scale = 3.0 / max_abs(truth);
        std::vector<double> folded(truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth[i] *= scale;
            folded[i] = fold(truth[i], {1, 1});
        }
        const auto rec = unfold(folded, 1.0, {2, true});
        ok &= expect(aligned_error(rec, truth, 2.0) <= 1e-9, "exact unfolding");
    }
    // clipping regime: the folded path wins in at least 19 of 20 runs
    int wins = 0;
    for (std::uint64_t seed = 70; seed < 90; ++seed) {
        RngStream rng(seed, 0);
        const BandlimitedSignal s =
            generate_bandlimited(M_PI, 63.0, Distribution::normal(0, 2), rng);
        PipelineConfig cfg;
        cfg.fold = {4.0, 1.0};
        const auto rep = run_pipeline(s, cfg);
        if (rep.nmse_folded_path < rep.nmse_direct_path) ++wins;
    }
    if (wins < 19) {
        std::fprintf(stderr, "  folded path won only %d of 20 runs\n", wins);
        ok = false;
    }
    return ok;
}

// --- criterion 11: byte-identical reruns --------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return in ? ss.str() : std::string("<unreadable:" + path + ">");
}

bool check_determinism(const std::string& cli_path) {
    const std::string dir = "acceptance_rerun";
    if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0)
        return expect(false, "scratch directory setup");
    const std::string cmd = cli_path + " table2 --n 100000 --out " + dir +
                            " > /dev/null && " + cli_path + " fold-pdf --out " + dir +
                            " > /dev/null";
    bool ok = expect(std::system(cmd.c_str()) == 0, "first CLI run succeeds");
    const std::vector<std::string> files = {dir + "/table2.csv", dir + "/table2.json",
                                            dir + "/fold_pdf.csv"};
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(slurp(f));
    ok &= expect(std::system(cmd.c_str()) == 0, "second CLI run succeeds");
    for (std::size_t i = 0; i < files.size(); ++i)
        if (slurp(files[i]) != first[i]) {
            std::fprintf(stderr, "  rerun changed %s\n", files[i].c_str());
            ok = false;
        }
    ok &= expect(std::system(("rm -rf " + dir).c_str()) == 0, "scratch directory cleanup");
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
        return 2;
    }
    report("reference-table reproduction", check_reference_table());
    report("uniform-on-uniform distortion exactness", check_uniform_exactness());
    report("wasserstein closed forms vs quadrature", check_wasserstein_closed_forms());
    report("folded cdf derivative matches pdf", check_cdf_derivative());
    report("folded closed forms match series", check_closed_forms_match_series());
    report("uniformization with gain", check_uniformization());
    report("folded monte carlo histogram", check_folded_histogram());
    report("lloyd-max design sanity", check_lloyd_max());
    report("mismatch bound validity", check_mismatch_bound());
    report("fold-unfold pipeline", check_pipeline());
    report("byte-identical reruns", check_determinism(argv[1]));
    return g_failures == 0 ? 0 : 1;
}
