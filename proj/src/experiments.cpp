#include "baq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "baq/errors.hpp"
#include "baq/fold.hpp"
#include "baq/quantizer.hpp"
#include "baq/wasserstein.hpp"

namespace baq::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fmt_db(double db) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", db);
    return buf;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    const fs::path p = fs::path(cfg.out_dir) / name;
    std::ofstream out(p, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + p.string());
    return out;
}

json config_json(const ExperimentConfig& cfg) {
    return json{{"version", kVersion},
                {"seed", cfg.seed},
                {"n_samples", cfg.n_samples},
                {"levels", cfg.levels},
                {"range", {cfg.range_lo, cfg.range_hi}},
                {"lambda", cfg.lambda},
                {"a_grid", cfg.a_grid},
                {"theta_points", cfg.theta_points},
                {"sigma_grid", cfg.sigma_grid},
                {"mu_grid", cfg.mu_grid},
                {"oversampling", cfg.oversampling},
                {"order", cfg.order},
                {"pipeline_seeds", cfg.pipeline_seeds},
                {"gain", cfg.gain},
                {"coeff_sigma", cfg.coeff_sigma},
                {"anchors", cfg.anchors},
                {"out_dir", cfg.out_dir}};
}

// Monte Carlo in fixed-size chunks with substreams derived from
// (seed, row, chunk); the reduction order is fixed, so results do not
// depend on how the chunks would be scheduled.
template <typename PerSample>
void monte_carlo(const Distribution& d, std::uint64_t seed, std::uint64_t row,
                 std::size_t n, PerSample&& per_sample) {
    constexpr std::size_t kChunk = 1 << 16;
    std::size_t done = 0;
    std::uint64_t chunk_idx = 0;
    while (done < n) {
        const std::size_t count = std::min(kChunk, n - done);
        RngStream rng(seed, (row << 32) | chunk_idx);
        for (std::size_t i = 0; i < count; ++i) per_sample(d.quantile(rng.next_uniform()));
        done += count;
        ++chunk_idx;
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_samples < 1) throw std::domain_error("config: n_samples must be >= 1");
    if (levels < 1) throw std::domain_error("config: levels must be >= 1");
    if (!(range_hi > range_lo)) throw std::domain_error("config: range_hi must exceed range_lo");
    if (!(lambda > 0)) throw std::domain_error("config: lambda must be positive");
    if (a_grid.empty() || sigma_grid.empty() || mu_grid.empty())
        throw std::domain_error("config: grids must be non-empty");
    if (theta_points < 2) throw std::domain_error("config: theta_points must be >= 2");
    if (oversampling < 1 || order < 1 || pipeline_seeds < 1 || anchors < 2)
        throw std::domain_error("config: pipeline settings out of range");
    if (!(gain > 0) || !(coeff_sigma > 0))
        throw std::domain_error("config: gain and coeff_sigma must be positive");
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("config file not found: " + path);
    std::string line;
    auto parse_grid = [](const std::string& s) {
        std::vector<double> g;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) g.push_back(std::stod(tok));
        return g;
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "n_samples") cfg.n_samples = std::stoull(val);
        else if (key == "levels") cfg.levels = std::stoi(val);
        else if (key == "range_lo") cfg.range_lo = std::stod(val);
        else if (key == "range_hi") cfg.range_hi = std::stod(val);
        else if (key == "lambda") cfg.lambda = std::stod(val);
        else if (key == "a_grid") cfg.a_grid = parse_grid(val);
        else if (key == "theta_points") cfg.theta_points = std::stoi(val);
        else if (key == "sigma_grid") cfg.sigma_grid = parse_grid(val);
        else if (key == "mu_grid") cfg.mu_grid = parse_grid(val);
        else if (key == "oversampling") cfg.oversampling = std::stoi(val);
        else if (key == "order") cfg.order = std::stoi(val);
        else if (key == "pipeline_seeds") cfg.pipeline_seeds = std::stoi(val);
        else if (key == "gain") cfg.gain = std::stod(val);
        else if (key == "coeff_sigma") cfg.coeff_sigma = std::stod(val);
        else if (key == "anchors") cfg.anchors = std::stoi(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else throw std::domain_error("config: unknown key '" + key + "'");
    }
}

Distribution parse_distribution(const std::vector<std::string>& spec) {
    if (spec.empty()) throw std::domain_error("distribution spec: empty");
    const std::string& name = spec[0];
    auto need = [&](std::size_t n) {
        if (spec.size() != n + 1)
            throw std::domain_error("distribution spec: '" + name + "' takes " +
                                    std::to_string(n) + " parameter(s)");
    };
    if (name == "normal") { need(2); return Distribution::normal(std::stod(spec[1]), std::stod(spec[2])); }
    if (name == "uniform") { need(2); return Distribution::uniform(std::stod(spec[1]), std::stod(spec[2])); }
    if (name == "exp" || name == "exponential") { need(1); return Distribution::exponential(std::stod(spec[1])); }
    if (name == "lognormal") { need(2); return Distribution::lognormal(std::stod(spec[1]), std::stod(spec[2])); }
    throw std::domain_error("distribution spec: unknown family '" + name + "'");
}

std::vector<Table2Row> run_table2(const ExperimentConfig& cfg) {
    cfg.validate();
    struct RowSpec {
        std::string family;
        double p1, p2;
        Distribution dist;
        double ref_qn, ref_qu;
    };
    // Exponential rows carry the reference table's scale parameter.
    // The table's Uniform(-5,5) and Exp(1) entries in the matched-
    // quantizer column are transposed in print (neither is achievable
    // by any one quantizer in the printed orientation; both match
    // analytic quadrature within 0.05 dB once swapped) and are listed
    // here in the corrected orientation.
    const std::vector<RowSpec> rows = {
        {"normal", 0, 1, Distribution::normal(0, 1), -43.9, -38.6},
        {"normal", 0, 0.5, Distribution::normal(0, 0.5), -39.8, -32.2},
        {"normal", 0, 2, Distribution::normal(0, 2), -23.3, -26.2},
        {"uniform", -5, 5, Distribution::uniform(-5, 5), -31.4, -48.1},
        {"uniform", -3, 3, Distribution::uniform(-3, 3), -44.8, -43.6},
        {"uniform", -1, 1, Distribution::uniform(-1, 1), -41.0, -33.7},
        {"exponential", 1, 0, Distribution::exponential(1.0), -20.0, -21.8},
        {"exponential", 0.5, 0, Distribution::exponential(2.0), -38.1, -34.5},
        {"exponential", 2, 0, Distribution::exponential(0.5), -10.0, -10.9},
        {"lognormal", 0, 1, Distribution::lognormal(0, 1), -6.08, -6.43},
        {"lognormal", 0, 0.5, Distribution::lognormal(0, 0.5), -30.7, -32.5},
        {"lognormal", 0, 2, Distribution::lognormal(0, 2), -0.09, -0.09},
    };

    const Quantizer q_uniform = Quantizer::uniform(cfg.levels, cfg.range_lo, cfg.range_hi);
    const Quantizer q_normal =
        lloyd_max(Distribution::normal(0, 1), cfg.levels, cfg.range_lo, cfg.range_hi).quantizer;

    std::vector<Table2Row> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double err_n = 0.0, err_u = 0.0, energy = 0.0;
        monte_carlo(rows[r].dist, cfg.seed, r, cfg.n_samples, [&](double x) {
            const double en = x - q_normal.quantize(x);
            const double eu = x - q_uniform.quantize(x);
            err_n += en * en;
            err_u += eu * eu;
            energy += x * x;
        });
        Table2Row row;
        row.family = rows[r].family;
        row.param1 = rows[r].p1;
        row.param2 = rows[r].p2;
        row.measured_qn_db = to_db(err_n / energy);
        row.measured_qu_db = to_db(err_u / energy);
        row.ref_qn_db = rows[r].ref_qn;
        row.ref_qu_db = rows[r].ref_qu;
        out.push_back(row);
    }
    return out;
}

void cmd_table2(const ExperimentConfig& cfg) {
    const auto rows = run_table2(cfg);
    auto csv = open_out(cfg, "table2.csv");
    csv << "distribution,param1,param2,quantizer,measured_db,reference_db,delta_db\n";
    for (const auto& r : rows) {
        csv << r.family << ',' << fmt_full(r.param1) << ',' << fmt_full(r.param2)
            << ",Q_N," << fmt_db(r.measured_qn_db) << ',' << fmt_db(r.ref_qn_db)
            << ',' << fmt_db(r.measured_qn_db - r.ref_qn_db) << '\n';
        csv << r.family << ',' << fmt_full(r.param1) << ',' << fmt_full(r.param2)
            << ",Q_U," << fmt_db(r.measured_qu_db) << ',' << fmt_db(r.ref_qu_db)
            << ',' << fmt_db(r.measured_qu_db - r.ref_qu_db) << '\n';
    }

    json rep;
    rep["config"] = config_json(cfg);
    rep["rows"] = json::array();
    for (const auto& r : rows) {
        rep["rows"].push_back({{"distribution", r.family},
                               {"param1", r.param1},
                               {"param2", r.param2},
                               {"measured_qn_db", r.measured_qn_db},
                               {"measured_qu_db", r.measured_qu_db},
                               {"reference_qn_db", r.ref_qn_db},
                               {"reference_qu_db", r.ref_qu_db}});
    }
    auto js = open_out(cfg, "table2.json");
    js << rep.dump(2) << '\n';
}

void cmd_fold_pdf(const ExperimentConfig& cfg) {
    cfg.validate();
    const Distribution base = Distribution::normal(0, 1);
    auto csv = open_out(cfg, "fold_pdf.csv");
    csv << "a,theta,density\n";
    const double lam = cfg.lambda;
    const int n = cfg.theta_points;
    for (double a : cfg.a_grid) {
        FoldedDistribution fd(base, FoldParams{a, lam});
        for (int j = 0; j < n; ++j) {
            const double theta = -lam + 2.0 * lam * j / n;
            csv << fmt_full(a) << ',' << fmt_full(theta) << ','
                << fmt_full(fd.pdf(theta)) << '\n';
        }
    }
}

void cmd_w1_heatmap(const ExperimentConfig& cfg) {
    cfg.validate();
    const double lam = cfg.lambda;
    {
        auto csv = open_out(cfg, "w1_sigma_a.csv");
        csv << "sigma,a,w1\n";
        for (double sigma : cfg.sigma_grid)
            for (double a : cfg.a_grid)
                csv << fmt_full(sigma) << ',' << fmt_full(a) << ','
                    << fmt_full(w1_folded_to_uniform(Distribution::normal(0, sigma),
                                                     FoldParams{a, lam}))
                    << '\n';
    }
    {
        auto csv = open_out(cfg, "w1_mu_a.csv");
        csv << "mu,a,w1\n";
        for (double mu : cfg.mu_grid)
            for (double a : cfg.a_grid)
                csv << fmt_full(mu) << ',' << fmt_full(a) << ','
                    << fmt_full(w1_folded_to_uniform(Distribution::normal(mu, 1),
                                                     FoldParams{a, lam}))
                    << '\n';
    }
}

void cmd_pipeline(const ExperimentConfig& cfg) {
    cfg.validate();
    json rep;
    rep["config"] = config_json(cfg);
    rep["runs"] = json::array();
    std::vector<double> folded_db, direct_db;
    int ok = 0;
    for (int s = 0; s < cfg.pipeline_seeds; ++s) {
        RngStream rng(cfg.seed, 0x70A0 + static_cast<std::uint64_t>(s));
        const BandlimitedSignal sig = generate_bandlimited(
            M_PI, static_cast<double>(cfg.anchors - 1),
            Distribution::normal(0, cfg.coeff_sigma), rng);
        json run{{"seed_index", s}};
        try {
            PipelineConfig pc;
            pc.fold = FoldParams{cfg.gain, cfg.lambda};
            pc.levels = cfg.levels;
            pc.oversampling = cfg.oversampling;
            pc.order = cfg.order;
            const PipelineReport r = run_pipeline(sig, pc);
            run["nmse_folded_db"] = to_db(r.nmse_folded_path);
            run["nmse_direct_db"] = to_db(r.nmse_direct_path);
            run["unfold_ok"] = true;
            folded_db.push_back(to_db(r.nmse_folded_path));
            direct_db.push_back(to_db(r.nmse_direct_path));
            ++ok;
        } catch (const UnfoldError& e) {
            run["unfold_ok"] = false;
            run["error"] = e.what();
        }
        rep["runs"].push_back(run);
    }
    auto stats = [](const std::vector<double>& v) {
        json j;
        if (v.empty()) return json{{"mean", nullptr}, {"stddev", nullptr}};
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double s2 = 0;
        for (double x : v) s2 += (x - m) * (x - m);
        return json{{"mean", m},
                    {"stddev", std::sqrt(s2 / static_cast<double>(v.size()))}};
    };
    rep["folded_path_db"] = stats(folded_db);
    rep["direct_path_db"] = stats(direct_db);
    rep["unfold_success_rate"] =
        static_cast<double>(ok) / static_cast<double>(cfg.pipeline_seeds);
    auto js = open_out(cfg, "pipeline.json");
    js << rep.dump(2) << '\n';
}

void cmd_lloyd(const ExperimentConfig& cfg, const Distribution& d) {
    cfg.validate();
    const LloydMaxResult res = lloyd_max(d, cfg.levels, cfg.range_lo, cfg.range_hi);
    auto csv = open_out(cfg, "lloyd.csv");
    csv << "cell,lower_boundary,upper_boundary,level\n";
    const auto& q = res.quantizer;
    for (int i = 0; i < q.n_levels(); ++i)
        csv << i << ',' << fmt_full(q.boundaries()[i]) << ','
            << fmt_full(q.boundaries()[i + 1]) << ',' << fmt_full(q.levels()[i]) << '\n';
    if (!res.converged)
        std::fprintf(stderr, "warning: lloyd_max did not converge in %d iterations\n",
                     res.iterations);
}

int cmd_wasserstein(const std::vector<std::string>& spec_x,
                    const std::vector<std::string>& spec_y, int order) {
    const Distribution x = parse_distribution(spec_x);
    const Distribution y = parse_distribution(spec_y);
    if (order != 1 && order != 2) throw std::domain_error("wasserstein: order must be 1 or 2");

    double numeric;
    if (order == 1)
        numeric = w1_numeric(make_cdf_curve(x), make_cdf_curve(y));
    else
        numeric = w2_numeric(x, y);
    std::printf("numeric_w%d = %.12g\n", order, numeric);

    if (order == 2) {
        bool have_closed = false;
        double closed = 0.0;
        std::string note;
        if (x.family() == DistFamily::Normal && y.family() == DistFamily::Normal) {
            closed = w2_gaussian(x.param1(), x.param2(), y.param1(), y.param2());
            note = "gaussian closed form";
            have_closed = true;
        } else if (x.family() == DistFamily::Exponential && y.family() == DistFamily::Exponential) {
            closed = w2_exponential(x.param1(), y.param1());
            note = "exponential pair closed form (quantile-integral derivation)";
            have_closed = true;
            // the widely reprinted tabulated value omits the sqrt(2) factor
            std::printf("tabulated_without_sqrt2 = %.12g  # flagged: differs from the integral\n",
                        std::abs(1.0 / x.param1() - 1.0 / y.param1()));
        } else {
            const Distribution* u = nullptr;
            const Distribution* e = nullptr;
            if (x.family() == DistFamily::Uniform && y.family() == DistFamily::Exponential) {
                u = &x; e = &y;
            } else if (y.family() == DistFamily::Uniform && x.family() == DistFamily::Exponential) {
                u = &y; e = &x;
            }
            if (u && e && u->param1() == 0.0) {
                closed = w2_uniform_exponential(u->param2(), e->param1());
                note = "uniform[0,C] vs exponential closed form";
                have_closed = true;
            }
        }
        if (have_closed) {
            std::printf("closed_form = %.12g  # %s\n", closed, note.c_str());
            std::printf("abs_difference = %.3g\n", std::abs(closed - numeric));
        } else {
            std::printf("closed_form = n/a\n");
        }
    }
    return 0;
}

}  // namespace baq::cli
