#include <cstdio>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "baq/errors.hpp"
#include "baq/experiments.hpp"

namespace {

using baq::cli::ExperimentConfig;

void add_common_flags(CLI::App* app, ExperimentConfig& cfg, std::string& config_path) {
    app->add_option("--config", config_path, "flat key=value config file");
    app->add_option("--seed", cfg.seed, "master RNG seed");
    app->add_option("--n", cfg.n_samples, "Monte Carlo sample count");
    app->add_option("--levels", cfg.levels, "quantizer levels");
    app->add_option("--range", [&cfg](const std::vector<std::string>& v) {
        cfg.range_lo = std::stod(v[0]);
        cfg.range_hi = std::stod(v[1]);
        return true;
    }, "quantizer range: LO HI")->expected(2);
    app->add_option("--lambda", cfg.lambda, "folding half-range");
    app->add_option("--a-grid", cfg.a_grid, "gain grid");
    app->add_option("--out", cfg.out_dir, "output directory");
}

// Config-file values override the built-in defaults; flags given on the
// command line then override the file. CLI11 already stored flag values
// into cfg, so replay them after the file load.
void finalize(CLI::App* app, ExperimentConfig& cfg, const std::string& config_path) {
    if (config_path.empty()) return;
    ExperimentConfig flagged = cfg;
    ExperimentConfig fresh;
    baq::cli::load_config_file(fresh, config_path);
    cfg = fresh;
    auto keep = [&](const char* name, auto member) {
        if (app->count(name) > 0) cfg.*member = flagged.*member;
    };
    keep("--seed", &ExperimentConfig::seed);
    keep("--n", &ExperimentConfig::n_samples);
    keep("--levels", &ExperimentConfig::levels);
    keep("--lambda", &ExperimentConfig::lambda);
    keep("--a-grid", &ExperimentConfig::a_grid);
    keep("--out", &ExperimentConfig::out_dir);
    if (app->count("--range") > 0) {
        cfg.range_lo = flagged.range_lo;
        cfg.range_hi = flagged.range_hi;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind-adaptive quantization experiments"};
    app.set_version_flag("--version", baq::cli::kVersion);
    app.require_subcommand(1);

    ExperimentConfig cfg;
    if (const char* env = std::getenv("BAQ_OUT_DIR")) cfg.out_dir = env;
    std::string config_path;

    auto* table2 = app.add_subcommand("table2", "catalog NMSE table");
    add_common_flags(table2, cfg, config_path);

    auto* fold_pdf = app.add_subcommand("fold-pdf", "folded density profiles over the gain grid");
    add_common_flags(fold_pdf, cfg, config_path);
    fold_pdf->add_option("--theta-points", cfg.theta_points, "grid resolution");

    auto* heatmap = app.add_subcommand("w1-heatmap", "W1 distance to uniform over parameter grids");
    add_common_flags(heatmap, cfg, config_path);
    heatmap->add_option("--sigma-grid", cfg.sigma_grid, "stddev grid");
    heatmap->add_option("--mu-grid", cfg.mu_grid, "mean grid");

    auto* pipeline = app.add_subcommand("pipeline", "fold/quantize/unfold signal experiment");
    add_common_flags(pipeline, cfg, config_path);
    pipeline->add_option("--oversampling", cfg.oversampling, "samples per Nyquist interval");
    pipeline->add_option("--order", cfg.order, "unfolding difference order");
    pipeline->add_option("--runs", cfg.pipeline_seeds, "number of random signals");
    pipeline->add_option("--gain", cfg.gain, "amplifier gain");
    pipeline->add_option("--coeff-sigma", cfg.coeff_sigma, "anchor amplitude stddev");
    pipeline->add_option("--anchors", cfg.anchors, "Nyquist anchors per signal");

    auto* lloyd = app.add_subcommand("lloyd", "Lloyd-Max quantizer design");
    add_common_flags(lloyd, cfg, config_path);
    std::vector<std::string> lloyd_dist = {"normal", "0", "1"};
    lloyd->add_option("--dist", lloyd_dist,
                      "family + parameters, e.g. normal 0 1 | uniform -1 1 | exp 1 | lognormal 0 1")
        ->expected(2, 3);

    auto* wass = app.add_subcommand("wasserstein", "distance between two catalog distributions");
    std::vector<std::string> spec_x, spec_y;
    int w_order = 2;
    wass->add_option("--x", spec_x, "first distribution spec")->expected(2, 3)->required();
    wass->add_option("--y", spec_y, "second distribution spec")->expected(2, 3)->required();
    wass->add_option("--order", w_order, "1 or 2");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(table2)) {
            finalize(table2, cfg, config_path);
            baq::cli::cmd_table2(cfg);
        } else if (app.got_subcommand(fold_pdf)) {
            finalize(fold_pdf, cfg, config_path);
            baq::cli::cmd_fold_pdf(cfg);
        } else if (app.got_subcommand(heatmap)) {
            finalize(heatmap, cfg, config_path);
            baq::cli::cmd_w1_heatmap(cfg);
        } else if (app.got_subcommand(pipeline)) {
            finalize(pipeline, cfg, config_path);
            baq::cli::cmd_pipeline(cfg);
        } else if (app.got_subcommand(lloyd)) {
            finalize(lloyd, cfg, config_path);
            baq::cli::cmd_lloyd(cfg, baq::cli::parse_distribution(lloyd_dist));
        } else if (app.got_subcommand(wass)) {
            return baq::cli::cmd_wasserstein(spec_x, spec_y, w_order);
        }
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const baq::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
