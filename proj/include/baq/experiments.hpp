#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "baq/distribution.hpp"
#include "baq/signal.hpp"

namespace baq::cli {

inline constexpr const char* kVersion = "0.1.0";

// Resolved settings for the experiment commands. Defaults reproduce the
// reference tables/figures; a flat key=value config file can override
// them, and command-line flags win over both.
struct ExperimentConfig {
    std::uint64_t seed = 20250824;
    std::size_t n_samples = 1'000'000;
    int levels = 256;
    double range_lo = -5.0;
    double range_hi = 5.0;
    double lambda = 1.0;
    std::vector<double> a_grid = {1, 2, 5, 10, 20, 50, 100};
    int theta_points = 400;
    std::vector<double> sigma_grid = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::vector<double> mu_grid = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0};
    // pipeline command
    int oversampling = 16;
    int order = 2;
    int pipeline_seeds = 20;
    double gain = 4.0;
    double coeff_sigma = 2.0;
    int anchors = 64;
    std::string out_dir = ".";

    void validate() const;
};

// key=value lines; '#' starts a comment. Unknown keys are rejected.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

struct Table2Row {
    std::string family;
    double param1 = 0.0;
    double param2 = 0.0;
    double measured_qn_db = 0.0;
    double measured_qu_db = 0.0;
    double ref_qn_db = 0.0;
    double ref_qu_db = 0.0;
};

// Monte Carlo NMSE for the twelve catalog rows under the N(0,1)-matched
// Lloyd-Max quantizer and the uniform quantizer. The exponential rows
// are parameterized by scale (mean), matching the reference table.
std::vector<Table2Row> run_table2(const ExperimentConfig& cfg);
void cmd_table2(const ExperimentConfig& cfg);

void cmd_fold_pdf(const ExperimentConfig& cfg);
void cmd_w1_heatmap(const ExperimentConfig& cfg);
void cmd_pipeline(const ExperimentConfig& cfg);
void cmd_lloyd(const ExperimentConfig& cfg, const Distribution& d);

// Two distribution specs such as {"normal","0","1"}; prints the closed
// form (when one exists), the numeric value, and their difference.
int cmd_wasserstein(const std::vector<std::string>& spec_x,
                    const std::vector<std::string>& spec_y, int order);

Distribution parse_distribution(const std::vector<std::string>& spec);

}  // namespace baq::cli
