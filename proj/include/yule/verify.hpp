#pragma once

#include "yule/sim.hpp"
#include "yule/statistics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace yule {

// Monte Carlo check of every registry statistic against its closed form.
// Reports are fully deterministic functions of (grid, replicates, seed):
// thread count never changes a byte of output.

std::vector<int> default_grid();
inline constexpr long kDefaultReplicatesSmall = 200000; // n <= 100
inline constexpr long kDefaultReplicatesLarge = 20000;  // n > 100

struct ExperimentConfig {
    std::vector<int> grid = default_grid();
    long replicates_small = kDefaultReplicatesSmall;
    long replicates_large = kDefaultReplicatesLarge;
    long replicates_override = 0; // > 0 forces one count for every n
    std::uint64_t seed = 1;
    double z_threshold = 4.0;
    int threads = 0; // 0 = all available
};

long replicates_for(const ExperimentConfig& config, int n);

enum class RowStatus { pass, fail, skipped };

struct VerificationRow {
    int n = 0;
    StatisticId id{};
    std::optional<double> theory;    // empty when undefined at this n
    std::optional<double> estimate;  // empty when the estimator degenerates
    std::optional<double> std_error;
    std::optional<double> z;
    long replicates = 0;
    std::uint64_t seed = 0;
    RowStatus status = RowStatus::skipped;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<VerificationRow> rows;
};

struct EstimatorResult {
    bool defined = false;
    double estimate = 0.0;
    double std_error = 0.0;
};

// Point estimate and standard error for one statistic from the replicate
// triples.  Means carry the classical standard error; variances,
// covariances and correlations carry a delete-1 jackknife standard error.
EstimatorResult estimate_statistic(StatisticId id,
                                   std::span<const ReplicateSample> samples);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Fraction of non-skipped rows that pass; 1.0 when nothing is checkable.
double pass_fraction(const ExperimentReport& report);

std::string render_csv(const ExperimentReport& report);
std::string render_json(const ExperimentReport& report);
// Gnuplot script reading the CSV (filters rows by statistic name).
std::string render_plot_script(const std::string& csv_name);

// JSON Schema the render_json output conforms to.
std::string_view report_schema();

} // namespace yule
