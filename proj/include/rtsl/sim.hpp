#pragma once

#include "rtsl/model.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rtsl {

struct SectorRecord {
    double l = 0.0;
    double x = 0.0;
    double p = 0.0;
    double zeta = 0.0;      // belief held when the decision is made
    double zeta_hat = 0.0;  // clamped belief used for labor demand
};

struct TrajectoryRecord {
    int t = 0;
    double w = 0.0;
    std::vector<SectorRecord> sectors;
    double gdp = 0.0;
    double labor_share = 0.0;
    double delta = 0.0;
    double l0 = 0.0;
    double residual = 0.0;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<double> terminal_zeta;  // belief after absorbing all T observations
    std::vector<double> pd_sum_zs, pd_sum_zz;  // final sufficient statistics
};

struct RunOptions {
    bool learning = true;  // false: beliefs fixed at zeta* (perfect knowledge)
    std::vector<double> fixed_beliefs;  // if non-empty, beliefs held at these values
};

// Thrown with the failing period when a period cannot be solved.
Trajectory run_trajectory(const EconomyConfig& config, std::uint64_t replication,
                          const RunOptions& options = {});

struct EnsembleStats {
    int reps = 0;
    std::vector<double> mean_abs_err;        // per sector, mean |zeta(T) - zeta*|
    std::vector<double> terminal_mean;       // per sector, mean zeta(T)
    std::vector<double> terminal_sd;         // per sector, sample sd of zeta(T)
    double labor_share_mean = 0.0;           // average of per-replication time means
    double labor_share_sd = 0.0;             // average of per-replication sample sds
    std::vector<std::vector<double>> band_mean;  // [sector][t]
    std::vector<std::vector<double>> band_lo;    // mean - 1.96 se
    std::vector<std::vector<double>> band_hi;    // mean + 1.96 se
};

// threads = 0 picks hardware concurrency. Results do not depend on threads.
EnsembleStats run_ensemble(const EconomyConfig& config, int reps, int threads = 0,
                           const RunOptions& options = {});

// ---- tabular output ----

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

std::string format_number(double v);  // shortest round-trip representation

Table trajectory_table(const Trajectory& tr, const std::string& name = "trajectory");
Table ensemble_table(const EnsembleStats& st, const EconomyConfig& config,
                     const std::string& name = "ensemble");
Table band_table(const EnsembleStats& st, const std::string& name = "zeta_band");

// ---- scenarios ----

// Single-sector economy of the illustrative examples: alpha = 0.5, m = 0,
// delta = 5/3 and l0 = delta/10, so l(t) = 1.5 every period.
EconomyConfig example_config(LearningMode mode, double tau, double sigma, double zeta_star,
                             double zeta0, int horizon);

struct TableCell {
    double tau = 0.0, sigma = 0.0, zeta_star = 0.0, zeta0 = 0.0;
    double expected_err = 0.0;   // |E[zeta(T)] - zeta*| from the mean-field closed form
    double expected_zeta = 0.0;
    double ensemble_mean = 0.0;  // mean zeta(T) over replications
    double ensemble_se = 0.0;
    double mean_abs_err = 0.0;   // mean |zeta(T) - zeta*| over replications
    int reps = 0;
};

TableCell error_table_cell(LearningMode mode, double tau, double sigma, double zeta_star,
                           double zeta0, int horizon, int reps, std::uint64_t seed, int threads);

struct LaborShareSummary {
    double mean = 0.0;
    double sd = 0.0;
    std::vector<double> pooled;  // every period of every replication
};

LaborShareSummary labor_share_summary(const EconomyConfig& config, int reps, int threads,
                                      const RunOptions& options = {});

struct ScenarioOptions {
    std::uint64_t seed = 1;
    int reps = 100;
    int threads = 0;
    int horizon = 0;  // 0 keeps the preset horizon
};

struct ScenarioResult {
    std::string name;
    std::vector<Table> tables;
    std::string summary_json;  // preset parameters and headline numbers
};

const std::vector<std::string>& scenario_names();
ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& options);

}  // namespace rtsl
