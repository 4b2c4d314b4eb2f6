#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pudsim/arith.hpp"
#include "pudsim/calibration.hpp"
#include "pudsim/executor.hpp"
#include "pudsim/variation.hpp"

namespace pudsim {

// Latency per primitive, fitted so an 8-copy / 3-frac / 1-activation
// majority takes 2520 ns end to end under power-constrained bank
// parallelism. Copies and activations are double-activation sequences and
// carry equal weight; a Frac is a single truncated activation and is
// proportionally cheaper.
struct LatencyModel {
    double t_row_copy_ns = 275.0;
    double t_frac_ns = 15.0;
    double t_simra_ns = 275.0;
    int banks_parallel = 16;
    int channels = 4;
    long long cols_per_subarray_hw = 65536;

    void validate() const;
    double op_latency_ns(const OpCounts& cost) const {
        return static_cast<double>(cost.row_copies) * t_row_copy_ns +
               static_cast<double>(cost.fracs) * t_frac_ns +
               static_cast<double>(cost.simras) * t_simra_ns;
    }
};

// Ops/second at hardware scale: simulated error-free columns are scaled to
// the full hardware column count and fanned out across banks and channels
// (an extrapolation; the simulated error rate is applied uniformly).
double throughput_ops(long long error_free_cols, long long n_cols_simulated,
                      const OpCounts& cost, const LatencyModel& latency);

// One experiment configuration; mirrors the CLI flags.
struct RunConfig {
    int n_rows = 512;
    int n_cols = 8192;
    double c_cell_ff = 30.0;
    double c_bitline_ff = 270.0;
    double v_precharge = 0.5;

    double sigma_tau = 0.04;
    double sigma_sense = 0.00025;
    double sigma_cell = 0.0;
    uint64_t seed = 0;

    FracConfig frac = {2, 1, 0};
    double contraction_f = 0.5;
    int baseline_frac_x = 3;

    int calib_iterations = 20;
    int calib_samples = 512;
    double bias_threshold = 0.05;
    bool bias_from_expected = false;

    int ecr_trials = 8192;
    LatencyModel latency;
    DriftConfig drift;
    bool drift_fresh_noise = true;  // replay identical sensing noise when false
    int threads = 0;                // 0 = hardware concurrency

    SubarrayGeometry geometry() const;
    void validate() const;
};

struct EcrResult {
    double ecr = 0.0;
    long long error_free = 0;
    std::vector<uint8_t> error_flags;  // 1 = column mismatched ground truth at least once
};

// Runs n_trials majority operations on fresh uniform-random inputs and flags
// every column that ever disagrees with the boolean majority of its inputs.
EcrResult measure_ecr(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
                      const SenseAmpProfile& profile, int n_trials, Xoshiro256& rng);

struct ExperimentReport {
    std::string method;  // "baseline" or "calibrated"
    FracConfig frac;
    double sigma_tau = 0.0;
    double sigma_sense = 0.0;
    uint64_t seed = 0;
    int n_cols = 0;
    int n_trials = 0;
    double ecr = 0.0;
    long long error_free_cols = 0;
    double new_error_prone = 0.0;  // drift runs only
    double tput_maj5_ops = 0.0;
    double tput_add8_ops = 0.0;
    double tput_mul8_ops = 0.0;
    double capacity_overhead = 0.0;
};

// Full pipeline for one seed: sample the device profile, measure the
// baseline arm, calibrate and measure the compensated arm, attach
// throughput figures. Returns {baseline, calibrated}.
std::pair<ExperimentReport, ExperimentReport> run_table1(const RunConfig& cfg);

// Calibrate + measure once per Frac configuration.
std::vector<ExperimentReport> sweep_frac(const RunConfig& cfg,
                                         std::span<const FracConfig> configs);

struct DriftCondition {
    double temperature_c = 0.0;
    double elapsed_days = 0.0;
};

struct DriftRow {
    ExperimentReport report;
    DriftCondition condition;
};

// Calibrates once at reference conditions, then re-measures the drifted
// profile for every temperature (at day 0) and every elapsed time (at the
// reference temperature). new_error_prone counts columns that were
// error-free at calibration time but error-prone after the drift.
std::vector<DriftRow> run_drift(const RunConfig& cfg, std::span<const double> temperatures_c,
                                std::span<const double> days);

// CSV emission. Header order is part of the interface; drift reports append
// the condition columns after the fixed set.
std::string csv_header(bool drift_columns = false);
std::string csv_row(const ExperimentReport& report);
std::string csv_row(const DriftRow& row);

// Reserved calibration rows as a fraction of the subarray.
double capacity_overhead(int n_rows);

// Deterministic helper: run fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace pudsim
