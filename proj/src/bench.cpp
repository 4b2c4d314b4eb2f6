#include "pudsim/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pudsim/kernels.hpp"

namespace pudsim {

namespace {

// Sub-stream tags hung off the run seed. Every consumer of randomness gets
// its own derived stream so arms and conditions stay independent and
// reproducible regardless of execution order.
enum SeedTag : uint64_t {
    kTagProfile = 1,
    kTagSenseNoise = 2,
    kTagTrialInputs = 3,
    kTagCalibration = 4,
    kTagDrift = 5,
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

MajPlan plan_for(const RunConfig& cfg, MajMode mode) {
    if (mode == MajMode::baseline) return MajPlan::baseline_plan(5, cfg.baseline_frac_x);
    return MajPlan::calibrated_plan(5, cfg.frac, cfg.contraction_f);
}

ExperimentReport base_report(const RunConfig& cfg, const MajPlan& plan, const char* method) {
    ExperimentReport r;
    r.method = method;
    r.frac = plan.frac;
    r.sigma_tau = cfg.sigma_tau;
    r.sigma_sense = cfg.sigma_sense;
    r.seed = cfg.seed;
    r.n_cols = cfg.n_cols;
    r.n_trials = cfg.ecr_trials;
    r.capacity_overhead = capacity_overhead(cfg.n_rows);
    return r;
}

void attach_throughput(ExperimentReport& r, const RunConfig& cfg, const MajPlan& plan) {
    r.tput_maj5_ops = throughput_ops(r.error_free_cols, cfg.n_cols,
                                     op_cost(ArithOp::maj5, plan), cfg.latency);
    r.tput_add8_ops = throughput_ops(r.error_free_cols, cfg.n_cols,
                                     op_cost(ArithOp::add8, plan), cfg.latency);
    r.tput_mul8_ops = throughput_ops(r.error_free_cols, cfg.n_cols,
                                     op_cost(ArithOp::mul8, plan), cfg.latency);
}

}  // namespace

void LatencyModel::validate() const {
    if (t_row_copy_ns <= 0.0 || t_frac_ns <= 0.0 || t_simra_ns <= 0.0)
        throw std::invalid_argument("latency model: primitive timings must be positive");
    if (banks_parallel <= 0 || channels <= 0 || cols_per_subarray_hw <= 0)
        throw std::invalid_argument("latency model: parallelism factors must be positive");
}

double throughput_ops(long long error_free_cols, long long n_cols_simulated,
                      const OpCounts& cost, const LatencyModel& latency) {
    latency.validate();
    if (n_cols_simulated <= 0)
        throw std::invalid_argument("throughput: n_cols_simulated must be positive");
    if (error_free_cols < 0) throw std::invalid_argument("throughput: negative column count");
    const double scale = static_cast<double>(latency.cols_per_subarray_hw) /
                         static_cast<double>(n_cols_simulated);
    const double cols = static_cast<double>(error_free_cols) * latency.banks_parallel *
                        latency.channels * scale;
    const double seconds = latency.op_latency_ns(cost) * 1e-9;
    return cols / seconds;
}

SubarrayGeometry RunConfig::geometry() const {
    SubarrayGeometry g;
    g.n_rows = n_rows;
    g.n_cols = n_cols;
    g.c_cell_ff = c_cell_ff;
    g.c_bitline_ff = c_bitline_ff;
    g.v_precharge = v_precharge;
    return g;
}

void RunConfig::validate() const {
    geometry().validate();
    latency.validate();
    frac.validate();
    if (sigma_tau < 0.0 || sigma_sense < 0.0 || sigma_cell < 0.0)
        throw std::invalid_argument("run config: sigmas must be non-negative");
    if (ecr_trials <= 0) throw std::invalid_argument("run config: ecr_trials must be positive");
    if (baseline_frac_x < 0 || baseline_frac_x > 10)
        throw std::invalid_argument("run config: baseline frac count must be in [0,10]");
    CalibParams cp{calib_iterations, calib_samples, bias_threshold, 0, bias_from_expected};
    cp.validate();
}

EcrResult measure_ecr(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
                      const SenseAmpProfile& profile, int n_trials, Xoshiro256& rng) {
    if (n_trials <= 0) throw std::invalid_argument("measure_ecr: n_trials must be positive");
    const size_t n = static_cast<size_t>(sa.n_cols());
    std::vector<std::vector<uint8_t>> inputs(static_cast<size_t>(plan.x),
                                             std::vector<uint8_t>(n));
    std::vector<uint8_t> out(n), truth(n), sums(n);
    EcrResult res;
    res.error_flags.assign(n, 0);

    const uint8_t* in_ptrs[5];
    for (int i = 0; i < plan.x; ++i) in_ptrs[i] = inputs[static_cast<size_t>(i)].data();
    const uint8_t majority_at = static_cast<uint8_t>(plan.x / 2 + 1);
    const auto& k = kernels::active();

    for (int t = 0; t < n_trials; ++t) {
        for (auto& row : inputs) rng.fill_bits(row.data(), n);
        exec_maj_into(sa, plan, inputs, table, profile, out.data());
        k.u8_sum_rows(in_ptrs, plan.x, n, sums.data());
        k.u8_ge(sums.data(), majority_at, n, truth.data());
        k.flag_mismatch(out.data(), truth.data(), n, res.error_flags.data());
    }

    long long prone = 0;
    for (uint8_t f : res.error_flags) prone += f;
    res.error_free = static_cast<long long>(n) - prone;
    res.ecr = static_cast<double>(prone) / static_cast<double>(n);
    return res;
}

std::pair<ExperimentReport, ExperimentReport> run_table1(const RunConfig& cfg) {
    cfg.validate();
    const SubarrayGeometry geom = cfg.geometry();
    const SenseAmpProfile profile =
        sample_profile(cfg.n_cols, cfg.sigma_tau, derive_seed(cfg.seed, kTagProfile));

    // baseline arm
    const MajPlan plan_b = plan_for(cfg, MajMode::baseline);
    ExperimentReport rep_b = base_report(cfg, plan_b, "baseline");
    {
        Subarray sa(geom, {cfg.sigma_sense, cfg.sigma_cell,
                           derive_seed(cfg.seed, kTagSenseNoise, 0)});
        Xoshiro256 rng(derive_seed(cfg.seed, kTagTrialInputs, 0));
        const EcrResult ecr = measure_ecr(sa, plan_b, nullptr, profile, cfg.ecr_trials, rng);
        rep_b.ecr = ecr.ecr;
        rep_b.error_free_cols = ecr.error_free;
        attach_throughput(rep_b, cfg, plan_b);
    }

    // calibrated arm
    const MajPlan plan_t = plan_for(cfg, MajMode::calibrated);
    ExperimentReport rep_t = base_report(cfg, plan_t, "calibrated");
    {
        Subarray sa(geom, {cfg.sigma_sense, cfg.sigma_cell,
                           derive_seed(cfg.seed, kTagSenseNoise, 1)});
        CalibParams params{cfg.calib_iterations, cfg.calib_samples, cfg.bias_threshold,
                           derive_seed(cfg.seed, kTagCalibration), cfg.bias_from_expected};
        const CalibrationTable table = calibrate(sa, plan_t, params, profile);
        Xoshiro256 rng(derive_seed(cfg.seed, kTagTrialInputs, 1));
        const EcrResult ecr = measure_ecr(sa, plan_t, &table, profile, cfg.ecr_trials, rng);
        rep_t.ecr = ecr.ecr;
        rep_t.error_free_cols = ecr.error_free;
        attach_throughput(rep_t, cfg, plan_t);
    }
    return {rep_b, rep_t};
}

std::vector<ExperimentReport> sweep_frac(const RunConfig& cfg,
                                         std::span<const FracConfig> configs) {
    cfg.validate();
    if (configs.empty()) throw std::invalid_argument("sweep_frac: no configurations given");
    const SubarrayGeometry geom = cfg.geometry();
    const SenseAmpProfile profile =
        sample_profile(cfg.n_cols, cfg.sigma_tau, derive_seed(cfg.seed, kTagProfile));

    std::vector<ExperimentReport> reports(configs.size());
    parallel_for(static_cast<int>(configs.size()), cfg.threads, [&](int i) {
        RunConfig local = cfg;
        local.frac = configs[static_cast<size_t>(i)];
        const MajPlan plan = plan_for(local, MajMode::calibrated);
        ExperimentReport rep = base_report(local, plan, "calibrated");

        Subarray sa(geom, {cfg.sigma_sense, cfg.sigma_cell,
                           derive_seed(cfg.seed, kTagSenseNoise, 10 + i)});
        CalibParams params{cfg.calib_iterations, cfg.calib_samples, cfg.bias_threshold,
                           derive_seed(cfg.seed, kTagCalibration, static_cast<uint64_t>(i)),
                           cfg.bias_from_expected};
        const CalibrationTable table = calibrate(sa, plan, params, profile);
        Xoshiro256 rng(derive_seed(cfg.seed, kTagTrialInputs, 10 + i));
        const EcrResult ecr = measure_ecr(sa, plan, &table, profile, cfg.ecr_trials, rng);
        rep.ecr = ecr.ecr;
        rep.error_free_cols = ecr.error_free;
        attach_throughput(rep, local, plan);
        reports[static_cast<size_t>(i)] = std::move(rep);
    });
    return reports;
}

std::vector<DriftRow> run_drift(const RunConfig& cfg, std::span<const double> temperatures_c,
                                std::span<const double> days) {
    cfg.validate();
    const SubarrayGeometry geom = cfg.geometry();
    const SenseAmpProfile profile =
        sample_profile(cfg.n_cols, cfg.sigma_tau, derive_seed(cfg.seed, kTagProfile));

    const MajPlan plan = plan_for(cfg, MajMode::calibrated);
    const uint64_t cal_noise_seed = derive_seed(cfg.seed, kTagSenseNoise, 1);

    Subarray sa(geom, {cfg.sigma_sense, cfg.sigma_cell, cal_noise_seed});
    CalibParams params{cfg.calib_iterations, cfg.calib_samples, cfg.bias_threshold,
                       derive_seed(cfg.seed, kTagCalibration), cfg.bias_from_expected};
    const CalibrationTable table = calibrate(sa, plan, params, profile);

    // reference flags at calibration conditions
    sa.reseed_noise(derive_seed(cfg.seed, kTagSenseNoise, 2));
    Xoshiro256 ref_rng(derive_seed(cfg.seed, kTagTrialInputs, 2));
    const EcrResult ref = measure_ecr(sa, plan, &table, profile, cfg.ecr_trials, ref_rng);

    std::vector<DriftCondition> conditions;
    for (double t : temperatures_c) conditions.push_back({t, 0.0});
    for (double d : days) conditions.push_back({cfg.drift.t_cal_c, d});
    if (conditions.empty()) throw std::invalid_argument("run_drift: no conditions given");

    std::vector<DriftRow> rows(conditions.size());
    const size_t n = static_cast<size_t>(cfg.n_cols);
    for (size_t k = 0; k < conditions.size(); ++k) {
        DriftConfig drift = cfg.drift;
        drift.seed = derive_seed(cfg.seed, kTagDrift, k);
        const SenseAmpProfile drifted =
            drift_profile(profile, drift, conditions[k].temperature_c, conditions[k].elapsed_days);

        // fresh noise mirrors re-running the measurement later; the fixed
        // policy replays the reference streams exactly
        const uint64_t noise_seed = cfg.drift_fresh_noise
                                        ? derive_seed(cfg.seed, kTagSenseNoise, 100 + k)
                                        : derive_seed(cfg.seed, kTagSenseNoise, 2);
        const uint64_t input_seed = cfg.drift_fresh_noise
                                        ? derive_seed(cfg.seed, kTagTrialInputs, 100 + k)
                                        : derive_seed(cfg.seed, kTagTrialInputs, 2);
        sa.reseed_noise(noise_seed);
        Xoshiro256 rng(input_seed);
        const EcrResult post = measure_ecr(sa, plan, &table, drifted, cfg.ecr_trials, rng);

        long long newly_prone = 0;
        for (size_t c = 0; c < n; ++c)
            if (!ref.error_flags[c] && post.error_flags[c]) ++newly_prone;

        ExperimentReport rep = base_report(cfg, plan, "calibrated");
        rep.ecr = post.ecr;
        rep.error_free_cols = post.error_free;
        rep.new_error_prone = static_cast<double>(newly_prone) / static_cast<double>(n);
        attach_throughput(rep, cfg, plan);
        rows[k] = {std::move(rep), conditions[k]};
    }
    return rows;
}

double capacity_overhead(int n_rows) {
    if (n_rows <= 0) throw std::invalid_argument("capacity_overhead: n_rows must be positive");
    return 3.0 / static_cast<double>(n_rows);
}

std::string csv_header(bool drift_columns) {
    std::string h =
        "method,frac_x,frac_y,frac_z,sigma_tau,sigma_sense,seed,n_cols,n_trials,ecr,"
        "error_free_cols,new_error_prone,tput_maj5_ops,tput_add8_ops,tput_mul8_ops,"
        "capacity_overhead";
    if (drift_columns) h += ",temperature_c,elapsed_days";
    return h;
}

std::string csv_row(const ExperimentReport& r) {
    std::string out = r.method;
    out += ',' + std::to_string(r.frac.x) + ',' + std::to_string(r.frac.y) + ',' +
           std::to_string(r.frac.z);
    out += ',' + fmt_double(r.sigma_tau) + ',' + fmt_double(r.sigma_sense);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.n_cols) + ',' + std::to_string(r.n_trials);
    out += ',' + fmt_double(r.ecr) + ',' + std::to_string(r.error_free_cols);
    out += ',' + fmt_double(r.new_error_prone);
    out += ',' + fmt_double(r.tput_maj5_ops) + ',' + fmt_double(r.tput_add8_ops) + ',' +
           fmt_double(r.tput_mul8_ops);
    out += ',' + fmt_double(r.capacity_overhead);
    return out;
}

std::string csv_row(const DriftRow& row) {
    return csv_row(row.report) + ',' + fmt_double(row.condition.temperature_c) + ',' +
           fmt_double(row.condition.elapsed_days);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    int workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    workers = std::min(workers, n);
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pudsim
