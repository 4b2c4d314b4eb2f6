// pudsim — charge-level simulator for majority-based processing-using-DRAM,
// with per-column sense-amplifier offset calibration and an experiment
// harness (error-prone-column measurement, throughput model, drift studies).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pudsim/bench.hpp"
#include "pudsim/kernels.hpp"

namespace {

using namespace pudsim;

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

FracConfig parse_frac(const std::string& text) {
    const std::vector<double> v = parse_double_list(text);
    if (v.size() != 3) throw CLI::ValidationError("--frac", "expected three counts: x,y,z");
    FracConfig f{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
    f.validate();
    return f;
}

std::vector<FracConfig> parse_frac_list(const std::string& text) {
    std::vector<FracConfig> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_frac(item));
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

struct CliOptions {
    RunConfig cfg;
    std::string frac_text = "2,1,0";
    std::string out_path;
    std::string table_path;
    std::string kernels = "auto";
    std::string method = "calibrated";
    std::string sweep_text = "0,0,0;1,1,1;2,2,2;2,1,0;3,2,1";
    std::string temps_text = "40,50,60,70,80,90,100";
    std::string days_text = "1,2,3,4,5,6,7";
};

void add_shared_options(CLI::App& app, CliOptions& opt) {
    app.add_option("--seed", opt.cfg.seed, "Master seed; all randomness derives from it");
    app.add_option("--cols", opt.cfg.n_cols, "Columns per simulated subarray");
    app.add_option("--rows", opt.cfg.n_rows, "Rows per simulated subarray");
    app.add_option("--sigma-tau", opt.cfg.sigma_tau,
                   "Std-dev of per-column sense threshold variation (V_DD units)");
    app.add_option("--sigma-sense", opt.cfg.sigma_sense,
                   "Std-dev of per-sensing-event noise (V_DD units)");
    app.add_option("--sigma-cell", opt.cfg.sigma_cell, "Std-dev of cell write noise");
    app.add_option("--frac", opt.frac_text, "Frac counts for the calibration rows: x,y,z");
    app.add_option("--contraction-f", opt.cfg.contraction_f,
                   "Charge contraction factor per Frac application");
    app.add_option("--baseline-frac-x", opt.cfg.baseline_frac_x,
                   "Frac count for the baseline neutral row");
    app.add_option("--trials", opt.cfg.ecr_trials, "Random inputs per error measurement");
    app.add_option("--iterations", opt.cfg.calib_iterations, "Calibration iterations");
    app.add_option("--samples", opt.cfg.calib_samples, "Samples per calibration iteration");
    app.add_option("--bias-threshold", opt.cfg.bias_threshold,
                   "Bias magnitude that triggers a level update");
    app.add_flag("--bias-from-expected", opt.cfg.bias_from_expected,
                 "Measure bias against the expected output proportion instead of 0.5");
    app.add_option("--t-row-copy", opt.cfg.latency.t_row_copy_ns, "RowCopy latency, ns");
    app.add_option("--t-frac", opt.cfg.latency.t_frac_ns, "Frac latency, ns");
    app.add_option("--t-simra", opt.cfg.latency.t_simra_ns, "Multi-row activation latency, ns");
    app.add_option("--banks", opt.cfg.latency.banks_parallel, "Bank-parallel factor");
    app.add_option("--channels", opt.cfg.latency.channels, "Channel count");
    app.add_option("--hw-cols", opt.cfg.latency.cols_per_subarray_hw,
                   "Hardware columns per subarray for throughput extrapolation");
    app.add_option("--kappa-temp", opt.cfg.drift.kappa_temp,
                   "Systematic threshold shift per degC");
    app.add_option("--sigma-temp", opt.cfg.drift.sigma_temp,
                   "Random threshold drift per degC of |dT|");
    app.add_option("--sigma-time", opt.cfg.drift.sigma_time, "Random threshold drift per day");
    app.add_option("--t-cal", opt.cfg.drift.t_cal_c, "Calibration temperature, degC");
    app.add_option("--threads", opt.cfg.threads, "Worker threads (0 = auto)");
    app.add_option("--out", opt.out_path, "Write CSV to this file instead of stdout");
    app.add_option("--table", opt.table_path, "Calibration table file");
    app.add_option("--kernels", opt.kernels, "Kernel backend: auto, scalar or avx2");
}

int cmd_ladder(const CliOptions& opt) {
    const OffsetLadder ladder = enumerate_ladder(parse_frac(opt.frac_text),
                                                 opt.cfg.contraction_f);
    std::string out;
    for (int i = 0; i < ladder.size(); ++i) {
        const LadderEntry& e = ladder.entries[static_cast<size_t>(i)];
        char buf[96];
        std::snprintf(buf, sizeof(buf), "level %d: offset %+.6f pattern %d%d%d\n", i, e.offset,
                      e.pattern[0], e.pattern[1], e.pattern[2]);
        out += buf;
    }
    const CorrectableRange range =
        correctable_range(ladder, opt.cfg.geometry(), 5);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "correctable range: (%.4f, %.4f) %s\n", range.tau_min,
                  range.tau_max, range.contiguous ? "contiguous" : "with gaps");
    out += buf;
    write_output(opt.out_path, out);
    return 0;
}

int cmd_calibrate(const CliOptions& opt) {
    if (opt.table_path.empty())
        throw std::runtime_error("calibrate: --table <output file> is required");
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.validate();

    const SenseAmpProfile profile =
        sample_profile(cfg.n_cols, cfg.sigma_tau, derive_seed(cfg.seed, 1));
    Subarray sa(cfg.geometry(),
                {cfg.sigma_sense, cfg.sigma_cell, derive_seed(cfg.seed, 2, 1)});
    const MajPlan plan = MajPlan::calibrated_plan(5, cfg.frac, cfg.contraction_f);
    CalibParams params{cfg.calib_iterations, cfg.calib_samples, cfg.bias_threshold,
                       derive_seed(cfg.seed, 4), cfg.bias_from_expected};
    const CalibrationTable table = calibrate(sa, plan, params, profile);
    save_table(table, opt.table_path);
    std::cerr << "calibrated " << cfg.n_cols << " columns ("
              << table.ladder().size() << "-level ladder) -> " << opt.table_path << "\n";
    return 0;
}

int cmd_ecr(const CliOptions& opt) {
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.validate();
    if (opt.method != "baseline" && opt.method != "calibrated")
        throw std::runtime_error("ecr: --method must be baseline or calibrated");

    const SenseAmpProfile profile =
        sample_profile(cfg.n_cols, cfg.sigma_tau, derive_seed(cfg.seed, 1));
    const bool baseline = opt.method == "baseline";

    std::optional<CalibrationTable> table;
    MajPlan plan = baseline ? MajPlan::baseline_plan(5, cfg.baseline_frac_x)
                            : MajPlan::calibrated_plan(5, cfg.frac, cfg.contraction_f);
    if (!baseline) {
        if (opt.table_path.empty())
            throw std::runtime_error("ecr: calibrated method requires --table");
        table = load_table(opt.table_path, cfg.n_cols);
        plan.frac = table->ladder().frac;
        plan.contraction_f = table->ladder().contraction_f;
    }

    Subarray sa(cfg.geometry(), {cfg.sigma_sense, cfg.sigma_cell,
                                 derive_seed(cfg.seed, 2, baseline ? 0 : 1)});
    Xoshiro256 rng(derive_seed(cfg.seed, 3, baseline ? 0 : 1));
    const EcrResult res = measure_ecr(sa, plan, table ? &*table : nullptr, profile,
                                      cfg.ecr_trials, rng);

    ExperimentReport rep;
    rep.method = opt.method;
    rep.frac = plan.frac;
    rep.sigma_tau = cfg.sigma_tau;
    rep.sigma_sense = cfg.sigma_sense;
    rep.seed = cfg.seed;
    rep.n_cols = cfg.n_cols;
    rep.n_trials = cfg.ecr_trials;
    rep.ecr = res.ecr;
    rep.error_free_cols = res.error_free;
    rep.capacity_overhead = capacity_overhead(cfg.n_rows);
    rep.tput_maj5_ops =
        throughput_ops(res.error_free, cfg.n_cols, op_cost(ArithOp::maj5, plan), cfg.latency);
    rep.tput_add8_ops =
        throughput_ops(res.error_free, cfg.n_cols, op_cost(ArithOp::add8, plan), cfg.latency);
    rep.tput_mul8_ops =
        throughput_ops(res.error_free, cfg.n_cols, op_cost(ArithOp::mul8, plan), cfg.latency);

    write_output(opt.out_path, csv_header(false) + "\n" + csv_row(rep) + "\n");
    std::fprintf(stderr, "ecr %.6f (%lld of %d columns error-free)\n", res.ecr,
                 res.error_free, cfg.n_cols);
    return 0;
}

int cmd_throughput(const CliOptions& opt, long long error_free_cols) {
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.validate();
    if (error_free_cols < 0)
        throw std::runtime_error("throughput: --error-free-cols is required");
    const MajPlan plan = opt.method == "baseline"
                             ? MajPlan::baseline_plan(5, cfg.baseline_frac_x)
                             : MajPlan::calibrated_plan(5, cfg.frac, cfg.contraction_f);
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "maj5 %.6g ops/s\n",
                  throughput_ops(error_free_cols, cfg.n_cols, op_cost(ArithOp::maj5, plan),
                                 cfg.latency));
    out += buf;
    std::snprintf(buf, sizeof(buf), "add8 %.6g ops/s\n",
                  throughput_ops(error_free_cols, cfg.n_cols, op_cost(ArithOp::add8, plan),
                                 cfg.latency));
    out += buf;
    std::snprintf(buf, sizeof(buf), "mul8 %.6g ops/s\n",
                  throughput_ops(error_free_cols, cfg.n_cols, op_cost(ArithOp::mul8, plan),
                                 cfg.latency));
    out += buf;
    write_output(opt.out_path, out);
    return 0;
}

int cmd_table1(const CliOptions& opt) {
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.validate();
    const auto [baseline, calibrated] = run_table1(cfg);
    std::string csv = csv_header(false) + "\n" + csv_row(baseline) + "\n" +
                      csv_row(calibrated) + "\n";
    write_output(opt.out_path, csv);

    const double ratio = baseline.error_free_cols > 0
                             ? static_cast<double>(calibrated.error_free_cols) /
                                   static_cast<double>(baseline.error_free_cols)
                             : 0.0;
    std::fprintf(stderr,
                 "baseline   ecr %.4f  maj5 %.4g ops/s\n"
                 "calibrated ecr %.4f  maj5 %.4g ops/s\n"
                 "error-free improvement %.2fx, capacity overhead %.1f%%\n",
                 baseline.ecr, baseline.tput_maj5_ops, calibrated.ecr,
                 calibrated.tput_maj5_ops, ratio, 100.0 * baseline.capacity_overhead);
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.validate();
    const std::vector<FracConfig> configs = parse_frac_list(opt.sweep_text);
    const std::vector<ExperimentReport> reports = sweep_frac(cfg, configs);
    std::string csv = csv_header(false) + "\n";
    for (const auto& r : reports) csv += csv_row(r) + "\n";
    write_output(opt.out_path, csv);
    return 0;
}

int cmd_drift(const CliOptions& opt, bool fixed_noise) {
    RunConfig cfg = opt.cfg;
    cfg.frac = parse_frac(opt.frac_text);
    cfg.drift_fresh_noise = !fixed_noise;
    cfg.validate();
    const std::vector<double> temps = parse_double_list(opt.temps_text);
    const std::vector<double> days = parse_double_list(opt.days_text);
    const std::vector<DriftRow> rows = run_drift(cfg, temps, days);
    std::string csv = csv_header(true) + "\n";
    for (const auto& r : rows) csv += csv_row(r) + "\n";
    write_output(opt.out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"charge-level simulator for in-DRAM majority computing"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a key=value file");

    CliOptions opt;
    add_shared_options(app, opt);

    app.add_subcommand("ladder", "Print the offset ladder for a frac configuration");
    app.add_subcommand("calibrate", "Identify per-column calibration levels and save them");
    auto* ecr_cmd = app.add_subcommand("ecr", "Measure the error-prone column ratio");
    ecr_cmd->add_option("--method", opt.method, "baseline or calibrated");
    auto* tput_cmd = app.add_subcommand("throughput", "Compute ops/s from a column count");
    long long error_free_cols = -1;
    tput_cmd->add_option("--error-free-cols", error_free_cols, "Simulated error-free columns");
    tput_cmd->add_option("--method", opt.method, "baseline or calibrated");
    app.add_subcommand("table1", "Run baseline and calibrated arms end to end");
    auto* sweep_cmd = app.add_subcommand("sweep-frac", "Calibrate and measure each frac config");
    sweep_cmd->add_option("--sweep", opt.sweep_text, "Semicolon-separated frac configs");
    auto* drift_cmd = app.add_subcommand("drift", "Temperature and time drift study");
    drift_cmd->add_option("--temps", opt.temps_text, "Comma-separated temperatures, degC");
    drift_cmd->add_option("--days", opt.days_text, "Comma-separated elapsed days");
    bool fixed_noise = false;
    drift_cmd->add_flag("--fixed-noise", fixed_noise,
                        "Replay identical sensing noise when re-measuring");

    try {
        app.parse(argc, argv);
        kernels::select(opt.kernels);

        if (app.got_subcommand("ladder")) return cmd_ladder(opt);
        if (app.got_subcommand("calibrate")) return cmd_calibrate(opt);
        if (app.got_subcommand("ecr")) return cmd_ecr(opt);
        if (app.got_subcommand("throughput")) return cmd_throughput(opt, error_free_cols);
        if (app.got_subcommand("table1")) return cmd_table1(opt);
        if (app.got_subcommand("sweep-frac")) return cmd_sweep(opt);
        if (app.got_subcommand("drift")) return cmd_drift(opt, fixed_noise);
        throw std::runtime_error("no subcommand given");
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "pudsim: error: " << e.what() << "\n";
        return 1;
    }
}
