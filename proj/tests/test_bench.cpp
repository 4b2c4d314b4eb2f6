#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "pudsim/bench.hpp"

using namespace pudsim;

namespace {

RunConfig small_config() {
    RunConfig cfg;
    cfg.n_rows = 300;  // keep geometry validation quiet
    cfg.n_cols = 256;
    cfg.ecr_trials = 256;
    cfg.calib_iterations = 8;
    // keep the full 512 samples: the 0.05 bias threshold is calibrated
    // against the binomial spread at that count, fewer samples make the
    // level walk thrash
    cfg.calib_samples = 512;
    cfg.seed = 42;
    cfg.threads = 2;
    return cfg;
}

SenseAmpProfile flat(int n_cols, double tau = 0.5) {
    return SenseAmpProfile(std::vector<double>(static_cast<size_t>(n_cols), tau));
}

}  // namespace

TEST_CASE("ideal thresholds measure a zero error-prone ratio") {
    SubarrayGeometry g;
    g.n_rows = 16;
    g.n_cols = 128;
    g.warn_unusual = false;
    Subarray sa(g, {0.0, 0.0, 1});
    Xoshiro256 rng(9);
    const EcrResult res =
        measure_ecr(sa, MajPlan::baseline_plan(), nullptr, flat(128), 512, rng);
    CHECK(res.ecr == 0.0);
    CHECK(res.error_free == 128);
}

TEST_CASE("one uncorrectable column out of one hundred gives 1%") {
    SubarrayGeometry g;
    g.n_rows = 16;
    g.n_cols = 100;
    g.warn_unusual = false;
    std::vector<double> tau(100, 0.5);
    tau[31] = 0.65;  // outside the graded ladder's reach
    const SenseAmpProfile profile{tau};

    Subarray sa(g, {0.0, 0.0, 1});
    const MajPlan plan = MajPlan::calibrated_plan();
    CalibParams params;
    params.seed = 5;
    const CalibrationTable table = calibrate(sa, plan, params, profile);
    Xoshiro256 rng(11);
    const EcrResult res = measure_ecr(sa, plan, &table, profile, 2048, rng);
    CHECK(res.ecr == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(res.error_flags[31] == 1);
}

TEST_CASE("throughput is linear in latency and column count") {
    LatencyModel lat;
    lat.t_row_copy_ns = 210;
    lat.t_frac_ns = 210;
    lat.t_simra_ns = 210;
    const OpCounts maj5{8, 3, 1};
    const double base = throughput_ops(4000, 8192, maj5, lat);
    LatencyModel doubled = lat;
    doubled.t_row_copy_ns *= 2;
    doubled.t_frac_ns *= 2;
    doubled.t_simra_ns *= 2;
    CHECK(throughput_ops(4000, 8192, maj5, doubled) == doctest::Approx(base / 2).epsilon(1e-12));
    CHECK(throughput_ops(8000, 8192, maj5, lat) == doctest::Approx(base * 2).epsilon(1e-12));
}

TEST_CASE("equal op costs make the throughput ratio the column ratio exactly") {
    LatencyModel lat;  // defaults
    const OpCounts cost{8, 3, 1};
    const long long a = 4375, b = 7841;
    const double ratio = throughput_ops(b, 8192, cost, lat) / throughput_ops(a, 8192, cost, lat);
    CHECK(std::abs(ratio - static_cast<double>(b) / static_cast<double>(a)) < 1e-9);
}

TEST_CASE("the fitted uniform timing lands on the reported scale") {
    // 53.4% error-free columns at hardware extrapolation with 210 ns
    // primitives: 0.534 * 65536 * 64 / (12 * 210 ns) = 0.89 TOPS
    LatencyModel lat;
    lat.t_row_copy_ns = 210;
    lat.t_frac_ns = 210;
    lat.t_simra_ns = 210;
    const long long efc = std::llround(0.534 * 8192);
    const double tops = throughput_ops(efc, 8192, {8, 3, 1}, lat) / 1e12;
    CHECK(tops == doctest::Approx(0.889).epsilon(0.005));
}

TEST_CASE("run_table1 with no variation reports zero errors on both arms") {
    RunConfig cfg = small_config();
    cfg.sigma_tau = 0.0;
    const auto [b, t] = run_table1(cfg);
    CHECK(b.ecr == 0.0);
    CHECK(t.ecr == 0.0);
    CHECK(b.error_free_cols == cfg.n_cols);
    CHECK(t.error_free_cols == cfg.n_cols);
    CHECK(b.tput_maj5_ops == doctest::Approx(t.tput_maj5_ops).epsilon(1e-12));
}

TEST_CASE("run_table1 is reproducible under seed, including the serialized rows") {
    const RunConfig cfg = small_config();
    const auto [b1, t1] = run_table1(cfg);
    const auto [b2, t2] = run_table1(cfg);
    CHECK(csv_row(b1) == csv_row(b2));
    CHECK(csv_row(t1) == csv_row(t2));
    RunConfig other = cfg;
    other.seed = 43;
    const auto [b3, t3] = run_table1(other);
    CHECK(csv_row(t1) != csv_row(t3));
}

TEST_CASE("calibration pays off under default variation even at desk scale") {
    RunConfig cfg = small_config();
    cfg.n_cols = 1024;
    cfg.ecr_trials = 1024;
    cfg.calib_iterations = 20;
    cfg.calib_samples = 512;
    const auto [b, t] = run_table1(cfg);
    CHECK(t.ecr < b.ecr);
    CHECK(t.tput_maj5_ops > b.tput_maj5_ops);
}

TEST_CASE("sweep emits one row per configuration") {
    RunConfig cfg = small_config();
    const std::vector<FracConfig> configs = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {2, 1, 0}, {3, 2, 1}};
    const auto reports = sweep_frac(cfg, configs);
    REQUIRE(reports.size() == 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(reports[i].frac == configs[i]);
        CHECK(reports[i].method == "calibrated");
    }
    // sweeps are reproducible regardless of worker threading
    RunConfig serial = cfg;
    serial.threads = 1;
    const auto again = sweep_frac(serial, configs);
    for (size_t i = 0; i < 5; ++i) CHECK(csv_row(reports[i]) == csv_row(again[i]));
}

TEST_CASE("zero drift with replayed noise keeps every flag") {
    RunConfig cfg = small_config();
    cfg.drift.kappa_temp = 0.0;
    cfg.drift.sigma_temp = 0.0;
    cfg.drift.sigma_time = 0.0;
    cfg.drift_fresh_noise = false;
    const std::vector<double> temps = {cfg.drift.t_cal_c, 85.0};
    const std::vector<double> days = {6.0};
    const auto rows = run_drift(cfg, temps, days);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(row.report.new_error_prone == 0.0);
}

TEST_CASE("drift conditions carry their coordinates into the CSV") {
    RunConfig cfg = small_config();
    cfg.ecr_trials = 128;
    cfg.calib_iterations = 4;
    const auto rows = run_drift(cfg, std::vector<double>{40.0}, std::vector<double>{2.5});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].condition.temperature_c == 40.0);
    CHECK(rows[0].condition.elapsed_days == 0.0);
    CHECK(rows[1].condition.temperature_c == cfg.drift.t_cal_c);
    CHECK(rows[1].condition.elapsed_days == 2.5);
    const std::string line = csv_row(rows[0]);
    CHECK(line.find(",40,") != std::string::npos);
}

TEST_CASE("csv schema is pinned") {
    CHECK(csv_header(false) ==
          "method,frac_x,frac_y,frac_z,sigma_tau,sigma_sense,seed,n_cols,n_trials,ecr,"
          "error_free_cols,new_error_prone,tput_maj5_ops,tput_add8_ops,tput_mul8_ops,"
          "capacity_overhead");
    CHECK(csv_header(true) == csv_header(false) + ",temperature_c,elapsed_days");
    ExperimentReport r;
    r.method = "baseline";
    r.frac = {3, 0, 0};
    r.sigma_tau = 0.04;
    r.sigma_sense = 0.0003;
    r.seed = 7;
    r.n_cols = 8192;
    r.n_trials = 8192;
    r.ecr = 0.466;
    r.error_free_cols = 4374;
    r.tput_maj5_ops = 8.9e11;
    r.capacity_overhead = 3.0 / 512;
    CHECK(csv_row(r) ==
          "baseline,3,0,0,0.04,0.0003,7,8192,8192,0.466,4374,0,8.9e+11,0,0,0.005859375");
}

TEST_CASE("the reserved rows round to the advertised overhead") {
    CHECK(capacity_overhead(512) == doctest::Approx(0.0058594).epsilon(1e-4));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.1f", 100.0 * capacity_overhead(512));
    CHECK(std::string(buf) == "0.6");
}

TEST_CASE("config validation") {
    RunConfig cfg = small_config();
    cfg.ecr_trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.sigma_sense = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.latency.t_frac_ns = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
