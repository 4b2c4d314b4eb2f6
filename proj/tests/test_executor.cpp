#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "pudsim/calibration.hpp"
#include "pudsim/executor.hpp"

using namespace pudsim;

namespace {

SubarrayGeometry geom(int rows, int cols) {
    SubarrayGeometry g;
    g.n_rows = rows;
    g.n_cols = cols;
    g.warn_unusual = false;
    return g;
}

SenseAmpProfile flat(int n_cols, double tau = 0.5) {
    return SenseAmpProfile(std::vector<double>(static_cast<size_t>(n_cols), tau));
}

// x input rows whose column c spells the x-bit combination c
std::vector<std::vector<uint8_t>> exhaustive_inputs(int x) {
    const int n = 1 << x;
    std::vector<std::vector<uint8_t>> rows(static_cast<size_t>(x),
                                           std::vector<uint8_t>(static_cast<size_t>(n)));
    for (int i = 0; i < x; ++i)
        for (int c = 0; c < n; ++c)
            rows[static_cast<size_t>(i)][static_cast<size_t>(c)] =
                static_cast<uint8_t>((c >> i) & 1);
    return rows;
}

uint8_t boolean_majority(int combo, int x) {
    int ones = 0;
    for (int i = 0; i < x; ++i) ones += (combo >> i) & 1;
    return ones > x / 2 ? 1 : 0;
}

CalibrationTable mid_table(const MajPlan& plan, int n_cols) {
    return CalibrationTable(enumerate_ladder(plan.frac, plan.contraction_f), n_cols);
}

}  // namespace

TEST_CASE("exhaustive five-input majority matches the boolean oracle in both modes") {
    for (const bool calibrated : {false, true}) {
        const MajPlan plan = calibrated ? MajPlan::calibrated_plan() : MajPlan::baseline_plan();
        Subarray sa(geom(16, 32), {0.0, 0.0, 1});
        const CalibrationTable table = mid_table(MajPlan::calibrated_plan(), 32);
        const auto inputs = exhaustive_inputs(5);
        const auto out = exec_maj(sa, plan, inputs, calibrated ? &table : nullptr, flat(32));
        for (int c = 0; c < 32; ++c) CHECK(out[static_cast<size_t>(c)] == boolean_majority(c, 5));
    }
}

TEST_CASE("exhaustive three-input majority matches the boolean oracle in both modes") {
    for (const bool calibrated : {false, true}) {
        MajPlan plan = calibrated ? MajPlan::calibrated_plan(3) : MajPlan::baseline_plan(3);
        Subarray sa(geom(16, 8), {0.0, 0.0, 1});
        const CalibrationTable table = mid_table(MajPlan::calibrated_plan(3), 8);
        const auto inputs = exhaustive_inputs(3);
        const auto out = maj3(sa, plan, inputs, calibrated ? &table : nullptr, flat(8));
        for (int c = 0; c < 8; ++c) CHECK(out[static_cast<size_t>(c)] == boolean_majority(c, 3));
    }
}

TEST_CASE("a 5% deviated threshold breaks the near-tie majority in baseline mode") {
    // MAJ5(1,1,1,0,0) charge-shares to 0.5294 plus the small baseline
    // residue; tau = 0.55 senses it as 0
    Subarray sa(geom(16, 4), {0.0, 0.0, 1});
    const std::vector<std::vector<uint8_t>> inputs = {
        std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 1),
        std::vector<uint8_t>(4, 0), std::vector<uint8_t>(4, 0)};
    const auto out = exec_maj(sa, MajPlan::baseline_plan(), inputs, nullptr, flat(4, 0.55));
    for (uint8_t b : out) CHECK(b == 0);
}

TEST_CASE("the top ladder level rescues the same column") {
    // with the +0.875 pattern the bitline reaches (30*(3+1.5+0.875)+135)/510
    // = 0.5809 > 0.55
    const MajPlan plan = MajPlan::calibrated_plan();
    Subarray sa(geom(16, 4), {0.0, 0.0, 1});
    CalibrationTable table = mid_table(plan, 4);
    for (int c = 0; c < 4; ++c) table.set_level(c, table.ladder().size() - 1);
    CHECK(table.offset(0) == 0.875);
    const std::vector<std::vector<uint8_t>> inputs = {
        std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 1),
        std::vector<uint8_t>(4, 0), std::vector<uint8_t>(4, 0)};
    const auto out = exec_maj(sa, plan, inputs, &table, flat(4, 0.55));
    for (uint8_t b : out) CHECK(b == 1);
}

TEST_CASE("clear minorities stay 0 regardless of mode") {
    for (const bool calibrated : {false, true}) {
        const MajPlan plan = calibrated ? MajPlan::calibrated_plan() : MajPlan::baseline_plan();
        Subarray sa(geom(16, 4), {0.0, 0.0, 1});
        const CalibrationTable table = mid_table(MajPlan::calibrated_plan(), 4);
        const std::vector<std::vector<uint8_t>> inputs = {
            std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 1), std::vector<uint8_t>(4, 0),
            std::vector<uint8_t>(4, 0), std::vector<uint8_t>(4, 0)};
        const auto out = exec_maj(sa, plan, inputs, calibrated ? &table : nullptr, flat(4));
        for (uint8_t b : out) CHECK(b == 0);
    }
}

TEST_CASE("and/or gates have the boolean truth tables") {
    const MajPlan plan = MajPlan::baseline_plan(3);
    Subarray sa(geom(16, 4), {0.0, 0.0, 1});
    std::vector<uint8_t> a = {0, 0, 1, 1}, b = {0, 1, 0, 1};
    const auto conj = and_op(sa, plan, a, b, nullptr, flat(4));
    const auto disj = or_op(sa, plan, a, b, nullptr, flat(4));
    CHECK(conj == std::vector<uint8_t>{0, 0, 0, 1});
    CHECK(disj == std::vector<uint8_t>{0, 1, 1, 1});
}

TEST_CASE("complementing inputs and flipping the pattern complements the output") {
    const MajPlan plan = MajPlan::calibrated_plan();
    const int n = 64;
    Xoshiro256 rng(31);
    std::vector<std::vector<uint8_t>> inputs(5, std::vector<uint8_t>(n));
    for (auto& row : inputs) rng.fill_bits(row.data(), row.size());

    CalibrationTable table = mid_table(plan, n);
    CalibrationTable mirrored = mid_table(plan, n);
    for (int c = 0; c < n; ++c) {
        const int level = static_cast<int>(rng.next_u64() % table.ladder().size());
        table.set_level(c, level);
        mirrored.set_level(c, table.ladder().size() - 1 - level);
    }

    Subarray sa(geom(16, n), {0.0, 0.0, 1});
    const auto out = exec_maj(sa, plan, inputs, &table, flat(n));

    std::vector<std::vector<uint8_t>> complemented = inputs;
    for (auto& row : complemented)
        for (auto& bit : row) bit = static_cast<uint8_t>(1 - bit);
    const auto out_c = exec_maj(sa, plan, complemented, &mirrored, flat(n));
    for (int c = 0; c < n; ++c)
        CHECK(out_c[static_cast<size_t>(c)] == 1 - out[static_cast<size_t>(c)]);
}

TEST_CASE("flipping an input 0 to 1 never drops the noiseless output") {
    const MajPlan plan = MajPlan::baseline_plan();
    const int n = 128;
    Xoshiro256 rng(37);
    SenseAmpProfile prof = sample_profile(n, 0.04, 5);
    for (int it = 0; it < 10; ++it) {
        std::vector<std::vector<uint8_t>> inputs(5, std::vector<uint8_t>(n));
        for (auto& row : inputs) rng.fill_bits(row.data(), row.size());
        Subarray sa(geom(16, n), {0.0, 0.0, 1});
        const auto base = exec_maj(sa, plan, inputs, nullptr, prof);

        auto raised = inputs;
        const size_t which = rng.next_u64() % 5;
        for (auto& bit : raised[which]) bit = 1;
        const auto up = exec_maj(sa, plan, raised, nullptr, prof);
        for (int c = 0; c < n; ++c)
            CHECK(up[static_cast<size_t>(c)] >= base[static_cast<size_t>(c)]);
    }
}

TEST_CASE("stored patterns produce exactly the advertised bitline offset") {
    const MajPlan plan = MajPlan::calibrated_plan();
    const OffsetLadder ladder = enumerate_ladder(plan.frac, plan.contraction_f);
    const SubarrayGeometry g = geom(16, 8);

    for (int level = 0; level < ladder.size(); ++level)
        for (int ones = 0; ones <= 5; ++ones) {
            Subarray sa(g, {0.0, 0.0, 1});
            CalibrationTable table(ladder, 8);
            for (int c = 0; c < 8; ++c) table.set_level(c, level);

            // place operands and calibration charges without sensing yet
            const auto op_rows = plan.operand_rows();
            for (int i = 0; i < 5; ++i)
                sa.write_row(op_rows[static_cast<size_t>(i)],
                             std::vector<uint8_t>(8, i < ones ? 1 : 0));
            const auto calib_rows = plan.calib_rows();
            const auto counts = plan.frac.counts();
            for (int j = 0; j < 3; ++j) {
                sa.write_row(calib_rows[static_cast<size_t>(j)],
                             std::vector<uint8_t>(
                                 8, ladder.entries[static_cast<size_t>(level)].pattern[j]));
                for (int k = 0; k < counts[j]; ++k)
                    sa.frac(calib_rows[static_cast<size_t>(j)], plan.contraction_f);
            }

            std::vector<double> charges;
            for (int r : plan.simra_rows) charges.push_back(sa.cell(r, 3));
            const double v = charge_share(charges, g);
            const double expected =
                maj_voltage(g, ones, ladder.entries[static_cast<size_t>(level)].offset);
            CHECK(std::abs(v - expected) < 1e-12);
        }
}

TEST_CASE("per-operation primitive tally") {
    CHECK(maj_op_cost(MajPlan::calibrated_plan()) == OpCounts{8, 3, 1});
    CHECK(maj_op_cost(MajPlan::baseline_plan()) == OpCounts{8, 3, 1});
    CHECK(maj_op_cost(MajPlan::calibrated_plan(5, {0, 0, 0})) == OpCounts{8, 0, 1});
    CHECK(maj_op_cost(MajPlan::calibrated_plan(5, {2, 2, 2})) == OpCounts{8, 6, 1});

    Subarray sa(geom(16, 8), {0.0, 0.0, 1});
    OpCounts counts;
    const auto inputs = exhaustive_inputs(3);
    maj3(sa, MajPlan::baseline_plan(3), inputs, nullptr, flat(8), &counts);
    CHECK(counts == OpCounts{8, 3, 1});
}

TEST_CASE("baseline mode ignores any calibration table") {
    Subarray sa(geom(16, 32), {0.0, 0.0, 1});
    const auto inputs = exhaustive_inputs(5);
    const SenseAmpProfile prof = sample_profile(32, 0.04, 3);
    const auto plain = exec_maj(sa, MajPlan::baseline_plan(), inputs, nullptr, prof);

    CalibrationTable skewed = mid_table(MajPlan::calibrated_plan(), 32);
    for (int c = 0; c < 32; ++c) skewed.set_level(c, 0);  // most negative offset
    const auto with_table = exec_maj(sa, MajPlan::baseline_plan(), inputs, &skewed, prof);
    CHECK(plain == with_table);
}

TEST_CASE("executor validation") {
    Subarray sa(geom(16, 8), {0.0, 0.0, 1});
    const auto inputs = exhaustive_inputs(3);

    // calibrated mode without a table
    CHECK_THROWS_AS(exec_maj(sa, MajPlan::calibrated_plan(3), inputs, nullptr, flat(8)),
                    std::invalid_argument);
    // geometry mismatch between table and subarray
    const CalibrationTable wrong = mid_table(MajPlan::calibrated_plan(3), 11);
    CHECK_THROWS_AS(exec_maj(sa, MajPlan::calibrated_plan(3), inputs, &wrong, flat(8)),
                    std::invalid_argument);
    // frac configuration mismatch between table and plan
    const CalibrationTable other = mid_table(MajPlan::calibrated_plan(3, {1, 1, 1}), 8);
    CHECK_THROWS_AS(exec_maj(sa, MajPlan::calibrated_plan(3), inputs, &other, flat(8)),
                    std::invalid_argument);
    // wrong input row count
    CHECK_THROWS_AS(exec_maj(sa, MajPlan::baseline_plan(5), inputs, nullptr, flat(8)),
                    std::invalid_argument);

    MajPlan bad = MajPlan::baseline_plan();
    bad.x = 4;
    CHECK_THROWS_AS(bad.validate(sa.geometry()), std::invalid_argument);
    bad = MajPlan::baseline_plan();
    bad.simra_rows[7] = bad.simra_rows[0];
    CHECK_THROWS_AS(bad.validate(sa.geometry()), std::invalid_argument);
    bad = MajPlan::baseline_plan();
    bad.storage_rows[0] = 99;
    CHECK_THROWS_AS(bad.validate(sa.geometry()), std::out_of_range);
}
