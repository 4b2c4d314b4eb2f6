#include "pudsim/executor.hpp"

#include <algorithm>
#include <stdexcept>

#include "pudsim/calibration.hpp"
#include "pudsim/kernels.hpp"

namespace pudsim {

namespace {

// Scratch bit rows reused across calls. Work items own their thread, so
// thread_local keeps parallel experiments independent.
thread_local std::vector<uint8_t> t_const0, t_const1, t_pattern;

void ensure_scratch(size_t n) {
    if (t_const0.size() != n) {
        t_const0.assign(n, 0);
        t_const1.assign(n, 1);
        t_pattern.resize(n);
    }
}

}  // namespace

void MajPlan::validate(const SubarrayGeometry& geom) const {
    if (x != 3 && x != 5)
        throw std::invalid_argument("maj plan: input count must be 3 or 5");
    frac.validate();
    if (!(contraction_f > 0.0 && contraction_f < 1.0))
        throw std::invalid_argument("maj plan: contraction factor must be in (0,1)");
    if (mode == MajMode::baseline && (frac.y != 0 || frac.z != 0))
        throw std::invalid_argument("maj plan: baseline mode fracs only the first row");
    std::array<int, 11> all{};
    std::copy(simra_rows.begin(), simra_rows.end(), all.begin());
    std::copy(storage_rows.begin(), storage_rows.end(), all.begin() + 8);
    for (int r : all)
        if (r < 0 || r >= geom.n_rows)
            throw std::out_of_range("maj plan: row index out of range");
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j])
                throw std::invalid_argument(
                    "maj plan: activation and storage rows must be distinct");
}

MajPlan MajPlan::baseline_plan(int x_inputs, int frac_x) {
    MajPlan plan;
    plan.x = x_inputs;
    plan.mode = MajMode::baseline;
    plan.frac = {frac_x, 0, 0};
    return plan;
}

MajPlan MajPlan::calibrated_plan(int x_inputs, FracConfig frac, double contraction_f) {
    MajPlan plan;
    plan.x = x_inputs;
    plan.mode = MajMode::calibrated;
    plan.frac = frac;
    plan.contraction_f = contraction_f;
    return plan;
}

OpCounts maj_op_cost(const MajPlan& plan) {
    // 5 operand placements + 3 calibration placements, the configured Frac
    // ramp, one activation.
    return {8, plan.frac.total(), 1};
}

void exec_maj_into(Subarray& sa, const MajPlan& plan,
                   std::span<const std::vector<uint8_t>> input_rows,
                   const CalibrationTable* table, const SenseAmpProfile& profile,
                   uint8_t* out, OpCounts* counts) {
    plan.validate(sa.geometry());
    if (static_cast<int>(input_rows.size()) != plan.x)
        throw std::invalid_argument("exec_maj: expected one input bit row per operand");
    const size_t n = static_cast<size_t>(sa.n_cols());
    for (const auto& r : input_rows)
        if (r.size() != n) throw std::invalid_argument("exec_maj: input row length mismatch");
    ensure_scratch(n);

    const auto operands = plan.operand_rows();
    const auto calib = plan.calib_rows();

    // operand placement; a 3-input majority pads with constant 0 and 1
    for (size_t i = 0; i < input_rows.size(); ++i) sa.write_row(operands[i], input_rows[i]);
    if (plan.x == 3) {
        sa.write_row(operands[3], t_const0);
        sa.write_row(operands[4], t_const1);
    }

    if (plan.mode == MajMode::calibrated) {
        if (!table)
            throw std::invalid_argument("exec_maj: calibrated mode requires a calibration table");
        table->check_cols(sa.n_cols());
        if (!(table->ladder().frac == plan.frac) ||
            table->ladder().contraction_f != plan.contraction_f)
            throw std::invalid_argument(
                "exec_maj: calibration table was built for a different frac configuration");
        const auto frac_counts = plan.frac.counts();
        for (int j = 0; j < 3; ++j) {
            table->pattern_row(j, t_pattern.data());
            sa.write_row(calib[j], t_pattern);
            for (int k = 0; k < frac_counts[j]; ++k) sa.frac(calib[j], plan.contraction_f);
        }
    } else {
        // fixed neutral data: seed bit fracked x times, then constants 1 and 0
        sa.write_row(calib[0], plan.baseline_seed_bit ? t_const1 : t_const0);
        for (int k = 0; k < plan.frac.x; ++k) sa.frac(calib[0], plan.contraction_f);
        sa.write_row(calib[1], t_const1);
        sa.write_row(calib[2], t_const0);
    }

    sa.simra_into(plan.simra_rows, profile, out);
    if (counts) *counts += maj_op_cost(plan);
}

std::vector<uint8_t> exec_maj(Subarray& sa, const MajPlan& plan,
                              std::span<const std::vector<uint8_t>> input_rows,
                              const CalibrationTable* table, const SenseAmpProfile& profile,
                              OpCounts* counts) {
    std::vector<uint8_t> out(static_cast<size_t>(sa.n_cols()));
    exec_maj_into(sa, plan, input_rows, table, profile, out.data(), counts);
    return out;
}

std::vector<uint8_t> maj3(Subarray& sa, const MajPlan& plan,
                          std::span<const std::vector<uint8_t>> input_rows,
                          const CalibrationTable* table, const SenseAmpProfile& profile,
                          OpCounts* counts) {
    if (plan.x != 3) throw std::invalid_argument("maj3: plan must be built for 3 inputs");
    if (input_rows.size() != 3) throw std::invalid_argument("maj3: needs exactly 3 input rows");
    return exec_maj(sa, plan, input_rows, table, profile, counts);
}

std::vector<uint8_t> and_op(Subarray& sa, const MajPlan& plan, const std::vector<uint8_t>& a,
                            const std::vector<uint8_t>& b, const CalibrationTable* table,
                            const SenseAmpProfile& profile, OpCounts* counts) {
    ensure_scratch(static_cast<size_t>(sa.n_cols()));
    const std::vector<uint8_t> rows[3] = {a, b, t_const0};
    return maj3(sa, plan, rows, table, profile, counts);
}

std::vector<uint8_t> or_op(Subarray& sa, const MajPlan& plan, const std::vector<uint8_t>& a,
                           const std::vector<uint8_t>& b, const CalibrationTable* table,
                           const SenseAmpProfile& profile, OpCounts* counts) {
    ensure_scratch(static_cast<size_t>(sa.n_cols()));
    const std::vector<uint8_t> rows[3] = {a, b, t_const1};
    return maj3(sa, plan, rows, table, profile, counts);
}

}  // namespace pudsim
