#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pudsim/ladder.hpp"
#include "pudsim/subarray.hpp"
#include "pudsim/variation.hpp"

namespace pudsim {

class CalibrationTable;

enum class MajMode : uint8_t {
    baseline,    // fixed neutral data: bit 1 fracked x times, constants 1 and 0
    calibrated,  // per-column patterns from a calibration table, fracked x/y/z times
};

// Primitive-operation tally used by the latency model. Data placement into
// the designated rows is tallied as row copies in both modes, which keeps
// the two flows at identical cost for equal Frac totals.
struct OpCounts {
    long long row_copies = 0;
    long long fracs = 0;
    long long simras = 0;

    OpCounts& operator+=(const OpCounts& o) {
        row_copies += o.row_copies;
        fracs += o.fracs;
        simras += o.simras;
        return *this;
    }
    bool operator==(const OpCounts&) const = default;
};

// Row assignment for one majority operation: 8 rows activated together, of
// which the last 3 carry calibration data; 3 reserved rows outside the
// activation group persist the calibration patterns between operations.
struct MajPlan {
    int x = 5;  // input count, 3 or 5
    std::array<int, 8> simra_rows = {0, 1, 2, 3, 4, 5, 6, 7};
    std::array<int, 3> storage_rows = {8, 9, 10};
    FracConfig frac = {2, 1, 0};
    double contraction_f = 0.5;
    MajMode mode = MajMode::calibrated;
    int baseline_seed_bit = 1;  // bit written before the baseline Frac ramp

    std::array<int, 5> operand_rows() const {
        return {simra_rows[0], simra_rows[1], simra_rows[2], simra_rows[3], simra_rows[4]};
    }
    std::array<int, 3> calib_rows() const {
        return {simra_rows[5], simra_rows[6], simra_rows[7]};
    }

    void validate(const SubarrayGeometry& geom) const;

    static MajPlan baseline_plan(int x_inputs = 5, int frac_x = 3);
    static MajPlan calibrated_plan(int x_inputs = 5, FracConfig frac = {2, 1, 0},
                                   double contraction_f = 0.5);
};

// Executes one majority-of-x over every column. `input_rows` holds x bit
// vectors of length n_cols. In calibrated mode a table must be supplied; in
// baseline mode it is ignored. Returns the per-column majority outputs and,
// when `counts` is given, accumulates the primitive tally.
std::vector<uint8_t> exec_maj(Subarray& sa, const MajPlan& plan,
                              std::span<const std::vector<uint8_t>> input_rows,
                              const CalibrationTable* table, const SenseAmpProfile& profile,
                              OpCounts* counts = nullptr);

void exec_maj_into(Subarray& sa, const MajPlan& plan,
                   std::span<const std::vector<uint8_t>> input_rows,
                   const CalibrationTable* table, const SenseAmpProfile& profile,
                   uint8_t* out, OpCounts* counts = nullptr);

// Majority-of-3 realized as majority-of-5 with constant 0 and 1 operands.
std::vector<uint8_t> maj3(Subarray& sa, const MajPlan& plan,
                          std::span<const std::vector<uint8_t>> input_rows,
                          const CalibrationTable* table, const SenseAmpProfile& profile,
                          OpCounts* counts = nullptr);

// AND = MAJ3(a, b, 0); OR = MAJ3(a, b, 1).
std::vector<uint8_t> and_op(Subarray& sa, const MajPlan& plan,
                            const std::vector<uint8_t>& a, const std::vector<uint8_t>& b,
                            const CalibrationTable* table, const SenseAmpProfile& profile,
                            OpCounts* counts = nullptr);
std::vector<uint8_t> or_op(Subarray& sa, const MajPlan& plan,
                           const std::vector<uint8_t>& a, const std::vector<uint8_t>& b,
                           const CalibrationTable* table, const SenseAmpProfile& profile,
                           OpCounts* counts = nullptr);

// Per-operation primitive tally of one majority execution under `plan`.
OpCounts maj_op_cost(const MajPlan& plan);

}  // namespace pudsim
