#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pudsim/calibration.hpp"
#include "pudsim/executor.hpp"

namespace pudsim {

// Bit-serial column operand, LSB first. Unmodified DRAM has no in-array NOT,
// so every bit that feeds a majority graph is stored dual-rail: the
// complement rows are written at load time and propagated through the graph
// by the self-duality of majority.
struct ColumnOperand {
    int width = 0;
    std::vector<int> val_rows;
    std::vector<int> comp_rows;  // empty for result operands nobody negates
};

// Hands out scratch rows for intermediate bits; throws when the subarray has
// no free rows left.
class RowAllocator {
  public:
    RowAllocator(int first_row, int last_row);
    int acquire();
    void release(int row);
    int available() const { return static_cast<int>(free_.size()); }

  private:
    std::vector<int> free_;  // LIFO, deterministic assignment order
};

// Majority-graph arithmetic over one subarray. All operations work on every
// column in parallel; per-column results are exact wherever the column's
// threshold is inside the calibrated correctable range (noiseless sensing).
class ArithUnit {
  public:
    ArithUnit(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
              const SenseAmpProfile& profile, int first_scratch_row = -1);

    // Writes per-column values (and complements) into freshly allocated rows.
    ColumnOperand load_operand(std::span<const uint32_t> values, int width);
    std::vector<uint32_t> read_operand(const ColumnOperand& op) const;
    void free_operand(ColumnOperand& op);

    struct FullAdderOut {
        int sum_row;
        int sum_comp_row;  // -1 unless requested
        int carry_row;
        int carry_comp_row;
    };
    // carry = MAJ3(a,b,cin); carry' = MAJ3(a',b',cin');
    // sum = MAJ5(a,b,cin,carry',carry'); optional sum' by the dual graph.
    FullAdderOut full_adder(int a, int a_comp, int b, int b_comp, int cin, int cin_comp,
                            bool need_sum_complement);

    // Unsigned ripple-carry addition of two 8-bit operands; 9-bit result.
    ColumnOperand add8(const ColumnOperand& a, const ColumnOperand& b);

    // Unsigned shift-and-add multiplication of two 8-bit operands; 16-bit
    // result. Partial products come from MAJ3 AND/NAND pairs.
    ColumnOperand mul8(const ColumnOperand& a, const ColumnOperand& b);

    const OpCounts& executed_counts() const { return counts_; }
    RowAllocator& allocator() { return alloc_; }

  private:
    int run_maj3(int r1, int r2, int r3);                        // returns destination row
    int run_maj5(int r1, int r2, int r3, int r4, int r5);        // returns destination row
    void gather(int row, std::vector<uint8_t>& bits) const;

    Subarray& sa_;
    MajPlan plan3_;  // 3-input variant of the plan
    MajPlan plan5_;
    const CalibrationTable* table_;
    SenseAmpProfile profile_;  // owned copy; callers may pass temporaries
    RowAllocator alloc_;
    OpCounts counts_;
    int const0_row_, const1_row_;
};

enum class ArithOp : uint8_t { maj3, maj5, add8, mul8 };

// Primitive tally of one operation's majority graph under `plan`: every
// majority contributes its own placement/Frac/activation cost plus one copy
// to park the result row. Operand loading is excluded (it is data placement,
// identical across methods). Computed by a static walk of the graphs above.
OpCounts op_cost(ArithOp op, const MajPlan& plan);

}  // namespace pudsim
