#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pudsim/subarray.hpp"

namespace pudsim {

// Frac repetition counts for the three calibration rows. Applying k Frac
// operations to a row freshly written with bit b leaves its charge at
// 0.5 + (b - 0.5) * f^k, so the counts select the magnitude of each row's
// contribution and the stored bit selects its sign.
struct FracConfig {
    int x = 2;
    int y = 1;
    int z = 0;

    void validate() const;  // each count in [0,10]
    std::array<int, 3> counts() const { return {x, y, z}; }
    int total() const { return x + y + z; }
    bool operator==(const FracConfig&) const = default;
};

// One achievable calibration level: the 3 bits written to the calibration
// rows and the total charge deviation sum_j (v_j - 0.5) they produce after
// the configured Frac counts. Offsets are in cell-charge units; conversion
// to bitline volts happens only in correctable_range.
struct LadderEntry {
    std::array<uint8_t, 3> pattern;
    double offset;
};

// All distinct offsets for a FracConfig, sorted ascending. Symmetric about
// zero: the entry at -o always carries the complement of the pattern at +o.
struct OffsetLadder {
    FracConfig frac;
    double contraction_f = 0.5;
    std::vector<LadderEntry> entries;

    int size() const { return static_cast<int>(entries.size()); }
    // Level with the offset nearest zero; ties resolve to the lower index
    // (the negative side).
    int mid_level() const;
};

OffsetLadder enumerate_ladder(const FracConfig& frac, double contraction_f = 0.5);

// Union of threshold intervals a ladder can correct for an x-input majority
// (x is 3 or 5), assuming noiseless sensing. `contiguous` reports whether
// consecutive per-level intervals overlap or touch.
struct CorrectableRange {
    double tau_min;
    double tau_max;
    bool contiguous;
};

CorrectableRange correctable_range(const OffsetLadder& ladder, const SubarrayGeometry& geom,
                                   int x_inputs);

// Noiseless bitline voltage of an 8-row majority activation with `ones`
// full cells among the five operand rows and calibration charge deviating
// from neutral by `offset` (cell-charge units). Shared by the executor and
// the analytic helpers above.
double maj_voltage(const SubarrayGeometry& geom, int ones_of_five, double offset);

}  // namespace pudsim
