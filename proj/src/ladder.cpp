#include "pudsim/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pudsim {

namespace {
constexpr double kMergeEps = 1e-9;
}

void FracConfig::validate() const {
    for (int k : counts())
        if (k < 0 || k > 10)
            throw std::invalid_argument(
                "frac config: counts must be in [0,10]; beyond 10 applications a row "
                "is indistinguishable from neutral");
}

int OffsetLadder::mid_level() const {
    int best = 0;
    for (int i = 1; i < size(); ++i)
        if (std::abs(entries[i].offset) < std::abs(entries[best].offset)) best = i;
    return best;
}

OffsetLadder enumerate_ladder(const FracConfig& frac, double contraction_f) {
    frac.validate();
    if (!(contraction_f > 0.0 && contraction_f < 1.0))
        throw std::invalid_argument("enumerate_ladder: contraction factor must be in (0,1)");

    // Per-row deviation magnitude after k Frac applications. Computed by
    // repeated multiplication to match the cell-charge trajectory bit for bit.
    std::array<double, 3> dev{};
    const auto counts = frac.counts();
    for (int j = 0; j < 3; ++j) {
        double d = 0.5;
        for (int k = 0; k < counts[j]; ++k) d = d * contraction_f;
        dev[j] = d;
    }

    struct Raw {
        std::array<uint8_t, 3> pattern;
        double offset;
    };
    std::array<Raw, 8> raw;
    for (int p = 0; p < 8; ++p) {
        std::array<uint8_t, 3> bits = {static_cast<uint8_t>(p & 1),
                                       static_cast<uint8_t>((p >> 1) & 1),
                                       static_cast<uint8_t>((p >> 2) & 1)};
        double o = 0.0;
        for (int j = 0; j < 3; ++j) o += bits[j] ? dev[j] : -dev[j];
        raw[p] = {bits, o};
    }

    // Deduplicate. For non-negative offsets keep the lowest pattern id among
    // the achievers; for negative offsets store the complement of the
    // positive side's canonical pattern, which keeps the ladder exactly
    // symmetric entry-for-entry.
    OffsetLadder ladder;
    ladder.frac = frac;
    ladder.contraction_f = contraction_f;
    std::vector<Raw> pos;
    for (const Raw& r : raw) {
        if (r.offset < -kMergeEps) continue;
        bool merged = false;
        for (Raw& existing : pos)
            if (std::abs(existing.offset - r.offset) <= kMergeEps) {
                merged = true;
                break;  // lower pattern id already stored (iteration order)
            }
        if (!merged) pos.push_back(r);
    }
    std::sort(pos.begin(), pos.end(), [](const Raw& a, const Raw& b) { return a.offset < b.offset; });

    const bool has_zero = !pos.empty() && std::abs(pos.front().offset) <= kMergeEps;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        if (has_zero && it + 1 == pos.rend()) break;  // zero contributes one entry only
        std::array<uint8_t, 3> comp = {static_cast<uint8_t>(1 - it->pattern[0]),
                                       static_cast<uint8_t>(1 - it->pattern[1]),
                                       static_cast<uint8_t>(1 - it->pattern[2])};
        ladder.entries.push_back({comp, -it->offset});
    }
    for (const Raw& r : pos) ladder.entries.push_back({r.pattern, r.offset});
    return ladder;
}

double maj_voltage(const SubarrayGeometry& geom, int ones_of_five, double offset) {
    // 5 operand cells + 3 calibration cells at neutral 1.5 + offset
    const double sum = static_cast<double>(ones_of_five) + 1.5 + offset;
    const double inv = 1.0 / (8.0 * geom.c_cell_ff + geom.c_bitline_ff);
    return (geom.c_cell_ff * sum + geom.c_bitline_ff * geom.v_precharge) * inv;
}

CorrectableRange correctable_range(const OffsetLadder& ladder, const SubarrayGeometry& geom,
                                   int x_inputs) {
    if (ladder.entries.empty())
        throw std::invalid_argument("correctable_range: empty ladder");
    if (x_inputs != 3 && x_inputs != 5)
        throw std::invalid_argument("correctable_range: x must be 3 or 5");

    // A 3-input majority runs as a 5-input one with constant 0 and 1 operands,
    // which lands on the same two critical voltages.
    const int pad_ones = x_inputs == 3 ? 1 : 0;
    const int k_hi = (x_inputs + 1) / 2;  // fewest ones that must sense 1
    const double v_lo = maj_voltage(geom, k_hi - 1 + pad_ones, 0.0);
    const double v_hi = maj_voltage(geom, k_hi + pad_ones, 0.0);
    const double to_volts = geom.c_cell_ff / (8.0 * geom.c_cell_ff + geom.c_bitline_ff);

    CorrectableRange out{};
    out.contiguous = true;
    double prev_hi = 0.0;
    for (int i = 0; i < ladder.size(); ++i) {
        const double shift = ladder.entries[i].offset * to_volts;
        const double lo = v_lo + shift;
        const double hi = v_hi + shift;
        if (i == 0) {
            out.tau_min = lo;
        } else if (lo > prev_hi + 1e-12) {
            out.contiguous = false;
        }
        prev_hi = hi;
    }
    out.tau_max = prev_hi;
    return out;
}

}  // namespace pudsim
