#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pudsim/executor.hpp"
#include "pudsim/ladder.hpp"

namespace pudsim {

// Per-column choice of offset-ladder level. The 3-bit patterns are always
// derived from the ladder, so level/pattern consistency holds by
// construction, including after a file round-trip.
class CalibrationTable {
  public:
    CalibrationTable() = default;
    CalibrationTable(OffsetLadder ladder, int n_cols);

    const OffsetLadder& ladder() const { return ladder_; }
    int n_cols() const { return static_cast<int>(levels_.size()); }

    int level(int col) const { return levels_[static_cast<size_t>(col)]; }
    void set_level(int col, int level);
    const std::vector<int16_t>& levels() const { return levels_; }

    const LadderEntry& entry(int col) const {
        return ladder_.entries[static_cast<size_t>(levels_[static_cast<size_t>(col)])];
    }
    double offset(int col) const { return entry(col).offset; }

    // Bits of calibration row j (0..2) across all columns.
    void pattern_row(int j, uint8_t* out) const;

    void check_cols(int n_cols) const;

    bool operator==(const CalibrationTable& o) const;

  private:
    OffsetLadder ladder_;
    std::vector<int16_t> levels_;
};

struct CalibParams {
    int n_iterations = 20;
    int samples_per_iteration = 512;
    double bias_threshold = 0.05;
    uint64_t seed = 0;
    // Bias defaults to the raw proportion of '1' outputs; set this to measure
    // it against the expected (ground-truth) proportion instead.
    bool bias_from_expected = false;

    void validate() const;
};

// Signed bias of one column's trial outputs: (#ones / #trials) - 0.5.
// Uniform random majority inputs are 1-balanced in expectation, so a
// persistent bias points at the threshold deviation's sign.
double get_bias(std::span<const uint8_t> outputs);

// Majority outputs and ground-truth majority bits for n_samples trials of
// fresh uniform-random inputs. Row-major: sample index is the slow axis.
struct SamplingResult {
    int n_samples = 0;
    int n_cols = 0;
    std::vector<uint8_t> outputs;
    std::vector<uint8_t> truth;

    std::span<const uint8_t> output_row(int i) const {
        return {outputs.data() + static_cast<size_t>(i) * n_cols, static_cast<size_t>(n_cols)};
    }
    std::span<const uint8_t> truth_row(int i) const {
        return {truth.data() + static_cast<size_t>(i) * n_cols, static_cast<size_t>(n_cols)};
    }
};

SamplingResult majx_sampling(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
                             const SenseAmpProfile& profile, int n_samples, Xoshiro256& rng,
                             OpCounts* counts = nullptr);

// Iterative calibration-level identification. Starting every column at the
// mid-ladder level, each iteration stores the current patterns, samples
// majority outputs on random inputs, and nudges each column whose bias
// exceeds the threshold one level against the bias: outputs too often 1
// means the effective threshold is low, so the offset steps down. Levels
// saturate at the ladder ends.
CalibrationTable calibrate(Subarray& sa, const MajPlan& plan, const CalibParams& params,
                           const SenseAmpProfile& profile);

// Versioned, self-describing JSON persistence. Round-trips losslessly;
// loading rejects unknown versions and (when expected_cols >= 0) geometry
// mismatches without partial effects.
void save_table(const CalibrationTable& table, const std::filesystem::path& path);
CalibrationTable load_table(const std::filesystem::path& path, int expected_cols = -1);

}  // namespace pudsim
