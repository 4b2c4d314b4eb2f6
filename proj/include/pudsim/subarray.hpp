#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pudsim/rng.hpp"

namespace pudsim {

// Cell charges and all voltages are normalized to V_DD, i.e. live in [0,1].
// A freshly written logical bit b stores exactly b (1.0 or 0.0) unless cell
// write noise is enabled.

struct SubarrayGeometry {
    int n_rows = 512;
    int n_cols = 8192;
    double c_cell_ff = 30.0;      // cell capacitance, fF
    double c_bitline_ff = 270.0;  // bitline capacitance, fF
    double v_precharge = 0.5;     // bitline precharge level, V_DD units
    bool warn_unusual = true;     // stderr note when n_rows is outside [256,1024]

    // Throws std::invalid_argument on impossible values; unusual-but-legal
    // geometries only get a warning.
    void validate() const;
};

struct NoiseConfig {
    double sigma_sense = 0.00025;  // per sensing event, V_DD units
    double sigma_cell = 0.0;      // per cell write, V_DD units
    uint64_t seed = 0;
};

class SenseAmpProfile;  // variation.hpp

// Bitline voltage after charge sharing the given cells with the precharged
// bitline: the capacitance-weighted mean of cell charges and v_precharge.
double charge_share(std::span<const double> cell_values, const SubarrayGeometry& geom);

// One sense-amplifier decision. Returns 1 iff voltage + eps > tau with
// eps ~ N(0, sigma_sense); exact equality resolves to 0.
int sense(double voltage, double tau, double sigma_sense, Xoshiro256& rng);
inline int sense(double voltage, double tau) { return voltage > tau ? 1 : 0; }

// Charge-level state of one subarray. Single-threaded by design: distinct
// instances are independent and may be driven from different threads. The
// sense-noise generator is owned per subarray so parallel experiments stay
// reproducible.
class Subarray {
  public:
    Subarray(const SubarrayGeometry& geom, const NoiseConfig& noise);

    const SubarrayGeometry& geometry() const { return geom_; }
    const NoiseConfig& noise() const { return noise_; }
    int n_rows() const { return geom_.n_rows; }
    int n_cols() const { return geom_.n_cols; }

    std::span<const double> row(int r) const;
    double cell(int r, int c) const;

    // Host-side data placement; bits holds one byte per column (0 or 1).
    void write_row(int row, std::span<const uint8_t> bits);

    // In-array copy through the sense amplifiers: dst (and src, which is
    // restored) receive the full-swing sensed value of src, so a copy can be
    // corrupted by an extreme threshold.
    void row_copy(int src, int dst, const SenseAmpProfile& profile);

    // Partial-charge operation: contracts every cell of the row toward the
    // neutral level, v <- 0.5 + f*(v - 0.5).
    void frac(int row, double f = 0.5);

    // Simultaneous multi-row activation: per column, charge-share the given
    // rows, sense against the column threshold, restore all activated cells
    // to the sensed full-swing value, and return the sensed bits.
    std::vector<uint8_t> simra(std::span<const int> rows, const SenseAmpProfile& profile);
    void simra_into(std::span<const int> rows, const SenseAmpProfile& profile,
                    uint8_t* out_bits);

    bool precharged() const { return open_rows_.empty(); }

    // Restart the sense/cell noise stream (used by drift studies that need to
    // replay identical sensing noise).
    void reseed_noise(uint64_t seed) { rng_.reseed(seed); }

  private:
    double* row_ptr(int r) { return cells_.data() + static_cast<size_t>(r) * geom_.n_cols; }
    const double* row_ptr(int r) const {
        return cells_.data() + static_cast<size_t>(r) * geom_.n_cols;
    }
    void check_row(int r) const;

    SubarrayGeometry geom_;
    NoiseConfig noise_;
    std::vector<double> cells_;
    std::vector<int> open_rows_;
    Xoshiro256 rng_;

    // scratch buffers for the column-parallel kernels
    std::vector<double> vbuf_, nbuf_;
    std::vector<uint8_t> bbuf_;
};

}  // namespace pudsim
