#pragma once

#include <cstdint>
#include <vector>

#include "pudsim/rng.hpp"

namespace pudsim {

// Per-column sense-amplifier thresholds, V_DD units. The ideal value is 0.5;
// process variation makes each column deviate, which is the effect the
// calibration machinery exists to counteract.
class SenseAmpProfile {
  public:
    SenseAmpProfile() = default;
    explicit SenseAmpProfile(std::vector<double> tau);

    const std::vector<double>& tau() const { return tau_; }
    std::vector<double>& tau() { return tau_; }
    int n_cols() const { return static_cast<int>(tau_.size()); }

    void check_cols(int n_cols) const;  // throws on size mismatch

  private:
    std::vector<double> tau_;
};

struct DriftConfig {
    double kappa_temp = 2e-5;   // systematic shift per degC, V_DD units
    double sigma_temp = 2e-5;   // random per-column std-dev per degC of |dT|
    double sigma_time = 1e-4;   // random per-column std-dev per day
    double t_cal_c = 25.0;      // temperature the profile was calibrated at
    uint64_t seed = 0;
};

// Gaussian threshold variation around the ideal 0.5, clamped to (0.01, 0.99).
// Deterministic under seed, independent across columns.
SenseAmpProfile sample_profile(int n_cols, double sigma_tau, uint64_t seed);

// Thresholds after operating at `temperature_c` for `elapsed_days`:
// tau' = clamp(tau + kappa*(T - t_cal) + N(0, sigma_temp*|T - t_cal|)
//                  + N(0, sigma_time*days), 0.01, 0.99).
// The input profile is not modified.
SenseAmpProfile drift_profile(const SenseAmpProfile& profile, const DriftConfig& drift,
                              double temperature_c, double elapsed_days);

}  // namespace pudsim
