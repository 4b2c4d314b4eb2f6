#include "pudsim/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pudsim {

namespace {
constexpr double kTauMin = 0.01;
constexpr double kTauMax = 0.99;
}

SenseAmpProfile::SenseAmpProfile(std::vector<double> tau) : tau_(std::move(tau)) {
    for (double t : tau_)
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("sense-amp threshold outside (0,1)");
}

void SenseAmpProfile::check_cols(int n_cols) const {
    if (static_cast<int>(tau_.size()) != n_cols)
        throw std::invalid_argument("sense-amp profile has " + std::to_string(tau_.size()) +
                                    " columns, expected " + std::to_string(n_cols));
}

SenseAmpProfile sample_profile(int n_cols, double sigma_tau, uint64_t seed) {
    if (n_cols <= 0) throw std::invalid_argument("sample_profile: n_cols must be positive");
    if (sigma_tau < 0.0) throw std::invalid_argument("sample_profile: sigma_tau must be >= 0");
    Xoshiro256 rng(seed);
    std::vector<double> tau(static_cast<size_t>(n_cols), 0.5);
    if (sigma_tau > 0.0)
        for (double& t : tau)
            t = std::clamp(0.5 + sigma_tau * rng.next_gaussian(), kTauMin, kTauMax);
    return SenseAmpProfile(std::move(tau));
}

SenseAmpProfile drift_profile(const SenseAmpProfile& profile, const DriftConfig& drift,
                              double temperature_c, double elapsed_days) {
    if (drift.sigma_temp < 0.0 || drift.sigma_time < 0.0)
        throw std::invalid_argument("drift config: sigmas must be >= 0");
    if (elapsed_days < 0.0)
        throw std::invalid_argument("drift_profile: elapsed_days must be >= 0");

    const double dt = temperature_c - drift.t_cal_c;
    const double sys = drift.kappa_temp * dt;
    const double s_temp = drift.sigma_temp * std::abs(dt);
    const double s_time = drift.sigma_time * elapsed_days;

    Xoshiro256 rng(drift.seed);
    std::vector<double> tau = profile.tau();
    for (double& t : tau) {
        double shift = sys;
        // skip zero-sigma draws so the all-zero config is the exact identity
        if (s_temp > 0.0) shift += s_temp * rng.next_gaussian();
        if (s_time > 0.0) shift += s_time * rng.next_gaussian();
        t = std::clamp(t + shift, kTauMin, kTauMax);
    }
    return SenseAmpProfile(std::move(tau));
}

}  // namespace pudsim
