#pragma once

#include <cstddef>
#include <cstdint>

namespace pudsim {

// splitmix64, used for seeding and for deriving independent sub-streams.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ generator. All randomness in the simulator flows through
// this generator so that runs are reproducible independent of the standard
// library implementation.
class Xoshiro256 {
  public:
    explicit Xoshiro256(uint64_t seed = 0) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& s : state_) s = splitmix64(sm);
        // splitmix cannot emit four zeros for any input, but guard anyway
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform double in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal via 128-layer ziggurat
    double next_gaussian();

    void fill_gaussian(double* out, size_t n, double sigma);

    // one random bit per byte (values 0 or 1)
    void fill_bits(uint8_t* out, size_t n);

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

// Derives a child seed from a master seed and a tag path. Used to hand out
// independent, reproducible streams (profile sampling, trial inputs, sense
// noise, ...) from one CLI-level seed.
inline uint64_t derive_seed(uint64_t master, uint64_t tag_a, uint64_t tag_b = 0) {
    uint64_t s = master;
    uint64_t h = splitmix64(s);
    s ^= tag_a * 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= tag_b * 0xd1b54a32d192ed03ULL;
    h ^= splitmix64(s);
    return h;
}

}  // namespace pudsim
