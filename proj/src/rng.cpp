#include "pudsim/rng.hpp"

#include <cmath>
#include <cstdlib>

namespace pudsim {
namespace {

// Marsaglia & Tsang ziggurat tables for the standard normal, 128 layers.
struct ZigguratTables {
    uint32_t kn[128];
    double wn[128];
    double fn[128];

    ZigguratTables() {
        const double m1 = 2147483648.0;  // 2^31
        double dn = 3.442619855899;
        double tn = dn;
        const double vn = 9.91256303526217e-3;

        const double q = vn / std::exp(-0.5 * dn * dn);
        kn[0] = static_cast<uint32_t>((dn / q) * m1);
        kn[1] = 0;
        wn[0] = q / m1;
        wn[127] = dn / m1;
        fn[0] = 1.0;
        fn[127] = std::exp(-0.5 * dn * dn);
        for (int i = 126; i >= 1; --i) {
            dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
            kn[i + 1] = static_cast<uint32_t>((dn / tn) * m1);
            tn = dn;
            fn[i] = std::exp(-0.5 * dn * dn);
            wn[i] = dn / m1;
        }
    }
};

const ZigguratTables& ziggurat() {
    static const ZigguratTables tables;
    return tables;
}

}  // namespace

double Xoshiro256::next_gaussian() {
    const ZigguratTables& t = ziggurat();
    constexpr double r = 3.442619855899;
    for (;;) {
        const int32_t hz = static_cast<int32_t>(next_u64() >> 32);
        const uint32_t iz = static_cast<uint32_t>(hz) & 127u;
        const uint32_t az = hz < 0 ? static_cast<uint32_t>(-static_cast<int64_t>(hz))
                                   : static_cast<uint32_t>(hz);
        if (az < t.kn[iz]) return hz * t.wn[iz];

        if (iz == 0) {
            // tail beyond r
            double x, y;
            do {
                x = -std::log(1.0 - next_double()) / r;
                y = -std::log(1.0 - next_double());
            } while (y + y < x * x);
            return hz > 0 ? r + x : -(r + x);
        }
        const double x = hz * t.wn[iz];
        if (t.fn[iz] + next_double() * (t.fn[iz - 1] - t.fn[iz]) < std::exp(-0.5 * x * x))
            return x;
    }
}

void Xoshiro256::fill_gaussian(double* out, size_t n, double sigma) {
    for (size_t i = 0; i < n; ++i) out[i] = sigma * next_gaussian();
}

void Xoshiro256::fill_bits(uint8_t* out, size_t n) {
    size_t i = 0;
    while (i + 64 <= n) {
        uint64_t w = next_u64();
        for (int b = 0; b < 64; ++b) out[i + b] = static_cast<uint8_t>((w >> b) & 1u);
        i += 64;
    }
    if (i < n) {
        uint64_t w = next_u64();
        for (; i < n; ++i, w >>= 1) out[i] = static_cast<uint8_t>(w & 1u);
    }
}

}  // namespace pudsim
