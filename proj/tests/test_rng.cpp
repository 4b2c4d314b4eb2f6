#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "pudsim/rng.hpp"

using namespace pudsim;

TEST_CASE("same seed reproduces the exact stream") {
    Xoshiro256 a(1234), b(1234);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    Xoshiro256 c(1234), d(1235);
    int diff = 0;
    for (int i = 0; i < 64; ++i) diff += c.next_u64() != d.next_u64();
    CHECK(diff > 60);
}

TEST_CASE("derive_seed separates streams by tag") {
    CHECK(derive_seed(7, 1) != derive_seed(7, 2));
    CHECK(derive_seed(7, 1, 0) != derive_seed(7, 1, 1));
    CHECK(derive_seed(7, 1) == derive_seed(7, 1));
    CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("uniform doubles stay in [0,1)") {
    Xoshiro256 rng(42);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.next_double();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("fill_bits emits balanced 0/1 bytes") {
    Xoshiro256 rng(99);
    std::vector<uint8_t> bits(100003);
    rng.fill_bits(bits.data(), bits.size());
    long ones = 0;
    for (uint8_t b : bits) {
        REQUIRE((b == 0 || b == 1));
        ones += b;
    }
    const double frac = static_cast<double>(ones) / static_cast<double>(bits.size());
    CHECK(frac == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("ziggurat gaussian matches the normal distribution") {
    Xoshiro256 rng(2024);
    const int n = 2'000'000;
    double sum = 0.0, sum2 = 0.0;
    long over1 = 0, over2 = 0, over3 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.next_gaussian();
        sum += x;
        sum2 += x * x;
        const double a = std::abs(x);
        over1 += a > 1.0;
        over2 += a > 2.0;
        over3 += a > 3.0;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));  // 5 sigma
    CHECK(var == doctest::Approx(1.0).epsilon(0.01));
    // two-sided tail masses: 0.3173, 0.04550, 0.002700
    CHECK(static_cast<double>(over1) / n == doctest::Approx(0.31731).epsilon(0.02));
    CHECK(static_cast<double>(over2) / n == doctest::Approx(0.04550).epsilon(0.05));
    CHECK(static_cast<double>(over3) / n == doctest::Approx(0.00270).epsilon(0.15));
}

TEST_CASE("fill_gaussian scales by sigma and reproduces under seed") {
    Xoshiro256 a(5), b(5);
    std::vector<double> x(4096), y(4096);
    a.fill_gaussian(x.data(), x.size(), 0.005);
    b.fill_gaussian(y.data(), y.size(), 0.005);
    CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    CHECK(m < 0.005 * 6.0);
    CHECK(m > 0.005 * 2.0);
}
