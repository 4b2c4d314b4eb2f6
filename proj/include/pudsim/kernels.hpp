#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pudsim::kernels {

// Column-parallel inner loops of the subarray model. Every operation has a
// scalar reference implementation and an AVX2 variant; the two are required
// to produce bit-identical results (see tests/test_kernels.cpp). The active
// backend is chosen at runtime from CPU features and can be overridden with
// select() or the PUDSIM_KERNELS environment variable.
struct Backend {
    const char* name;

    // out[c] = (c_cell * sum_i rows[i][c] + precharge_term) * inv_denom
    // Rows are accumulated in array order; callers rely on that for
    // reproducibility across backends.
    void (*charge_share_rows)(const double* const* rows, int n_rows, size_t n_cols,
                              double c_cell, double precharge_term, double inv_denom,
                              double* out_voltage);

    // bits[c] = (voltage[c] + noise[c]) > tau[c]; noise may be null (no noise).
    // Equality senses 0.
    void (*sense)(const double* voltage, const double* tau, const double* noise,
                  size_t n_cols, uint8_t* bits);

    // rows[i][c] = bits[c] ? 1.0 : 0.0 for every row (full-swing restore)
    void (*restore_rows)(double* const* rows, int n_rows, const uint8_t* bits,
                         size_t n_cols);

    // row[c] = 0.5 + f * (row[c] - 0.5)
    void (*frac_contract)(double* row, size_t n_cols, double f);

    // out[c] = sum_i rows[i][c]  (n_rows <= 255)
    void (*u8_sum_rows)(const uint8_t* const* rows, int n_rows, size_t n_cols,
                        uint8_t* out);

    // out[c] = in[c] >= threshold
    void (*u8_ge)(const uint8_t* in, uint8_t threshold, size_t n_cols, uint8_t* out);

    // flags[c] |= (a[c] != b[c])
    void (*flag_mismatch)(const uint8_t* a, const uint8_t* b, size_t n_cols,
                          uint8_t* flags);

    // counts[c] += bits[c]
    void (*u32_add_u8)(const uint8_t* bits, size_t n_cols, uint32_t* counts);
};

extern const Backend scalar_backend;
#if defined(__x86_64__) || defined(_M_X64)
extern const Backend avx2_backend;
#endif

// Active backend (auto-detected on first use).
const Backend& active();

// Force a backend by name: "scalar", "avx2" or "auto". Throws
// std::invalid_argument for unknown names or unavailable backends.
void select(std::string_view name);

bool avx2_available();

}  // namespace pudsim::kernels
