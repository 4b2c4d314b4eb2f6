#include "pudsim/kernels.hpp"

namespace pudsim::kernels {
namespace {

void charge_share_rows_scalar(const double* const* rows, int n_rows, size_t n_cols,
                              double c_cell, double precharge_term, double inv_denom,
                              double* out_voltage) {
    for (size_t c = 0; c < n_cols; ++c) {
        double sum = rows[0][c];
        for (int r = 1; r < n_rows; ++r) sum = sum + rows[r][c];
        out_voltage[c] = (c_cell * sum + precharge_term) * inv_denom;
    }
}

void sense_scalar(const double* voltage, const double* tau, const double* noise,
                  size_t n_cols, uint8_t* bits) {
    if (noise) {
        for (size_t c = 0; c < n_cols; ++c)
            bits[c] = (voltage[c] + noise[c]) > tau[c] ? 1 : 0;
    } else {
        for (size_t c = 0; c < n_cols; ++c) bits[c] = voltage[c] > tau[c] ? 1 : 0;
    }
}

void restore_rows_scalar(double* const* rows, int n_rows, const uint8_t* bits,
                         size_t n_cols) {
    for (int r = 0; r < n_rows; ++r) {
        double* row = rows[r];
        for (size_t c = 0; c < n_cols; ++c) row[c] = bits[c] ? 1.0 : 0.0;
    }
}

void frac_contract_scalar(double* row, size_t n_cols, double f) {
    for (size_t c = 0; c < n_cols; ++c) row[c] = 0.5 + f * (row[c] - 0.5);
}

void u8_sum_rows_scalar(const uint8_t* const* rows, int n_rows, size_t n_cols,
                        uint8_t* out) {
    for (size_t c = 0; c < n_cols; ++c) {
        uint8_t sum = rows[0][c];
        for (int r = 1; r < n_rows; ++r) sum = static_cast<uint8_t>(sum + rows[r][c]);
        out[c] = sum;
    }
}

void u8_ge_scalar(const uint8_t* in, uint8_t threshold, size_t n_cols, uint8_t* out) {
    for (size_t c = 0; c < n_cols; ++c) out[c] = in[c] >= threshold ? 1 : 0;
}

void flag_mismatch_scalar(const uint8_t* a, const uint8_t* b, size_t n_cols,
                          uint8_t* flags) {
    for (size_t c = 0; c < n_cols; ++c) flags[c] |= (a[c] != b[c]) ? 1 : 0;
}

void u32_add_u8_scalar(const uint8_t* bits, size_t n_cols, uint32_t* counts) {
    for (size_t c = 0; c < n_cols; ++c) counts[c] += bits[c];
}

}  // namespace

const Backend scalar_backend = {
    "scalar",
    charge_share_rows_scalar,
    sense_scalar,
    restore_rows_scalar,
    frac_contract_scalar,
    u8_sum_rows_scalar,
    u8_ge_scalar,
    flag_mismatch_scalar,
    u32_add_u8_scalar,
};

}  // namespace pudsim::kernels
