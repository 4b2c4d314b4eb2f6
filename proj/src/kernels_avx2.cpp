// AVX2 variants of the column-parallel kernels. Compiled with -mavx2 only in
// this translation unit; callers go through the dispatch table in
// kernels_dispatch.cpp. Results are bit-identical to the scalar backend: the
// per-column operation sequence is the same, only the column batching differs.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

#include "pudsim/kernels.hpp"

namespace pudsim::kernels {
namespace {

void charge_share_rows_avx2(const double* const* rows, int n_rows, size_t n_cols,
                            double c_cell, double precharge_term, double inv_denom,
                            double* out_voltage) {
    const __m256d vc = _mm256_set1_pd(c_cell);
    const __m256d vp = _mm256_set1_pd(precharge_term);
    const __m256d vi = _mm256_set1_pd(inv_denom);
    size_t c = 0;
    for (; c + 4 <= n_cols; c += 4) {
        __m256d sum = _mm256_loadu_pd(rows[0] + c);
        for (int r = 1; r < n_rows; ++r)
            sum = _mm256_add_pd(sum, _mm256_loadu_pd(rows[r] + c));
        const __m256d v = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(vc, sum), vp), vi);
        _mm256_storeu_pd(out_voltage + c, v);
    }
    for (; c < n_cols; ++c) {
        double sum = rows[0][c];
        for (int r = 1; r < n_rows; ++r) sum = sum + rows[r][c];
        out_voltage[c] = (c_cell * sum + precharge_term) * inv_denom;
    }
}

void sense_avx2(const double* voltage, const double* tau, const double* noise,
                size_t n_cols, uint8_t* bits) {
    size_t c = 0;
    if (noise) {
        for (; c + 4 <= n_cols; c += 4) {
            const __m256d v = _mm256_add_pd(_mm256_loadu_pd(voltage + c),
                                            _mm256_loadu_pd(noise + c));
            const int m = _mm256_movemask_pd(
                _mm256_cmp_pd(v, _mm256_loadu_pd(tau + c), _CMP_GT_OQ));
            bits[c + 0] = static_cast<uint8_t>(m & 1);
            bits[c + 1] = static_cast<uint8_t>((m >> 1) & 1);
            bits[c + 2] = static_cast<uint8_t>((m >> 2) & 1);
            bits[c + 3] = static_cast<uint8_t>((m >> 3) & 1);
        }
        for (; c < n_cols; ++c) bits[c] = (voltage[c] + noise[c]) > tau[c] ? 1 : 0;
    } else {
        for (; c + 4 <= n_cols; c += 4) {
            const int m = _mm256_movemask_pd(_mm256_cmp_pd(
                _mm256_loadu_pd(voltage + c), _mm256_loadu_pd(tau + c), _CMP_GT_OQ));
            bits[c + 0] = static_cast<uint8_t>(m & 1);
            bits[c + 1] = static_cast<uint8_t>((m >> 1) & 1);
            bits[c + 2] = static_cast<uint8_t>((m >> 2) & 1);
            bits[c + 3] = static_cast<uint8_t>((m >> 3) & 1);
        }
        for (; c < n_cols; ++c) bits[c] = voltage[c] > tau[c] ? 1 : 0;
    }
}

void restore_rows_avx2(double* const* rows, int n_rows, const uint8_t* bits,
                       size_t n_cols) {
    for (int r = 0; r < n_rows; ++r) {
        double* row = rows[r];
        size_t c = 0;
        for (; c + 4 <= n_cols; c += 4) {
            // bits are 0/1, so integer->double conversion gives the full-swing value
            int32_t packed;
            std::memcpy(&packed, bits + c, sizeof(packed));
            const __m128i b = _mm_cvtepu8_epi32(_mm_cvtsi32_si128(packed));
            _mm256_storeu_pd(row + c, _mm256_cvtepi32_pd(b));
        }
        for (; c < n_cols; ++c) row[c] = bits[c] ? 1.0 : 0.0;
    }
}

void frac_contract_avx2(double* row, size_t n_cols, double f) {
    const __m256d vf = _mm256_set1_pd(f);
    const __m256d half = _mm256_set1_pd(0.5);
    size_t c = 0;
    for (; c + 4 <= n_cols; c += 4) {
        const __m256d v = _mm256_loadu_pd(row + c);
        const __m256d out =
            _mm256_add_pd(half, _mm256_mul_pd(vf, _mm256_sub_pd(v, half)));
        _mm256_storeu_pd(row + c, out);
    }
    for (; c < n_cols; ++c) row[c] = 0.5 + f * (row[c] - 0.5);
}

void u8_sum_rows_avx2(const uint8_t* const* rows, int n_rows, size_t n_cols,
                      uint8_t* out) {
    size_t c = 0;
    for (; c + 32 <= n_cols; c += 32) {
        __m256i sum =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows[0] + c));
        for (int r = 1; r < n_rows; ++r)
            sum = _mm256_add_epi8(
                sum, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows[r] + c)));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + c), sum);
    }
    for (; c < n_cols; ++c) {
        uint8_t sum = rows[0][c];
        for (int r = 1; r < n_rows; ++r) sum = static_cast<uint8_t>(sum + rows[r][c]);
        out[c] = sum;
    }
}

void u8_ge_avx2(const uint8_t* in, uint8_t threshold, size_t n_cols, uint8_t* out) {
    const __m256i thr = _mm256_set1_epi8(static_cast<char>(threshold));
    const __m256i one = _mm256_set1_epi8(1);
    size_t c = 0;
    for (; c + 32 <= n_cols; c += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + c));
        // unsigned >= via max: max(v, thr) == v
        const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(v, thr), v);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + c),
                            _mm256_and_si256(ge, one));
    }
    for (; c < n_cols; ++c) out[c] = in[c] >= threshold ? 1 : 0;
}

void flag_mismatch_avx2(const uint8_t* a, const uint8_t* b, size_t n_cols,
                        uint8_t* flags) {
    const __m256i one = _mm256_set1_epi8(1);
    size_t c = 0;
    for (; c + 32 <= n_cols; c += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + c));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + c));
        const __m256i neq = _mm256_andnot_si256(_mm256_cmpeq_epi8(va, vb), one);
        __m256i vf = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(flags + c));
        vf = _mm256_or_si256(vf, neq);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(flags + c), vf);
    }
    for (; c < n_cols; ++c) flags[c] |= (a[c] != b[c]) ? 1 : 0;
}

void u32_add_u8_avx2(const uint8_t* bits, size_t n_cols, uint32_t* counts) {
    size_t c = 0;
    for (; c + 8 <= n_cols; c += 8) {
        const __m256i w = _mm256_cvtepu8_epi32(
            _mm_loadl_epi64(reinterpret_cast<const __m128i*>(bits + c)));
        __m256i acc = _mm256_loadu_si256(reinterpret_cast<__m256i*>(counts + c));
        acc = _mm256_add_epi32(acc, w);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(counts + c), acc);
    }
    for (; c < n_cols; ++c) counts[c] += bits[c];
}

}  // namespace

const Backend avx2_backend = {
    "avx2",
    charge_share_rows_avx2,
    sense_avx2,
    restore_rows_avx2,
    frac_contract_avx2,
    u8_sum_rows_avx2,
    u8_ge_avx2,
    flag_mismatch_avx2,
    u32_add_u8_avx2,
};

}  // namespace pudsim::kernels

#endif  // x86_64
