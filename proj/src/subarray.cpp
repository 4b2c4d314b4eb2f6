#include "pudsim/subarray.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>
#include <string>

#include "pudsim/kernels.hpp"
#include "pudsim/variation.hpp"

namespace pudsim {

void SubarrayGeometry::validate() const {
    if (n_rows <= 0 || n_cols <= 0)
        throw std::invalid_argument("subarray geometry: n_rows and n_cols must be positive");
    if (c_cell_ff <= 0.0 || c_bitline_ff <= 0.0)
        throw std::invalid_argument("subarray geometry: capacitances must be positive");
    if (v_precharge < 0.0 || v_precharge > 1.0)
        throw std::invalid_argument("subarray geometry: v_precharge must be in [0,1]");
    if (warn_unusual && (n_rows < 256 || n_rows > 1024))
        std::cerr << "pudsim: note: " << n_rows
                  << " rows per subarray is outside the usual 256-1024 range\n";
}

double charge_share(std::span<const double> cell_values, const SubarrayGeometry& geom) {
    if (cell_values.empty())
        throw std::invalid_argument("charge_share: cell value list must be non-empty");
    geom.validate();
    const double inv =
        1.0 / (static_cast<double>(cell_values.size()) * geom.c_cell_ff + geom.c_bitline_ff);
    double sum = cell_values[0];
    for (size_t i = 1; i < cell_values.size(); ++i) sum = sum + cell_values[i];
    return (geom.c_cell_ff * sum + geom.c_bitline_ff * geom.v_precharge) * inv;
}

int sense(double voltage, double tau, double sigma_sense, Xoshiro256& rng) {
    const double eps = sigma_sense > 0.0 ? sigma_sense * rng.next_gaussian() : 0.0;
    return (voltage + eps) > tau ? 1 : 0;
}

Subarray::Subarray(const SubarrayGeometry& geom, const NoiseConfig& noise)
    : geom_(geom), noise_(noise), rng_(noise.seed) {
    geom_.validate();
    if (noise_.sigma_sense < 0.0 || noise_.sigma_cell < 0.0)
        throw std::invalid_argument("noise config: sigmas must be non-negative");
    cells_.assign(static_cast<size_t>(geom_.n_rows) * geom_.n_cols, 0.0);
    vbuf_.resize(geom_.n_cols);
    nbuf_.resize(geom_.n_cols);
    bbuf_.resize(geom_.n_cols);
}

void Subarray::check_row(int r) const {
    if (r < 0 || r >= geom_.n_rows)
        throw std::out_of_range("row index " + std::to_string(r) + " out of range");
}

std::span<const double> Subarray::row(int r) const {
    check_row(r);
    return {row_ptr(r), static_cast<size_t>(geom_.n_cols)};
}

double Subarray::cell(int r, int c) const {
    check_row(r);
    if (c < 0 || c >= geom_.n_cols) throw std::out_of_range("column index out of range");
    return row_ptr(r)[c];
}

void Subarray::write_row(int row, std::span<const uint8_t> bits) {
    check_row(row);
    if (bits.size() != static_cast<size_t>(geom_.n_cols))
        throw std::invalid_argument("write_row: bit vector length does not match n_cols");
    const size_t n = bits.size();
    for (size_t c = 0; c < n; ++c) bbuf_[c] = bits[c] ? 1 : 0;
    double* dst[1] = {row_ptr(row)};
    kernels::active().restore_rows(dst, 1, bbuf_.data(), n);
    if (noise_.sigma_cell > 0.0) {
        double* p = dst[0];
        for (size_t c = 0; c < n; ++c)
            p[c] = std::clamp(p[c] + noise_.sigma_cell * rng_.next_gaussian(), 0.0, 1.0);
    }
}

void Subarray::row_copy(int src, int dst, const SenseAmpProfile& profile) {
    check_row(src);
    check_row(dst);
    if (src == dst) throw std::invalid_argument("row_copy: src and dst must differ");
    profile.check_cols(geom_.n_cols);

    open_rows_ = {src, dst};
    const size_t n = static_cast<size_t>(geom_.n_cols);
    const double* srcp[1] = {row_ptr(src)};
    const double inv = 1.0 / (geom_.c_cell_ff + geom_.c_bitline_ff);
    const auto& k = kernels::active();
    k.charge_share_rows(srcp, 1, n, geom_.c_cell_ff, geom_.c_bitline_ff * geom_.v_precharge,
                        inv, vbuf_.data());
    const double* noise = nullptr;
    if (noise_.sigma_sense > 0.0) {
        rng_.fill_gaussian(nbuf_.data(), n, noise_.sigma_sense);
        noise = nbuf_.data();
    }
    k.sense(vbuf_.data(), profile.tau().data(), noise, n, bbuf_.data());
    double* both[2] = {row_ptr(src), row_ptr(dst)};
    k.restore_rows(both, 2, bbuf_.data(), n);
    open_rows_.clear();  // precharge
}

void Subarray::frac(int row, double f) {
    check_row(row);
    if (!(f > 0.0 && f <= 1.0))
        throw std::invalid_argument("frac: contraction factor must be in (0,1]");
    kernels::active().frac_contract(row_ptr(row), geom_.n_cols, f);
}

std::vector<uint8_t> Subarray::simra(std::span<const int> rows,
                                     const SenseAmpProfile& profile) {
    std::vector<uint8_t> out(geom_.n_cols);
    simra_into(rows, profile, out.data());
    return out;
}

void Subarray::simra_into(std::span<const int> rows, const SenseAmpProfile& profile,
                          uint8_t* out_bits) {
    if (rows.size() < 2)
        throw std::invalid_argument("simra: needs at least 2 rows");
    for (int r : rows) check_row(r);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i] == rows[j])
                throw std::invalid_argument("simra: row indices must be distinct");
    profile.check_cols(geom_.n_cols);

    open_rows_.assign(rows.begin(), rows.end());
    const size_t n = static_cast<size_t>(geom_.n_cols);
    const int k_rows = static_cast<int>(rows.size());

    const double* srcs[64];
    double* dsts[64];
    if (k_rows > 64) throw std::invalid_argument("simra: too many rows");
    for (int i = 0; i < k_rows; ++i) {
        srcs[i] = row_ptr(rows[i]);
        dsts[i] = row_ptr(rows[i]);
    }

    const double inv = 1.0 / (k_rows * geom_.c_cell_ff + geom_.c_bitline_ff);
    const auto& k = kernels::active();
    k.charge_share_rows(srcs, k_rows, n, geom_.c_cell_ff,
                        geom_.c_bitline_ff * geom_.v_precharge, inv, vbuf_.data());
    const double* noise = nullptr;
    if (noise_.sigma_sense > 0.0) {
        rng_.fill_gaussian(nbuf_.data(), n, noise_.sigma_sense);
        noise = nbuf_.data();
    }
    k.sense(vbuf_.data(), profile.tau().data(), noise, n, out_bits);
    k.restore_rows(dsts, k_rows, out_bits, n);
    open_rows_.clear();  // precharge
}

}  // namespace pudsim
