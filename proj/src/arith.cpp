#include "pudsim/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace pudsim {

RowAllocator::RowAllocator(int first_row, int last_row) {
    if (first_row > last_row)
        throw std::invalid_argument("row allocator: empty row range");
    free_.reserve(static_cast<size_t>(last_row - first_row + 1));
    for (int r = last_row; r >= first_row; --r) free_.push_back(r);
}

int RowAllocator::acquire() {
    if (free_.empty())
        throw std::runtime_error("row allocator: subarray scratch rows exhausted");
    const int r = free_.back();
    free_.pop_back();
    return r;
}

void RowAllocator::release(int row) { free_.push_back(row); }

ArithUnit::ArithUnit(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
                     const SenseAmpProfile& profile, int first_scratch_row)
    : sa_(sa),
      plan3_(plan),
      plan5_(plan),
      table_(table),
      profile_(profile),
      alloc_(first_scratch_row >= 0 ? first_scratch_row
                                    : 1 + *std::max_element(plan.storage_rows.begin(),
                                                            plan.storage_rows.end()),
             sa.n_rows() - 1) {
    plan3_.x = 3;
    plan5_.x = 5;
    plan5_.validate(sa.geometry());
    const size_t n = static_cast<size_t>(sa_.n_cols());
    const0_row_ = alloc_.acquire();
    const1_row_ = alloc_.acquire();
    sa_.write_row(const0_row_, std::vector<uint8_t>(n, 0));
    sa_.write_row(const1_row_, std::vector<uint8_t>(n, 1));
}

void ArithUnit::gather(int row, std::vector<uint8_t>& bits) const {
    const auto cells = sa_.row(row);
    bits.resize(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) bits[c] = cells[c] > 0.5 ? 1 : 0;
}

int ArithUnit::run_maj3(int r1, int r2, int r3) {
    std::vector<std::vector<uint8_t>> in(3);
    gather(r1, in[0]);
    gather(r2, in[1]);
    gather(r3, in[2]);
    const std::vector<uint8_t> out = maj3(sa_, plan3_, in, table_, profile_, &counts_);
    const int dst = alloc_.acquire();
    sa_.write_row(dst, out);
    counts_.row_copies += 1;  // park the result outside the activation group
    return dst;
}

int ArithUnit::run_maj5(int r1, int r2, int r3, int r4, int r5) {
    std::vector<std::vector<uint8_t>> in(5);
    gather(r1, in[0]);
    gather(r2, in[1]);
    gather(r3, in[2]);
    gather(r4, in[3]);
    gather(r5, in[4]);
    const std::vector<uint8_t> out = exec_maj(sa_, plan5_, in, table_, profile_, &counts_);
    const int dst = alloc_.acquire();
    sa_.write_row(dst, out);
    counts_.row_copies += 1;
    return dst;
}

ColumnOperand ArithUnit::load_operand(std::span<const uint32_t> values, int width) {
    if (width <= 0 || width > 16)
        throw std::invalid_argument("load_operand: width must be in [1,16]");
    if (values.size() != static_cast<size_t>(sa_.n_cols()))
        throw std::invalid_argument("load_operand: one value per column required");
    ColumnOperand op;
    op.width = width;
    const size_t n = values.size();
    std::vector<uint8_t> bits(n), comp(n);
    for (int b = 0; b < width; ++b) {
        for (size_t c = 0; c < n; ++c) {
            bits[c] = static_cast<uint8_t>((values[c] >> b) & 1u);
            comp[c] = static_cast<uint8_t>(1u - bits[c]);
        }
        const int vr = alloc_.acquire();
        const int cr = alloc_.acquire();
        sa_.write_row(vr, bits);
        sa_.write_row(cr, comp);
        op.val_rows.push_back(vr);
        op.comp_rows.push_back(cr);
        counts_.row_copies += 2;
    }
    return op;
}

std::vector<uint32_t> ArithUnit::read_operand(const ColumnOperand& op) const {
    const size_t n = static_cast<size_t>(sa_.n_cols());
    std::vector<uint32_t> out(n, 0);
    std::vector<uint8_t> bits;
    for (int b = 0; b < op.width; ++b) {
        gather(op.val_rows[static_cast<size_t>(b)], bits);
        for (size_t c = 0; c < n; ++c) out[c] |= static_cast<uint32_t>(bits[c]) << b;
    }
    return out;
}

void ArithUnit::free_operand(ColumnOperand& op) {
    for (int r : op.val_rows) alloc_.release(r);
    for (int r : op.comp_rows) alloc_.release(r);
    op = ColumnOperand{};
}

ArithUnit::FullAdderOut ArithUnit::full_adder(int a, int a_comp, int b, int b_comp, int cin,
                                              int cin_comp, bool need_sum_complement) {
    FullAdderOut out{};
    out.carry_row = run_maj3(a, b, cin);
    out.carry_comp_row = run_maj3(a_comp, b_comp, cin_comp);
    out.sum_row = run_maj5(a, b, cin, out.carry_comp_row, out.carry_comp_row);
    out.sum_comp_row =
        need_sum_complement ? run_maj5(a_comp, b_comp, cin_comp, out.carry_row, out.carry_row)
                            : -1;
    return out;
}

ColumnOperand ArithUnit::add8(const ColumnOperand& a, const ColumnOperand& b) {
    if (a.width != 8 || b.width != 8)
        throw std::invalid_argument("add8: operands must be 8 bits wide");
    if (a.comp_rows.size() != 8 || b.comp_rows.size() != 8)
        throw std::invalid_argument("add8: operands must be dual-rail");

    ColumnOperand result;
    result.width = 9;
    int cin = const0_row_, cin_comp = const1_row_;
    for (int i = 0; i < 8; ++i) {
        const auto fa = full_adder(a.val_rows[static_cast<size_t>(i)],
                                   a.comp_rows[static_cast<size_t>(i)],
                                   b.val_rows[static_cast<size_t>(i)],
                                   b.comp_rows[static_cast<size_t>(i)], cin, cin_comp, false);
        result.val_rows.push_back(fa.sum_row);
        if (i > 0) {
            alloc_.release(cin);
            alloc_.release(cin_comp);
        }
        cin = fa.carry_row;
        cin_comp = fa.carry_comp_row;
    }
    result.val_rows.push_back(cin);  // carry out is the ninth bit
    alloc_.release(cin_comp);
    return result;
}

ColumnOperand ArithUnit::mul8(const ColumnOperand& a, const ColumnOperand& b) {
    if (a.width != 8 || b.width != 8)
        throw std::invalid_argument("mul8: operands must be 8 bits wide");
    if (a.comp_rows.size() != 8 || b.comp_rows.size() != 8)
        throw std::invalid_argument("mul8: operands must be dual-rail");

    std::array<int, 16> acc_val;
    std::array<int, 16> acc_comp;
    acc_val.fill(-1);
    acc_comp.fill(-1);

    for (int i = 0; i < 8; ++i) {
        // partial product a & b_i, dual-rail: AND/NAND pairs of MAJ3
        std::array<int, 8> pp_val, pp_comp;
        for (int j = 0; j < 8; ++j) {
            pp_val[static_cast<size_t>(j)] =
                run_maj3(a.val_rows[static_cast<size_t>(j)], b.val_rows[static_cast<size_t>(i)],
                         const0_row_);
            pp_comp[static_cast<size_t>(j)] =
                run_maj3(a.comp_rows[static_cast<size_t>(j)],
                         b.comp_rows[static_cast<size_t>(i)], const1_row_);
        }

        if (i == 0) {
            // the first partial product rows simply become the accumulator;
            // position 8 is zero-extended so the next addition sees a full
            // 8-bit window
            for (int j = 0; j < 8; ++j) {
                acc_val[static_cast<size_t>(j)] = pp_val[static_cast<size_t>(j)];
                acc_comp[static_cast<size_t>(j)] = pp_comp[static_cast<size_t>(j)];
            }
            const size_t n = static_cast<size_t>(sa_.n_cols());
            acc_val[8] = alloc_.acquire();
            acc_comp[8] = alloc_.acquire();
            sa_.write_row(acc_val[8], std::vector<uint8_t>(n, 0));
            sa_.write_row(acc_comp[8], std::vector<uint8_t>(n, 1));
            counts_.row_copies += 2;
            continue;
        }

        int cin = const0_row_, cin_comp = const1_row_;
        for (int j = 0; j < 8; ++j) {
            const int pos = i + j;
            // a sum at `pos` feeds addition i+1 unless this is the last one
            // or the position falls below its window
            const bool need_comp = i < 7 && pos > i;
            const auto fa = full_adder(acc_val[static_cast<size_t>(pos)],
                                       acc_comp[static_cast<size_t>(pos)],
                                       pp_val[static_cast<size_t>(j)],
                                       pp_comp[static_cast<size_t>(j)], cin, cin_comp, need_comp);
            alloc_.release(acc_val[static_cast<size_t>(pos)]);
            alloc_.release(acc_comp[static_cast<size_t>(pos)]);
            alloc_.release(pp_val[static_cast<size_t>(j)]);
            alloc_.release(pp_comp[static_cast<size_t>(j)]);
            if (j > 0) {
                alloc_.release(cin);
                alloc_.release(cin_comp);
            }
            acc_val[static_cast<size_t>(pos)] = fa.sum_row;
            acc_comp[static_cast<size_t>(pos)] = fa.sum_comp_row;
            cin = fa.carry_row;
            cin_comp = fa.carry_comp_row;
        }
        acc_val[static_cast<size_t>(i + 8)] = cin;
        acc_comp[static_cast<size_t>(i + 8)] = cin_comp;
    }

    ColumnOperand result;
    result.width = 16;
    for (int pos = 0; pos < 16; ++pos) {
        result.val_rows.push_back(acc_val[static_cast<size_t>(pos)]);
        const int comp = acc_comp[static_cast<size_t>(pos)];
        if (comp >= 0) alloc_.release(comp);
    }
    return result;
}

OpCounts op_cost(ArithOp op, const MajPlan& plan) {
    const OpCounts per_maj = maj_op_cost(plan);
    auto majs = [&](long long count) {
        OpCounts c;
        c.row_copies = count * (per_maj.row_copies + 1);  // +1 parks each result
        c.fracs = count * per_maj.fracs;
        c.simras = count * per_maj.simras;
        return c;
    };
    switch (op) {
        case ArithOp::maj3:
        case ArithOp::maj5:
            return per_maj;
        case ArithOp::add8:
            // 8 full adders, 3 majorities each
            return majs(8 * 3);
        case ArithOp::mul8: {
            // 64 AND + 64 NAND partial-product majorities, then 7 ripple
            // additions: the first 6 need dual-rail sums except at their
            // lowest bit (3 + 7*4 majorities), the last one does not (8*3).
            const long long pp = 64 + 64;
            const long long mid_adds = 6 * (3 + 7 * 4);
            const long long last_add = 8 * 3;
            OpCounts c = majs(pp + mid_adds + last_add);
            c.row_copies += 2;  // zero-extension of the accumulator
            return c;
        }
    }
    throw std::invalid_argument("op_cost: unknown operation");
}

}  // namespace pudsim
