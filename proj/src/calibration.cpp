#include "pudsim/calibration.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pudsim/kernels.hpp"

namespace pudsim {

CalibrationTable::CalibrationTable(OffsetLadder ladder, int n_cols)
    : ladder_(std::move(ladder)) {
    if (n_cols <= 0) throw std::invalid_argument("calibration table: n_cols must be positive");
    if (ladder_.entries.empty())
        throw std::invalid_argument("calibration table: empty ladder");
    levels_.assign(static_cast<size_t>(n_cols),
                   static_cast<int16_t>(ladder_.mid_level()));
}

void CalibrationTable::set_level(int col, int level) {
    if (col < 0 || col >= n_cols()) throw std::out_of_range("calibration table: column");
    if (level < 0 || level >= ladder_.size())
        throw std::out_of_range("calibration table: level outside ladder");
    levels_[static_cast<size_t>(col)] = static_cast<int16_t>(level);
}

void CalibrationTable::pattern_row(int j, uint8_t* out) const {
    const size_t n = levels_.size();
    for (size_t c = 0; c < n; ++c) out[c] = ladder_.entries[levels_[c]].pattern[j];
}

void CalibrationTable::check_cols(int n) const {
    if (n_cols() != n)
        throw std::invalid_argument("calibration table covers " + std::to_string(n_cols()) +
                                    " columns, expected " + std::to_string(n));
}

bool CalibrationTable::operator==(const CalibrationTable& o) const {
    return ladder_.frac == o.ladder_.frac && ladder_.contraction_f == o.ladder_.contraction_f &&
           levels_ == o.levels_;
}

void CalibParams::validate() const {
    if (n_iterations <= 0 || samples_per_iteration <= 0)
        throw std::invalid_argument("calibration params: iteration counts must be positive");
    if (!(bias_threshold > 0.0 && bias_threshold < 0.5))
        throw std::invalid_argument("calibration params: bias threshold must be in (0,0.5)");
}

double get_bias(std::span<const uint8_t> outputs) {
    if (outputs.empty()) throw std::invalid_argument("get_bias: empty output vector");
    long long ones = 0;
    for (uint8_t b : outputs) ones += b;
    return static_cast<double>(ones) / static_cast<double>(outputs.size()) - 0.5;
}

SamplingResult majx_sampling(Subarray& sa, const MajPlan& plan, const CalibrationTable* table,
                             const SenseAmpProfile& profile, int n_samples, Xoshiro256& rng,
                             OpCounts* counts) {
    if (n_samples <= 0) throw std::invalid_argument("majx_sampling: n_samples must be positive");
    const size_t n = static_cast<size_t>(sa.n_cols());
    SamplingResult res;
    res.n_samples = n_samples;
    res.n_cols = static_cast<int>(n);
    res.outputs.resize(static_cast<size_t>(n_samples) * n);
    res.truth.resize(static_cast<size_t>(n_samples) * n);

    std::vector<std::vector<uint8_t>> inputs(static_cast<size_t>(plan.x),
                                             std::vector<uint8_t>(n));
    std::vector<uint8_t> sums(n);
    const uint8_t majority_at = static_cast<uint8_t>(plan.x / 2 + 1);
    const auto& k = kernels::active();

    const uint8_t* in_ptrs[5];
    for (int i = 0; i < plan.x; ++i) in_ptrs[i] = inputs[static_cast<size_t>(i)].data();

    for (int s = 0; s < n_samples; ++s) {
        for (auto& row : inputs) rng.fill_bits(row.data(), n);
        uint8_t* out = res.outputs.data() + static_cast<size_t>(s) * n;
        uint8_t* truth = res.truth.data() + static_cast<size_t>(s) * n;
        exec_maj_into(sa, plan, inputs, table, profile, out, counts);
        k.u8_sum_rows(in_ptrs, plan.x, n, sums.data());
        k.u8_ge(sums.data(), majority_at, n, truth);
    }
    return res;
}

CalibrationTable calibrate(Subarray& sa, const MajPlan& plan, const CalibParams& params,
                           const SenseAmpProfile& profile) {
    params.validate();
    plan.validate(sa.geometry());
    if (plan.mode != MajMode::calibrated)
        throw std::invalid_argument("calibrate: plan must be in calibrated mode");

    OffsetLadder ladder = enumerate_ladder(plan.frac, plan.contraction_f);
    if (ladder.size() < 2)
        throw std::invalid_argument("calibrate: ladder has fewer than 2 levels");
    const int top = ladder.size() - 1;

    const size_t n = static_cast<size_t>(sa.n_cols());
    CalibrationTable table(std::move(ladder), static_cast<int>(n));

    Xoshiro256 rng(params.seed);
    std::vector<uint32_t> ones(n), expected(n);
    std::vector<uint8_t> pattern(n);
    const auto& k = kernels::active();

    for (int iter = 0; iter < params.n_iterations; ++iter) {
        // persist the patterns in the reserved rows, as the real flow would
        for (int j = 0; j < 3; ++j) {
            table.pattern_row(j, pattern.data());
            sa.write_row(plan.storage_rows[static_cast<size_t>(j)], pattern);
        }

        std::fill(ones.begin(), ones.end(), 0u);
        std::fill(expected.begin(), expected.end(), 0u);
        SamplingResult res =
            majx_sampling(sa, plan, &table, profile, params.samples_per_iteration, rng);
        for (int s = 0; s < res.n_samples; ++s) {
            k.u32_add_u8(res.output_row(s).data(), n, ones.data());
            if (params.bias_from_expected)
                k.u32_add_u8(res.truth_row(s).data(), n, expected.data());
        }

        const double inv_samples = 1.0 / params.samples_per_iteration;
        for (size_t c = 0; c < n; ++c) {
            const double reference =
                params.bias_from_expected ? expected[c] * inv_samples : 0.5;
            const double bias = ones[c] * inv_samples - reference;
            int level = table.level(static_cast<int>(c));
            if (bias > params.bias_threshold) {
                if (level > 0) table.set_level(static_cast<int>(c), level - 1);
            } else if (bias < -params.bias_threshold) {
                if (level < top) table.set_level(static_cast<int>(c), level + 1);
            }
        }
    }
    return table;
}

void save_table(const CalibrationTable& table, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    const FracConfig& frac = table.ladder().frac;
    doc["frac_config"] = {frac.x, frac.y, frac.z};
    doc["contraction_f"] = table.ladder().contraction_f;
    doc["n_cols"] = table.n_cols();
    doc["levels"] = table.levels();

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

CalibrationTable load_table(const std::filesystem::path& path, int expected_cols) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open calibration table " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed calibration table " + path.string() + ": " +
                                 e.what());
    }

    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
        throw std::runtime_error("calibration table " + path.string() + ": missing version");
    if (doc["format_version"].get<int>() != 1)
        throw std::runtime_error("calibration table " + path.string() +
                                 ": unsupported format version " +
                                 doc["format_version"].dump());

    FracConfig frac;
    const auto& fc = doc.at("frac_config");
    if (!fc.is_array() || fc.size() != 3)
        throw std::runtime_error("calibration table: frac_config must have 3 entries");
    frac.x = fc[0].get<int>();
    frac.y = fc[1].get<int>();
    frac.z = fc[2].get<int>();
    const double f = doc.at("contraction_f").get<double>();
    const int n_cols = doc.at("n_cols").get<int>();
    if (expected_cols >= 0 && n_cols != expected_cols)
        throw std::runtime_error("calibration table geometry mismatch: file has " +
                                 std::to_string(n_cols) + " columns, expected " +
                                 std::to_string(expected_cols));

    const auto levels = doc.at("levels").get<std::vector<int>>();
    if (static_cast<int>(levels.size()) != n_cols)
        throw std::runtime_error("calibration table: level array length differs from n_cols");

    CalibrationTable table(enumerate_ladder(frac, f), n_cols);
    for (int c = 0; c < n_cols; ++c) table.set_level(c, levels[static_cast<size_t>(c)]);
    return table;
}

}  // namespace pudsim
