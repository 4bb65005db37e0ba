#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gnnbench/error.hpp"
#include "gnnbench/ledger.hpp"

namespace gnnbench {

/// Dense row-major matrix of 32-bit floats (one row per vertex).
///
/// Move-only: a matrix may carry a ledger reservation for its payload, so
/// copies are explicit via clone(). All arithmetic on these stays in
/// 32-bit floats with a fixed accumulation order.
class FeatureMatrix {
public:
    FeatureMatrix() = default;

    FeatureMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}

    /// Zero matrix whose payload bytes are registered with the ledger.
    /// Throws BudgetExceeded before any allocation happens.
    static FeatureMatrix tracked(std::size_t rows, std::size_t cols, MemoryLedger& ledger,
                                 std::string_view label,
                                 BufferClass cls = BufferClass::Persistent) {
        LedgerReservation r(ledger, rows * cols * sizeof(float), label, cls);
        FeatureMatrix m(rows, cols);
        m.reservation_ = std::move(r);
        return m;
    }

    FeatureMatrix(FeatureMatrix&&) noexcept = default;
    FeatureMatrix& operator=(FeatureMatrix&&) noexcept = default;
    FeatureMatrix(const FeatureMatrix&) = delete;
    FeatureMatrix& operator=(const FeatureMatrix&) = delete;

    /// Untracked deep copy.
    FeatureMatrix clone() const {
        FeatureMatrix m(rows_, cols_);
        m.data_ = data_;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t byte_size() const { return data_.size() * sizeof(float); }

    float* row(std::size_t i) { return data_.data() + i * cols_; }
    const float* row(std::size_t i) const { return data_.data() + i * cols_; }

    float& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    float at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<float> data() { return data_; }
    std::span<const float> data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<float> data_;
    LedgerReservation reservation_;
};

/// Non-owning view of a column range [col_begin, col_begin + width) of a
/// FeatureMatrix. Rows are strided by the parent's full width.
struct FeatureView {
    const FeatureMatrix* matrix = nullptr;
    std::size_t col_begin = 0;
    std::size_t width = 0;

    std::size_t rows() const { return matrix->rows(); }
    const float* row(std::size_t i) const { return matrix->row(i) + col_begin; }
};

inline FeatureView full_view(const FeatureMatrix& f) {
    return FeatureView{&f, 0, f.cols()};
}

/// Feature-axis decomposition: ceil(total/chunk) chunks of chunk_width
/// columns, the last possibly narrower.
struct ChunkPlan {
    std::size_t total_width = 0;
    std::size_t chunk_width = 0;
    std::size_t num_chunks = 0;
    std::vector<std::size_t> offsets;

    ChunkPlan() = default;
    ChunkPlan(std::size_t total, std::size_t chunk);

    std::size_t width_of(std::size_t p) const {
        std::size_t begin = offsets[p];
        std::size_t end = (p + 1 < num_chunks) ? offsets[p + 1] : total_width;
        return end - begin;
    }
};

/// Column-range views per the plan; zero-copy, exact cover of all columns.
std::vector<FeatureView> chunk_features(const FeatureMatrix& f, const ChunkPlan& plan);

/// Inverse of chunk_features: reassembles per-chunk matrices into one
/// full-width matrix. chunk_features then concat_chunks is the identity.
FeatureMatrix concat_chunks(const std::vector<FeatureMatrix>& parts, const ChunkPlan& plan);

/// Per-layer dense parameters. Fields beyond w_matrix/bias are model
/// specific: root_matrix for the concat-and-project update, the attention
/// vectors and leaky slope for attention scoring.
struct LayerWeights {
    FeatureMatrix w_matrix;            // L_in x L_out
    std::vector<float> bias;           // L_out
    FeatureMatrix root_matrix;         // 2*L_out x L_out, GSC only
    std::vector<float> attn_src;       // L_out, GAT only
    std::vector<float> attn_dst;       // L_out, GAT only
    float leaky_slope = 0.2f;

    std::size_t byte_size() const {
        return w_matrix.byte_size() + root_matrix.byte_size()
             + (bias.size() + attn_src.size() + attn_dst.size()) * sizeof(float);
    }
};

/// out = f * w + bias, accumulated over the inner dimension in ascending
/// index order so results are identical run to run.
FeatureMatrix combine(const FeatureMatrix& f, const LayerWeights& w);

/// out = a * b (no bias). Same ordering guarantee as combine.
FeatureMatrix matmul(const FeatureMatrix& a, const FeatureMatrix& b);

/// matmul writing into a preallocated (possibly ledger-tracked) matrix.
/// out is overwritten, not accumulated into.
void matmul_into(const FeatureMatrix& a, const FeatureMatrix& b, FeatureMatrix& out);

void add_bias_inplace(FeatureMatrix& f, const std::vector<float>& bias);

FeatureMatrix relu(const FeatureMatrix& f);

void relu_inplace(FeatureMatrix& f);

/// Binary matrix file: u32le rows, u32le cols, then rows*cols f32le
/// row-major. save then load round-trips bit for bit.
FeatureMatrix load_feature_file(const std::string& path);
void save_feature_file(const FeatureMatrix& f, const std::string& path);

} // namespace gnnbench
