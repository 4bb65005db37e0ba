#include "gnnbench/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace gnnbench {

namespace {

// Payload bytes are little-endian on disk; the bulk path covers the
// common case, the swap path keeps big-endian hosts correct.
void bytes_to_floats(const unsigned char* bytes, float* out, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(out, bytes, count * sizeof(float));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            unsigned char b[4] = {bytes[4 * i + 3], bytes[4 * i + 2],
                                  bytes[4 * i + 1], bytes[4 * i + 0]};
            std::memcpy(&out[i], b, 4);
        }
    }
}

void floats_to_bytes(const float* in, unsigned char* bytes, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(bytes, in, count * sizeof(float));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            unsigned char b[4];
            std::memcpy(b, &in[i], 4);
            bytes[4 * i + 0] = b[3];
            bytes[4 * i + 1] = b[2];
            bytes[4 * i + 2] = b[1];
            bytes[4 * i + 3] = b[0];
        }
    }
}

std::uint32_t read_u32le(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8
         | static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

void write_u32le(std::uint32_t v, unsigned char* b) {
    b[0] = static_cast<unsigned char>(v);
    b[1] = static_cast<unsigned char>(v >> 8);
    b[2] = static_cast<unsigned char>(v >> 16);
    b[3] = static_cast<unsigned char>(v >> 24);
}

} // namespace

ChunkPlan::ChunkPlan(std::size_t total, std::size_t chunk) {
    if (total == 0)
        throw ValueError("chunk plan: feature width must be positive");
    if (chunk == 0)
        throw ValueError("chunk plan: chunk width must be positive");
    total_width = total;
    chunk_width = chunk;
    num_chunks = (total + chunk - 1) / chunk;
    offsets.reserve(num_chunks);
    for (std::size_t p = 0; p < num_chunks; ++p)
        offsets.push_back(p * chunk);
}

std::vector<FeatureView> chunk_features(const FeatureMatrix& f, const ChunkPlan& plan) {
    if (f.cols() != plan.total_width)
        throw DimensionError("chunk_features: plan width does not match matrix");
    std::vector<FeatureView> views;
    views.reserve(plan.num_chunks);
    for (std::size_t p = 0; p < plan.num_chunks; ++p)
        views.push_back(FeatureView{&f, plan.offsets[p], plan.width_of(p)});
    return views;
}

FeatureMatrix concat_chunks(const std::vector<FeatureMatrix>& parts, const ChunkPlan& plan) {
    if (parts.size() != plan.num_chunks)
        throw DimensionError("concat_chunks: part count does not match plan");
    std::size_t rows = parts.empty() ? 0 : parts[0].rows();
    for (std::size_t p = 0; p < parts.size(); ++p) {
        if (parts[p].rows() != rows)
            throw DimensionError("concat_chunks: row count mismatch");
        if (parts[p].cols() != plan.width_of(p))
            throw DimensionError("concat_chunks: chunk width mismatch");
    }
    FeatureMatrix out(rows, plan.total_width);
    for (std::size_t p = 0; p < parts.size(); ++p) {
        std::size_t w = parts[p].cols();
        for (std::size_t i = 0; i < rows; ++i)
            std::memcpy(out.row(i) + plan.offsets[p], parts[p].row(i), w * sizeof(float));
    }
    return out;
}

FeatureMatrix matmul(const FeatureMatrix& a, const FeatureMatrix& b) {
    FeatureMatrix out(a.rows(), b.cols());
    matmul_into(a, b, out);
    return out;
}

void matmul_into(const FeatureMatrix& a, const FeatureMatrix& b, FeatureMatrix& out) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: inner dimensions disagree");
    if (out.rows() != a.rows() || out.cols() != b.cols())
        throw DimensionError("matmul: output shape mismatch");
    // i-k-j loops: each out element accumulates contributions in ascending
    // k order, making float results identical across runs.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const float* arow = a.row(i);
        float* orow = out.row(i);
        std::fill_n(orow, out.cols(), 0.0f);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            float aik = arow[k];
            const float* brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                orow[j] += aik * brow[j];
        }
    }
}

void add_bias_inplace(FeatureMatrix& f, const std::vector<float>& bias) {
    if (bias.size() != f.cols())
        throw DimensionError("add_bias: bias length does not match columns");
    for (std::size_t i = 0; i < f.rows(); ++i) {
        float* row = f.row(i);
        for (std::size_t j = 0; j < f.cols(); ++j)
            row[j] += bias[j];
    }
}

FeatureMatrix combine(const FeatureMatrix& f, const LayerWeights& w) {
    FeatureMatrix out = matmul(f, w.w_matrix);
    add_bias_inplace(out, w.bias);
    return out;
}

FeatureMatrix relu(const FeatureMatrix& f) {
    FeatureMatrix out = f.clone();
    relu_inplace(out);
    return out;
}

void relu_inplace(FeatureMatrix& f) {
    for (float& v : f.data())
        v = v > 0.0f ? v : 0.0f;
}

FeatureMatrix load_feature_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open feature file: " + path);
    unsigned char header[8];
    if (!in.read(reinterpret_cast<char*>(header), 8))
        throw FormatError("feature file truncated in header: " + path);
    std::uint32_t rows = read_u32le(header);
    std::uint32_t cols = read_u32le(header + 4);
    std::size_t count = static_cast<std::size_t>(rows) * cols;
    std::vector<unsigned char> payload(count * sizeof(float));
    if (count > 0
        && !in.read(reinterpret_cast<char*>(payload.data()),
                    static_cast<std::streamsize>(payload.size())))
        throw FormatError("feature file truncated in payload: " + path);
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError("feature file has trailing bytes: " + path);
    FeatureMatrix m(rows, cols);
    if (count > 0)
        bytes_to_floats(payload.data(), m.data().data(), count);
    for (float v : m.data())
        if (!std::isfinite(v))
            throw ValueError("feature file contains a non-finite value: " + path);
    return m;
}

void save_feature_file(const FeatureMatrix& f, const std::string& path) {
    if (f.rows() > std::numeric_limits<std::uint32_t>::max()
        || f.cols() > std::numeric_limits<std::uint32_t>::max())
        throw ValueError("feature matrix too large for file header");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open feature file for writing: " + path);
    unsigned char header[8];
    write_u32le(static_cast<std::uint32_t>(f.rows()), header);
    write_u32le(static_cast<std::uint32_t>(f.cols()), header + 4);
    out.write(reinterpret_cast<const char*>(header), 8);
    std::size_t count = f.rows() * f.cols();
    if (count > 0) {
        std::vector<unsigned char> payload(count * sizeof(float));
        floats_to_bytes(f.data().data(), payload.data(), count);
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size()));
    }
    if (!out)
        throw IoError("write failed: " + path);
}

} // namespace gnnbench
