#include "tokencore/pooling.hpp"

#include <algorithm>

#include "tokencore/errors.hpp"

namespace tokencore {

std::string_view to_string(PoolingMode mode) {
  switch (mode) {
    case PoolingMode::kMax: return "max";
    case PoolingMode::kMean: return "mean";
    case PoolingMode::kFirst: return "first";
  }
  return "max";
}

std::optional<PoolingMode> parse_pooling_mode(std::string_view name) {
  if (name == "max") return PoolingMode::kMax;
  if (name == "mean") return PoolingMode::kMean;
  if (name == "first") return PoolingMode::kFirst;
  return std::nullopt;
}

namespace {

// Generic kernel over an accessor so both the span-list and the matrix-row
// entry points share one definition.
template <typename RowAt>
void pool_impl(std::size_t n, std::size_t dim, RowAt row_at, PoolingMode mode,
               std::span<float> out) {
  const auto first = row_at(0);
  switch (mode) {
    case PoolingMode::kFirst:
      std::copy(first.begin(), first.end(), out.begin());
      return;
    case PoolingMode::kMax:
      std::copy(first.begin(), first.end(), out.begin());
      for (std::size_t r = 1; r < n; ++r) {
        const auto v = row_at(r);
        for (std::size_t j = 0; j < dim; ++j) out[j] = std::max(out[j], v[j]);
      }
      return;
    case PoolingMode::kMean: {
      if (n == 1) {
        std::copy(first.begin(), first.end(), out.begin());
        return;
      }
      std::vector<double> acc(dim, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        const auto v = row_at(r);
        for (std::size_t j = 0; j < dim; ++j) acc[j] += v[j];
      }
      for (std::size_t j = 0; j < dim; ++j) {
        out[j] = static_cast<float>(acc[j] / static_cast<double>(n));
      }
      return;
    }
  }
}

}  // namespace

std::vector<float> pool_word(std::span<const std::span<const float>> subvecs, PoolingMode mode) {
  if (subvecs.empty()) throw EmptyInputError("pool_word needs at least one subword vector");
  const std::size_t dim = subvecs.front().size();
  if (dim == 0) throw SchemaError("subword vectors must have dimension >= 1");
  for (const auto& v : subvecs) {
    if (v.size() != dim) {
      throw SchemaError("subword dimension mismatch: " + std::to_string(v.size()) + " vs " +
                        std::to_string(dim));
    }
  }
  std::vector<float> out(dim);
  pool_impl(subvecs.size(), dim, [&](std::size_t r) { return subvecs[r]; }, mode, out);
  return out;
}

void pool_rows(const FloatMatrix& rows, std::size_t first, std::size_t n_rows, PoolingMode mode,
               std::span<float> out) {
  if (n_rows == 0) throw EmptyInputError("cannot pool an empty subword span");
  if (first + n_rows > rows.rows()) throw SchemaError("subword span exceeds matrix rows");
  if (out.size() != rows.dim()) throw SchemaError("output width does not match matrix dim");
  pool_impl(n_rows, rows.dim(), [&](std::size_t r) { return rows.row(first + r); }, mode, out);
}

FloatMatrix pool_document(const FloatMatrix& doc_rows, std::span<const SubwordSpan> spans,
                          PoolingMode mode) {
  check_spans(spans, spans.size(), doc_rows.rows());
  FloatMatrix words(spans.size(), doc_rows.dim());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    pool_rows(doc_rows, spans[i].start, spans[i].size(), mode, words.row(i));
  }
  return words;
}

std::vector<FloatMatrix> pool_archive(const EmbeddingArchive& archive, PoolingMode mode) {
  const auto offsets = archive.row_offsets();
  std::vector<FloatMatrix> out;
  out.reserve(archive.spans.size());
  for (std::size_t d = 0; d < archive.spans.size(); ++d) {
    const auto& spans = archive.spans[d];
    FloatMatrix words(spans.size(), archive.matrix.dim());
    for (std::size_t i = 0; i < spans.size(); ++i) {
      pool_rows(archive.matrix, offsets[d] + spans[i].start, spans[i].size(), mode,
                words.row(i));
    }
    out.push_back(std::move(words));
  }
  return out;
}

}  // namespace tokencore
