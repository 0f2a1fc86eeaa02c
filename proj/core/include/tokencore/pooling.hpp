#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tokencore/archive.hpp"
#include "tokencore/corpus.hpp"
#include "tokencore/matrix.hpp"

namespace tokencore {

/// How a word's subword embeddings collapse into one word vector.
/// kMax keeps the element-wise maximum; kMean and kFirst are the usual
/// alternatives and exist for ablations.
enum class PoolingMode { kMax, kMean, kFirst };

std::string_view to_string(PoolingMode mode);
std::optional<PoolingMode> parse_pooling_mode(std::string_view name);

/// Pools n >= 1 equally sized subword vectors into one.
std::vector<float> pool_word(std::span<const std::span<const float>> subvecs, PoolingMode mode);

/// Pools `n_rows` consecutive rows starting at `first` (all inside `rows`).
void pool_rows(const FloatMatrix& rows, std::size_t first, std::size_t n_rows,
               PoolingMode mode, std::span<float> out);

/// One word vector per span, in word order. `doc_rows` holds exactly the
/// document's subword rows.
FloatMatrix pool_document(const FloatMatrix& doc_rows, std::span<const SubwordSpan> spans,
                          PoolingMode mode);

/// Word vectors for every document of an archive.
std::vector<FloatMatrix> pool_archive(const EmbeddingArchive& archive, PoolingMode mode);

}  // namespace tokencore
