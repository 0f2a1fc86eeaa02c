#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tokencore/corpus.hpp"
#include "tokencore/matrix.hpp"

namespace tokencore {

// On-disk embedding archive. A directory holding exactly:
//   header.json  {"magic":"TKEM","version":1,"dim":d,"n_subwords_total":n,"dtype":"f32le"}
//   meta.jsonl   one object per document: doc_id, words, label?, word_labels?,
//                spans [[start,end],...] with document-local row indices
//   emb.bin      n * d little-endian float32, row-major, documents in order
// emb.bin is exactly 4 * dim * n_subwords_total bytes.

inline constexpr char kArchiveMagic[] = "TKEM";
inline constexpr std::uint32_t kArchiveVersion = 1;
inline constexpr char kArchiveDtype[] = "f32le";

struct ArchiveHeader {
  std::uint32_t version = kArchiveVersion;
  std::uint32_t dim = 0;
  std::uint64_t n_subwords_total = 0;
};

struct EmbeddingArchive {
  Corpus corpus;
  /// spans[i] belongs to corpus.documents[i].
  std::vector<std::vector<SubwordSpan>> spans;
  /// All subword rows of all documents, concatenated in document order.
  FloatMatrix matrix;

  ArchiveHeader header() const;
  /// First matrix row of each document, plus a trailing total.
  std::vector<std::size_t> row_offsets() const;
};

/// Full structural check: corpus invariants, span partitions, row totals,
/// finiteness. Throws SchemaError or DataError.
void validate_archive(const EmbeddingArchive& archive);

void write_archive(const EmbeddingArchive& archive, const std::filesystem::path& directory);
void write_archive(const Corpus& corpus, const std::vector<std::vector<SubwordSpan>>& spans,
                   const FloatMatrix& matrix, const std::filesystem::path& directory);

/// Inverse of write_archive. Validates fully before returning.
EmbeddingArchive read_archive(const std::filesystem::path& directory);

}  // namespace tokencore
