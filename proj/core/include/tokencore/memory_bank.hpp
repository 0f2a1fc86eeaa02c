#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tokencore/archive.hpp"
#include "tokencore/hnsw.hpp"
#include "tokencore/matrix.hpp"
#include "tokencore/pooling.hpp"
#include "tokencore/scoring.hpp"

namespace tokencore {

struct SubsampleConfig {
  enum class Mode { kNone, kUniform };
  Mode mode = Mode::kNone;
  double keep_fraction = 1.0;  // in (0, 1]; must be 1 when mode is kNone
  std::uint64_t seed = 0;
};

/// Approximate search settings. When `enabled`, the index must reach
/// `target_recall_at_1` on a probe set of bank members or construction fails.
struct AnnParams {
  bool enabled = false;
  double target_recall_at_1 = 0.95;
  std::size_t max_degree = 16;
  std::size_t ef_construction = 200;
  std::size_t ef_search = 128;
  std::size_t probe_count = 1000;
  std::uint64_t seed = 0;
};

struct BankProvenance {
  std::string source;
  PoolingMode pooling = PoolingMode::kMax;

  friend bool operator==(const BankProvenance&, const BankProvenance&) = default;
};

/// Word embeddings of normal training text. A token's score is its Euclidean
/// distance to the nearest stored vector. Immutable once built, except for the
/// optional ANN index which is attached in a separate single-writer step.
class MemoryBank final : public TokenScorer {
 public:
  /// Drops exact duplicates (first occurrence wins, order preserved).
  /// Throws EmptyInputError on zero rows and DataError on non-finite values.
  static MemoryBank from_vectors(FloatMatrix vectors, BankProvenance provenance,
                                 std::uint64_t seed);

  std::size_t size() const noexcept { return vectors_.rows(); }
  std::size_t dim() const override { return vectors_.dim(); }
  std::string_view name() const override { return "tokencore"; }
  const FloatMatrix& vectors() const noexcept { return vectors_; }
  const BankProvenance& provenance() const noexcept { return provenance_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Distance to the nearest bank vector. Uses the ANN index when attached.
  double score(std::span<const float> query) const override;
  /// Exhaustive scan regardless of any index.
  double score_exact(std::span<const float> query) const;
  /// Approximate search; requires an index.
  double score_approximate(std::span<const float> query) const;

  /// Builds an HNSW index and checks recall@1 on sampled bank members.
  /// A disabled `params` leaves the bank on the exact path. Throws RecallError.
  void build_ann_index(const AnnParams& params);
  bool has_ann_index() const noexcept { return index_ != nullptr; }
  std::optional<double> measured_recall() const noexcept { return measured_recall_; }

  /// Binary layout, little-endian:
  ///   "TKBK" | u32 version=1 | u32 dim | u64 N | u64 seed | u32 pooling |
  ///   u32 source_len | source bytes | N*dim float32 rows
  std::string to_bytes() const;
  static MemoryBank from_bytes(std::string_view bytes);
  void save(const std::filesystem::path& path) const;
  static MemoryBank load(const std::filesystem::path& path);

 private:
  MemoryBank() = default;
  void check_query(std::span<const float> query) const;

  FloatMatrix vectors_;
  BankProvenance provenance_;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const HnswIndex> index_;
  std::optional<double> measured_recall_;
};

/// Pools every training word and stores it. Every document must be normal
/// (ContaminationError otherwise) and at least one word must exist.
MemoryBank build_bank(const EmbeddingArchive& train, PoolingMode mode,
                      const SubsampleConfig& subsample);

}  // namespace tokencore
