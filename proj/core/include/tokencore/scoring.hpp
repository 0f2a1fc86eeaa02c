#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokencore/corpus.hpp"
#include "tokencore/matrix.hpp"

namespace tokencore {

/// Anything that maps a word vector to an anomaly score. Higher is more
/// anomalous. Implementations are immutable after construction and safe to
/// call from many threads at once.
class TokenScorer {
 public:
  virtual ~TokenScorer() = default;
  virtual std::size_t dim() const = 0;
  virtual double score(std::span<const float> word_vector) const = 0;
  virtual std::string_view name() const = 0;
};

enum class AggregatorKind { kMean, kMax, kTopKMean };

/// Token-to-document score reduction. Mean is the default; max and top-k mean
/// trade dilution of isolated anomalies against sensitivity to single
/// false positives.
struct Aggregator {
  AggregatorKind kind = AggregatorKind::kMean;
  std::size_t k = 1;  // used by kTopKMean only

  std::string describe() const;
};

std::optional<AggregatorKind> parse_aggregator_kind(std::string_view name);

/// Throws EmptyInputError on an empty input.
double aggregate(std::span<const double> token_scores, const Aggregator& aggregator);

struct ScoredDocument {
  std::string doc_id;
  std::vector<double> token_scores;
  double doc_score = 0.0;

  friend bool operator==(const ScoredDocument&, const ScoredDocument&) = default;
};

/// Scores each row of `word_vectors` and aggregates. Throws EmptyInputError
/// when the document has no words.
ScoredDocument score_document(const TokenScorer& scorer, std::string doc_id,
                              const FloatMatrix& word_vectors,
                              const Aggregator& aggregator = {});

/// Scores every document; tokens are distributed across `threads` workers.
/// Results do not depend on the thread count.
std::vector<ScoredDocument> score_documents(const TokenScorer& scorer, const Corpus& corpus,
                                            std::span<const FloatMatrix> word_vectors,
                                            const Aggregator& aggregator, std::size_t threads);

// Score files are JSON lines: {"doc_id":..., "token_scores":[...], "doc_score":...}
std::string scores_to_jsonl(std::span<const ScoredDocument> scored);
std::vector<ScoredDocument> scores_from_jsonl(std::string_view jsonl);
void write_scores_jsonl(std::span<const ScoredDocument> scored, const std::filesystem::path& path);
std::vector<ScoredDocument> read_scores_jsonl(const std::filesystem::path& path);

}  // namespace tokencore
