#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tokencore/corpus.hpp"
#include "tokencore/scoring.hpp"

namespace tokencore {

/// Area under the ROC curve, Mann-Whitney form with average ranks for ties.
/// `labels` holds 0/1. Throws DegenerateError unless both classes occur.
double auroc(std::span<const std::uint8_t> labels, std::span<const double> scores);

/// Average precision: sum over descending score thresholds of
/// (R_k - R_{k-1}) * P_k, with tied scores forming one threshold.
double auprc(std::span<const std::uint8_t> labels, std::span<const double> scores);

struct CorpusSplit {
  Corpus train;  // normal documents only
  Corpus test;   // remaining normals and every anomalous document
};

/// Sends a seeded uniform `train_frac` share of the normal documents to
/// train, everything else to test. Corpus order is kept within each side.
/// Requires train_frac in (0, 1) and at least two normal documents.
CorpusSplit split_corpus(const Corpus& corpus, double train_frac, std::uint64_t seed);

struct LevelMetrics {
  double auroc = 0.0;
  double auprc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

struct RunConfig {
  std::string detector = "tokencore";
  std::string pooling = "max";
  std::string aggregator = "mean";
  std::uint64_t seed = 0;
  bool ann = false;
};

struct EvalReport {
  LevelMetrics token;
  LevelMetrics document;
  RunConfig config;
};

/// Flattened (label, score) arrays at one granularity.
struct LabeledScores {
  std::vector<std::uint8_t> labels;
  std::vector<double> scores;
};

struct EvalInputs {
  LabeledScores token;
  LabeledScores document;
};

/// Pairs scored documents with their labeled counterparts by doc_id and
/// flattens them. Throws SchemaError on missing labels, unknown doc_ids,
/// length mismatches, or labels that violate document/word consistency.
EvalInputs collect_eval_inputs(std::span<const ScoredDocument> scored, const Corpus& labeled);

/// Token metrics over all test tokens pooled together; document metrics over
/// document scores.
EvalReport evaluate_run(std::span<const ScoredDocument> scored, const Corpus& labeled,
                        const RunConfig& config = {});

}  // namespace tokencore
