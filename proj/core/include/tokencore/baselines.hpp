#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tokencore/matrix.hpp"
#include "tokencore/scoring.hpp"

namespace tokencore {

// Classic outlier detectors over word vectors. All share the TokenScorer
// orientation: a higher score means more anomalous.

enum class DetectorKind { kTokenCore, kLof, kIForest, kEcod };

std::string_view to_string(DetectorKind kind);
std::optional<DetectorKind> parse_detector_kind(std::string_view name);

/// Local outlier factor in novelty mode: queries are compared against the
/// fitted neighborhoods but never join them.
class LofDetector final : public TokenScorer {
 public:
  /// Throws ParamError unless 1 <= k < train.rows().
  static LofDetector fit(const FloatMatrix& train, std::size_t k = 20);

  std::size_t dim() const override { return train_.dim(); }
  std::string_view name() const override { return "lof"; }
  double score(std::span<const float> x) const override;

  std::size_t k() const noexcept { return k_; }
  /// Local reachability density of training point i.
  double training_lrd(std::size_t i) const { return lrd_[i]; }

 private:
  struct Neighbor {
    double distance;
    std::size_t index;
  };
  std::vector<Neighbor> nearest(std::span<const float> x, std::optional<std::size_t> skip) const;

  FloatMatrix train_;
  std::size_t k_ = 0;
  std::vector<double> k_distance_;
  std::vector<double> lrd_;
};

struct IForestParams {
  std::size_t n_trees = 100;
  std::size_t psi = 0;  // 0 selects min(256, N)
  std::uint64_t seed = 0;
};

/// Isolation forest. Score is 2^(-E[h(x)] / c(psi)) in (0, 1).
class IsolationForest final : public TokenScorer {
 public:
  /// Throws ParamError if n_trees == 0, psi < 2, or psi > train.rows().
  static IsolationForest fit(const FloatMatrix& train, const IForestParams& params = {});

  std::size_t dim() const override { return dim_; }
  std::string_view name() const override { return "iforest"; }
  double score(std::span<const float> x) const override;

  /// Mean path length over the ensemble.
  double expected_path_length(std::span<const float> x) const;
  std::size_t psi() const noexcept { return psi_; }
  std::size_t tree_count() const noexcept { return trees_.size(); }

 private:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;
  };
  using Tree = std::vector<Node>;

  std::size_t dim_ = 0;
  std::size_t psi_ = 0;
  std::vector<Tree> trees_;
};

/// Average unsuccessful-search path length in a BST of n nodes; c(n) <= 1 is 0.
double average_path_length(std::size_t n);

/// Empirical-CDF outlier scores. Tail probabilities use the smoothed ECDF
/// (count + 1) / (n + 1), so scores stay finite beyond the training range.
class EcodDetector final : public TokenScorer {
 public:
  /// Throws EmptyInputError on an empty training set.
  static EcodDetector fit(const FloatMatrix& train);

  std::size_t dim() const override { return sorted_.size(); }
  std::string_view name() const override { return "ecod"; }
  double score(std::span<const float> x) const override;

  struct TailScores {
    double left;
    double right;
    double automatic;
  };
  TailScores tail_scores(std::span<const float> x) const;
  /// Sample skewness of training dimension j.
  double skewness(std::size_t j) const { return skewness_[j]; }

 private:
  std::vector<std::vector<float>> sorted_;
  std::vector<double> skewness_;
  std::size_t n_ = 0;
};

struct DetectorParams {
  std::size_t lof_k = 20;
  IForestParams iforest;
};

/// Fits a baseline on `train`. kTokenCore is not a baseline and is rejected.
std::unique_ptr<TokenScorer> fit_detector(DetectorKind kind, const FloatMatrix& train,
                                          const DetectorParams& params);

}  // namespace tokencore
