#include "tokencore/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tokencore/errors.hpp"
#include "tokencore/random.hpp"

namespace tokencore {
namespace {

void check_dim(std::span<const float> x, std::size_t dim) {
  if (x.size() != dim) {
    throw SchemaError("query dimension " + std::to_string(x.size()) +
                      " does not match model dimension " + std::to_string(dim));
  }
}

// Guards the reachability mean against zero when neighbors coincide.
constexpr double kReachEpsilon = 1e-10;
constexpr double kEulerGamma = 0.5772156649015329;

}  // namespace

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kTokenCore: return "tokencore";
    case DetectorKind::kLof: return "lof";
    case DetectorKind::kIForest: return "iforest";
    case DetectorKind::kEcod: return "ecod";
  }
  return "tokencore";
}

std::optional<DetectorKind> parse_detector_kind(std::string_view name) {
  if (name == "tokencore") return DetectorKind::kTokenCore;
  if (name == "lof") return DetectorKind::kLof;
  if (name == "iforest") return DetectorKind::kIForest;
  if (name == "ecod") return DetectorKind::kEcod;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// LOF

std::vector<LofDetector::Neighbor> LofDetector::nearest(std::span<const float> x,
                                                        std::optional<std::size_t> skip) const {
  std::vector<Neighbor> all;
  all.reserve(train_.rows());
  for (std::size_t i = 0; i < train_.rows(); ++i) {
    if (skip && *skip == i) continue;
    all.push_back({std::sqrt(squared_l2(x, train_.row(i))), i});
  }
  const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k_), all.end(),
                    by_distance);
  all.resize(k_);
  return all;
}

LofDetector LofDetector::fit(const FloatMatrix& train, std::size_t k) {
  if (k == 0) throw ParamError("LOF needs k >= 1");
  if (k >= train.rows()) {
    throw ParamError("LOF needs more than k = " + std::to_string(k) + " training points, got " +
                     std::to_string(train.rows()));
  }
  LofDetector model;
  model.train_ = train;
  model.k_ = k;

  const std::size_t n = train.rows();
  std::vector<std::vector<Neighbor>> neighbors(n);
  model.k_distance_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i] = model.nearest(train.row(i), i);
    model.k_distance_[i] = neighbors[i].back().distance;
  }
  model.lrd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double reach = 0.0;
    for (const auto& nb : neighbors[i]) reach += std::max(model.k_distance_[nb.index], nb.distance);
    model.lrd_[i] = 1.0 / (reach / static_cast<double>(k) + kReachEpsilon);
  }
  return model;
}

double LofDetector::score(std::span<const float> x) const {
  check_dim(x, train_.dim());
  const auto neighbors = nearest(x, std::nullopt);
  double reach = 0.0;
  double neighbor_lrd = 0.0;
  for (const auto& nb : neighbors) {
    reach += std::max(k_distance_[nb.index], nb.distance);
    neighbor_lrd += lrd_[nb.index];
  }
  const double kd = static_cast<double>(k_);
  const double lrd_x = 1.0 / (reach / kd + kReachEpsilon);
  return (neighbor_lrd / kd) / lrd_x;
}

// ---------------------------------------------------------------------------
// Isolation forest

double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  const double harmonic = std::log(m) + kEulerGamma;
  return 2.0 * harmonic - 2.0 * m / static_cast<double>(n);
}

IsolationForest IsolationForest::fit(const FloatMatrix& train, const IForestParams& params) {
  if (params.n_trees == 0) throw ParamError("iForest needs at least one tree");
  const std::size_t n = train.rows();
  const std::size_t psi = params.psi == 0 ? std::min<std::size_t>(256, n) : params.psi;
  if (psi < 2) throw ParamError("iForest subsample size psi must be >= 2");
  if (psi > n) {
    throw ParamError("iForest psi = " + std::to_string(psi) + " exceeds training size " +
                     std::to_string(n));
  }

  IsolationForest forest;
  forest.dim_ = train.dim();
  forest.psi_ = psi;
  forest.trees_.reserve(params.n_trees);
  const int height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(params.seed, t));
    // Partial Fisher-Yates: the first psi slots become the subsample.
    std::vector<std::size_t> sample = all;
    for (std::size_t i = 0; i < psi; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(sample[i], sample[j]);
    }
    sample.resize(psi);

    Tree tree;
    struct Work {
      std::uint32_t node;
      std::size_t begin, end;
      int depth;
    };
    tree.push_back({});
    std::vector<Work> stack{{0, 0, psi, 0}};
    std::vector<std::size_t> candidates;
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      const std::size_t count = w.end - w.begin;
      tree[w.node].size = static_cast<std::uint32_t>(count);
      if (count <= 1 || w.depth >= height_limit) continue;

      candidates.clear();
      std::vector<std::pair<float, float>> ranges(forest.dim_);
      for (std::size_t f = 0; f < forest.dim_; ++f) {
        float lo = train.row(sample[w.begin])[f];
        float hi = lo;
        for (std::size_t i = w.begin + 1; i < w.end; ++i) {
          const float v = train.row(sample[i])[f];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        ranges[f] = {lo, hi};
        if (hi > lo) candidates.push_back(f);
      }
      if (candidates.empty()) continue;

      const std::size_t feature = candidates[rng.below(candidates.size())];
      const auto [lo, hi] = ranges[feature];
      const double split = rng.uniform(lo, hi);
      const auto mid = std::partition(
          sample.begin() + static_cast<std::ptrdiff_t>(w.begin),
          sample.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](std::size_t i) { return static_cast<double>(train.row(i)[feature]) < split; });
      const auto mid_index = static_cast<std::size_t>(mid - sample.begin());

      const auto left = static_cast<std::uint32_t>(tree.size());
      tree.push_back({});
      tree.push_back({});
      tree[w.node].feature = static_cast<std::int32_t>(feature);
      tree[w.node].threshold = split;
      tree[w.node].left = left;
      tree[w.node].right = left + 1;
      stack.push_back({left + 1, mid_index, w.end, w.depth + 1});
      stack.push_back({left, w.begin, mid_index, w.depth + 1});
    }
    forest.trees_.push_back(std::move(tree));
  }
  return forest;
}

double IsolationForest::expected_path_length(std::span<const float> x) const {
  check_dim(x, dim_);
  double total = 0.0;
  for (const auto& tree : trees_) {
    std::uint32_t node = 0;
    int depth = 0;
    while (tree[node].feature >= 0) {
      const auto& nd = tree[node];
      node = static_cast<double>(x[static_cast<std::size_t>(nd.feature)]) < nd.threshold ? nd.left
                                                                                          : nd.right;
      ++depth;
    }
    total += depth + average_path_length(tree[node].size);
  }
  return total / static_cast<double>(trees_.size());
}

double IsolationForest::score(std::span<const float> x) const {
  return std::exp2(-expected_path_length(x) / average_path_length(psi_));
}

// ---------------------------------------------------------------------------
// ECOD

EcodDetector EcodDetector::fit(const FloatMatrix& train) {
  if (train.rows() == 0 || train.dim() == 0) throw EmptyInputError("ECOD needs training data");
  EcodDetector model;
  model.n_ = train.rows();
  const std::size_t dim = train.dim();
  model.sorted_.assign(dim, std::vector<float>(model.n_));
  model.skewness_.assign(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    auto& column = model.sorted_[j];
    double sum = 0.0;
    for (std::size_t i = 0; i < model.n_; ++i) {
      column[i] = train.row(i)[j];
      sum += column[i];
    }
    const double mean = sum / static_cast<double>(model.n_);
    double m2 = 0.0;
    double m3 = 0.0;
    for (float v : column) {
      const double d = v - mean;
      m2 += d * d;
      m3 += d * d * d;
    }
    m2 /= static_cast<double>(model.n_);
    m3 /= static_cast<double>(model.n_);
    model.skewness_[j] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    std::sort(column.begin(), column.end());
  }
  return model;
}

EcodDetector::TailScores EcodDetector::tail_scores(std::span<const float> x) const {
  check_dim(x, sorted_.size());
  const double denom = static_cast<double>(n_) + 1.0;
  TailScores s{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < sorted_.size(); ++j) {
    const auto& column = sorted_[j];
    const auto at_most = static_cast<double>(
        std::upper_bound(column.begin(), column.end(), x[j]) - column.begin());
    const auto at_least = static_cast<double>(
        column.end() - std::lower_bound(column.begin(), column.end(), x[j]));
    const double left = -std::log((at_most + 1.0) / denom);
    const double right = -std::log((at_least + 1.0) / denom);
    s.left += left;
    s.right += right;
    s.automatic += skewness_[j] < 0.0 ? left : right;
  }
  return s;
}

double EcodDetector::score(std::span<const float> x) const {
  const auto s = tail_scores(x);
  return std::max({s.left, s.right, s.automatic});
}

std::unique_ptr<TokenScorer> fit_detector(DetectorKind kind, const FloatMatrix& train,
                                          const DetectorParams& params) {
  switch (kind) {
    case DetectorKind::kLof:
      return std::make_unique<LofDetector>(LofDetector::fit(train, params.lof_k));
    case DetectorKind::kIForest:
      return std::make_unique<IsolationForest>(IsolationForest::fit(train, params.iforest));
    case DetectorKind::kEcod:
      return std::make_unique<EcodDetector>(EcodDetector::fit(train));
    case DetectorKind::kTokenCore:
      break;
  }
  throw ParamError("tokencore is scored through a memory bank, not fit_detector");
}

}  // namespace tokencore
