#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tokencore/matrix.hpp"

namespace tokencore {

struct HnswParams {
  std::size_t max_degree = 16;        // M; layer 0 keeps up to 2M links
  std::size_t ef_construction = 200;
  std::size_t ef_search = 128;
  std::uint64_t seed = 0;
};

/// Hierarchical navigable small-world graph over the rows of a FloatMatrix.
/// The index stores only the graph; callers pass the same matrix to search().
/// Construction is single-threaded and deterministic given the seed; search
/// is read-only and thread-safe.
class HnswIndex {
 public:
  HnswIndex(const FloatMatrix& data, const HnswParams& params);

  struct Hit {
    std::uint32_t id;
    double squared_distance;
  };

  /// Approximate nearest row to `query`.
  Hit search(const FloatMatrix& data, std::span<const float> query) const;

  std::size_t size() const noexcept { return levels_.size(); }
  int max_level() const noexcept { return max_level_; }
  const HnswParams& params() const noexcept { return params_; }

 private:
  using Candidate = std::pair<double, std::uint32_t>;

  std::vector<Candidate> search_layer(const FloatMatrix& data, std::span<const float> query,
                                      std::vector<Candidate> entry, std::size_t ef, int level,
                                      std::vector<std::uint32_t>& visited,
                                      std::uint32_t& epoch) const;
  Candidate greedy_descend(const FloatMatrix& data, std::span<const float> query,
                           Candidate entry, int from_level, int to_level) const;
  std::vector<std::uint32_t> select_neighbors(const FloatMatrix& data,
                                              std::vector<Candidate> candidates,
                                              std::size_t max_links) const;
  void insert(const FloatMatrix& data, std::uint32_t id, int level,
              std::vector<std::uint32_t>& visited, std::uint32_t& epoch);
  std::size_t max_links(int level) const noexcept {
    return level == 0 ? 2 * params_.max_degree : params_.max_degree;
  }

  HnswParams params_;
  std::vector<int> levels_;
  // links_[id][level] lists neighbor ids.
  std::vector<std::vector<std::vector<std::uint32_t>>> links_;
  std::uint32_t entry_point_ = 0;
  int max_level_ = -1;
};

}  // namespace tokencore
