#include "tokencore/hnsw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "tokencore/errors.hpp"
#include "tokencore/random.hpp"

namespace tokencore {
namespace {

using Candidate = std::pair<double, std::uint32_t>;

// (distance, id) pairs compare lexicographically, so ties break on id and
// the traversal order is fully deterministic.
using MinHeap = std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>>;
using MaxHeap = std::priority_queue<Candidate>;

void next_epoch(std::vector<std::uint32_t>& visited, std::uint32_t& epoch) {
  if (++epoch == 0) {
    std::fill(visited.begin(), visited.end(), 0);
    epoch = 1;
  }
}

}  // namespace

HnswIndex::HnswIndex(const FloatMatrix& data, const HnswParams& params) : params_(params) {
  if (params_.max_degree < 2) throw ParamError("HNSW max_degree must be >= 2");
  if (params_.ef_construction < 1 || params_.ef_search < 1) {
    throw ParamError("HNSW ef parameters must be >= 1");
  }
  const std::size_t n = data.rows();
  if (n == 0) throw EmptyInputError("cannot index an empty matrix");
  if (n > 0xffffffffULL) throw ParamError("HNSW index supports at most 2^32 - 1 rows");

  Rng rng(params_.seed);
  const double level_mult = 1.0 / std::log(static_cast<double>(params_.max_degree));
  levels_.resize(n);
  links_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform01();
    while (u <= 0.0) u = rng.uniform01();
    levels_[i] = std::min(32, static_cast<int>(std::floor(-std::log(u) * level_mult)));
    links_[i].resize(static_cast<std::size_t>(levels_[i]) + 1);
  }

  std::vector<std::uint32_t> visited(n, 0);
  std::uint32_t epoch = 0;
  for (std::size_t i = 0; i < n; ++i) {
    insert(data, static_cast<std::uint32_t>(i), levels_[i], visited, epoch);
  }
}

HnswIndex::Candidate HnswIndex::greedy_descend(const FloatMatrix& data,
                                               std::span<const float> query, Candidate entry,
                                               int from_level, int to_level) const {
  for (int level = from_level; level > to_level; --level) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::uint32_t nb : links_[entry.second][static_cast<std::size_t>(level)]) {
        const Candidate c{squared_l2(query, data.row(nb)), nb};
        if (c < entry) {
          entry = c;
          improved = true;
        }
      }
    }
  }
  return entry;
}

std::vector<Candidate> HnswIndex::search_layer(const FloatMatrix& data,
                                               std::span<const float> query,
                                               std::vector<Candidate> entry, std::size_t ef,
                                               int level, std::vector<std::uint32_t>& visited,
                                               std::uint32_t& epoch) const {
  next_epoch(visited, epoch);
  MinHeap frontier;
  MaxHeap best;
  for (const auto& e : entry) {
    visited[e.second] = epoch;
    frontier.push(e);
    best.push(e);
  }
  while (best.size() > ef) best.pop();

  while (!frontier.empty()) {
    const Candidate current = frontier.top();
    if (current > best.top() && best.size() >= ef) break;
    frontier.pop();
    for (std::uint32_t nb : links_[current.second][static_cast<std::size_t>(level)]) {
      if (visited[nb] == epoch) continue;
      visited[nb] = epoch;
      const Candidate c{squared_l2(query, data.row(nb)), nb};
      if (best.size() < ef || c < best.top()) {
        frontier.push(c);
        best.push(c);
        if (best.size() > ef) best.pop();
      }
    }
  }

  std::vector<Candidate> out;
  out.reserve(best.size());
  while (!best.empty()) {
    out.push_back(best.top());
    best.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Keeps a candidate only if it is closer to the base node than to every
// neighbor already kept; fills remaining slots with the nearest discarded ones.
std::vector<std::uint32_t> HnswIndex::select_neighbors(const FloatMatrix& data,
                                                       std::vector<Candidate> candidates,
                                                       std::size_t max_links) const {
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::uint32_t> kept;
  std::vector<std::uint32_t> pruned;
  for (const auto& [dist, id] : candidates) {
    if (kept.size() >= max_links) break;
    bool diverse = true;
    for (std::uint32_t k : kept) {
      if (squared_l2(data.row(id), data.row(k)) < dist) {
        diverse = false;
        break;
      }
    }
    (diverse ? kept : pruned).push_back(id);
  }
  for (std::size_t i = 0; i < pruned.size() && kept.size() < max_links; ++i) {
    kept.push_back(pruned[i]);
  }
  return kept;
}

void HnswIndex::insert(const FloatMatrix& data, std::uint32_t id, int level,
                       std::vector<std::uint32_t>& visited, std::uint32_t& epoch) {
  if (max_level_ < 0) {
    entry_point_ = id;
    max_level_ = level;
    return;
  }
  const auto query = data.row(id);
  Candidate entry{squared_l2(query, data.row(entry_point_)), entry_point_};
  entry = greedy_descend(data, query, entry, max_level_, level);

  std::vector<Candidate> entries{entry};
  for (int l = std::min(level, max_level_); l >= 0; --l) {
    auto found = search_layer(data, query, entries, params_.ef_construction, l, visited, epoch);
    const auto lvl = static_cast<std::size_t>(l);
    auto neighbors = select_neighbors(data, found, params_.max_degree);
    links_[id][lvl] = neighbors;
    for (std::uint32_t nb : neighbors) {
      auto& back = links_[nb][lvl];
      back.push_back(id);
      if (back.size() > max_links(l)) {
        std::vector<Candidate> cand;
        cand.reserve(back.size());
        for (std::uint32_t x : back) cand.emplace_back(squared_l2(data.row(nb), data.row(x)), x);
        back = select_neighbors(data, std::move(cand), max_links(l));
      }
    }
    entries = std::move(found);
  }
  if (level > max_level_) {
    max_level_ = level;
    entry_point_ = id;
  }
}

HnswIndex::Hit HnswIndex::search(const FloatMatrix& data, std::span<const float> query) const {
  Candidate entry{squared_l2(query, data.row(entry_point_)), entry_point_};
  entry = greedy_descend(data, query, entry, max_level_, 0);
  std::vector<std::uint32_t> visited(levels_.size(), 0);
  std::uint32_t epoch = 0;
  const auto found = search_layer(data, query, {entry}, params_.ef_search, 0, visited, epoch);
  return {found.front().second, found.front().first};
}

}  // namespace tokencore
