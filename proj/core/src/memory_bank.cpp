#include "tokencore/memory_bank.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "file_util.hpp"
#include "tokencore/errors.hpp"
#include "tokencore/random.hpp"

namespace tokencore {
namespace {

constexpr char kBankMagic[4] = {'T', 'K', 'B', 'K'};
constexpr std::uint32_t kBankVersion = 1;
constexpr std::size_t kFixedHeaderBytes = 4 + 4 + 4 + 8 + 8 + 4 + 4;

std::uint64_t hash_row(std::span<const float> row) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (float f : row) {
    const float canonical = f + 0.0f;  // folds -0 into +0
    std::uint32_t bits;
    std::memcpy(&bits, &canonical, sizeof(bits));
    h = mix_seed(h ^ bits);
  }
  return h;
}

FloatMatrix deduplicate(const FloatMatrix& in) {
  FloatMatrix out(in.dim());
  out.reserve_rows(in.rows());
  std::unordered_multimap<std::uint64_t, std::size_t> seen;
  seen.reserve(in.rows());
  for (std::size_t i = 0; i < in.rows(); ++i) {
    const auto row = in.row(i);
    const auto h = hash_row(row);
    bool duplicate = false;
    auto [lo, hi] = seen.equal_range(h);
    for (auto it = lo; it != hi && !duplicate; ++it) {
      duplicate = std::equal(row.begin(), row.end(), out.row(it->second).begin());
    }
    if (!duplicate) {
      seen.emplace(h, out.rows());
      out.append_row(row);
    }
  }
  return out;
}

}  // namespace

MemoryBank MemoryBank::from_vectors(FloatMatrix vectors, BankProvenance provenance,
                                    std::uint64_t seed) {
  if (vectors.dim() == 0 || vectors.rows() == 0) {
    throw EmptyInputError("memory bank needs at least one vector");
  }
  if (!vectors.all_finite()) throw DataError("memory bank vectors must be finite");
  MemoryBank bank;
  bank.vectors_ = deduplicate(vectors);
  bank.provenance_ = std::move(provenance);
  bank.seed_ = seed;
  return bank;
}

void MemoryBank::check_query(std::span<const float> query) const {
  if (query.size() != vectors_.dim()) {
    throw SchemaError("query dimension " + std::to_string(query.size()) +
                      " does not match bank dimension " + std::to_string(vectors_.dim()));
  }
}

double MemoryBank::score_exact(std::span<const float> query) const {
  check_query(query);
  const std::size_t dim = vectors_.dim();
  const float* base = vectors_.values().data();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < vectors_.rows(); ++r) {
    const float* row = base + r * dim;
    double acc = 0.0;
    std::size_t j = 0;
    // Partial sums only grow, so abandoning a row once it exceeds the best
    // leaves the minimum unchanged.
    for (; j < dim; ++j) {
      const double diff = static_cast<double>(query[j]) - static_cast<double>(row[j]);
      acc += diff * diff;
      if (acc >= best) break;
    }
    if (j == dim && acc < best) best = acc;
  }
  return std::sqrt(best);
}

double MemoryBank::score_approximate(std::span<const float> query) const {
  check_query(query);
  if (!index_) throw ParamError("no ANN index has been built for this bank");
  return std::sqrt(index_->search(vectors_, query).squared_distance);
}

double MemoryBank::score(std::span<const float> query) const {
  return index_ ? score_approximate(query) : score_exact(query);
}

void MemoryBank::build_ann_index(const AnnParams& params) {
  if (!params.enabled) {
    index_.reset();
    measured_recall_.reset();
    return;
  }
  if (!(params.target_recall_at_1 > 0.0 && params.target_recall_at_1 <= 1.0)) {
    throw ParamError("target recall@1 must lie in (0, 1]");
  }
  if (params.probe_count == 0) throw ParamError("ANN probe count must be >= 1");

  HnswParams hp{params.max_degree, params.ef_construction, params.ef_search, params.seed};
  auto index = std::make_shared<const HnswIndex>(vectors_, hp);

  std::vector<std::size_t> probes(vectors_.rows());
  std::iota(probes.begin(), probes.end(), 0);
  Rng rng(derive_seed(params.seed, 0x70726f6265ULL));
  rng.shuffle(std::span(probes));
  probes.resize(std::min(params.probe_count, probes.size()));

  std::size_t hits = 0;
  for (std::size_t id : probes) {
    const auto q = vectors_.row(id);
    if (index->search(vectors_, q).squared_distance == 0.0) ++hits;
  }
  const double recall = static_cast<double>(hits) / static_cast<double>(probes.size());
  if (recall < params.target_recall_at_1) {
    throw RecallError("ANN recall@1 " + std::to_string(recall) + " on " +
                      std::to_string(probes.size()) + " probes is below target " +
                      std::to_string(params.target_recall_at_1));
  }
  index_ = std::move(index);
  measured_recall_ = recall;
}

std::string MemoryBank::to_bytes() const {
  std::string out;
  out.reserve(kFixedHeaderBytes + provenance_.source.size() +
              vectors_.values().size() * sizeof(float));
  out.append(kBankMagic, 4);
  detail::put_le<std::uint32_t>(out, kBankVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(vectors_.dim()));
  detail::put_le<std::uint64_t>(out, vectors_.rows());
  detail::put_le<std::uint64_t>(out, seed_);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(provenance_.pooling));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(provenance_.source.size()));
  out += provenance_.source;
  detail::append_f32le(out, vectors_.values());
  return out;
}

MemoryBank MemoryBank::from_bytes(std::string_view bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBankMagic, 4) != 0) {
    throw FormatError("bank file: bad magic (expected \"TKBK\")");
  }
  if (bytes.size() < kFixedHeaderBytes) throw SchemaError("bank file: truncated header");
  const auto version = detail::get_le<std::uint32_t>(bytes, 4);
  if (version != kBankVersion) throw FormatError("bank file: unsupported version");
  const auto dim = detail::get_le<std::uint32_t>(bytes, 8);
  const auto n = detail::get_le<std::uint64_t>(bytes, 12);
  const auto seed = detail::get_le<std::uint64_t>(bytes, 20);
  const auto pooling = detail::get_le<std::uint32_t>(bytes, 28);
  const auto source_len = detail::get_le<std::uint32_t>(bytes, 32);
  if (dim == 0) throw FormatError("bank file: dim must be > 0");
  if (n == 0) throw FormatError("bank file: bank must hold at least one vector");
  if (pooling > static_cast<std::uint32_t>(PoolingMode::kFirst)) {
    throw FormatError("bank file: unknown pooling mode");
  }
  const std::uint64_t expected = kFixedHeaderBytes + std::uint64_t{source_len} +
                                 std::uint64_t{4} * dim * n;
  if (bytes.size() != expected) {
    throw SchemaError("bank file has " + std::to_string(bytes.size()) +
                      " bytes, header implies " + std::to_string(expected));
  }
  MemoryBank bank;
  bank.provenance_.source = std::string(bytes.substr(kFixedHeaderBytes, source_len));
  bank.provenance_.pooling = static_cast<PoolingMode>(pooling);
  bank.seed_ = seed;
  bank.vectors_ = FloatMatrix(dim, detail::decode_f32le(bytes.substr(kFixedHeaderBytes + source_len)));
  if (!bank.vectors_.all_finite()) throw DataError("bank file contains NaN or Inf");
  return bank;
}

void MemoryBank::save(const std::filesystem::path& path) const {
  detail::atomic_write_file(path, to_bytes());
}

MemoryBank MemoryBank::load(const std::filesystem::path& path) {
  return from_bytes(detail::read_file(path));
}

MemoryBank build_bank(const EmbeddingArchive& train, PoolingMode mode,
                      const SubsampleConfig& subsample) {
  using Mode = SubsampleConfig::Mode;
  if (subsample.mode == Mode::kNone && subsample.keep_fraction != 1.0) {
    throw ParamError("keep_fraction must be 1 when subsampling is disabled");
  }
  if (!(subsample.keep_fraction > 0.0 && subsample.keep_fraction <= 1.0)) {
    throw ParamError("keep_fraction must lie in (0, 1]");
  }
  for (const auto& doc : train.corpus.documents) {
    if (doc.is_anomalous()) {
      throw ContaminationError("training document '" + doc.doc_id + "' is labeled anomalous");
    }
  }
  const std::size_t n_words = train.corpus.word_count();
  if (n_words == 0) throw EmptyInputError("training archive contains no words");

  FloatMatrix pooled(n_words, train.matrix.dim());
  const auto offsets = train.row_offsets();
  std::size_t w = 0;
  for (std::size_t d = 0; d < train.spans.size(); ++d) {
    for (const auto& span : train.spans[d]) {
      pool_rows(train.matrix, offsets[d] + span.start, span.size(), mode, pooled.row(w++));
    }
  }

  FloatMatrix distinct = deduplicate(pooled);
  if (subsample.mode == Mode::kUniform && subsample.keep_fraction < 1.0) {
    const std::size_t total = distinct.rows();
    const auto keep = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(subsample.keep_fraction * static_cast<double>(total))),
        1, total);
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(subsample.seed);
    rng.shuffle(std::span(order));
    order.resize(keep);
    std::sort(order.begin(), order.end());
    FloatMatrix kept(distinct.dim());
    kept.reserve_rows(keep);
    for (std::size_t i : order) kept.append_row(distinct.row(i));
    distinct = std::move(kept);
  }
  return MemoryBank::from_vectors(std::move(distinct), {train.corpus.name, mode}, subsample.seed);
}

}  // namespace tokencore
