#include "tokencore/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tokencore/errors.hpp"
#include "tokencore/random.hpp"

namespace tokencore {
namespace {

std::string random_word(Rng& rng, std::size_t len_min, std::size_t len_max) {
  const auto len = static_cast<std::size_t>(
      rng.between(static_cast<std::int64_t>(len_min), static_cast<std::int64_t>(len_max)));
  std::string w(len, 'a');
  for (char& c : w) c = static_cast<char>('a' + rng.below(26));
  return w;
}

void check_range(std::size_t lo, std::size_t hi, const char* what) {
  if (lo > hi) throw ParamError(std::string(what) + " range has min > max");
}

}  // namespace

std::vector<std::string> make_vocabulary(const VocabConfig& cfg, std::uint64_t seed) {
  if (cfg.vocab_size < 10) throw ParamError("vocab_size must be >= 10");
  if (cfg.word_len_min < 1) throw ParamError("word length must be >= 1");
  check_range(cfg.word_len_min, cfg.word_len_max, "word length");
  if (!(cfg.zipf_exponent >= 0.0)) throw ParamError("zipf exponent must be >= 0");

  double capacity = 0.0;
  for (std::size_t len = cfg.word_len_min; len <= cfg.word_len_max && capacity < 1e18; ++len) {
    capacity += std::pow(26.0, static_cast<double>(len));
  }
  if (capacity < 2.0 * static_cast<double>(cfg.vocab_size)) {
    throw ParamError("word length range is too narrow for the requested vocabulary size");
  }

  Rng rng(seed);
  std::unordered_set<std::string> seen;
  std::vector<std::string> vocab;
  vocab.reserve(cfg.vocab_size);
  while (vocab.size() < cfg.vocab_size) {
    auto w = random_word(rng, cfg.word_len_min, cfg.word_len_max);
    if (seen.insert(w).second) vocab.push_back(std::move(w));
  }
  return vocab;
}

Corpus gen_normal_corpus(const VocabConfig& cfg, std::size_t n_docs, std::uint64_t seed) {
  if (n_docs == 0) throw ParamError("n_docs must be >= 1");
  check_range(cfg.doc_len_min, cfg.doc_len_max, "document length");
  const auto vocab = make_vocabulary(cfg, derive_seed(seed, 1));

  std::vector<double> cumulative(vocab.size());
  double total = 0.0;
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    total += std::pow(static_cast<double>(r + 1), -cfg.zipf_exponent);
    cumulative[r] = total;
  }

  Rng rng(derive_seed(seed, 2));
  Corpus corpus;
  corpus.name = "synthetic";
  corpus.documents.reserve(n_docs);
  char id[32];
  for (std::size_t d = 0; d < n_docs; ++d) {
    Document doc;
    std::snprintf(id, sizeof(id), "doc-%06zu", d);
    doc.doc_id = id;
    doc.label = Label::kNormal;
    const auto len = static_cast<std::size_t>(rng.between(
        static_cast<std::int64_t>(cfg.doc_len_min), static_cast<std::int64_t>(cfg.doc_len_max)));
    doc.words.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      const double u = rng.uniform01() * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      doc.words.push_back({vocab[static_cast<std::size_t>(it - cumulative.begin())], Label::kNormal});
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus inject_gibberish(const Corpus& corpus, const CorruptionConfig& cfg) {
  if (!(cfg.doc_anomaly_rate > 0.0 && cfg.doc_anomaly_rate < 1.0)) {
    throw ParamError("doc_anomaly_rate must lie in (0, 1)");
  }
  if (cfg.tokens_min < 1) throw ParamError("each corruption must insert at least one token");
  check_range(cfg.tokens_min, cfg.tokens_max, "tokens per corruption");
  if (cfg.gibberish_len_min < 1) throw ParamError("gibberish length must be >= 1");
  check_range(cfg.gibberish_len_min, cfg.gibberish_len_max, "gibberish length");
  if (corpus.documents.empty()) throw EmptyInputError("cannot corrupt an empty corpus");

  std::unordered_set<std::string> vocabulary;
  for (const auto& doc : corpus.documents) {
    if (doc.is_anomalous()) {
      throw SchemaError("document '" + doc.doc_id + "' already carries anomaly labels");
    }
    for (const auto& w : doc.words) vocabulary.insert(w.text);
  }

  Corpus out = corpus;
  for (auto& doc : out.documents) {
    doc.label = Label::kNormal;
    for (auto& w : doc.words) w.label = Label::kNormal;
  }

  const std::size_t n_docs = out.documents.size();
  const auto n_corrupt = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.doc_anomaly_rate * static_cast<double>(n_docs))),
      1, n_docs);

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n_docs);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span(order));
  order.resize(n_corrupt);
  std::sort(order.begin(), order.end());

  for (std::size_t d : order) {
    auto& doc = out.documents[d];
    doc.label = Label::kAnomalous;
    const auto k = rng.between(static_cast<std::int64_t>(cfg.tokens_min),
                               static_cast<std::int64_t>(cfg.tokens_max));
    for (std::int64_t t = 0; t < k; ++t) {
      std::string word;
      for (int attempt = 0;; ++attempt) {
        if (attempt == 10000) {
          throw ParamError("could not draw a gibberish word outside the vocabulary");
        }
        word = random_word(rng, cfg.gibberish_len_min, cfg.gibberish_len_max);
        if (!vocabulary.contains(word)) break;
      }
      const auto pos = static_cast<std::size_t>(rng.below(doc.words.size() + 1));
      doc.words.insert(doc.words.begin() + static_cast<std::ptrdiff_t>(pos),
                       WordToken{std::move(word), Label::kAnomalous});
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) noexcept {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::uint64_t ngram_hash(std::string_view ngram, std::uint64_t seed) noexcept {
  char seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  return fnv1a64(ngram, fnv1a64(std::string_view(seed_bytes, 8)));
}

std::vector<std::string> word_ngrams(std::string_view word, std::size_t ngram_min,
                                     std::size_t ngram_max) {
  const std::string padded = "<" + std::string(word) + ">";
  std::vector<std::string> grams;
  if (padded.size() < ngram_min) {
    grams.push_back(padded);
    return grams;
  }
  for (std::size_t n = ngram_min; n <= ngram_max && n <= padded.size(); ++n) {
    for (std::size_t i = 0; i + n <= padded.size(); ++i) grams.push_back(padded.substr(i, n));
  }
  return grams;
}

std::vector<float> hash_embed_word(std::string_view word, const HashEmbedConfig& cfg) {
  if (word.empty()) throw EmptyInputError("cannot embed an empty word");
  if (cfg.dim < 8) throw ParamError("hash embedding dim must be >= 8");
  if (cfg.ngram_min < 2 || cfg.ngram_min > cfg.ngram_max || cfg.ngram_max > 5) {
    throw ParamError("n-gram range must satisfy 2 <= min <= max <= 5");
  }

  std::vector<double> signed_counts(cfg.dim, 0.0);
  std::vector<double> unsigned_counts(cfg.dim, 0.0);
  for (const auto& g : word_ngrams(word, cfg.ngram_min, cfg.ngram_max)) {
    const std::uint64_t h = ngram_hash(g, cfg.seed);
    const std::size_t index = static_cast<std::size_t>(h % cfg.dim);
    signed_counts[index] += (h >> 63) ? -1.0 : 1.0;
    unsigned_counts[index] += 1.0;
  }

  const auto norm_of = [](const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
  };
  double norm = norm_of(signed_counts);
  const std::vector<double>* counts = &signed_counts;
  if (norm == 0.0) {
    counts = &unsigned_counts;
    norm = norm_of(unsigned_counts);
  }
  std::vector<float> out(cfg.dim);
  for (std::size_t i = 0; i < cfg.dim; ++i) out[i] = static_cast<float>((*counts)[i] / norm);
  return out;
}

EmbeddingArchive embed_corpus(const Corpus& corpus, const HashEmbedConfig& cfg) {
  EmbeddingArchive archive;
  archive.corpus = corpus;
  archive.matrix = FloatMatrix(cfg.dim);
  archive.matrix.reserve_rows(corpus.word_count());
  archive.spans.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    for (const auto& w : doc.words) archive.matrix.append_row(hash_embed_word(w.text, cfg));
    archive.spans.push_back(identity_spans(doc.words.size()));
  }
  validate_archive(archive);
  return archive;
}

}  // namespace tokencore
