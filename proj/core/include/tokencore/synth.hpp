#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tokencore/archive.hpp"
#include "tokencore/corpus.hpp"

namespace tokencore {

// Desk-scale data generation: a Zipf-distributed normal corpus, gibberish
// injection with token labels, and a character n-gram hashing embedder.

struct VocabConfig {
  std::size_t vocab_size = 300;
  std::size_t word_len_min = 3;
  std::size_t word_len_max = 9;
  std::size_t doc_len_min = 10;
  std::size_t doc_len_max = 30;
  double zipf_exponent = 1.0;  // 0 gives uniform word frequencies
};

/// `vocab_size` distinct lowercase words, in rank order.
std::vector<std::string> make_vocabulary(const VocabConfig& cfg, std::uint64_t seed);

/// All document and word labels are 0. Throws ParamError when n_docs == 0 or
/// the config is inconsistent.
Corpus gen_normal_corpus(const VocabConfig& cfg, std::size_t n_docs, std::uint64_t seed);

struct CorruptionConfig {
  double doc_anomaly_rate = 0.1;
  std::size_t tokens_min = 1;
  std::size_t tokens_max = 3;
  std::size_t gibberish_len_min = 6;
  std::size_t gibberish_len_max = 12;
  std::uint64_t seed = 0;
};

/// Inserts random lowercase strings that never occur in the input corpus into
/// round(rate * n_docs) documents (at least one). Inserted words and their
/// host documents are labeled 1; every other label is set to 0. Throws
/// SchemaError if the input already carries anomalous labels.
Corpus inject_gibberish(const Corpus& corpus, const CorruptionConfig& cfg);

struct HashEmbedConfig {
  std::size_t dim = 64;
  std::size_t ngram_min = 3;
  std::size_t ngram_max = 5;
  std::uint64_t seed = 0;
};

/// FNV-1a, 64-bit: offset basis 0xcbf29ce484222325, prime 0x100000001b3.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

/// Hash of one n-gram feature: FNV-1a over the 8 little-endian seed bytes
/// followed by the n-gram bytes.
std::uint64_t ngram_hash(std::string_view ngram, std::uint64_t seed) noexcept;

/// Byte n-grams of "<" + word + ">" for n in [ngram_min, ngram_max], shortest
/// first, left to right. A padded word shorter than ngram_min yields itself.
std::vector<std::string> word_ngrams(std::string_view word, std::size_t ngram_min,
                                     std::size_t ngram_max);

/// Signed feature-hashing embedding: n-gram g adds sign(g) at index
/// ngram_hash(g) % dim, where sign is -1 when bit 63 of the hash is set. The
/// count vector is L2-normalized. If signed counts cancel to zero the unsigned
/// counts are used instead.
std::vector<float> hash_embed_word(std::string_view word, const HashEmbedConfig& cfg);

/// One subword row per word with identity spans.
EmbeddingArchive embed_corpus(const Corpus& corpus, const HashEmbedConfig& cfg);

}  // namespace tokencore
