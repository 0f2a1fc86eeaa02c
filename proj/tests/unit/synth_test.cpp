#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "tokencore/errors.hpp"
#include "tokencore/matrix.hpp"
#include "tokencore/pooling.hpp"
#include "tokencore/random.hpp"
#include "tokencore/synth.hpp"

using namespace tokencore;

namespace {

double norm(const std::vector<float>& v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

double dot(const std::vector<float>& a, const std::vector<float>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
  return s;
}

// Inner product of two hashed embeddings by enumerating n-gram pairs.
double pairwise_hash_dot(std::string_view a, std::string_view b, const HashEmbedConfig& cfg) {
  const auto ga = word_ngrams(a, cfg.ngram_min, cfg.ngram_max);
  const auto gb = word_ngrams(b, cfg.ngram_min, cfg.ngram_max);
  const auto bucket = [&](const std::string& g) {
    const std::uint64_t h = ngram_hash(g, cfg.seed);
    return std::pair<std::size_t, double>(h % cfg.dim, (h >> 63) ? -1.0 : 1.0);
  };
  const auto self = [&](const std::vector<std::string>& gs) {
    double s = 0.0;
    for (const auto& x : gs) {
      for (const auto& y : gs) {
        const auto [ix, sx] = bucket(x);
        const auto [iy, sy] = bucket(y);
        if (ix == iy) s += sx * sy;
      }
    }
    return s;
  };
  double cross = 0.0;
  for (const auto& x : ga) {
    for (const auto& y : gb) {
      const auto [ix, sx] = bucket(x);
      const auto [iy, sy] = bucket(y);
      if (ix == iy) cross += sx * sy;
    }
  }
  return cross / std::sqrt(self(ga) * self(gb));
}

}  // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("n-gram extraction") {
  const auto g = word_ngrams("ab", 3, 4);
  CHECK(g == std::vector<std::string>{"<ab", "ab>", "<ab>"});
  CHECK(word_ngrams("a", 4, 5) == std::vector<std::string>{"<a>"});
  CHECK(word_ngrams("hello", 3, 3).size() == 5);
}

TEST_CASE("normal corpus generation") {
  VocabConfig cfg;
  const auto a = gen_normal_corpus(cfg, 50, 3);
  const auto b = gen_normal_corpus(cfg, 50, 3);
  CHECK(a == b);
  CHECK(a != gen_normal_corpus(cfg, 50, 4));
  CHECK(a.documents.size() == 50);
  CHECK(a.documents[0].doc_id == "doc-000000");
  const auto vocab = make_vocabulary(cfg, derive_seed(3, 1));
  const std::set<std::string> vset(vocab.begin(), vocab.end());
  CHECK(vset.size() == cfg.vocab_size);
  for (const auto& d : a.documents) {
    CHECK(d.label == Label::kNormal);
    CHECK(d.words.size() >= cfg.doc_len_min);
    CHECK(d.words.size() <= cfg.doc_len_max);
    for (const auto& w : d.words) {
      CHECK(w.label == Label::kNormal);
      CHECK(vset.count(w.text) == 1);
    }
  }
  CHECK_THROWS_AS(gen_normal_corpus(cfg, 0, 1), ParamError);
}

TEST_CASE("zero Zipf exponent gives uniform word frequencies") {
  VocabConfig cfg;
  cfg.vocab_size = 10;
  cfg.doc_len_min = cfg.doc_len_max = 100;
  const auto c = gen_normal_corpus(cfg, 1000, 5);
  std::map<std::string, double> counts;
  for (const auto& d : c.documents) {
    for (const auto& w : d.words) counts[w.text] += 1.0;
  }
  REQUIRE(counts.size() == 10);
  double chi2 = 0.0;
  for (const auto& [w, n] : counts) chi2 += (n - 1e4) * (n - 1e4) / 1e4;
  cfg.zipf_exponent = 0.0;
  const auto u = gen_normal_corpus(cfg, 1000, 5);
  counts.clear();
  for (const auto& d : u.documents) {
    for (const auto& w : d.words) counts[w.text] += 1.0;
  }
  double chi2_uniform = 0.0;
  for (const auto& [w, n] : counts) chi2_uniform += (n - 1e4) * (n - 1e4) / 1e4;
  CHECK(chi2_uniform < 27.88);  // chi-square 0.999 quantile, 9 dof
  CHECK(chi2 > 1000.0);         // exponent 1 is far from uniform
}

TEST_CASE("gibberish injection") {
  const auto clean = gen_normal_corpus({}, 500, 6);
  CorruptionConfig cfg;
  cfg.seed = 2;
  const auto dirty = inject_gibberish(clean, cfg);
  CHECK(dirty == inject_gibberish(clean, cfg));

  std::set<std::string> vocab;
  for (const auto& d : clean.documents) {
    for (const auto& w : d.words) vocab.insert(w.text);
  }
  std::size_t anomalous_docs = 0, anomalous_tokens = 0, tokens = 0;
  for (std::size_t i = 0; i < dirty.documents.size(); ++i) {
    const auto& d = dirty.documents[i];
    const auto& orig = clean.documents[i];
    CHECK(d.doc_id == orig.doc_id);
    std::size_t injected = 0;
    std::vector<std::string> kept;
    for (const auto& w : d.words) {
      ++tokens;
      if (w.label == Label::kAnomalous) {
        ++injected;
        CHECK(vocab.count(w.text) == 0);
        CHECK(w.text.size() >= cfg.gibberish_len_min);
        CHECK(w.text.size() <= cfg.gibberish_len_max);
      } else {
        kept.push_back(w.text);
      }
    }
    // The original words survive in order.
    std::vector<std::string> original;
    for (const auto& w : orig.words) original.push_back(w.text);
    CHECK(kept == original);
    if (injected > 0) {
      ++anomalous_docs;
      CHECK(injected <= cfg.tokens_max);
      CHECK(d.label == Label::kAnomalous);
    } else {
      CHECK(d.label == Label::kNormal);
    }
    anomalous_tokens += injected;
  }
  CHECK(anomalous_docs == 50);
  CHECK(static_cast<double>(anomalous_tokens) / tokens < 0.1);

  CHECK_THROWS_AS(inject_gibberish(dirty, cfg), SchemaError);
  Corpus tiny;
  tiny.documents.push_back(clean.documents[0]);
  CorruptionConfig small = cfg;
  small.doc_anomaly_rate = 0.01;
  std::size_t hit = 0;
  for (const auto& d : inject_gibberish(tiny, small).documents) hit += d.is_anomalous();
  CHECK(hit == 1);
}

TEST_CASE("hash embedding") {
  const HashEmbedConfig cfg;
  const auto v = hash_embed_word("pattern", cfg);
  CHECK(v.size() == 64);
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(v == hash_embed_word("pattern", cfg));
  HashEmbedConfig other = cfg;
  other.seed = 9;
  CHECK(v != hash_embed_word("pattern", other));
  CHECK_THROWS_AS(hash_embed_word("", cfg), EmptyInputError);

  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"pattern", "xqzvkw"}, {"tree", "trees"}, {"abc", "abd"}, {"a", "b"}}) {
    const auto ea = hash_embed_word(a, cfg);
    const auto eb = hash_embed_word(b, cfg);
    CHECK(dot(ea, eb) == doctest::Approx(pairwise_hash_dot(a, b, cfg)).epsilon(1e-6));
  }
  // Words sharing no n-grams are nearly orthogonal at this width.
  HashEmbedConfig wide = cfg;
  wide.dim = 4096;
  const auto p = hash_embed_word("pattern", wide);
  const auto q = hash_embed_word("xqzvkw", wide);
  double sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sq += (p[i] - q[i]) * (p[i] - q[i]);
  CHECK(sq == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("embed_corpus produces identity spans") {
  const auto c = inject_gibberish(gen_normal_corpus({}, 20, 7), {});
  const HashEmbedConfig cfg;
  const auto archive = embed_corpus(c, cfg);
  CHECK(archive.matrix.rows() == c.word_count());
  CHECK(archive.matrix.dim() == cfg.dim);
  const auto pooled = pool_archive(archive, PoolingMode::kMax);
  std::size_t row = 0;
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    for (std::size_t w = 0; w < c.documents[d].words.size(); ++w, ++row) {
      const auto expect = hash_embed_word(c.documents[d].words[w].text, cfg);
      const auto got = pooled[d].row(w);
      CHECK(std::equal(got.begin(), got.end(), expect.begin(), expect.end()));
    }
  }
}
