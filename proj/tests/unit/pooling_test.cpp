#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "tokencore/errors.hpp"
#include "tokencore/pooling.hpp"

using namespace tokencore;

namespace {

std::vector<float> pool(const std::vector<std::vector<float>>& vecs, PoolingMode mode) {
  std::vector<std::span<const float>> views(vecs.begin(), vecs.end());
  return pool_word(views, mode);
}

}  // namespace

TEST_CASE("max pooling is element-wise") {
  CHECK(pool({{1, -2}, {0, 3}}, PoolingMode::kMax) == std::vector<float>{1, 3});
}

TEST_CASE("mean pooling averages") {
  CHECK(pool({{2, 0}, {0, 2}}, PoolingMode::kMean) == std::vector<float>{1, 1});
}

TEST_CASE("first pooling copies the first subword") {
  CHECK(pool({{5, 6}, {7, 8}}, PoolingMode::kFirst) == std::vector<float>{5, 6});
}

TEST_CASE("every mode is the identity on a single subword") {
  const std::vector<float> v{0.25f, -3.5f, 1e-7f};
  for (auto mode : {PoolingMode::kMax, PoolingMode::kMean, PoolingMode::kFirst}) {
    CHECK(pool({v}, mode) == v);
  }
}

TEST_CASE("pool_word input errors") {
  std::vector<std::span<const float>> none;
  CHECK_THROWS_AS(pool_word(none, PoolingMode::kMax), EmptyInputError);
  CHECK_THROWS_AS(pool({{1, 2}, {1}}, PoolingMode::kMax), SchemaError);
}

TEST_CASE("FIRST is order-sensitive where MAX and MEAN are not") {
  const std::vector<std::vector<float>> a{{1, 9}, {4, 2}};
  const std::vector<std::vector<float>> b{{4, 2}, {1, 9}};
  CHECK(pool(a, PoolingMode::kMax) == pool(b, PoolingMode::kMax));
  CHECK(pool(a, PoolingMode::kMean) == pool(b, PoolingMode::kMean));
  CHECK(pool(a, PoolingMode::kFirst) != pool(b, PoolingMode::kFirst));
}

TEST_CASE("pool_document with one span over all rows equals pool_word") {
  const auto rows = oracle::random_matrix(4, 3, 11);
  const std::vector<SubwordSpan> spans{{0, 0, 4}};
  const auto words = pool_document(rows, spans, PoolingMode::kMax);
  std::vector<std::span<const float>> views;
  for (std::size_t i = 0; i < 4; ++i) views.push_back(rows.row(i));
  const auto expect = pool_word(views, PoolingMode::kMax);
  REQUIRE(words.rows() == 1);
  CHECK(std::equal(expect.begin(), expect.end(), words.row(0).begin()));
}

TEST_CASE("pool_document expands spans in word order") {
  const FloatMatrix rows(2, std::vector<float>{1, 5, 3, 2, 0, 7});
  const std::vector<SubwordSpan> spans{{0, 0, 1}, {1, 1, 3}};
  const auto words = pool_document(rows, spans, PoolingMode::kMax);
  REQUIRE(words.rows() == 2);
  CHECK(words.row(0)[0] == 1);
  CHECK(words.row(0)[1] == 5);
  CHECK(words.row(1)[0] == 3);
  CHECK(words.row(1)[1] == 7);
}

TEST_CASE("pool_document mean matches a per-span brute-force mean") {
  Rng rng(5);
  std::vector<SubwordSpan> spans;
  std::size_t rows = 0;
  for (std::size_t w = 0; w < 5; ++w) {
    const std::size_t n = 1 + rng.below(4);
    spans.push_back({w, rows, rows + n});
    rows += n;
  }
  const auto m = oracle::random_matrix(rows, 8, 6);
  const auto words = pool_document(m, spans, PoolingMode::kMean);
  for (std::size_t w = 0; w < spans.size(); ++w) {
    for (std::size_t j = 0; j < 8; ++j) {
      long double sum = 0;
      for (std::size_t r = spans[w].start; r < spans[w].end; ++r) sum += m.row(r)[j];
      const auto expect = static_cast<float>(sum / spans[w].size());
      CHECK(words.row(w)[j] == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("pool_document rejects malformed spans") {
  const auto m = oracle::random_matrix(3, 2, 1);
  const std::vector<SubwordSpan> bad{{0, 0, 2}};
  CHECK_THROWS_AS(pool_document(m, bad, PoolingMode::kMax), SchemaError);
}

TEST_CASE("pooling properties over random inputs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t d = 1 + rng.below(10);
    const auto m = oracle::random_matrix(n, d, rng.next());
    std::vector<std::span<const float>> views;
    for (std::size_t i = 0; i < n; ++i) views.push_back(m.row(i));
    const auto mx = pool_word(views, PoolingMode::kMax);
    const auto mean = pool_word(views, PoolingMode::kMean);
    for (std::size_t j = 0; j < d; ++j) {
      bool attained = false;
      float lo = views[0][j], hi = views[0][j];
      for (const auto& v : views) {
        CHECK(mx[j] >= v[j]);
        attained = attained || mx[j] == v[j];
        lo = std::min(lo, v[j]);
        hi = std::max(hi, v[j]);
      }
      CHECK(attained);
      CHECK(mean[j] >= lo);
      CHECK(mean[j] <= hi);
    }
  }
}
