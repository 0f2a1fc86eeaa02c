#include "doctest.h"
#include "oracles.hpp"
#include "tokencore/errors.hpp"
#include "tokencore/hnsw.hpp"

using namespace tokencore;

TEST_CASE("HNSW finds every indexed point") {
  const auto data = oracle::random_matrix(1500, 12, 7);
  const HnswIndex index(data, {});
  std::size_t found = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    found += index.search(data, data.row(i)).squared_distance == 0.0;
  }
  CHECK(found == data.rows());
}

TEST_CASE("HNSW recall@1 against brute force on fresh queries") {
  const auto data = oracle::random_matrix(3000, 16, 8);
  const auto queries = oracle::random_matrix(300, 16, 9);
  const HnswIndex index(data, {});
  std::size_t hits = 0;
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto hit = index.search(data, queries.row(q));
    const double exact = oracle::nearest_distance(data, queries.row(q));
    CHECK(std::sqrt(hit.squared_distance) >= exact - 1e-9);
    hits += std::abs(std::sqrt(hit.squared_distance) - exact) <= 1e-9;
  }
  CHECK(static_cast<double>(hits) / 300.0 >= 0.95);
}

TEST_CASE("HNSW construction is deterministic per seed") {
  const auto data = oracle::random_matrix(800, 8, 10);
  const auto queries = oracle::random_matrix(100, 8, 11);
  HnswParams params;
  params.ef_search = 4;
  params.seed = 5;
  const HnswIndex a(data, params);
  const HnswIndex b(data, params);
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const auto ha = a.search(data, queries.row(q));
    const auto hb = b.search(data, queries.row(q));
    CHECK(ha.id == hb.id);
    CHECK(ha.squared_distance == hb.squared_distance);
  }
}

TEST_CASE("HNSW handles tiny inputs and rejects bad params") {
  const auto one = oracle::random_matrix(1, 4, 1);
  const HnswIndex index(one, {});
  CHECK(index.search(one, one.row(0)).id == 0);
  CHECK_THROWS_AS(HnswIndex(FloatMatrix(4), {}), EmptyInputError);
  HnswParams bad;
  bad.max_degree = 1;
  CHECK_THROWS_AS(HnswIndex(one, bad), ParamError);
}
