#include <filesystem>
#include <fstream>
#include <limits>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "tokencore/archive.hpp"
#include "tokencore/errors.hpp"

using namespace tokencore;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("tokencore_archive_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

EmbeddingArchive small_archive() {
  EmbeddingArchive a;
  a.corpus.name = "small";
  a.corpus.documents.push_back({"d0", {{"hello", Label::kNormal}, {"world", Label::kNormal}},
                                Label::kNormal});
  a.spans.push_back({{0, 0, 1}, {1, 1, 3}});
  a.matrix = FloatMatrix(4, std::vector<float>{1, 2, 3, 4, 5, 6, 7, 8, -1, -2, -3, -4});
  return a;
}


}  // namespace

TEST_CASE("write_archive emits header, meta and an exactly sized emb.bin") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  CHECK(fs::exists(dir.path / "header.json"));
  CHECK(fs::exists(dir.path / "meta.jsonl"));
  CHECK(fs::file_size(dir.path / "emb.bin") == 48);

  std::ifstream in(dir.path / "header.json");
  const auto header = nlohmann::json::parse(in);
  CHECK(header["magic"] == "TKEM");
  CHECK(header["version"] == 1);
  CHECK(header["dim"] == 4);
  CHECK(header["n_subwords_total"] == 3);
  CHECK(header["dtype"] == "f32le");
  for (const auto& entry : fs::directory_iterator(dir.path)) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("emb.bin stores little-endian float32 rows") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  std::ifstream in(dir.path / "emb.bin", std::ios::binary);
  unsigned char first[4];
  in.read(reinterpret_cast<char*>(first), 4);
  // 1.0f is 0x3f800000
  CHECK(first[0] == 0x00);
  CHECK(first[1] == 0x00);
  CHECK(first[2] == 0x80);
  CHECK(first[3] == 0x3f);
}

TEST_CASE("archive round trip is structurally identical and byte-exact") {
  TempDir dir;
  const auto original = small_archive();
  write_archive(original, dir.path);
  const auto back = read_archive(dir.path);
  CHECK(back.corpus == original.corpus);
  CHECK(back.spans == original.spans);
  CHECK(back.matrix == original.matrix);

  TempDir again;
  write_archive(back, again.path);
  std::ifstream a(dir.path / "emb.bin", std::ios::binary), b(again.path / "emb.bin", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  CHECK(sa == sb);
}

TEST_CASE("write_archive rejects empty spans and non-finite values") {
  TempDir dir;
  auto a = small_archive();
  a.spans[0] = {{0, 0, 2}, {1, 2, 2}};
  a.matrix = FloatMatrix(4, std::vector<float>(8, 0.0f));
  CHECK_THROWS_AS(write_archive(a, dir.path), SchemaError);

  auto b = small_archive();
  b.matrix.values()[5] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(write_archive(b, dir.path), DataError);

  auto c = small_archive();
  c.matrix.values()[5] = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(write_archive(c, dir.path), DataError);
}

TEST_CASE("read_archive rejects a short emb.bin") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  fs::resize_file(dir.path / "emb.bin", 47);
  CHECK_THROWS_AS(read_archive(dir.path), SchemaError);
}

TEST_CASE("read_archive rejects bad header fields") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  const auto rewrite = [&](const std::string& key, nlohmann::json value) {
    std::ifstream in(dir.path / "header.json");
    auto header = nlohmann::json::parse(in);
    in.close();
    header[key] = std::move(value);
    std::ofstream(dir.path / "header.json") << header.dump();
  };
  SUBCASE("dim 0") {
    rewrite("dim", 0);
    CHECK_THROWS_AS(read_archive(dir.path), FormatError);
  }
  SUBCASE("magic") {
    rewrite("magic", "XXXX");
    CHECK_THROWS_AS(read_archive(dir.path), FormatError);
  }
  SUBCASE("version") {
    rewrite("version", 2);
    CHECK_THROWS_AS(read_archive(dir.path), FormatError);
  }
  SUBCASE("row count disagrees with spans") {
    // emb.bin still matches the header, so the span total is what fails.
    rewrite("n_subwords_total", 2);
    fs::resize_file(dir.path / "emb.bin", 32);
    CHECK_THROWS_AS(read_archive(dir.path), SchemaError);
  }
}

TEST_CASE("read_archive rejects NaN payloads written behind its back") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  std::fstream f(dir.path / "emb.bin", std::ios::binary | std::ios::in | std::ios::out);
  const float nan = std::numeric_limits<float>::quiet_NaN();
  f.seekp(8);
  f.write(reinterpret_cast<const char*>(&nan), 4);
  f.close();
  CHECK_THROWS_AS(read_archive(dir.path), DataError);
}

TEST_CASE("read_archive on a missing directory is an I/O error") {
  CHECK_THROWS_AS(read_archive("/nonexistent/tokencore/archive"), IoError);
}

TEST_CASE("read_archive ignores unknown meta fields from other producers") {
  TempDir dir;
  write_archive(small_archive(), dir.path);
  std::ofstream(dir.path / "meta.jsonl")
      << R"({"doc_id":"d0","words":["hello","world"],"label":0,"word_labels":[0,0],)"
      << R"("spans":[[0,1],[1,3]],"windows":[[0,2]]})" << "\n";
  const auto a = read_archive(dir.path);
  CHECK(a.spans[0].size() == 2);
}

TEST_CASE("random archives survive the round trip") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    EmbeddingArchive a;
    a.corpus.name = "rand";
    const std::size_t dim = 1 + rng.below(9);
    std::size_t rows = 0;
    const std::size_t docs = 1 + rng.below(5);
    for (std::size_t d = 0; d < docs; ++d) {
      Document doc{"d" + std::to_string(d), {}, std::nullopt};
      std::vector<SubwordSpan> spans;
      const std::size_t words = rng.below(6);
      std::size_t local = 0;
      for (std::size_t w = 0; w < words; ++w) {
        doc.words.push_back({"w" + std::to_string(w), std::nullopt});
        const std::size_t n = 1 + rng.below(3);
        spans.push_back({w, local, local + n});
        local += n;
      }
      rows += local;
      a.corpus.documents.push_back(std::move(doc));
      a.spans.push_back(std::move(spans));
    }
    a.matrix = oracle::random_matrix(rows, dim, seed);
    TempDir dir;
    write_archive(a, dir.path);
    const auto back = read_archive(dir.path);
    CHECK(back.corpus == a.corpus);
    CHECK(back.spans == a.spans);
    CHECK(back.matrix == a.matrix);
  }
}
