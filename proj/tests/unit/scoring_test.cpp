#include "doctest.h"
#include "tokencore/errors.hpp"
#include "tokencore/memory_bank.hpp"
#include "tokencore/scoring.hpp"

using namespace tokencore;

namespace {

/// Returns the first coordinate as the score.
class FirstCoordinate final : public TokenScorer {
 public:
  std::size_t dim() const override { return 1; }
  double score(std::span<const float> x) const override { return x[0]; }
  std::string_view name() const override { return "first"; }
};

FloatMatrix column(std::vector<float> v) { return FloatMatrix(1, std::move(v)); }

}  // namespace

TEST_CASE("mean aggregation") {
  const std::vector<double> s{0.2, 0.4};
  CHECK(aggregate(s, {}) == doctest::Approx(0.3));
}

TEST_CASE("single-token documents take the token score") {
  const auto doc = score_document(FirstCoordinate{}, "x", column({0.75f}));
  CHECK(doc.doc_score == 0.75);
}

TEST_CASE("max and top-k aggregators") {
  const std::vector<double> s{0.1, 0.9, 0.5, 0.3};
  CHECK(aggregate(s, {AggregatorKind::kMax, 1}) == 0.9);
  CHECK(aggregate(s, {AggregatorKind::kTopKMean, 2}) == doctest::Approx(0.7));
  CHECK(aggregate(s, {AggregatorKind::kTopKMean, 10}) == doctest::Approx(0.45));
  CHECK_THROWS_AS(aggregate(s, {AggregatorKind::kTopKMean, 0}), ParamError);
}

TEST_CASE("empty documents are rejected by scoring") {
  CHECK_THROWS_AS(score_document(FirstCoordinate{}, "empty", FloatMatrix(1)), EmptyInputError);
  const std::vector<double> none;
  CHECK_THROWS_AS(aggregate(none, {}), EmptyInputError);

  Corpus c{"c", {{"a", {}, std::nullopt}}};
  const std::vector<FloatMatrix> words{FloatMatrix(1)};
  CHECK_THROWS_AS(score_documents(FirstCoordinate{}, c, words, {}, 1), EmptyInputError);
}

TEST_CASE("score_documents is independent of thread count") {
  Corpus c;
  std::vector<FloatMatrix> words;
  for (int d = 0; d < 13; ++d) {
    c.documents.push_back({"d" + std::to_string(d), {}, std::nullopt});
    std::vector<float> v;
    for (int w = 0; w <= d; ++w) {
      c.documents.back().words.push_back({"w", std::nullopt});
      v.push_back(static_cast<float>(d * 31 + w * 7 % 5));
    }
    words.push_back(column(v));
  }
  const auto one = score_documents(FirstCoordinate{}, c, words, {}, 1);
  const auto four = score_documents(FirstCoordinate{}, c, words, {}, 4);
  CHECK(one == four);
  CHECK(scores_to_jsonl(one) == scores_to_jsonl(four));
}

TEST_CASE("score JSONL round trip") {
  const std::vector<ScoredDocument> docs{{"a", {0.1, 0.2, 1e-300}, 0.1}, {"b", {3.0}, 3.0}};
  CHECK(scores_from_jsonl(scores_to_jsonl(docs)) == docs);
  CHECK_THROWS_AS(scores_from_jsonl("{\"doc_id\":1}\n"), SchemaError);
  CHECK_THROWS_AS(scores_from_jsonl("nope\n"), FormatError);
}
