#include "doctest.h"
#include "tokencore/corpus.hpp"
#include "tokencore/corpus_io.hpp"
#include "tokencore/errors.hpp"

using namespace tokencore;

namespace {

Document doc(std::string id, std::vector<std::string> words, std::optional<Label> label = Label::kNormal) {
  Document d{std::move(id), {}, label};
  for (auto& w : words) d.words.push_back({std::move(w), Label::kNormal});
  return d;
}

}  // namespace

TEST_CASE("validate_corpus reports duplicate doc ids") {
  Corpus c{"c", {doc("a", {"x"}), doc("a", {"y"})}};
  const auto report = validate_corpus(c);
  CHECK(report.violations.size() == 1);
  CHECK(report.count(Violation::Kind::kDuplicateDocId) == 1);
}

TEST_CASE("validate_corpus reports a normal document holding an anomalous word") {
  Corpus c{"c", {doc("a", {"x", "y"})}};
  c.documents[0].words[1].label = Label::kAnomalous;
  const auto report = validate_corpus(c);
  CHECK(report.violations.size() == 1);
  CHECK(report.count(Violation::Kind::kLabelInconsistency) == 1);
}

TEST_CASE("validate_corpus accepts a well-formed corpus") {
  Corpus c{"c", {doc("a", {"hello", "world."}), doc("b", {"again"})}};
  CHECK(validate_corpus(c).ok());
}

TEST_CASE("validate_corpus flags empty and whitespace words without throwing") {
  Corpus c{"c", {doc("a", {"", "two words"})}};
  const auto report = validate_corpus(c);
  CHECK(report.count(Violation::Kind::kEmptyWord) == 1);
  CHECK(report.count(Violation::Kind::kWhitespaceInWord) == 1);
}

TEST_CASE("empty documents are legal in the data model") {
  Corpus c{"c", {doc("a", {})}};
  CHECK(validate_corpus(c).ok());
}

TEST_CASE("split_words keeps punctuation attached") {
  const auto words = split_words("  Hello, world!\tnew\nline ");
  REQUIRE(words.size() == 4);
  CHECK(words[0].text == "Hello,");
  CHECK(words[1].text == "world!");
  CHECK(words[3].text == "line");
}

TEST_CASE("label_from_int rejects values other than 0 and 1") {
  CHECK(label_from_int(0) == Label::kNormal);
  CHECK(label_from_int(1) == Label::kAnomalous);
  CHECK_THROWS_AS(label_from_int(2), SchemaError);
}

TEST_CASE("check_spans enforces a contiguous partition") {
  const std::vector<SubwordSpan> good{{0, 0, 2}, {1, 2, 3}};
  CHECK_NOTHROW(check_spans(good, 2, 3));
  CHECK_THROWS_AS(check_spans(good, 2, 4), SchemaError);

  const std::vector<SubwordSpan> empty_span{{0, 0, 2}, {1, 2, 2}};
  CHECK_THROWS_AS(check_spans(empty_span, 2, 2), SchemaError);

  const std::vector<SubwordSpan> gap{{0, 0, 1}, {1, 2, 3}};
  CHECK_THROWS_AS(check_spans(gap, 2, 3), SchemaError);
}

TEST_CASE("corpus JSONL round trip keeps order and labels") {
  Corpus c{"rt", {doc("b", {"one", "two"}), doc("a", {"three"}, std::nullopt)}};
  c.documents[0].label = Label::kAnomalous;
  c.documents[0].words[1].label = Label::kAnomalous;
  c.documents[1].words[0].label = std::nullopt;
  const auto back = corpus_from_jsonl(corpus_to_jsonl(c), "rt");
  CHECK(back == c);
}

TEST_CASE("corpus JSONL accepts raw text and rejects malformed lines") {
  const auto c = corpus_from_jsonl(R"({"doc_id":"x","text":"a  b, c"})" "\n", "t");
  REQUIRE(c.documents.size() == 1);
  CHECK(c.documents[0].words.size() == 3);
  CHECK_THROWS_AS(corpus_from_jsonl("{not json}\n", "t"), FormatError);
  CHECK_THROWS_AS(corpus_from_jsonl(R"({"words":["a"]})" "\n", "t"), SchemaError);
  CHECK_THROWS_AS(corpus_from_jsonl(R"({"doc_id":"x","words":["a"],"word_labels":[0,1]})" "\n", "t"),
                  SchemaError);
  CHECK_THROWS_AS(corpus_from_jsonl(R"({"doc_id":"x","words":["a"],"label":3})" "\n", "t"),
                  SchemaError);
}

TEST_CASE("labeled document count dominates documents with anomalous words") {
  Corpus c{"c", {doc("a", {"x"}), doc("b", {"y", "z"}, Label::kAnomalous), doc("c", {"w"})}};
  c.documents[1].words[0].label = Label::kAnomalous;
  REQUIRE(validate_corpus(c).ok());
  std::size_t labeled = 0, with_word = 0;
  for (const auto& d : c.documents) {
    labeled += d.label == Label::kAnomalous;
    with_word += d.has_anomalous_word();
  }
  CHECK(labeled >= with_word);
}
