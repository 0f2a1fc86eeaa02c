#include "tokencore/corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include "tokencore/errors.hpp"

namespace tokencore {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

Label label_from_int(long long value) {
  if (value == 0) return Label::kNormal;
  if (value == 1) return Label::kAnomalous;
  throw SchemaError("label must be 0 or 1, got " + std::to_string(value));
}

bool Document::has_anomalous_word() const noexcept {
  return std::any_of(words.begin(), words.end(),
                     [](const WordToken& w) { return w.label == Label::kAnomalous; });
}

bool Document::is_anomalous() const noexcept {
  return label == Label::kAnomalous || has_anomalous_word();
}

std::size_t Corpus::word_count() const noexcept {
  std::size_t n = 0;
  for (const auto& doc : documents) n += doc.words.size();
  return n;
}

std::vector<WordToken> split_words(std::string_view text) {
  std::vector<WordToken> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > begin) words.push_back({std::string(text.substr(begin, i - begin)), std::nullopt});
  }
  return words;
}

std::vector<SubwordSpan> identity_spans(std::size_t n_words) {
  std::vector<SubwordSpan> spans(n_words);
  for (std::size_t i = 0; i < n_words; ++i) spans[i] = {i, i, i + 1};
  return spans;
}

void check_spans(std::span<const SubwordSpan> spans, std::size_t n_words,
                 std::size_t n_rows) {
  if (spans.size() != n_words) {
    throw SchemaError("expected " + std::to_string(n_words) + " spans, got " +
                      std::to_string(spans.size()));
  }
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.word_index != i) {
      throw SchemaError("span " + std::to_string(i) + " refers to word " +
                        std::to_string(s.word_index));
    }
    if (s.end <= s.start) {
      throw SchemaError("span for word " + std::to_string(i) + " is empty [" +
                        std::to_string(s.start) + ", " + std::to_string(s.end) + ")");
    }
    if (s.start != cursor) {
      throw SchemaError("span for word " + std::to_string(i) + " starts at row " +
                        std::to_string(s.start) + ", expected " + std::to_string(cursor));
    }
    cursor = s.end;
  }
  if (cursor != n_rows) {
    throw SchemaError("spans cover " + std::to_string(cursor) + " rows but document has " +
                      std::to_string(n_rows));
  }
}

std::size_t ValidationReport::count(Violation::Kind kind) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus.documents) {
    if (!seen.insert(doc.doc_id).second) {
      report.violations.push_back({Violation::Kind::kDuplicateDocId, doc.doc_id,
                                   "duplicate doc_id '" + doc.doc_id + "'"});
    }
    if (doc.label == Label::kNormal && doc.has_anomalous_word()) {
      report.violations.push_back(
          {Violation::Kind::kLabelInconsistency, doc.doc_id,
           "document '" + doc.doc_id + "' is labeled normal but contains an anomalous word"});
    }
    for (std::size_t i = 0; i < doc.words.size(); ++i) {
      const auto& text = doc.words[i].text;
      if (text.empty()) {
        report.violations.push_back({Violation::Kind::kEmptyWord, doc.doc_id,
                                     "word " + std::to_string(i) + " of '" + doc.doc_id +
                                         "' is empty"});
      } else if (std::any_of(text.begin(), text.end(), is_space)) {
        report.violations.push_back({Violation::Kind::kWhitespaceInWord, doc.doc_id,
                                     "word " + std::to_string(i) + " of '" + doc.doc_id +
                                         "' contains whitespace"});
      }
    }
  }
  return report;
}

}  // namespace tokencore
