#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tokencore {

enum class Label : std::uint8_t { kNormal = 0, kAnomalous = 1 };

/// Parses 0 or 1; anything else is rejected with SchemaError.
Label label_from_int(long long value);
constexpr int to_int(Label label) noexcept { return static_cast<int>(label); }

/// One whitespace-delimited word.
struct WordToken {
  std::string text;
  std::optional<Label> label;

  friend bool operator==(const WordToken&, const WordToken&) = default;
};

struct Document {
  std::string doc_id;
  std::vector<WordToken> words;
  std::optional<Label> label;

  bool has_anomalous_word() const noexcept;
  /// True when the document label is 1 or any word label is 1.
  bool is_anomalous() const noexcept;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::string name;
  std::vector<Document> documents;

  std::size_t word_count() const noexcept;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Splits on ASCII whitespace; punctuation stays attached to its word.
std::vector<WordToken> split_words(std::string_view text);

/// Subword rows [start, end) owned by one word. Row indices are local to the
/// owning document.
struct SubwordSpan {
  std::size_t word_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }

  friend bool operator==(const SubwordSpan&, const SubwordSpan&) = default;
};

/// Spans [i, i+1) for i in [0, n_words).
std::vector<SubwordSpan> identity_spans(std::size_t n_words);

/// Checks that `spans` are non-empty, sorted, contiguous from row 0, cover
/// exactly `n_words` words in order, and end at `n_rows`. Throws SchemaError.
void check_spans(std::span<const SubwordSpan> spans, std::size_t n_words,
                 std::size_t n_rows);

struct Violation {
  enum class Kind { kDuplicateDocId, kLabelInconsistency, kEmptyWord, kWhitespaceInWord };
  Kind kind;
  std::string doc_id;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const noexcept;
};

/// Lists every invariant violation. Never throws.
ValidationReport validate_corpus(const Corpus& corpus);

}  // namespace tokencore
