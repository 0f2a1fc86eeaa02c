#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "tokencore/corpus.hpp"

namespace tokencore {

// Corpus interchange is JSON lines, one document per line:
//   {"doc_id": "...", "words": ["..."], "label": 0|1, "word_labels": [0|1, ...]}
// "label" and "word_labels" are optional. A line may carry "text" instead of
// "words"; it is split on whitespace.

std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::string_view jsonl, std::string name);

/// Corpus name defaults to the file stem.
Corpus read_corpus_jsonl(const std::filesystem::path& path);
void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace tokencore
