#include "tokencore/corpus_io.hpp"

#include "file_util.hpp"
#include "json_codec.hpp"

namespace tokencore {

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    out += detail::document_to_json(doc).dump();
    out += '\n';
  }
  return out;
}

Corpus corpus_from_jsonl(std::string_view jsonl, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    std::size_t eol = jsonl.find('\n', pos);
    if (eol == std::string_view::npos) eol = jsonl.size();
    const auto line = jsonl.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = corpus.name + ":" + std::to_string(line_no);
    detail::json j;
    try {
      j = detail::json::parse(line);
    } catch (const detail::json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    corpus.documents.push_back(detail::document_from_json(j, where));
  }
  return corpus;
}

Corpus read_corpus_jsonl(const std::filesystem::path& path) {
  return corpus_from_jsonl(detail::read_file(path), path.stem().string());
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  detail::atomic_write_file(path, corpus_to_jsonl(corpus));
}

}  // namespace tokencore
