#include "tokencore/archive.hpp"

#include <string_view>

#include "file_util.hpp"
#include "json_codec.hpp"
#include "tokencore/errors.hpp"

namespace tokencore {
namespace fs = std::filesystem;
using detail::json;

namespace {

constexpr std::string_view kHeaderFile = "header.json";
constexpr std::string_view kMetaFile = "meta.jsonl";
constexpr std::string_view kEmbFile = "emb.bin";

std::vector<SubwordSpan> spans_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": 'spans' must be an array");
  std::vector<SubwordSpan> spans;
  spans.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pair = j[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
        !pair[1].is_number_unsigned()) {
      throw SchemaError(where + ": span " + std::to_string(i) +
                        " must be a [start, end] pair of non-negative integers");
    }
    spans.push_back({i, pair[0].get<std::size_t>(), pair[1].get<std::size_t>()});
  }
  return spans;
}

}  // namespace

ArchiveHeader EmbeddingArchive::header() const {
  return {kArchiveVersion, static_cast<std::uint32_t>(matrix.dim()),
          static_cast<std::uint64_t>(matrix.rows())};
}

std::vector<std::size_t> EmbeddingArchive::row_offsets() const {
  std::vector<std::size_t> offsets;
  offsets.reserve(spans.size() + 1);
  std::size_t cursor = 0;
  offsets.push_back(0);
  for (const auto& doc_spans : spans) {
    if (!doc_spans.empty()) cursor += doc_spans.back().end;
    offsets.push_back(cursor);
  }
  return offsets;
}

void validate_archive(const EmbeddingArchive& archive) {
  if (archive.matrix.dim() == 0) throw SchemaError("archive dimension must be > 0");
  const auto report = validate_corpus(archive.corpus);
  if (!report.ok()) throw SchemaError("invalid corpus: " + report.violations.front().message);
  if (archive.spans.size() != archive.corpus.documents.size()) {
    throw SchemaError("archive has " + std::to_string(archive.spans.size()) +
                      " span lists for " + std::to_string(archive.corpus.documents.size()) +
                      " documents");
  }
  std::size_t total = 0;
  for (std::size_t d = 0; d < archive.spans.size(); ++d) {
    const auto& doc = archive.corpus.documents[d];
    const auto& spans = archive.spans[d];
    const std::size_t rows = spans.empty() ? 0 : spans.back().end;
    try {
      check_spans(spans, doc.words.size(), rows);
    } catch (const SchemaError& e) {
      throw SchemaError("document '" + doc.doc_id + "': " + e.what());
    }
    total += rows;
  }
  if (total != archive.matrix.rows()) {
    throw SchemaError("spans cover " + std::to_string(total) + " subword rows but matrix has " +
                      std::to_string(archive.matrix.rows()));
  }
  if (!archive.matrix.all_finite()) throw DataError("embedding matrix contains NaN or Inf");
}

void write_archive(const EmbeddingArchive& archive, const fs::path& directory) {
  validate_archive(archive);

  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create directory '" + directory.string() + "'");

  std::string emb;
  emb.reserve(archive.matrix.values().size() * sizeof(float));
  detail::append_f32le(emb, archive.matrix.values());

  std::string meta;
  for (std::size_t d = 0; d < archive.corpus.documents.size(); ++d) {
    json j = detail::document_to_json(archive.corpus.documents[d]);
    json spans = json::array();
    for (const auto& s : archive.spans[d]) spans.push_back({s.start, s.end});
    j["spans"] = std::move(spans);
    meta += j.dump();
    meta += '\n';
  }

  const auto h = archive.header();
  json header = {{"magic", kArchiveMagic},
                 {"version", h.version},
                 {"dim", h.dim},
                 {"n_subwords_total", h.n_subwords_total},
                 {"dtype", kArchiveDtype},
                 {"corpus_name", archive.corpus.name}};

  detail::atomic_write_file(directory / kEmbFile, emb);
  detail::atomic_write_file(directory / kMetaFile, meta);
  detail::atomic_write_file(directory / kHeaderFile, header.dump(2) + "\n");
}

void write_archive(const Corpus& corpus, const std::vector<std::vector<SubwordSpan>>& spans,
                   const FloatMatrix& matrix, const fs::path& directory) {
  write_archive(EmbeddingArchive{corpus, spans, matrix}, directory);
}

EmbeddingArchive read_archive(const fs::path& directory) {
  if (!fs::is_directory(directory)) {
    throw IoError("archive directory '" + directory.string() + "' does not exist");
  }

  json header;
  try {
    header = json::parse(detail::read_file(directory / kHeaderFile));
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("header.json: ") + e.what());
  }
  if (!header.is_object() || header.value("magic", "") != kArchiveMagic) {
    throw FormatError("header.json: bad magic (expected \"TKEM\")");
  }
  if (!header.contains("version") || !header["version"].is_number_unsigned() ||
      header["version"].get<std::uint64_t>() != kArchiveVersion) {
    throw FormatError("header.json: unsupported version");
  }
  if (header.value("dtype", "") != kArchiveDtype) {
    throw FormatError("header.json: dtype must be \"f32le\"");
  }
  if (!header.contains("dim") || !header["dim"].is_number_unsigned() ||
      header["dim"].get<std::uint64_t>() == 0 ||
      header["dim"].get<std::uint64_t>() > 0xffffffffULL) {
    throw FormatError("header.json: dim must be a positive 32-bit integer");
  }
  if (!header.contains("n_subwords_total") || !header["n_subwords_total"].is_number_unsigned()) {
    throw FormatError("header.json: n_subwords_total must be a non-negative integer");
  }
  const auto dim = header["dim"].get<std::uint64_t>();
  const auto n_rows = header["n_subwords_total"].get<std::uint64_t>();

  const std::string emb = detail::read_file(directory / kEmbFile);
  if (emb.size() != 4 * dim * n_rows) {
    throw SchemaError("emb.bin has " + std::to_string(emb.size()) + " bytes, header implies " +
                      std::to_string(4 * dim * n_rows));
  }

  EmbeddingArchive archive;
  archive.corpus.name = header.value("corpus_name", directory.filename().string());
  archive.matrix = FloatMatrix(dim, detail::decode_f32le(emb));

  const std::string meta = detail::read_file(directory / kMetaFile);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < meta.size()) {
    std::size_t eol = meta.find('\n', pos);
    if (eol == std::string::npos) eol = meta.size();
    const std::string_view line(meta.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "meta.jsonl:" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    archive.corpus.documents.push_back(detail::document_from_json(j, where));
    if (!j.contains("spans")) throw SchemaError(where + ": missing 'spans'");
    archive.spans.push_back(spans_from_json(j["spans"], where));
  }

  validate_archive(archive);
  return archive;
}

}  // namespace tokencore
