#include "tokencore/scoring.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "file_util.hpp"
#include "json.hpp"
#include "tokencore/errors.hpp"
#include "tokencore/parallel.hpp"

namespace tokencore {
using nlohmann::json;

std::string Aggregator::describe() const {
  switch (kind) {
    case AggregatorKind::kMean: return "mean";
    case AggregatorKind::kMax: return "max";
    case AggregatorKind::kTopKMean: return "topk_mean(" + std::to_string(k) + ")";
  }
  return "mean";
}

std::optional<AggregatorKind> parse_aggregator_kind(std::string_view name) {
  if (name == "mean") return AggregatorKind::kMean;
  if (name == "max") return AggregatorKind::kMax;
  if (name == "topk" || name == "topk_mean") return AggregatorKind::kTopKMean;
  return std::nullopt;
}

double aggregate(std::span<const double> token_scores, const Aggregator& aggregator) {
  if (token_scores.empty()) throw EmptyInputError("cannot aggregate a document with no tokens");
  switch (aggregator.kind) {
    case AggregatorKind::kMean: {
      const double sum = std::accumulate(token_scores.begin(), token_scores.end(), 0.0);
      return sum / static_cast<double>(token_scores.size());
    }
    case AggregatorKind::kMax:
      return *std::max_element(token_scores.begin(), token_scores.end());
    case AggregatorKind::kTopKMean: {
      if (aggregator.k == 0) throw ParamError("top-k aggregation needs k >= 1");
      std::vector<double> sorted(token_scores.begin(), token_scores.end());
      const std::size_t k = std::min(aggregator.k, sorted.size());
      std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k),
                        sorted.end(), std::greater<>());
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += sorted[i];
      return sum / static_cast<double>(k);
    }
  }
  throw ParamError("unknown aggregator");
}

ScoredDocument score_document(const TokenScorer& scorer, std::string doc_id,
                              const FloatMatrix& word_vectors, const Aggregator& aggregator) {
  if (word_vectors.rows() == 0) {
    throw EmptyInputError("document '" + doc_id + "' has no words to score");
  }
  ScoredDocument out{std::move(doc_id), {}, 0.0};
  out.token_scores.reserve(word_vectors.rows());
  for (std::size_t i = 0; i < word_vectors.rows(); ++i) {
    out.token_scores.push_back(scorer.score(word_vectors.row(i)));
  }
  out.doc_score = aggregate(out.token_scores, aggregator);
  return out;
}

std::vector<ScoredDocument> score_documents(const TokenScorer& scorer, const Corpus& corpus,
                                            std::span<const FloatMatrix> word_vectors,
                                            const Aggregator& aggregator, std::size_t threads) {
  if (word_vectors.size() != corpus.documents.size()) {
    throw SchemaError("word vectors supplied for " + std::to_string(word_vectors.size()) +
                      " documents, corpus has " + std::to_string(corpus.documents.size()));
  }
  std::vector<ScoredDocument> out(corpus.documents.size());
  std::vector<std::pair<std::size_t, std::size_t>> tokens;  // (doc, word)
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    if (word_vectors[d].rows() == 0) {
      throw EmptyInputError("document '" + corpus.documents[d].doc_id + "' has no words to score");
    }
    out[d].doc_id = corpus.documents[d].doc_id;
    out[d].token_scores.assign(word_vectors[d].rows(), 0.0);
    for (std::size_t w = 0; w < word_vectors[d].rows(); ++w) tokens.emplace_back(d, w);
  }

  parallel_for(tokens.size(), threads, [&](std::size_t t) {
    const auto [d, w] = tokens[t];
    out[d].token_scores[w] = scorer.score(word_vectors[d].row(w));
  });

  for (auto& doc : out) doc.doc_score = aggregate(doc.token_scores, aggregator);
  return out;
}

std::string scores_to_jsonl(std::span<const ScoredDocument> scored) {
  std::string out;
  for (const auto& doc : scored) {
    json j = {{"doc_id", doc.doc_id}, {"token_scores", doc.token_scores},
              {"doc_score", doc.doc_score}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ScoredDocument> scores_from_jsonl(std::string_view jsonl) {
  std::vector<ScoredDocument> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < jsonl.size()) {
    std::size_t eol = jsonl.find('\n', pos);
    if (eol == std::string_view::npos) eol = jsonl.size();
    const auto line = jsonl.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "scores:" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    try {
      ScoredDocument doc;
      doc.doc_id = j.at("doc_id").get<std::string>();
      doc.token_scores = j.at("token_scores").get<std::vector<double>>();
      doc.doc_score = j.at("doc_score").get<double>();
      out.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  return out;
}

void write_scores_jsonl(std::span<const ScoredDocument> scored, const std::filesystem::path& path) {
  detail::atomic_write_file(path, scores_to_jsonl(scored));
}

std::vector<ScoredDocument> read_scores_jsonl(const std::filesystem::path& path) {
  return scores_from_jsonl(detail::read_file(path));
}

}  // namespace tokencore
