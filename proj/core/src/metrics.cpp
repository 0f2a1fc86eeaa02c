#include "tokencore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "tokencore/errors.hpp"
#include "tokencore/random.hpp"

namespace tokencore {
namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts check_binary_input(std::span<const std::uint8_t> labels,
                               std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw SchemaError("labels and scores differ in length (" + std::to_string(labels.size()) +
                      " vs " + std::to_string(scores.size()) + ")");
  }
  ClassCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) throw SchemaError("labels must be 0 or 1");
    if (std::isnan(scores[i])) throw DataError("scores must not be NaN");
    (labels[i] ? c.positives : c.negatives)++;
  }
  if (c.positives == 0 || c.negatives == 0) {
    throw DegenerateError("metric needs both classes, got " + std::to_string(c.positives) +
                          " positive and " + std::to_string(c.negatives) + " negative labels");
  }
  return c;
}

std::vector<std::size_t> order_by_score_descending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double auroc(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  const auto counts = check_binary_input(labels, scores);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are 1-based; tied groups share their average rank. Twice the rank
  // sum is an integer, which keeps the statistic exact.
  std::uint64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const std::uint64_t twice_avg_rank = i + j + 2;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]]) twice_rank_sum += twice_avg_rank;
    }
    i = j + 1;
  }
  const std::uint64_t p = counts.positives;
  const std::uint64_t n = counts.negatives;
  const std::uint64_t twice_u = twice_rank_sum - p * (p + 1);
  const std::uint64_t twice_pairs = 2 * p * n;
  // The smaller side is snapped to a multiple of 2^-53, where 1 - r is exact,
  // so auroc(-s) == 1 - auroc(s) holds bit-for-bit.
  const bool lower = 2 * twice_u <= twice_pairs;
  const double small = static_cast<double>(lower ? twice_u : twice_pairs - twice_u) /
                       static_cast<double>(twice_pairs);
  const double snapped = std::ldexp(std::round(std::ldexp(small, 53)), -53);
  return lower ? snapped : 1.0 - snapped;
}

double auprc(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  const auto counts = check_binary_input(labels, scores);
  const auto order = order_by_score_descending(scores);
  const auto total_pos = static_cast<double>(counts.positives);

  double ap = 0.0;
  double prev_recall = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      tp += labels[order[i]];
      ++seen;
      ++i;
    }
    const double recall = static_cast<double>(tp) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

CorpusSplit split_corpus(const Corpus& corpus, double train_frac, std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw ParamError("train_frac must lie in (0, 1) so that normals remain for testing");
  }
  std::vector<std::size_t> normals;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    if (!corpus.documents[i].is_anomalous()) normals.push_back(i);
  }
  if (normals.size() < 2) {
    throw DegenerateError("split needs at least two normal documents, found " +
                          std::to_string(normals.size()));
  }
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(normals.size()))), 1,
      normals.size() - 1);

  Rng rng(seed);
  rng.shuffle(std::span(normals));
  std::vector<bool> in_train(corpus.documents.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[normals[i]] = true;

  CorpusSplit split;
  split.train.name = corpus.name + ".train";
  split.test.name = corpus.name + ".test";
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    (in_train[i] ? split.train : split.test).documents.push_back(corpus.documents[i]);
  }
  return split;
}

EvalInputs collect_eval_inputs(std::span<const ScoredDocument> scored, const Corpus& labeled) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& doc : labeled.documents) by_id.emplace(doc.doc_id, &doc);

  EvalInputs in;
  for (const auto& s : scored) {
    const auto it = by_id.find(s.doc_id);
    if (it == by_id.end()) {
      throw SchemaError("scored document '" + s.doc_id + "' is not in the labeled corpus");
    }
    const Document& doc = *it->second;
    if (doc.words.size() != s.token_scores.size()) {
      throw SchemaError("document '" + s.doc_id + "' has " + std::to_string(doc.words.size()) +
                        " words but " + std::to_string(s.token_scores.size()) + " token scores");
    }
    if (!doc.label) throw SchemaError("document '" + s.doc_id + "' has no label");
    for (std::size_t i = 0; i < doc.words.size(); ++i) {
      if (!doc.words[i].label) {
        throw SchemaError("word " + std::to_string(i) + " of '" + s.doc_id + "' has no label");
      }
      in.token.labels.push_back(static_cast<std::uint8_t>(to_int(*doc.words[i].label)));
      in.token.scores.push_back(s.token_scores[i]);
    }
    if (*doc.label == Label::kNormal && doc.has_anomalous_word()) {
      throw SchemaError("document '" + s.doc_id +
                        "' is labeled normal but contains an anomalous word");
    }
    in.document.labels.push_back(static_cast<std::uint8_t>(to_int(*doc.label)));
    in.document.scores.push_back(s.doc_score);
  }
  return in;
}

namespace {

LevelMetrics level_metrics(const LabeledScores& s) {
  LevelMetrics m;
  m.auroc = auroc(s.labels, s.scores);
  m.auprc = auprc(s.labels, s.scores);
  m.positives = static_cast<std::size_t>(std::count(s.labels.begin(), s.labels.end(), 1));
  m.negatives = s.labels.size() - m.positives;
  return m;
}

}  // namespace

EvalReport evaluate_run(std::span<const ScoredDocument> scored, const Corpus& labeled,
                        const RunConfig& config) {
  const auto in = collect_eval_inputs(scored, labeled);
  EvalReport report;
  report.token = level_metrics(in.token);
  report.document = level_metrics(in.document);
  report.config = config;
  return report;
}

}  // namespace tokencore
