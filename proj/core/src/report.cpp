#include "tokencore/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace tokencore {
namespace {

nlohmann::ordered_json level_json(const LevelMetrics& m) {
  return {{"auroc", m.auroc},
          {"auprc", m.auprc},
          {"positives", m.positives},
          {"negatives", m.negatives}};
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["token"] = level_json(report.token);
  j["document"] = level_json(report.document);
  j["config"] = {{"detector", report.config.detector},
                 {"pooling", report.config.pooling},
                 {"aggregator", report.config.aggregator},
                 {"seed", report.config.seed},
                 {"ann", report.config.ann}};
  return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  const std::string method = report.config.detector;
  const std::size_t method_width = std::max<std::size_t>(method.size(), 6) + 2;
  std::string out;
  out += pad("Level", 10) + pad("Method", method_width) + pad("ROC", 8) + "PRC\n";
  out += pad("Token", 10) + pad(method, method_width) + pad(fixed4(report.token.auroc), 8) +
         fixed4(report.token.auprc) + "\n";
  out += pad("Document", 10) + pad(method, method_width) + pad(fixed4(report.document.auroc), 8) +
         fixed4(report.document.auprc) + "\n";
  return out;
}

std::string labeled_scores_to_csv(const LabeledScores& scores) {
  std::string out = "label,score\n";
  char buf[64];
  for (std::size_t i = 0; i < scores.labels.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", static_cast<int>(scores.labels[i]),
                  scores.scores[i]);
    out += buf;
  }
  return out;
}

}  // namespace tokencore
