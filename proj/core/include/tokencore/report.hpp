#pragma once

#include <string>

#include "tokencore/metrics.hpp"

namespace tokencore {

/// Pretty-printed JSON object with metrics, class counts and run config.
std::string report_to_json(const EvalReport& report);

/// Aligned text table: one row per granularity, ROC and PRC columns.
std::string report_to_table(const EvalReport& report);

/// "label,score" rows with a header line, for external re-analysis.
std::string labeled_scores_to_csv(const LabeledScores& scores);

}  // namespace tokencore
