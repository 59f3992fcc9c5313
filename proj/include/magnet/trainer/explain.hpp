#pragma once

#include <string>
#include <vector>

#include "magnet/mhagnn/checkpoint.hpp"

namespace magnet::trainer {

struct Prediction {
    int label = 0;
    double prob_vulnerable = 0.0;
};

/// Classifies one already-lowered function with a trained checkpoint.
Prediction predict_one(const mhagnn::Checkpoint& ck, const CodeGraph& graph);

struct StatementScore {
    int node_id = 0;
    std::string text;
    int line_first = 0;  // 1-based source lines
    int line_last = 0;
    double weight = 0.0;  // max-normalized to [0, 1]
};

/// Per-statement attention report: each statement's score is the final
/// layer's attention mass received by its node, summed over heads and
/// incoming edges, normalized so the maximum statement weight is 1.
struct ExplainReport {
    Prediction prediction;
    std::vector<StatementScore> statements;  // source order
};

ExplainReport explain(const mhagnn::Checkpoint& ck, const std::string& source);

/// ANSI-colored source listing (red/orange/yellow/green bands by weight).
std::string render_ansi(const ExplainReport& report, const std::string& source);

/// Standalone HTML heatmap.
std::string render_html(const ExplainReport& report, const std::string& source,
                        const std::string& title);

}  // namespace magnet::trainer
