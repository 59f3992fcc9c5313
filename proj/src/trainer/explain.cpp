#include "magnet/trainer/explain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "magnet/cparse/lower.hpp"
#include "magnet/trainer/pipeline.hpp"

namespace magnet::trainer {

namespace {

bool is_scored_statement(const std::string& type) {
    // Statement-granularity nodes that carry their own source text;
    // wrappers (CompoundStatement, ElseStatement) are skipped.
    return type == "ExpressionStatement" ||
           type == "IdentifierDeclStatement" || type == "IfStatement" ||
           type == "WhileStatement" || type == "ForStatement" ||
           type == "ReturnStatement" || type == "BreakStatement" ||
           type == "ContinueStatement";
}

struct ForwardOutput {
    Prediction prediction;
    std::map<int, double> incoming_mass;  // node id -> summed attention
};

ForwardOutput run_forward(const mhagnn::Checkpoint& ck,
                          const CodeGraph& graph) {
    Preprocess pre{ck.vocab, ck.table, ck.active};
    auto params = ck.restore_params<float>();
    auto gt = prepare_graph<float>(graph, pre);

    tensor::Tape<float> tape;
    auto fwd = mhagnn::forward(tape, params, gt);

    ForwardOutput out;
    const auto& z = fwd.logits.value();
    const double mx = std::max(z[0], z[1]);
    const double p1 = std::exp(z[1] - mx) / (std::exp(z[0] - mx) + std::exp(z[1] - mx));
    out.prediction.label = z[1] > z[0] ? 1 : 0;
    out.prediction.prob_vulnerable = p1;

    for (const auto& att : fwd.final_attention) {
        const auto& w = att.value();
        for (std::size_t e = 0; e < w.size(); ++e) {
            const long dst_pos = gt.index.edge_dst[e];
            out.incoming_mass[gt.index.node_ids[static_cast<std::size_t>(
                dst_pos)]] += static_cast<double>(w[e]);
        }
    }
    return out;
}

}  // namespace

Prediction predict_one(const mhagnn::Checkpoint& ck, const CodeGraph& graph) {
    return run_forward(ck, graph).prediction;
}

ExplainReport explain(const mhagnn::Checkpoint& ck, const std::string& source) {
    const auto tokens = cparse::tokenize(source);
    auto ast = cparse::parse_function(tokens);
    const CodeGraph graph = cparse::lower(ast);

    auto fwd = run_forward(ck, graph);

    ExplainReport report;
    report.prediction = fwd.prediction;
    for (const auto& node : graph.nodes) {
        if (!is_scored_statement(node.type) || !node.span) continue;
        StatementScore s;
        s.node_id = node.id;
        s.text = node.value;
        s.line_first = tokens[static_cast<std::size_t>(node.span->first)].line;
        s.line_last = tokens[static_cast<std::size_t>(node.span->last)].line;
        auto it = fwd.incoming_mass.find(node.id);
        s.weight = it == fwd.incoming_mass.end() ? 0.0 : it->second;
        report.statements.push_back(std::move(s));
    }
    std::sort(report.statements.begin(), report.statements.end(),
              [](const StatementScore& a, const StatementScore& b) {
                  return a.node_id < b.node_id;  // pre-order == source order
              });

    double max_w = 0.0;
    for (const auto& s : report.statements) max_w = std::max(max_w, s.weight);
    if (max_w > 0.0)
        for (auto& s : report.statements) s.weight /= max_w;
    else
        for (auto& s : report.statements) s.weight = 1.0;
    return report;
}

namespace {

// Decreasing-attention bands: red, orange, yellow, green.
int band_of(double w) {
    if (w >= 0.75) return 0;
    if (w >= 0.5) return 1;
    if (w >= 0.25) return 2;
    return 3;
}

constexpr const char* kAnsi[] = {"\x1b[41;97m", "\x1b[48;5;208;30m",
                                 "\x1b[43;30m", "\x1b[42;30m"};
constexpr const char* kHtmlColor[] = {"#e05252", "#f0a050", "#e8e060",
                                      "#8fd08f"};

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

// Innermost (shortest) statement covering each line wins the line's color.
std::map<int, double> line_weights(const ExplainReport& report) {
    std::map<int, std::pair<int, double>> best;  // line -> (extent, weight)
    for (const auto& s : report.statements) {
        const int extent = s.line_last - s.line_first;
        for (int line = s.line_first; line <= s.line_last; ++line) {
            auto it = best.find(line);
            if (it == best.end() || extent < it->second.first)
                best[line] = {extent, s.weight};
        }
    }
    std::map<int, double> out;
    for (const auto& [line, v] : best) out[line] = v.second;
    return out;
}

std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_ansi(const ExplainReport& report,
                        const std::string& source) {
    const auto lines = split_lines(source);
    const auto weights = line_weights(report);
    std::ostringstream os;
    os << "prediction: " << (report.prediction.label ? "VULNERABLE" : "clean")
       << "  p(vulnerable) = " << report.prediction.prob_vulnerable << "\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        auto it = weights.find(line_no);
        if (it != weights.end())
            os << kAnsi[band_of(it->second)] << lines[i] << "\x1b[0m\n";
        else
            os << lines[i] << "\n";
    }
    return os.str();
}

std::string render_html(const ExplainReport& report, const std::string& source,
                        const std::string& title) {
    const auto lines = split_lines(source);
    const auto weights = line_weights(report);
    std::ostringstream os;
    os << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>"
       << html_escape(title) << "</title>\n"
       << "<style>body{font-family:monospace;white-space:pre;}"
          "span.l{display:block;padding:1px 4px;}</style></head><body>\n"
       << "<b>prediction: "
       << (report.prediction.label ? "VULNERABLE" : "clean")
       << " &mdash; p(vulnerable) = " << report.prediction.prob_vulnerable
       << "</b>\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const int line_no = static_cast<int>(i) + 1;
        auto it = weights.find(line_no);
        if (it != weights.end())
            os << "<span class=\"l\" style=\"background:"
               << kHtmlColor[band_of(it->second)] << "\">"
               << html_escape(lines[i]) << "</span>\n";
        else
            os << "<span class=\"l\">" << html_escape(lines[i]) << "</span>\n";
    }
    os << "</body></html>\n";
    return os.str();
}

}  // namespace magnet::trainer
