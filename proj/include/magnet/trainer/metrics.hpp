#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace magnet::trainer {

/// Confusion-matrix counts and the derived ratios. Ratios with a zero
/// denominator are reported as 0 (and flagged via `degenerate`).
struct Metrics {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate = false;

    double centroid_distance = -1.0;  // < 0 when not computed
    std::map<std::string, double> stratified;  // node-count bucket -> accuracy

    long total() const { return tp + fp + fn + tn; }
    nlohmann::json to_json() const;
    std::string summary() const;
};

/// Exact confusion-matrix arithmetic over equal-length binary vectors.
/// Throws LengthMismatch.
Metrics compute_metrics(std::span<const int> predictions,
                        std::span<const int> labels);

/// Euclidean distance between per-class mean representation vectors.
/// Throws MissingClassError unless both classes are present.
double centroid_distance(const std::vector<std::vector<double>>& reps,
                         std::span<const int> labels);

/// Node-count bucket label for the stratified accuracy table.
std::string node_count_bucket(long node_count);

/// Per-bucket accuracy over the fixed buckets
/// [0,50], (50,100], (100,150], (150,200], >200. Buckets with no samples
/// are absent from the result.
std::map<std::string, double> stratified_accuracy(
    std::span<const long> node_counts, std::span<const int> predictions,
    std::span<const int> labels);

}  // namespace magnet::trainer
