#include "magnet/trainer/metrics.hpp"

#include <cmath>
#include <sstream>

#include "magnet/errors.hpp"

namespace magnet::trainer {

nlohmann::json Metrics::to_json() const {
    nlohmann::json j;
    j["tp"] = tp;
    j["fp"] = fp;
    j["fn"] = fn;
    j["tn"] = tn;
    j["accuracy"] = accuracy;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f1"] = f1;
    if (centroid_distance >= 0.0) j["centroid_distance"] = centroid_distance;
    if (!stratified.empty()) j["stratified_accuracy"] = stratified;
    return j;
}

std::string Metrics::summary() const {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed;
    os << "accuracy " << accuracy << "  precision " << precision << "  recall "
       << recall << "  f1 " << f1 << "  (tp " << tp << " fp " << fp << " fn "
       << fn << " tn " << tn << ")";
    if (centroid_distance >= 0.0)
        os << "  centroid-distance " << centroid_distance;
    return os.str();
}

Metrics compute_metrics(std::span<const int> predictions,
                        std::span<const int> labels) {
    if (predictions.size() != labels.size())
        throw LengthMismatch("compute_metrics: " +
                             std::to_string(predictions.size()) +
                             " predictions vs " +
                             std::to_string(labels.size()) + " labels");
    Metrics m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred = predictions[i] != 0;
        const bool truth = labels[i] != 0;
        if (pred && truth)
            ++m.tp;
        else if (pred && !truth)
            ++m.fp;
        else if (!pred && truth)
            ++m.fn;
        else
            ++m.tn;
    }
    const long total = m.total();
    m.accuracy = total ? static_cast<double>(m.tp + m.tn) / total : 0.0;
    if (m.tp + m.fp > 0)
        m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    else
        m.degenerate = true;
    if (m.tp + m.fn > 0)
        m.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
    else
        m.degenerate = true;
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

double centroid_distance(const std::vector<std::vector<double>>& reps,
                         std::span<const int> labels) {
    if (reps.size() != labels.size())
        throw LengthMismatch("centroid_distance: " +
                             std::to_string(reps.size()) +
                             " representations vs " +
                             std::to_string(labels.size()) + " labels");
    std::vector<double> mean0, mean1;
    long n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        auto& mean = labels[i] ? mean1 : mean0;
        auto& n = labels[i] ? n1 : n0;
        if (mean.empty()) mean.assign(reps[i].size(), 0.0);
        for (std::size_t d = 0; d < reps[i].size(); ++d) mean[d] += reps[i][d];
        ++n;
    }
    if (n0 == 0 || n1 == 0)
        throw MissingClassError(
            "centroid_distance: need at least one sample per class (got " +
            std::to_string(n0) + " negative, " + std::to_string(n1) +
            " positive)");
    double dist_sq = 0.0;
    for (std::size_t d = 0; d < mean0.size(); ++d) {
        const double diff = mean0[d] / n0 - mean1[d] / n1;
        dist_sq += diff * diff;
    }
    return std::sqrt(dist_sq);
}

std::string node_count_bucket(long node_count) {
    if (node_count <= 50) return "[0,50]";
    if (node_count <= 100) return "(50,100]";
    if (node_count <= 150) return "(100,150]";
    if (node_count <= 200) return "(150,200]";
    return ">200";
}

std::map<std::string, double> stratified_accuracy(
    std::span<const long> node_counts, std::span<const int> predictions,
    std::span<const int> labels) {
    if (node_counts.size() != predictions.size() ||
        predictions.size() != labels.size())
        throw LengthMismatch("stratified_accuracy: length mismatch");
    std::map<std::string, std::pair<long, long>> buckets;  // correct, total
    for (std::size_t i = 0; i < node_counts.size(); ++i) {
        auto& [correct, total] = buckets[node_count_bucket(node_counts[i])];
        ++total;
        if ((predictions[i] != 0) == (labels[i] != 0)) ++correct;
    }
    std::map<std::string, double> out;
    for (const auto& [bucket, counts] : buckets)
        out[bucket] = static_cast<double>(counts.first) / counts.second;
    return out;
}

}  // namespace magnet::trainer
