#include "magnet/embed/skipgram.hpp"

#include <algorithm>
#include <cmath>

#include "magnet/rng.hpp"

namespace magnet::embed {

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Cumulative unigram^0.75 distribution for negative sampling.
struct NegativeSampler {
    std::vector<double> cumulative;

    explicit NegativeSampler(const Vocab& vocab) {
        cumulative.resize(static_cast<std::size_t>(vocab.size()), 0.0);
        double total = 0.0;
        for (long i = 0; i < vocab.size(); ++i) {
            total += std::pow(static_cast<double>(std::max<std::uint64_t>(
                                  vocab.counts[static_cast<std::size_t>(i)], 1)),
                              0.75);
            cumulative[static_cast<std::size_t>(i)] = total;
        }
    }

    long draw(Rng& rng) const {
        const double u = rng.uniform() * cumulative.back();
        const auto it =
            std::lower_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<long>(it - cumulative.begin());
    }
};

}  // namespace

SkipgramResult train_skipgram(
    const std::vector<std::vector<std::string>>& sequences, const Vocab& vocab,
    const SkipgramConfig& cfg) {
    const long v = vocab.size();
    const long d = cfg.dim;
    Rng rng(cfg.seed);

    // Input vectors small-uniform, output vectors zero (word2vec convention).
    std::vector<double> win(static_cast<std::size_t>(v * d));
    std::vector<double> wout(static_cast<std::size_t>(v * d), 0.0);
    for (auto& x : win) x = rng.uniform(-0.5 / static_cast<double>(d),
                                        0.5 / static_cast<double>(d));

    // Pre-map sequences to ids.
    std::vector<std::vector<long>> ids;
    ids.reserve(sequences.size());
    std::uint64_t total_centers = 0;
    for (const auto& seq : sequences) {
        std::vector<long> s;
        s.reserve(seq.size());
        for (const auto& t : seq) s.push_back(vocab.id_of(t));
        total_centers += s.size();
        ids.push_back(std::move(s));
    }

    NegativeSampler sampler(vocab);
    SkipgramResult result;
    std::vector<double> grad_center(static_cast<std::size_t>(d));

    const std::uint64_t total_steps =
        std::max<std::uint64_t>(1, total_centers * cfg.epochs);
    std::uint64_t step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::uint64_t loss_terms = 0;
        for (const auto& seq : ids) {
            const long len = static_cast<long>(seq.size());
            for (long center = 0; center < len; ++center, ++step) {
                const double progress =
                    static_cast<double>(step) / static_cast<double>(total_steps);
                const double lr =
                    std::max(cfg.lr * (1.0 - progress), cfg.lr * 1e-4);
                // Dynamic window as in word2vec: uniform in [1, window].
                const long b =
                    1 + static_cast<long>(rng.below(
                            static_cast<std::uint64_t>(cfg.window)));
                const long c_id = seq[static_cast<std::size_t>(center)];
                double* vin = win.data() + c_id * d;
                for (long off = -b; off <= b; ++off) {
                    if (off == 0) continue;
                    const long ctx = center + off;
                    if (ctx < 0 || ctx >= len) continue;
                    const long o_id = seq[static_cast<std::size_t>(ctx)];
                    std::fill(grad_center.begin(), grad_center.end(), 0.0);

                    for (int neg = 0; neg <= cfg.negatives; ++neg) {
                        long target;
                        double label;
                        if (neg == 0) {
                            target = o_id;
                            label = 1.0;
                        } else {
                            target = sampler.draw(rng);
                            if (target == o_id) continue;
                            label = 0.0;
                        }
                        double* u = wout.data() + target * d;
                        double dot = 0.0;
                        for (long k = 0; k < d; ++k) dot += u[k] * vin[k];
                        const double s = stable_sigmoid(dot);
                        loss_sum += label > 0.5
                                        ? -std::log(std::max(s, 1e-12))
                                        : -std::log(std::max(1.0 - s, 1e-12));
                        ++loss_terms;
                        const double g = (s - label) * lr;
                        for (long k = 0; k < d; ++k) {
                            grad_center[static_cast<std::size_t>(k)] +=
                                g * u[k];
                            u[k] -= g * vin[k];
                        }
                    }
                    for (long k = 0; k < d; ++k)
                        vin[k] -= grad_center[static_cast<std::size_t>(k)];
                }
            }
        }
        result.epoch_loss.push_back(
            loss_terms ? loss_sum / static_cast<double>(loss_terms) : 0.0);
    }

    result.table.provenance = Provenance::Skipgram;
    result.table.dim = d;
    result.table.rows.resize(win.size());
    for (std::size_t i = 0; i < win.size(); ++i)
        result.table.rows[i] = static_cast<float>(win[i]);
    return result;
}

}  // namespace magnet::embed
