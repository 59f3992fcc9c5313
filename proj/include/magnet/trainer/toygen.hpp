#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "magnet/graphio/manifest.hpp"

namespace magnet::trainer {

/// Synthetic planted-vulnerability corpus. Vulnerable samples contain an
/// unguarded three-variable sum (integer-overflow shape); clean samples
/// contain the same sum behind nested range guards. Filler statements and
/// decoy guards/sums are identical for a given (seed, index) regardless of
/// the label, so vulnerable/clean twins differ only in the planted region.
struct ToySpec {
    long n = 500;
    double vulnerable_fraction = 0.5;
    std::uint64_t seed = 1;
    int min_filler = 5;
    int max_filler = 10;
};

struct ToySample {
    std::string id;
    int label = 0;
    std::string source;
    std::string update_date;
};

std::vector<ToySample> generate_toy_corpus(const ToySpec& spec);

/// Source text of sample `index` with the given label (used by tests to
/// diff vulnerable/clean twins).
std::string toy_source(const ToySpec& spec, long index, bool vulnerable);

std::vector<graphio::SampleRecord> to_manifest_records(
    const std::vector<ToySample>& samples);

}  // namespace magnet::trainer
