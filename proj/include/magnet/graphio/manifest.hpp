#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace magnet::graphio {

enum class Split { Train = 0, Valid = 1, Test = 2 };

const char* to_string(Split s);
std::optional<Split> split_from(std::string_view name);

/// One dataset sample: a labeled function given either as inline source
/// code or as a path to a graph document (exactly one of the two).
struct SampleRecord {
    std::string id;
    int label = 0;  // 0 non-vulnerable, 1 vulnerable
    std::string code;        // inline source, or
    std::string graph_path;  // path to a .csg.json document
    std::optional<std::string> update_date;  // ISO-8601 date (YYYY-MM-DD)
    std::optional<Split> split;

    bool has_code() const { return !code.empty(); }
};

/// Reads a newline-delimited manifest (one JSON record per line).
/// Order-preserving; duplicate ids rejected. Throws FormatError with the
/// offending line number.
std::vector<SampleRecord> read_manifest(const std::filesystem::path& path);

void write_manifest(const std::vector<SampleRecord>& records,
                    const std::filesystem::path& path);

/// Partition of the manifest's sample ids into train/valid/test.
struct SplitAssignment {
    std::map<std::string, Split> by_id;

    std::vector<std::string> ids_of(Split s) const;
};

/// Seeded random partition with sizes matching `ratios` within rounding:
/// valid and test get floor(n * r / sum), the remainder goes to train.
SplitAssignment split_random(const std::vector<SampleRecord>& records,
                             std::array<int, 3> ratios, std::uint64_t seed);

/// Date-based partition: train < valid_cutoff <= valid < test_cutoff <= test.
/// Dates are ISO-8601 strings compared lexicographically. Throws
/// MissingDateError naming the first record without a date.
SplitAssignment split_by_time(const std::vector<SampleRecord>& records,
                              const std::string& valid_cutoff,
                              const std::string& test_cutoff);

std::string write_split(const SplitAssignment& split);
SplitAssignment read_split(std::string_view text);
void write_split_file(const SplitAssignment& split,
                      const std::filesystem::path& path);
SplitAssignment read_split_file(const std::filesystem::path& path);

}  // namespace magnet::graphio
