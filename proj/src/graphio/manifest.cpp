#include "magnet/graphio/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "magnet/errors.hpp"
#include "magnet/rng.hpp"

namespace magnet::graphio {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "?";
}

std::optional<Split> split_from(std::string_view name) {
    if (name == "train") return Split::Train;
    if (name == "valid") return Split::Valid;
    if (name == "test") return Split::Test;
    return std::nullopt;
}

namespace {

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

[[noreturn]] void line_error(std::size_t line, const std::string& msg) {
    throw FormatError("manifest line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<SampleRecord> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open manifest '" + path.string() + "'");

    std::vector<SampleRecord> records;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() ||
            line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& err) {
            line_error(line_no, std::string("invalid JSON: ") + err.what());
        }
        if (!rec.is_object()) line_error(line_no, "record must be an object");
        if (!rec.contains("id") || !rec["id"].is_string())
            line_error(line_no, "missing string field 'id'");
        if (!rec.contains("label") || !rec["label"].is_number_integer())
            line_error(line_no, "missing integer field 'label'");

        SampleRecord r;
        r.id = rec["id"].get<std::string>();
        if (!seen.insert(r.id).second)
            line_error(line_no, "duplicate id '" + r.id + "'");
        r.label = rec["label"].get<int>();
        if (r.label != 0 && r.label != 1)
            line_error(line_no,
                       "label must be 0 or 1, got " + std::to_string(r.label));

        const bool has_code = rec.contains("code");
        const bool has_graph = rec.contains("graph");
        if (has_code == has_graph)
            line_error(line_no, "exactly one of 'code'/'graph' required");
        if (has_code) {
            if (!rec["code"].is_string())
                line_error(line_no, "'code' must be a string");
            r.code = rec["code"].get<std::string>();
            if (r.code.empty()) line_error(line_no, "'code' must be non-empty");
        } else {
            if (!rec["graph"].is_string())
                line_error(line_no, "'graph' must be a string");
            r.graph_path = rec["graph"].get<std::string>();
            if (r.graph_path.empty())
                line_error(line_no, "'graph' must be non-empty");
        }
        if (rec.contains("update_date")) {
            if (!rec["update_date"].is_string() ||
                !is_iso_date(rec["update_date"].get<std::string>()))
                line_error(line_no, "'update_date' must be YYYY-MM-DD");
            r.update_date = rec["update_date"].get<std::string>();
        }
        if (rec.contains("split")) {
            if (!rec["split"].is_string())
                line_error(line_no, "'split' must be a string");
            const auto s = split_from(rec["split"].get<std::string>());
            if (!s)
                line_error(line_no, "'split' must be train, valid, or test");
            r.split = s;
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_manifest(const std::vector<SampleRecord>& records,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open '" + path.string() + "' for writing");
    for (const auto& r : records) {
        ordered_json rec;
        rec["id"] = r.id;
        rec["label"] = r.label;
        if (r.has_code())
            rec["code"] = r.code;
        else
            rec["graph"] = r.graph_path;
        if (r.update_date) rec["update_date"] = *r.update_date;
        if (r.split) rec["split"] = to_string(*r.split);
        out << rec.dump() << "\n";
    }
}

std::vector<std::string> SplitAssignment::ids_of(Split s) const {
    std::vector<std::string> out;
    for (const auto& [id, split] : by_id)
        if (split == s) out.push_back(id);
    return out;
}

SplitAssignment split_random(const std::vector<SampleRecord>& records,
                             std::array<int, 3> ratios, std::uint64_t seed) {
    const std::size_t n = records.size();
    const long sum = ratios[0] + ratios[1] + ratios[2];
    const std::size_t n_valid = n * static_cast<std::size_t>(ratios[1]) /
                                static_cast<std::size_t>(sum);
    const std::size_t n_test = n * static_cast<std::size_t>(ratios[2]) /
                               static_cast<std::size_t>(sum);
    const std::size_t n_train = n - n_valid - n_test;

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    SplitAssignment out;
    for (std::size_t i = 0; i < n; ++i) {
        Split s = Split::Train;
        if (i >= n_train) s = (i < n_train + n_valid) ? Split::Valid : Split::Test;
        out.by_id[records[order[i]].id] = s;
    }
    return out;
}

SplitAssignment split_by_time(const std::vector<SampleRecord>& records,
                              const std::string& valid_cutoff,
                              const std::string& test_cutoff) {
    SplitAssignment out;
    std::size_t n_valid = 0, n_test = 0;
    for (const auto& r : records) {
        if (!r.update_date)
            throw MissingDateError("record '" + r.id + "' has no update_date");
        Split s;
        if (*r.update_date < valid_cutoff) {
            s = Split::Train;
        } else if (*r.update_date < test_cutoff) {
            s = Split::Valid;
            ++n_valid;
        } else {
            s = Split::Test;
            ++n_test;
        }
        out.by_id[r.id] = s;
    }
    if (!records.empty() && (n_valid == 0 || n_test == 0))
        std::cerr << "warning: time split produced an empty "
                  << (n_valid == 0 ? "valid" : "test") << " set\n";
    return out;
}

std::string write_split(const SplitAssignment& split) {
    ordered_json doc;
    doc["version"] = "magnet-split/1";
    json assignments = json::object();  // sorted keys
    for (const auto& [id, s] : split.by_id) assignments[id] = to_string(s);
    doc["assignments"] = std::move(assignments);
    return doc.dump(2) + "\n";
}

SplitAssignment read_split(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw FormatError(std::string("split file is not valid JSON: ") +
                          err.what());
    }
    if (!doc.is_object() || doc.value("version", "") != "magnet-split/1" ||
        !doc.contains("assignments") || !doc["assignments"].is_object())
        throw FormatError("malformed split file");
    SplitAssignment out;
    for (const auto& [id, value] : doc["assignments"].items()) {
        if (!value.is_string())
            throw FormatError("split of '" + id + "' must be a string");
        const auto s = split_from(value.get<std::string>());
        if (!s) throw FormatError("unknown split '" + value.get<std::string>() +
                                  "' for id '" + id + "'");
        out.by_id[id] = *s;
    }
    return out;
}

void write_split_file(const SplitAssignment& split,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open '" + path.string() + "' for writing");
    out << write_split(split);
}

SplitAssignment read_split_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open split file '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return read_split(text);
}

}  // namespace magnet::graphio
