#include "magnet/trainer/dataset.hpp"

#include "magnet/cparse/lower.hpp"
#include "magnet/errors.hpp"
#include "magnet/graphio/graph_json.hpp"

namespace magnet::trainer {

namespace {

Dataset load_samples(const std::filesystem::path& manifest_path,
                     std::vector<graphio::SampleRecord>& records) {
    Dataset ds;
    const auto base = manifest_path.parent_path();
    for (auto& r : records) {
        Sample s;
        s.id = r.id;
        s.label = r.label;
        s.update_date = r.update_date;
        if (r.has_code()) {
            try {
                s.graph = cparse::lower(r.code);
            } catch (const Error& err) {
                throw Error("sample '" + r.id + "': " + err.what());
            }
        } else {
            std::filesystem::path p(r.graph_path);
            if (p.is_relative()) p = base / p;
            s.graph = graphio::read_graph_file(p);
        }
        s.node_count = static_cast<long>(s.graph.nodes.size());
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

void index_split(Dataset& ds) {
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const auto it = ds.split.by_id.find(ds.samples[i].id);
        if (it == ds.split.by_id.end())
            throw FormatError("sample '" + ds.samples[i].id +
                              "' missing from split assignment");
        switch (it->second) {
            case graphio::Split::Train: ds.train.push_back(i); break;
            case graphio::Split::Valid: ds.valid.push_back(i); break;
            case graphio::Split::Test: ds.test.push_back(i); break;
        }
    }
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const SplitSpec& split) {
    auto records = graphio::read_manifest(manifest_path);
    Dataset ds = load_samples(manifest_path, records);
    if (split.mode == SplitSpec::Mode::Random)
        ds.split = graphio::split_random(records, split.ratios, split.seed);
    else
        ds.split = graphio::split_by_time(records, split.valid_cutoff,
                                          split.test_cutoff);
    index_split(ds);
    return ds;
}

Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const graphio::SplitAssignment& split) {
    auto records = graphio::read_manifest(manifest_path);
    Dataset ds = load_samples(manifest_path, records);
    ds.split = split;
    index_split(ds);
    return ds;
}

}  // namespace magnet::trainer
