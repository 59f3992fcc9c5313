#include "magnet/trainer/toygen.hpp"

#include <algorithm>
#include <cmath>

#include "magnet/rng.hpp"

namespace magnet::trainer {

namespace {

const std::vector<std::string> kNamePool = {
    "a", "b", "c", "d", "e", "f", "g", "h", "k", "m",
    "n", "p", "q", "r", "s", "u", "v", "w", "y", "z"};

std::string lit(Rng& rng) { return std::to_string(rng.below(32)); }

struct SampleBuilder {
    Rng rng;
    std::vector<std::string> names;   // shuffled private name pool
    std::size_t next_name = 0;
    std::vector<std::string> live;    // declared variables
    std::string body;

    explicit SampleBuilder(std::uint64_t stream) : rng(stream) {
        names = kNamePool;
        rng.shuffle(names);
    }

    std::string fresh() { return names[next_name++ % names.size()]; }
    const std::string& any() {
        return live[static_cast<std::size_t>(rng.below(live.size()))];
    }
    void line(const std::string& s) { body += "  " + s + "\n"; }

    void declare(const std::string& name, const std::string& init) {
        line("int " + name + " = " + init + ";");
        live.push_back(name);
    }

    void filler_statement() {
        switch (rng.below(6)) {
            case 0: {  // fresh declaration from an existing variable
                const std::string v = fresh();
                declare(v, any() + " * " + lit(rng));
                break;
            }
            case 1:  // additive update
                line(any() + " = " + any() + " + " + lit(rng) + ";");
                break;
            case 2:  // two-variable sum (decoy for the planted pattern)
                line(any() + " = " + any() + " + " + any() + ";");
                break;
            case 3:  // decoy guard, same token inventory as the clean region
                line("if (" + any() + " < 16) { " + any() + " = " + any() +
                     " + 1; }");
                break;
            case 4: {  // bounded loop
                const std::string v = any();
                line("while (" + v + " > " + lit(rng) + ") { " + v + " = " +
                     v + " - 1; }");
                break;
            }
            default:  // multiplicative update
                line(any() + " = " + any() + " * " + lit(rng) + ";");
                break;
        }
    }
};

}  // namespace

std::string toy_source(const ToySpec& spec, long index, bool vulnerable) {
    SampleBuilder b(spec.seed * 0x9E3779B97F4A7C15ULL +
                    static_cast<std::uint64_t>(index));
    Rng& rng = b.rng;

    const std::string x = b.fresh();
    const std::string y = b.fresh();
    const std::string z = b.fresh();
    const std::string acc = b.fresh();

    const int filler =
        spec.min_filler +
        static_cast<int>(rng.below(static_cast<std::uint64_t>(
            spec.max_filler - spec.min_filler + 1)));
    const int planted_at = static_cast<int>(rng.below(
        static_cast<std::uint64_t>(filler + 1)));

    b.body += "int sample_" + std::to_string(index) + "(int arg) {\n";
    b.declare(x, lit(rng));
    b.declare(y, lit(rng));
    b.declare(z, lit(rng));
    b.declare(acc, "0");

    for (int i = 0; i <= filler; ++i) {
        if (i == planted_at) {
            const std::string sum = x + " + " + y + " + " + z;
            if (vulnerable)
                b.line(acc + " = " + sum + ";");
            else
                b.line("if (" + x + " < 16) { if (" + y + " < 16) { " + acc +
                       " = " + sum + "; } }");
        }
        if (i < filler) b.filler_statement();
    }
    b.body += "  return " + acc + ";\n}\n";
    return b.body;
}

std::vector<ToySample> generate_toy_corpus(const ToySpec& spec) {
    const long n_vul =
        std::lround(static_cast<double>(spec.n) * spec.vulnerable_fraction);
    std::vector<ToySample> out;
    out.reserve(static_cast<std::size_t>(spec.n));
    for (long i = 0; i < spec.n; ++i) {
        const bool vulnerable = i < n_vul;
        ToySample s;
        s.id = "toy_" + std::to_string(i);
        s.label = vulnerable ? 1 : 0;
        s.source = toy_source(spec, i, vulnerable);

        // Synthetic update date in 2016..2019, independent of the label.
        Rng date_rng(spec.seed * 0x2545F4914F6CDD1DULL +
                     static_cast<std::uint64_t>(i));
        const int year = 2016 + static_cast<int>(date_rng.below(4));
        const int month = 1 + static_cast<int>(date_rng.below(12));
        const int day = 1 + static_cast<int>(date_rng.below(28));
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        s.update_date = buf;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<graphio::SampleRecord> to_manifest_records(
    const std::vector<ToySample>& samples) {
    std::vector<graphio::SampleRecord> records;
    records.reserve(samples.size());
    for (const auto& s : samples) {
        graphio::SampleRecord r;
        r.id = s.id;
        r.label = s.label;
        r.code = s.source;
        r.update_date = s.update_date;
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace magnet::trainer
