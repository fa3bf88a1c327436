#include "ids/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "ids/csv.hpp"
#include "ids/errors.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

std::vector<std::int64_t> allocate_counts(std::int64_t rows,
                                          const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    const std::size_t c = weights.size();
    std::vector<std::int64_t> counts(c, 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < c; ++i) {
        const double exact = static_cast<double>(rows) * weights[i] / total;
        counts[i] = static_cast<std::int64_t>(std::floor(exact));
        assigned += counts[i];
        remainders.push_back({exact - std::floor(exact), i});
    }
    // Largest remainder first; ties go to the lower class index.
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t r = 0; r < rows - assigned; ++r)
        ++counts[remainders[static_cast<std::size_t>(r) % c].second];
    return counts;
}

} // namespace

SynthData synth_blobs(const SynthSpec& spec) {
    require(spec.classes >= 2, "synth: need >= 2 classes");
    require(spec.rows >= spec.classes, "synth: need rows >= classes");
    require(spec.dims >= 1, "synth: need dims >= 1");

    std::vector<double> weights = spec.ratio;
    if (weights.empty()) weights.assign(static_cast<std::size_t>(spec.classes), 1.0);
    require(static_cast<std::int64_t>(weights.size()) == spec.classes,
            "synth: ratio length must equal class count");

    std::vector<double> sigmas = spec.sigmas;
    if (sigmas.empty()) sigmas.assign(static_cast<std::size_t>(spec.classes), 1.0);
    if (sigmas.size() == 1)
        sigmas.assign(static_cast<std::size_t>(spec.classes), sigmas[0]);
    require(static_cast<std::int64_t>(sigmas.size()) == spec.classes,
            "synth: sigmas length must equal class count");

    const auto counts = allocate_counts(spec.rows, weights);
    for (std::int64_t c = 0; c < spec.classes; ++c)
        require(counts[static_cast<std::size_t>(c)] >= 1,
                "synth: class " + std::to_string(c) + " received zero rows");

    SynthData out;
    out.class_counts = counts;
    out.x = Matrix(0, spec.dims);

    std::vector<std::vector<double>> centers(static_cast<std::size_t>(spec.classes));
    for (std::int64_t c = 0; c < spec.classes; ++c) {
        Rng rng = Rng::stream(spec.seed, 0xce27e2u, static_cast<std::uint64_t>(c));
        auto& center = centers[static_cast<std::size_t>(c)];
        center.resize(static_cast<std::size_t>(spec.dims));
        for (auto& v : center) v = spec.separation * rng.next_normal();
    }

    std::vector<float> row(static_cast<std::size_t>(spec.dims));
    for (std::int64_t c = 0; c < spec.classes; ++c) {
        Rng rng = Rng::stream(spec.seed, 0x2015u, static_cast<std::uint64_t>(c));
        const auto& center = centers[static_cast<std::size_t>(c)];
        const double sigma = sigmas[static_cast<std::size_t>(c)];
        const std::string name = "class_" + std::to_string(c);
        for (std::int64_t i = 0; i < counts[static_cast<std::size_t>(c)]; ++i) {
            for (std::int64_t j = 0; j < spec.dims; ++j)
                row[static_cast<std::size_t>(j)] =
                    static_cast<float>(center[static_cast<std::size_t>(j)] +
                                       sigma * rng.next_normal());
            out.x.push_row(row);
            out.labels.push_back(name);
        }
    }
    return out;
}

void write_synth_csv(const SynthData& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("synth: cannot open " + path);
    for (std::int64_t j = 0; j < data.x.cols(); ++j) out << 'f' << j << ',';
    out << "label\n";
    for (std::int64_t i = 0; i < data.x.rows(); ++i) {
        for (std::int64_t j = 0; j < data.x.cols(); ++j)
            out << format_float(data.x.at(i, j)) << ',';
        out << data.labels[static_cast<std::size_t>(i)] << '\n';
    }
    if (!out) throw DataError("synth: write failure: " + path);
}

} // namespace ids
