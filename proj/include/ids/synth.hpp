#pragma once

#include <string>

#include "ids/config.hpp"
#include "ids/matrix.hpp"

namespace ids {

struct SynthData {
    Matrix x;
    std::vector<std::string> labels; // class_0 .. class_{C-1}
    std::vector<std::int64_t> class_counts;
};

// Gaussian blobs: class centers drawn once from N(0, separation^2 I), rows
// from N(center, sigma_c^2 I). Row counts follow the ratio by largest
// remainder (ties to the lower class index). Fully determined by the spec
// and seed.
SynthData synth_blobs(const SynthSpec& spec);

void write_synth_csv(const SynthData& data, const std::string& path);

} // namespace ids
