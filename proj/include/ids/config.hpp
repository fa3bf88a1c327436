#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ids/cross_validate.hpp"
#include "ids/pipeline.hpp"
#include "ids/profile.hpp"

namespace ids {

// Flat `key = value` file with dotted sections; '#' starts a comment.
// Unknown keys are a ConfigError so typos fail fast.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    // Keys beginning with `prefix.` (prefix stripped).
    std::map<std::string, std::string> section(const std::string& prefix) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }
    void mark_known(const std::string& key) const;
    void check_unknown_keys() const;

private:
    std::map<std::string, std::string> entries_;
    mutable std::map<std::string, bool> consumed_;
    std::string origin_;
};

struct SynthSpec {
    std::int64_t classes = 3;
    std::int64_t rows = 5000;
    std::int64_t dims = 20;
    std::vector<double> ratio;   // class weight per class, e.g. 100:10:1
    std::vector<double> sigmas;  // per-class spread; broadcast when size 1
    double separation = 6.0;
    std::uint64_t seed = 0;
};

// Model hyperparameters shared by every `model.kind` listed in one config.
struct ModelHyper {
    Criterion criterion = Criterion::gini;
    std::int64_t max_depth = 0; // 0 = per-kind default (unlimited; 6 for gbt)
    std::int64_t min_samples_split = 2;
    std::int64_t min_samples_leaf = 1;
    std::optional<MaxFeatures> max_features; // unset = per-kind default
    std::int64_t n_trees = 100;
    std::int64_t n_rounds = 100;
    double learning_rate = 0.3;
    double lambda = 1.0;
    double gamma = 0.0;
};

ModelSpec build_model_spec(const ModelHyper& hyper, ModelKind kind);

struct PipelineConfig {
    std::string profile_path;
    DatasetProfile profile;
    std::uint64_t seed = 42;
    LeakageMode leakage_mode = LeakageMode::faithful;
    std::int64_t threads = 0; // 0 = all cores
    TransformSettings transforms;
    ModelHyper model_hyper;
    std::vector<ModelSpec> models; // eval may hold several, train uses the first
    CvSettings cv;
    SynthSpec synth;
    int max_roc_points = 2048;
};

PipelineConfig load_pipeline_config(const std::string& path);

// CLI overrides (applied after the file is read).
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> leakage;
    std::optional<std::string> models; // comma-separated kinds
    std::optional<std::int64_t> threads;
    std::optional<bool> stable_timings;
};

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& ov);

} // namespace ids
