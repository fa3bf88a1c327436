#include "ids/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ids/errors.hpp"

namespace ids {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (kv.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key \"" +
                              key + "\"");
        kv.entries_[key] = value;
    }
    return kv;
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

void KeyValueFile::mark_known(const std::string& key) const { consumed_[key] = true; }

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
    mark_known(key);
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::int64_t KeyValueFile::get_int(const std::string& key, std::int64_t fallback) const {
    mark_known(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(),
                                     it->second.data() + it->second.size(), v);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
        throw ConfigError(origin_ + ": key \"" + key + "\" is not an integer: " + it->second);
    return v;
}

std::uint64_t KeyValueFile::get_u64(const std::string& key, std::uint64_t fallback) const {
    mark_known(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(),
                                     it->second.data() + it->second.size(), v);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
        throw ConfigError(origin_ + ": key \"" + key + "\" is not an unsigned integer: " +
                          it->second);
    return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    mark_known(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    double v = 0;
    auto [ptr, ec] = std::from_chars(it->second.data(),
                                     it->second.data() + it->second.size(), v);
    if (ec != std::errc() || ptr != it->second.data() + it->second.size())
        throw ConfigError(origin_ + ": key \"" + key + "\" is not a number: " + it->second);
    return v;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    mark_known(key);
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "on") return true;
    if (it->second == "false" || it->second == "0" || it->second == "off") return false;
    throw ConfigError(origin_ + ": key \"" + key + "\" is not a boolean: " + it->second);
}

std::map<std::string, std::string> KeyValueFile::section(const std::string& prefix) const {
    std::map<std::string, std::string> out;
    const std::string p = prefix + ".";
    for (const auto& [k, v] : entries_) {
        if (k.rfind(p, 0) == 0) {
            out[k.substr(p.size())] = v;
            mark_known(k);
        }
    }
    return out;
}

void KeyValueFile::check_unknown_keys() const {
    for (const auto& [k, v] : entries_) {
        if (!consumed_.count(k))
            throw ConfigError(origin_ + ": unknown key \"" + k + "\"");
    }
}

DatasetProfile load_profile(const std::string& path) {
    const KeyValueFile kv = KeyValueFile::parse_file(path);
    DatasetProfile p;
    p.name = kv.get_string("name", "");
    p.target_column = kv.get_string("target_column", "");
    if (p.target_column.empty())
        throw ConfigError(path + ": profile requires target_column");
    if (kv.has("drop_columns")) {
        for (auto& c : split(kv.get_string("drop_columns", ""), ','))
            if (!c.empty()) p.drop_columns.push_back(c);
    }
    if (kv.has("expected_classes")) {
        for (auto& c : split(kv.get_string("expected_classes", ""), ','))
            if (!c.empty()) p.expected_classes.push_back(c);
    }
    for (const auto& [raw, merged] : kv.section("merge")) p.merge_map[raw] = merged;
    // Idempotence: merged names map to themselves.
    for (const auto& [raw, merged] : p.merge_map) {
        auto it = p.merge_map.find(merged);
        if (it != p.merge_map.end() && it->second != merged)
            throw ConfigError(path + ": merge_map is not idempotent at \"" + merged + "\"");
    }
    kv.check_unknown_keys();
    return p;
}

namespace {

MaxFeatures parse_max_features(const std::string& s) {
    if (s == "all") return MaxFeatures::all();
    if (s == "sqrt") return MaxFeatures::sqrt();
    if (s == "log2") return MaxFeatures::log2();
    double f = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), f);
    if (ec == std::errc() && ptr == s.data() + s.size() && f > 0.0 && f <= 1.0)
        return MaxFeatures::frac(f);
    throw ConfigError("model.max_features must be all|sqrt|log2 or a fraction in (0,1]: " + s);
}

ModelHyper model_hyper_from(const KeyValueFile& kv) {
    ModelHyper hyper;
    const std::string crit = kv.get_string("model.criterion", "gini");
    if (crit == "gini") hyper.criterion = Criterion::gini;
    else if (crit == "entropy") hyper.criterion = Criterion::entropy;
    else throw ConfigError("model.criterion must be gini|entropy: " + crit);

    hyper.max_depth = kv.get_int("model.max_depth", 0);
    hyper.min_samples_split = kv.get_int("model.min_samples_split", 2);
    hyper.min_samples_leaf = kv.get_int("model.min_samples_leaf", 1);
    if (kv.has("model.max_features"))
        hyper.max_features = parse_max_features(kv.get_string("model.max_features", ""));
    hyper.n_trees = kv.get_int("model.n_trees", 100);
    hyper.n_rounds = kv.get_int("model.n_rounds", 100);
    hyper.learning_rate = kv.get_double("model.learning_rate", 0.3);
    hyper.lambda = kv.get_double("model.lambda", 1.0);
    hyper.gamma = kv.get_double("model.gamma", 0.0);
    return hyper;
}

std::vector<double> parse_ratio(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ':')) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size() || v <= 0.0)
            throw ConfigError("synth.ratio: bad component \"" + part + "\"");
        out.push_back(v);
    }
    return out;
}

} // namespace

ModelSpec build_model_spec(const ModelHyper& hyper, ModelKind kind) {
    ModelSpec spec = ModelSpec::defaults(kind);
    spec.tree.criterion = hyper.criterion;
    if (hyper.max_depth > 0) {
        spec.tree.max_depth = hyper.max_depth;
        spec.gbt.max_depth = hyper.max_depth;
    }
    spec.tree.min_samples_split = hyper.min_samples_split;
    spec.tree.min_samples_leaf = hyper.min_samples_leaf;
    if (hyper.max_features) spec.tree.max_features = *hyper.max_features;
    spec.n_trees = hyper.n_trees;
    spec.gbt.n_rounds = hyper.n_rounds;
    spec.gbt.learning_rate = hyper.learning_rate;
    spec.gbt.lambda = hyper.lambda;
    spec.gbt.gamma = hyper.gamma;
    return spec;
}

PipelineConfig load_pipeline_config(const std::string& path) {
    const KeyValueFile kv = KeyValueFile::parse_file(path);
    PipelineConfig cfg;

    cfg.profile_path = kv.get_string("profile", "");
    if (!cfg.profile_path.empty()) {
        cfg.profile = load_profile(cfg.profile_path);
    } else if (kv.has("target_column")) {
        cfg.profile = DatasetProfile::identity(kv.get_string("target_column", "label"));
    } else {
        cfg.profile = DatasetProfile::identity("label");
    }

    cfg.seed = kv.get_u64("seed", 42);
    cfg.leakage_mode = parse_leakage_mode(kv.get_string("leakage_mode", "faithful"));
    cfg.threads = kv.get_int("threads", 0);

    cfg.transforms.oversample = kv.get_bool("oversample.enabled", true);
    cfg.transforms.sfe = kv.get_bool("sfe.enabled", true);
    cfg.transforms.sfe_cfg.k_kmeans = kv.get_int("sfe.k_kmeans", 0);
    cfg.transforms.sfe_cfg.k_gmm = kv.get_int("sfe.k_gmm", 0);
    cfg.transforms.sfe_cfg.embed_mode =
        parse_embed_mode(kv.get_string("sfe.embed_mode", "hard"));
    cfg.transforms.sfe_cfg.max_iter = kv.get_int("sfe.max_iter", 300);
    cfg.transforms.sfe_cfg.tol = kv.get_double("sfe.tol", 1e-4);
    cfg.transforms.sfe_cfg.cov_floor = kv.get_double("sfe.cov_floor", 1e-6);
    cfg.transforms.pca = kv.get_bool("pca.enabled", true);
    cfg.transforms.pca_k = kv.get_int("pca.k", 10);

    cfg.model_hyper = model_hyper_from(kv);
    for (const auto& kind_name : split(kv.get_string("model.kind", "rf"), ','))
        cfg.models.push_back(build_model_spec(cfg.model_hyper, parse_model_kind(kind_name)));

    cfg.cv.k = kv.get_int("cv.k", 10);
    cfg.cv.stratified = kv.get_bool("cv.stratified", true);
    cfg.cv.stable_timings = kv.get_bool("report.stable_timings", false);
    cfg.max_roc_points = static_cast<int>(kv.get_int("report.max_roc_points", 2048));

    cfg.synth.classes = kv.get_int("synth.classes", 3);
    cfg.synth.rows = kv.get_int("synth.rows", 5000);
    cfg.synth.dims = kv.get_int("synth.dims", 20);
    cfg.synth.separation = kv.get_double("synth.separation", 6.0);
    if (kv.has("synth.ratio")) cfg.synth.ratio = parse_ratio(kv.get_string("synth.ratio", ""));
    if (kv.has("synth.sigmas")) {
        for (const auto& part : split(kv.get_string("synth.sigmas", ""), ',')) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (ec != std::errc() || ptr != part.data() + part.size() || v <= 0.0)
                throw ConfigError("synth.sigmas: bad component \"" + part + "\"");
            cfg.synth.sigmas.push_back(v);
        }
    }
    cfg.synth.seed = cfg.seed;

    if (cfg.cv.k < 2) throw ConfigError("cv.k must be >= 2");
    kv.check_unknown_keys();
    return cfg;
}

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& ov) {
    if (ov.seed) {
        cfg.seed = *ov.seed;
        cfg.synth.seed = *ov.seed;
    }
    if (ov.leakage) cfg.leakage_mode = parse_leakage_mode(*ov.leakage);
    if (ov.threads) cfg.threads = *ov.threads;
    if (ov.stable_timings) cfg.cv.stable_timings = *ov.stable_timings;
    if (ov.models) {
        cfg.models.clear();
        for (const auto& kind_name : split(*ov.models, ','))
            cfg.models.push_back(build_model_spec(cfg.model_hyper, parse_model_kind(kind_name)));
    }
}

} // namespace ids
