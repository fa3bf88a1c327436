#include "ids/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <json.hpp>

#include "ids/csv.hpp"
#include "ids/errors.hpp"
#include "ids/ingest.hpp"
#include "ids/log.hpp"
#include "ids/parallel.hpp"
#include "ids/pca.hpp"
#include "ids/rng.hpp"
#include "ids/serialize.hpp"
#include "ids/synth.hpp"

namespace ids {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void write_json(const Json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << j.dump(1, '\t') << '\n';
    if (!out) throw DataError("write failure: " + path);
}

} // namespace

LoadedDataset load_dataset(const PipelineConfig& cfg, const std::string& csv_path) {
    LoadedDataset ds;
    const RawTable raw = load_csv(csv_path, /*has_header=*/true);
    ds.table = clean(raw, cfg.profile);
    auto [x, raw_labels] = split_xy(ds.table);
    ds.x = std::move(x);
    ds.labels = fit_label_encoder(raw_labels);
    ds.y = encode_labels(ds.labels, raw_labels);
    ds.feature_names = ds.table.feature_names();
    return ds;
}

PrepResult cmd_prep(const PipelineConfig& cfg, const std::string& input_csv,
                    const std::string& out_csv) {
    const RawTable raw = load_csv(input_csv, /*has_header=*/true);
    const CleanTable table = clean(raw, cfg.profile);
    write_clean_csv(table, out_csv);
    PrepResult result;
    result.clean_csv_path = out_csv;
    result.provenance_path = out_csv + ".provenance.json";
    result.rows_out = table.features.rows();
    save_provenance(table, result.provenance_path);
    return result;
}

TrainResult cmd_train(const PipelineConfig& cfg, const std::string& clean_csv,
                      const std::string& out_prefix) {
    require(!cfg.models.empty(), "train: no model configured");
    LoadedDataset ds = load_dataset(cfg, clean_csv);

    const auto t0 = Clock::now();
    FitChainResult fitted =
        fit_chain(ds.x, ds.y, cfg.transforms, Rng::stream(cfg.seed, 0xc4a17u).next_u64(),
                  ds.labels.num_classes(), ds.feature_names);
    fitted.chain.target_column = cfg.profile.target_column;
    const double chain_ms = elapsed_ms(t0);

    const ModelSpec& spec = cfg.models.front();
    const auto t1 = Clock::now();
    TrainedModel model =
        train_model(spec, fitted.x, fitted.y, ds.labels,
                    Rng::stream(cfg.seed, 0x33d31u).next_u64());
    const double fit_ms = elapsed_ms(t1);

    TrainResult result;
    result.model_path = out_prefix + ".model.json";
    result.chain_path = out_prefix + ".chain.json";
    result.report_path = out_prefix + ".train-report.json";
    save_chain(fitted.chain, result.chain_path);
    save_model(model, result.model_path);

    Json report;
    report["format"] = "ids-train-report";
    report["version"] = 1;
    report["dataset"] = cfg.profile.name;
    report["seed"] = cfg.seed;
    report["model"] = to_string(spec.kind);
    report["rows_in"] = ds.x.rows();
    report["rows_trained"] = fitted.x.rows();
    report["input_width"] = ds.x.cols();
    report["transformed_width"] = fitted.x.cols();
    report["settings"] =
        Json{{"oversample", cfg.transforms.oversample},
             {"sfe", cfg.transforms.sfe},
             {"sfe_embed_mode", to_string(cfg.transforms.sfe_cfg.embed_mode)},
             {"sfe_k_kmeans", cfg.transforms.sfe_cfg.k_kmeans},
             {"sfe_k_gmm", cfg.transforms.sfe_cfg.k_gmm},
             {"pca", cfg.transforms.pca},
             {"pca_k", cfg.transforms.pca_k},
             {"leakage_mode", "faithful"}}; // training always sees the full input
    if (fitted.chain.pca) {
        report["reduction_ratio"] = reduction_ratio(*fitted.chain.pca);
        report["explained_variance"] = explained_variance_ratio(*fitted.chain.pca);
    }
    if (fitted.resample_plan) {
        Json targets = Json::object();
        for (const auto& [code, target] : fitted.resample_plan->per_class_target)
            targets[ds.labels.code_to_class[static_cast<std::size_t>(code)]] = target;
        report["resample_plan"] = Json{
            {"seed", fitted.resample_plan->seed},
            {"per_class_target", targets},
            {"appended_rows",
             static_cast<std::int64_t>(fitted.resample_plan->source_indices.size())},
            {"source_indices", fitted.resample_plan->source_indices}};
    }
    report["timings_ms"] = Json{{"chain_fit", cfg.cv.stable_timings ? 0.0 : chain_ms},
                                {"model_fit", cfg.cv.stable_timings ? 0.0 : fit_ms}};
    write_json(report, result.report_path);
    return result;
}

EvaluationReport cmd_eval(const PipelineConfig& cfg, const std::string& clean_csv,
                          const std::string& report_path, std::string* summary_out) {
    require(!cfg.models.empty(), "eval: no model configured");
    LoadedDataset ds = load_dataset(cfg, clean_csv);
    EvaluationReport report =
        cross_validate(cfg.models, ds.x, ds.y, ds.labels, cfg.transforms, cfg.cv,
                       cfg.leakage_mode, cfg.seed);
    report.dataset_name = cfg.profile.name;
    save_report(report, report_path, cfg.profile.name, cfg.max_roc_points);
    const std::string table = report_summary_table(report);
    if (summary_out) *summary_out = table;
    return report;
}

void cmd_predict(const std::string& model_path, const std::string& chain_path,
                 const std::string& input_csv, const std::string& out_csv) {
    const TransformChain chain = load_chain(chain_path);
    const TrainedModel model = load_model(model_path);

    const RawTable raw = load_csv(input_csv, /*has_header=*/true);

    // The input must carry exactly the chain's feature columns (the training
    // target column may be present; it is ignored).
    std::vector<std::string> trimmed(raw.column_names.size());
    for (std::size_t c = 0; c < raw.column_names.size(); ++c) {
        std::string name = raw.column_names[c];
        const auto b = name.find_first_not_of(" \t\r\n");
        const auto e = name.find_last_not_of(" \t\r\n");
        trimmed[c] = b == std::string::npos ? "" : name.substr(b, e - b + 1);
    }
    std::vector<std::int64_t> feature_pos;
    std::vector<std::string> missing, extra;
    for (const std::string& want : chain.feature_names) {
        auto it = std::find(trimmed.begin(), trimmed.end(), want);
        if (it == trimmed.end()) missing.push_back(want);
        else feature_pos.push_back(it - trimmed.begin());
    }
    for (const std::string& have : trimmed) {
        if (have == chain.target_column) continue; // label column is ignored
        if (std::find(chain.feature_names.begin(), chain.feature_names.end(), have) ==
            chain.feature_names.end())
            extra.push_back(have);
    }
    if (!missing.empty() || !extra.empty() ||
        static_cast<std::int64_t>(chain.feature_names.size()) != chain.input_width()) {
        std::string msg = "predict: column set mismatch.";
        if (!missing.empty()) {
            msg += " missing:";
            for (const auto& m : missing) msg += " \"" + m + "\"";
        }
        if (!extra.empty()) {
            msg += " extra:";
            for (const auto& m : extra) msg += " \"" + m + "\"";
        }
        throw DataError(msg);
    }

    Matrix x(raw.row_count, static_cast<std::int64_t>(feature_pos.size()));
    for (std::size_t j = 0; j < feature_pos.size(); ++j) {
        const Column& col = raw.columns[static_cast<std::size_t>(feature_pos[j])];
        for (std::int64_t r = 0; r < raw.row_count; ++r) {
            double v;
            if (const auto* num = std::get_if<NumericColumn>(&col)) {
                v = num->values[static_cast<std::size_t>(r)];
            } else if (const auto* icol = std::get_if<IntegerColumn>(&col)) {
                v = static_cast<double>(icol->values[static_cast<std::size_t>(r)]);
            } else {
                throw DataError("predict: non-numeric feature column \"" +
                                trimmed[static_cast<std::size_t>(feature_pos[j])] + "\"");
            }
            const float f = static_cast<float>(v);
            if (!std::isfinite(f))
                throw DataError("predict: non-finite value at row " + std::to_string(r + 1) +
                                ", column \"" +
                                trimmed[static_cast<std::size_t>(feature_pos[j])] + "\"");
            x.at(r, static_cast<std::int64_t>(j)) = f;
        }
    }

    const Matrix transformed = apply_chain(chain, x);
    const Matrix proba = model_predict_proba(model, transformed);

    std::ofstream out(out_csv, std::ios::binary);
    if (!out) throw DataError("predict: cannot open " + out_csv);
    out << "row,predicted_class";
    for (const std::string& name : model.labels.code_to_class)
        out << ",prob_" << csv_escape(name);
    out << '\n';
    for (std::int64_t i = 0; i < proba.rows(); ++i) {
        std::int32_t best = 0;
        float best_v = proba.at(i, 0);
        for (std::int64_t c = 1; c < proba.cols(); ++c) {
            if (proba.at(i, c) > best_v) {
                best_v = proba.at(i, c);
                best = static_cast<std::int32_t>(c);
            }
        }
        out << i << ',' << csv_escape(model.labels.code_to_class[static_cast<std::size_t>(best)]);
        for (std::int64_t c = 0; c < proba.cols(); ++c)
            out << ',' << format_float(proba.at(i, c));
        out << '\n';
    }
    if (!out) throw DataError("predict: write failure: " + out_csv);
}

void cmd_synth(const PipelineConfig& cfg, const std::string& out_csv) {
    const SynthData data = synth_blobs(cfg.synth);
    write_synth_csv(data, out_csv);
    std::string counts;
    for (std::size_t c = 0; c < data.class_counts.size(); ++c) {
        if (c) counts += ", ";
        counts += "class_" + std::to_string(c) + "=" + std::to_string(data.class_counts[c]);
    }
    log::info("synth: wrote " + std::to_string(data.x.rows()) + " rows (" + counts + ")");
}

} // namespace ids
