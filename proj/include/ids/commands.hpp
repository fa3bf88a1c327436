#pragma once

#include <string>

#include "ids/config.hpp"
#include "ids/cross_validate.hpp"
#include "ids/ingest.hpp"

namespace ids {

// Library-level command implementations; the CLI binary is a thin shim so
// tests can drive every command in-process.

struct PrepResult {
    std::string clean_csv_path;
    std::string provenance_path;
    std::int64_t rows_out = 0;
};

// Clean an input CSV per the config profile and write `<out>` plus
// `<out>.provenance.json`.
PrepResult cmd_prep(const PipelineConfig& cfg, const std::string& input_csv,
                    const std::string& out_csv);

struct TrainResult {
    std::string model_path;
    std::string chain_path;
    std::string report_path;
};

// Fit the transform chain and the first configured model on the full input;
// write `<out>.model.json`, `<out>.chain.json`, `<out>.train-report.json`.
TrainResult cmd_train(const PipelineConfig& cfg, const std::string& clean_csv,
                      const std::string& out_prefix);

// k-fold cross-validation over every configured model; writes the report
// JSON and returns it. `summary_out` (when non-null) receives the printed
// model x metric table.
EvaluationReport cmd_eval(const PipelineConfig& cfg, const std::string& clean_csv,
                          const std::string& report_path,
                          std::string* summary_out = nullptr);

// Apply a saved chain + model to a feature CSV; writes row index, predicted
// class name and per-class probabilities.
void cmd_predict(const std::string& model_path, const std::string& chain_path,
                 const std::string& input_csv, const std::string& out_csv);

// Deterministic Gaussian-blob dataset in benchmark CSV format.
void cmd_synth(const PipelineConfig& cfg, const std::string& out_csv);

// Shared loading path: CSV -> clean -> (X, y, labels, names).
struct LoadedDataset {
    Matrix x;
    LabelVector y;
    LabelMap labels;
    std::vector<std::string> feature_names;
    CleanTable table;
};

LoadedDataset load_dataset(const PipelineConfig& cfg, const std::string& csv_path);

} // namespace ids
