#pragma once

#include <string>

#include "ids/cross_validate.hpp"
#include "ids/ingest.hpp"
#include "ids/pipeline.hpp"

namespace ids {

// Versioned, self-describing JSON files. Every float payload is stored as
// its exact bit pattern (u32 for 32-bit values, u64 for 64-bit), so files
// are byte-stable across runs and round-trip without precision loss.
inline constexpr int kChainSchemaVersion = 1;
inline constexpr int kModelSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

void save_chain(const TransformChain& chain, const std::string& path);
TransformChain load_chain(const std::string& path);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

// Reports are plain human-readable JSON (values as decimal numbers).
void save_report(const EvaluationReport& report, const std::string& path,
                 const std::string& dataset_name, int max_roc_points = 2048);

void save_provenance(const CleanTable& table, const std::string& path);

std::string report_summary_table(const EvaluationReport& report);

} // namespace ids
