#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ids/commands.hpp"
#include "ids/errors.hpp"
#include "ids/log.hpp"
#include "ids/parallel.hpp"
#include "ids/serialize.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string input;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> threads;
    std::optional<std::string> leakage;
    std::optional<std::string> model;
    bool stable_timings = false;
};

ids::PipelineConfig resolve_config(const CommonArgs& args) {
    ids::PipelineConfig cfg;
    if (!args.config_path.empty()) {
        cfg = ids::load_pipeline_config(args.config_path);
    } else {
        cfg.profile = ids::DatasetProfile::identity("label");
        cfg.models.push_back(ids::ModelSpec::defaults(ids::ModelKind::rf));
    }
    ids::ConfigOverrides ov;
    ov.seed = args.seed;
    ov.leakage = args.leakage;
    ov.models = args.model;
    ov.threads = args.threads;
    if (args.stable_timings) ov.stable_timings = true;
    ids::apply_overrides(cfg, ov);
    if (cfg.threads > 0) ids::set_max_threads(static_cast<int>(cfg.threads));
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_input, bool needs_out) {
    cmd->add_option("--config", args.config_path, "pipeline config file");
    auto* in = cmd->add_option("--input", args.input, "input CSV path");
    auto* out = cmd->add_option("--out", args.out, "output path");
    if (needs_input) in->required();
    if (needs_out) out->required();
    cmd->add_option("--seed", args.seed, "override config seed");
    cmd->add_option("--threads", args.threads, "worker thread budget (0 = all cores)");
    cmd->add_option("--leakage", args.leakage, "faithful|strict")
        ->check(CLI::IsMember({"faithful", "strict"}));
    cmd->add_option("--model", args.model, "model kind(s): dt|rf|et|gbt, comma separated");
    cmd->add_flag("--stable-timings", args.stable_timings,
                  "write zeroed timings for byte-reproducible outputs");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"intrusion-detection pipeline: clean, balance, embed, reduce, "
                 "classify, evaluate"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* prep = app.add_subcommand("prep", "clean a raw CSV and write provenance");
    add_common(prep, args, /*input=*/true, /*out=*/true);

    auto* train = app.add_subcommand("train", "fit transform chain + model");
    add_common(train, args, true, true);

    auto* eval = app.add_subcommand("eval", "k-fold cross-validation report");
    add_common(eval, args, true, true);

    auto* predict = app.add_subcommand("predict", "apply a saved chain + model");
    std::string model_path, chain_path;
    predict->add_option("--model-file", model_path, "saved model JSON")->required();
    predict->add_option("--chain-file", chain_path, "saved chain JSON")->required();
    predict->add_option("--input", args.input, "feature CSV")->required();
    predict->add_option("--out", args.out, "predictions CSV")->required();
    predict->add_option("--threads", args.threads, "worker thread budget");

    auto* synth = app.add_subcommand("synth", "generate a Gaussian-blob dataset");
    add_common(synth, args, false, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (prep->parsed()) {
            const auto cfg = resolve_config(args);
            const auto result = ids::cmd_prep(cfg, args.input, args.out);
            std::printf("wrote %s (%lld rows) and %s\n", result.clean_csv_path.c_str(),
                        static_cast<long long>(result.rows_out),
                        result.provenance_path.c_str());
        } else if (train->parsed()) {
            const auto cfg = resolve_config(args);
            const auto result = ids::cmd_train(cfg, args.input, args.out);
            std::printf("wrote %s, %s, %s\n", result.model_path.c_str(),
                        result.chain_path.c_str(), result.report_path.c_str());
        } else if (eval->parsed()) {
            const auto cfg = resolve_config(args);
            std::string summary;
            ids::cmd_eval(cfg, args.input, args.out, &summary);
            std::printf("%s", summary.c_str());
            std::printf("report: %s\n", args.out.c_str());
        } else if (predict->parsed()) {
            if (args.threads && *args.threads > 0)
                ids::set_max_threads(static_cast<int>(*args.threads));
            ids::cmd_predict(model_path, chain_path, args.input, args.out);
            std::printf("wrote %s\n", args.out.c_str());
        } else if (synth->parsed()) {
            const auto cfg = resolve_config(args);
            ids::cmd_synth(cfg, args.out);
            std::printf("wrote %s\n", args.out.c_str());
        }
    } catch (const ids::ConfigError& e) {
        ids::log::error(e.what());
        return 2;
    } catch (const ids::DataError& e) {
        ids::log::error(e.what());
        return 3;
    } catch (const std::exception& e) {
        ids::log::error(std::string("internal error: ") + e.what());
        return 4;
    }
    return 0;
}
