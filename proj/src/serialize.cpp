#include "ids/serialize.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "ids/errors.hpp"

namespace ids {

namespace {

using Json = nlohmann::ordered_json;

Json bits_f64(const std::vector<double>& v) {
    Json out = Json::array();
    for (double f : v) out.push_back(std::bit_cast<std::uint64_t>(f));
    return out;
}

std::vector<double> from_bits_f64(const Json& j) {
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(std::bit_cast<double>(e.get<std::uint64_t>()));
    return out;
}

void write_file(const Json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << j.dump(1, '\t') << '\n';
    if (!out) throw DataError("write failure: " + path);
}

Json read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void expect_format(const Json& j, const std::string& tag, int version,
                   const std::string& path) {
    if (!j.contains("format") || j["format"] != tag)
        throw DataError(path + ": not a " + tag + " file");
    if (!j.contains("version") || j["version"].get<int>() != version)
        throw DataError(path + ": unsupported " + tag + " version");
}

Json scaler_to_json(const ScalerParams& p) {
    return Json{{"means", bits_f64(p.means)}, {"stds", bits_f64(p.stds)}};
}

ScalerParams scaler_from_json(const Json& j) {
    ScalerParams p;
    p.means = from_bits_f64(j.at("means"));
    p.stds = from_bits_f64(j.at("stds"));
    return p;
}

Json matrixlike_to_json(const std::vector<double>& data) { return bits_f64(data); }

Json kmeans_to_json(const KMeansModel& m) {
    return Json{{"k", m.k},
                {"dims", m.dims},
                {"centroids", matrixlike_to_json(m.centroids)},
                {"inertia", std::bit_cast<std::uint64_t>(m.inertia)},
                {"iterations_run", m.iterations_run}};
}

KMeansModel kmeans_from_json(const Json& j) {
    KMeansModel m;
    m.k = j.at("k").get<std::int64_t>();
    m.dims = j.at("dims").get<std::int64_t>();
    m.centroids = from_bits_f64(j.at("centroids"));
    m.inertia = std::bit_cast<double>(j.at("inertia").get<std::uint64_t>());
    m.iterations_run = j.at("iterations_run").get<std::int64_t>();
    return m;
}

Json gmm_to_json(const GmmModel& m) {
    return Json{{"k", m.k},
                {"dims", m.dims},
                {"weights", bits_f64(m.weights)},
                {"means", bits_f64(m.means)},
                {"variances", bits_f64(m.variances)},
                {"cov_floor", std::bit_cast<std::uint64_t>(m.cov_floor)},
                {"iterations_run", m.iterations_run}};
}

GmmModel gmm_from_json(const Json& j) {
    GmmModel m;
    m.k = j.at("k").get<std::int64_t>();
    m.dims = j.at("dims").get<std::int64_t>();
    m.weights = from_bits_f64(j.at("weights"));
    m.means = from_bits_f64(j.at("means"));
    m.variances = from_bits_f64(j.at("variances"));
    m.cov_floor = std::bit_cast<double>(j.at("cov_floor").get<std::uint64_t>());
    m.iterations_run = j.at("iterations_run").get<std::int64_t>();
    return m;
}

Json pca_to_json(const PcaModel& m) {
    return Json{{"d_in", m.d_in},
                {"k_out", m.k_out},
                {"mean", bits_f64(m.mean)},
                {"scale", bits_f64(m.scale)},
                {"components", bits_f64(m.components)},
                {"eigenvalues", bits_f64(m.eigenvalues)},
                {"total_variance", std::bit_cast<std::uint64_t>(m.total_variance)}};
}

PcaModel pca_from_json(const Json& j) {
    PcaModel m;
    m.d_in = j.at("d_in").get<std::int64_t>();
    m.k_out = j.at("k_out").get<std::int64_t>();
    m.mean = from_bits_f64(j.at("mean"));
    m.scale = from_bits_f64(j.at("scale"));
    m.components = from_bits_f64(j.at("components"));
    m.eigenvalues = from_bits_f64(j.at("eigenvalues"));
    m.total_variance = std::bit_cast<double>(j.at("total_variance").get<std::uint64_t>());
    return m;
}

Json labels_to_json(const LabelMap& m) {
    Json names = Json::array();
    for (const auto& n : m.code_to_class) names.push_back(n);
    return names;
}

LabelMap labels_from_json(const Json& j) {
    LabelMap m;
    for (const auto& e : j) {
        const std::string name = e.get<std::string>();
        m.class_to_code[name] = static_cast<std::int32_t>(m.code_to_class.size());
        m.code_to_class.push_back(name);
    }
    return m;
}

Json tree_to_json(const Tree& t) {
    Json nodes = Json::array();
    for (const TreeNode& n : t.nodes) {
        nodes.push_back(Json::array({n.feature, std::bit_cast<std::uint32_t>(n.threshold),
                                     n.left, n.right, n.counts_offset}));
    }
    return Json{{"num_classes", t.num_classes},
                {"num_features", t.num_features},
                {"nodes", nodes},
                {"leaf_counts", bits_f64(t.leaf_counts)}};
}

Tree tree_from_json(const Json& j) {
    Tree t;
    t.num_classes = j.at("num_classes").get<std::int32_t>();
    t.num_features = j.at("num_features").get<std::int64_t>();
    for (const auto& e : j.at("nodes")) {
        TreeNode n;
        n.feature = e.at(0).get<std::int32_t>();
        n.threshold = std::bit_cast<float>(e.at(1).get<std::uint32_t>());
        n.left = e.at(2).get<std::int32_t>();
        n.right = e.at(3).get<std::int32_t>();
        n.counts_offset = e.at(4).get<std::int64_t>();
        t.nodes.push_back(n);
    }
    t.leaf_counts = from_bits_f64(j.at("leaf_counts"));
    return t;
}

Json reg_tree_to_json(const RegTree& t) {
    Json nodes = Json::array();
    for (const RegNode& n : t.nodes) {
        nodes.push_back(Json::array({n.feature, std::bit_cast<std::uint32_t>(n.threshold),
                                     n.left, n.right,
                                     std::bit_cast<std::uint64_t>(n.value)}));
    }
    return nodes;
}

RegTree reg_tree_from_json(const Json& j) {
    RegTree t;
    for (const auto& e : j) {
        RegNode n;
        n.feature = e.at(0).get<std::int32_t>();
        n.threshold = std::bit_cast<float>(e.at(1).get<std::uint32_t>());
        n.left = e.at(2).get<std::int32_t>();
        n.right = e.at(3).get<std::int32_t>();
        n.value = std::bit_cast<double>(e.at(4).get<std::uint64_t>());
        t.nodes.push_back(n);
    }
    return t;
}

Json tree_params_to_json(const TreeParams& p) {
    Json j;
    j["criterion"] = p.criterion == Criterion::gini ? "gini" : "entropy";
    j["max_depth"] = p.max_depth ? Json(*p.max_depth) : Json(nullptr);
    j["min_samples_split"] = p.min_samples_split;
    j["min_samples_leaf"] = p.min_samples_leaf;
    switch (p.max_features.kind) {
        case MaxFeatures::Kind::all: j["max_features"] = "all"; break;
        case MaxFeatures::Kind::sqrt: j["max_features"] = "sqrt"; break;
        case MaxFeatures::Kind::log2: j["max_features"] = "log2"; break;
        case MaxFeatures::Kind::fraction:
            j["max_features"] = p.max_features.fraction;
            break;
    }
    j["splitter"] = p.splitter == Splitter::best ? "best" : "random";
    j["seed"] = p.seed;
    j["num_classes"] = p.num_classes;
    return j;
}

TreeParams tree_params_from_json(const Json& j) {
    TreeParams p;
    p.criterion = j.at("criterion") == "gini" ? Criterion::gini : Criterion::entropy;
    if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::int64_t>();
    p.min_samples_split = j.at("min_samples_split").get<std::int64_t>();
    p.min_samples_leaf = j.at("min_samples_leaf").get<std::int64_t>();
    const auto& mf = j.at("max_features");
    if (mf.is_number()) {
        p.max_features = MaxFeatures::frac(mf.get<double>());
    } else if (mf == "all") {
        p.max_features = MaxFeatures::all();
    } else if (mf == "sqrt") {
        p.max_features = MaxFeatures::sqrt();
    } else {
        p.max_features = MaxFeatures::log2();
    }
    p.splitter = j.at("splitter") == "best" ? Splitter::best : Splitter::random;
    p.seed = j.at("seed").get<std::uint64_t>();
    p.num_classes = j.at("num_classes").get<std::int32_t>();
    return p;
}

} // namespace

void save_chain(const TransformChain& chain, const std::string& path) {
    Json j;
    j["format"] = "ids-chain";
    j["version"] = kChainSchemaVersion;
    j["fingerprint"] = Json{{"train_rows", chain.train_rows},
                            {"feature_names", chain.feature_names},
                            {"target_column", chain.target_column},
                            {"content_hash", chain.content_hash}};
    j["settings"] = Json{{"oversample", chain.settings.oversample},
                         {"sfe", chain.settings.sfe},
                         {"sfe_embed_mode", to_string(chain.settings.sfe_cfg.embed_mode)},
                         {"pca", chain.settings.pca},
                         {"pca_k", chain.settings.pca_k}};
    j["scaler"] = scaler_to_json(chain.scaler);
    if (chain.sfe) {
        j["sfe"] = Json{{"embed_mode", to_string(chain.sfe->embed_mode)},
                        {"kmeans", kmeans_to_json(chain.sfe->kmeans)},
                        {"gmm", gmm_to_json(chain.sfe->gmm)},
                        {"meta_scaler", scaler_to_json(chain.sfe->meta_scaler)}};
    }
    if (chain.pca) j["pca"] = pca_to_json(*chain.pca);
    write_file(j, path);
}

TransformChain load_chain(const std::string& path) {
    const Json j = read_file(path);
    expect_format(j, "ids-chain", kChainSchemaVersion, path);
    TransformChain chain;
    chain.train_rows = j.at("fingerprint").at("train_rows").get<std::int64_t>();
    chain.feature_names =
        j.at("fingerprint").at("feature_names").get<std::vector<std::string>>();
    chain.target_column = j.at("fingerprint").at("target_column").get<std::string>();
    chain.content_hash = j.at("fingerprint").at("content_hash").get<std::uint64_t>();
    chain.settings.oversample = j.at("settings").at("oversample").get<bool>();
    chain.settings.sfe = j.at("settings").at("sfe").get<bool>();
    chain.settings.sfe_cfg.embed_mode =
        parse_embed_mode(j.at("settings").at("sfe_embed_mode").get<std::string>());
    chain.settings.pca = j.at("settings").at("pca").get<bool>();
    chain.settings.pca_k = j.at("settings").at("pca_k").get<std::int64_t>();
    chain.scaler = scaler_from_json(j.at("scaler"));
    if (j.contains("sfe")) {
        SfeModel sfe;
        sfe.embed_mode = parse_embed_mode(j.at("sfe").at("embed_mode").get<std::string>());
        sfe.kmeans = kmeans_from_json(j.at("sfe").at("kmeans"));
        sfe.gmm = gmm_from_json(j.at("sfe").at("gmm"));
        sfe.meta_scaler = scaler_from_json(j.at("sfe").at("meta_scaler"));
        chain.sfe = std::move(sfe);
    }
    if (j.contains("pca")) chain.pca = pca_from_json(j.at("pca"));
    // Stage widths must compose.
    if (chain.sfe) {
        if (chain.sfe->kmeans.dims != chain.scaler.dims())
            throw DataError(path + ": chain stage width mismatch (scaler -> sfe)");
    }
    if (chain.pca) {
        const std::int64_t expect =
            chain.scaler.dims() + (chain.sfe ? chain.sfe->meta_width() : 0);
        if (chain.pca->d_in != expect)
            throw DataError(path + ": chain stage width mismatch (-> pca)");
    }
    return chain;
}

void save_model(const TrainedModel& model, const std::string& path) {
    Json j;
    j["format"] = "ids-model";
    j["version"] = kModelSchemaVersion;
    j["kind"] = to_string(model.kind);
    j["labels"] = labels_to_json(model.labels);
    switch (model.kind) {
        case ModelKind::dt:
            j["tree"] = tree_to_json(*model.tree);
            break;
        case ModelKind::rf:
        case ModelKind::et: {
            const ForestModel& f = *model.forest;
            Json trees = Json::array();
            for (const Tree& t : f.trees) trees.push_back(tree_to_json(t));
            j["forest"] = Json{{"kind", f.kind == ForestKind::random_forest
                                            ? "random_forest"
                                            : "extra_trees"},
                               {"n_trees", f.n_trees},
                               {"bootstrap", f.bootstrap},
                               {"seed", f.seed},
                               {"params", tree_params_to_json(f.params)},
                               {"trees", trees}};
            break;
        }
        case ModelKind::gbt: {
            const GbtModel& g = *model.gbt;
            Json groups = Json::array();
            for (const auto& group : g.tree_groups) {
                Json trees = Json::array();
                for (const RegTree& t : group) trees.push_back(reg_tree_to_json(t));
                groups.push_back(trees);
            }
            j["gbt"] = Json{
                {"objective",
                 g.objective == GbtObjective::binary_logistic ? "binary_logistic" : "softmax"},
                {"num_classes", g.num_classes},
                {"num_features", g.num_features},
                {"n_rounds", g.params.n_rounds},
                {"learning_rate", std::bit_cast<std::uint64_t>(g.params.learning_rate)},
                {"gamma", std::bit_cast<std::uint64_t>(g.params.gamma)},
                {"lambda", std::bit_cast<std::uint64_t>(g.params.lambda)},
                {"max_depth", g.params.max_depth},
                {"seed", g.params.seed},
                {"base_scores", bits_f64(g.base_scores)},
                {"train_loss_trace", bits_f64(g.train_loss_trace)},
                {"tree_groups", groups}};
            break;
        }
    }
    write_file(j, path);
}

TrainedModel load_model(const std::string& path) {
    const Json j = read_file(path);
    expect_format(j, "ids-model", kModelSchemaVersion, path);
    TrainedModel model;
    model.kind = parse_model_kind(j.at("kind").get<std::string>());
    model.labels = labels_from_json(j.at("labels"));
    switch (model.kind) {
        case ModelKind::dt:
            model.tree = tree_from_json(j.at("tree"));
            break;
        case ModelKind::rf:
        case ModelKind::et: {
            ForestModel f;
            const Json& fj = j.at("forest");
            f.kind = fj.at("kind") == "random_forest" ? ForestKind::random_forest
                                                      : ForestKind::extra_trees;
            f.n_trees = fj.at("n_trees").get<std::int64_t>();
            f.bootstrap = fj.at("bootstrap").get<bool>();
            f.seed = fj.at("seed").get<std::uint64_t>();
            f.params = tree_params_from_json(fj.at("params"));
            for (const auto& t : fj.at("trees")) f.trees.push_back(tree_from_json(t));
            model.forest = std::move(f);
            break;
        }
        case ModelKind::gbt: {
            GbtModel g;
            const Json& gj = j.at("gbt");
            g.objective = gj.at("objective") == "binary_logistic"
                              ? GbtObjective::binary_logistic
                              : GbtObjective::softmax;
            g.num_classes = gj.at("num_classes").get<std::int32_t>();
            g.num_features = gj.at("num_features").get<std::int64_t>();
            g.params.n_rounds = gj.at("n_rounds").get<std::int64_t>();
            g.params.learning_rate =
                std::bit_cast<double>(gj.at("learning_rate").get<std::uint64_t>());
            g.params.gamma = std::bit_cast<double>(gj.at("gamma").get<std::uint64_t>());
            g.params.lambda = std::bit_cast<double>(gj.at("lambda").get<std::uint64_t>());
            g.params.max_depth = gj.at("max_depth").get<std::int64_t>();
            g.params.seed = gj.at("seed").get<std::uint64_t>();
            g.params.num_classes = g.num_classes;
            g.base_scores = from_bits_f64(gj.at("base_scores"));
            g.train_loss_trace = from_bits_f64(gj.at("train_loss_trace"));
            for (const auto& group : gj.at("tree_groups")) {
                std::vector<RegTree> trees;
                for (const auto& t : group) trees.push_back(reg_tree_from_json(t));
                g.tree_groups.push_back(std::move(trees));
            }
            model.gbt = std::move(g);
            break;
        }
    }
    return model;
}

namespace {

Json prf_to_json(const PrfResult& p) {
    Json j{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
    if (!p.zero_division_classes.empty())
        j["zero_division_classes"] = p.zero_division_classes;
    return j;
}

Json roc_to_json(const std::vector<RocPoint>& points, int max_points) {
    // Downsampled for the report (endpoints kept); AUC is computed on the
    // full curve before this step.
    Json arr = Json::array();
    const std::size_t n = points.size();
    if (n == 0) return arr;
    const std::size_t stride =
        n <= static_cast<std::size_t>(max_points) ? 1 : (n + max_points - 1) / max_points;
    for (std::size_t i = 0; i < n; i += stride) {
        arr.push_back(Json::array({points[i].fpr, points[i].tpr}));
    }
    if ((n - 1) % stride != 0)
        arr.push_back(Json::array({points[n - 1].fpr, points[n - 1].tpr}));
    return arr;
}

double json_safe(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

void save_report(const EvaluationReport& report, const std::string& path,
                 const std::string& dataset_name, int max_roc_points) {
    Json j;
    j["format"] = "ids-eval-report";
    j["version"] = kReportSchemaVersion;
    j["metadata"] = Json{
        {"dataset", dataset_name},
        {"seed", report.seed},
        {"leakage_mode", to_string(report.leakage_mode)},
        {"cv", Json{{"k", report.cv.k},
                    {"stratified", report.cv.stratified},
                    {"stable_timings", report.cv.stable_timings}}},
        {"transforms",
         Json{{"oversample", report.transforms.oversample},
              {"sfe", report.transforms.sfe},
              {"sfe_embed_mode", to_string(report.transforms.sfe_cfg.embed_mode)},
              {"sfe_k_kmeans", report.transforms.sfe_cfg.k_kmeans},
              {"sfe_k_gmm", report.transforms.sfe_cfg.k_gmm},
              {"pca", report.transforms.pca},
              {"pca_k", report.transforms.pca_k}}},
        {"classes", labels_to_json(report.labels)},
        {"input_rows", report.input_rows},
        {"evaluated_rows", report.evaluated_rows},
        {"input_width", report.input_width},
        {"transformed_width", report.transformed_width},
        {"reduction_ratio", report.reduction_ratio_value},
        {"explained_variance", report.explained_variance}};
    Json plans = Json::array();
    for (const auto& p : report.resample_plans)
        plans.push_back(Json{{"seed", p.seed},
                             {"appended_rows", p.appended_rows},
                             {"per_class_target", p.per_class_target}});
    j["metadata"]["resample_plans"] = plans;

    Json models = Json::array();
    for (const ModelEvaluation& ev : report.models) {
        Json m;
        m["model"] = ev.model_name;
        Json folds = Json::array();
        for (const FoldMetrics& f : ev.folds) {
            folds.push_back(Json{{"fold", f.fold},
                                 {"train_rows", f.train_rows},
                                 {"test_rows", f.test_rows},
                                 {"accuracy", f.accuracy},
                                 {"macro", prf_to_json(f.macro)},
                                 {"weighted", prf_to_json(f.weighted)},
                                 {"micro", prf_to_json(f.micro)},
                                 {"auc", json_safe(f.auc_value)},
                                 {"fit_ms", f.fit_ms},
                                 {"predict_ms", f.predict_ms}});
        }
        m["folds"] = folds;
        m["aggregate"] = Json{{"accuracy", ev.accuracy},
                              {"macro", prf_to_json(ev.macro)},
                              {"weighted", prf_to_json(ev.weighted)},
                              {"micro", prf_to_json(ev.micro)},
                              {"fit_ms_total", ev.fit_ms_total},
                              {"predict_ms_total", ev.predict_ms_total}};
        m["confusion_matrix"] = ev.cm_total.counts;
        if (!ev.roc_binary.empty()) {
            m["roc"] = Json{{"positive_class",
                             report.labels.code_to_class.size() > 1
                                 ? report.labels.code_to_class[1]
                                 : ""},
                            {"auc", ev.auc_binary},
                            {"points", roc_to_json(ev.roc_binary, max_roc_points)}};
        } else {
            Json per_class = Json::array();
            for (std::size_t c = 0; c < ev.roc_per_class.size(); ++c) {
                const double a = ev.mc_auc.per_class[c];
                per_class.push_back(
                    Json{{"class", report.labels.code_to_class[c]},
                         {"auc", json_safe(a)},
                         {"points", roc_to_json(ev.roc_per_class[c], max_roc_points)}});
            }
            m["roc"] = Json{{"macro_auc", json_safe(ev.mc_auc.macro)},
                            {"per_class", per_class}};
        }
        models.push_back(std::move(m));
    }
    j["models"] = models;
    write_file(j, path);
}

void save_provenance(const CleanTable& table, const std::string& path) {
    Json j;
    j["format"] = "ids-prep-provenance";
    j["version"] = 1;
    j["rows_in"] = table.provenance.rows_in;
    j["rows_out"] = table.features.rows();
    j["rows_dropped_nan_inf"] = table.provenance.rows_dropped_nan_inf;
    j["rows_dropped_duplicate"] = table.provenance.rows_dropped_duplicate;
    j["classes_merged"] = table.provenance.classes_merged;
    j["dropped_columns"] = table.provenance.dropped_columns;
    j["columns"] = table.column_names;
    j["target_column"] = table.column_names[table.label_index];
    Json hist = Json::array();
    for (const auto& [name, count] : class_histogram(table.label_column))
        hist.push_back(Json{{"class", name}, {"count", count}});
    j["class_histogram"] = hist;
    write_file(j, path);
}

std::string report_summary_table(const EvaluationReport& report) {
    // Layout mirrors the per-model metric tables in the run reports:
    // one row per model, weighted-average P/R/F1.
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-6s %10s %10s %10s %10s\n", "model",
                  "accuracy", "precision", "recall", "f1");
    out += buf;
    for (const ModelEvaluation& ev : report.models) {
        std::snprintf(buf, sizeof(buf), "%-6s %10.4f %10.4f %10.4f %10.4f\n",
                      ev.model_name.c_str(), ev.accuracy, ev.weighted.precision,
                      ev.weighted.recall, ev.weighted.f1);
        out += buf;
    }
    return out;
}

} // namespace ids
