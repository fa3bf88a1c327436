#include "ids/cross_validate.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ids/errors.hpp"
#include "ids/log.hpp"
#include "ids/pca.hpp"
#include "ids/rng.hpp"

namespace ids {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

FoldMetrics fold_metrics_from(const ConfusionMatrix& cm, std::int32_t fold,
                              std::int64_t train_rows, std::int64_t test_rows) {
    FoldMetrics fm;
    fm.fold = fold;
    fm.train_rows = train_rows;
    fm.test_rows = test_rows;
    fm.accuracy = accuracy(cm);
    fm.macro = precision_recall_f1(cm, Averaging::macro);
    fm.weighted = precision_recall_f1(cm, Averaging::weighted);
    fm.micro = precision_recall_f1(cm, Averaging::micro);
    return fm;
}

double fold_auc(const LabelVector& y_test, const Matrix& proba) {
    const std::int32_t C = static_cast<std::int32_t>(proba.cols());
    std::vector<std::int64_t> support(static_cast<std::size_t>(C), 0);
    for (std::int32_t v : y_test) ++support[static_cast<std::size_t>(v)];
    std::int64_t present = 0;
    for (std::int64_t s : support)
        if (s > 0) ++present;
    if (present < 2) return std::numeric_limits<double>::quiet_NaN();
    if (C == 2) {
        std::vector<std::int8_t> pos(y_test.size());
        std::vector<double> scores(y_test.size());
        for (std::size_t i = 0; i < y_test.size(); ++i) {
            pos[i] = y_test[i] == 1 ? 1 : 0;
            scores[i] = proba.at(static_cast<std::int64_t>(i), 1);
        }
        return auc(pos, scores);
    }
    return multiclass_auc(y_test, proba).macro;
}

} // namespace

LeakageMode parse_leakage_mode(const std::string& s) {
    if (s == "faithful") return LeakageMode::faithful;
    if (s == "strict") return LeakageMode::strict;
    throw ConfigError("unknown leakage mode \"" + s + "\" (faithful|strict)");
}

std::string to_string(LeakageMode m) {
    return m == LeakageMode::faithful ? "faithful" : "strict";
}

EvaluationReport cross_validate(const std::vector<ModelSpec>& models,
                                const Matrix& x, const LabelVector& y,
                                const LabelMap& labels,
                                const TransformSettings& transforms,
                                const CvSettings& cv, LeakageMode mode,
                                std::uint64_t seed) {
    require(!models.empty(), "cross_validate: no models");
    require(cv.k >= 2, "cross_validate: cv.k must be >= 2");

    EvaluationReport report;
    report.seed = seed;
    report.leakage_mode = mode;
    report.transforms = transforms;
    report.cv = cv;
    report.labels = labels;
    report.input_rows = x.rows();
    report.input_width = x.cols();

    const std::int32_t C = labels.num_classes();
    const std::uint64_t fold_seed = Rng::stream(seed, 0xcfu).next_u64();

    struct FoldData {
        Matrix x_train, x_test;
        LabelVector y_train, y_test;
    };

    // Assemble per-fold train/test matrices once; every model sees the same
    // folds and transformed features.
    std::vector<FoldData> fold_data;
    FoldPlan plan;

    if (mode == LeakageMode::faithful) {
        FitChainResult fitted =
            fit_chain(x, y, transforms, Rng::stream(seed, 0xc4a17u).next_u64(), C);
        report.evaluated_rows = fitted.x.rows();
        report.transformed_width = fitted.x.cols();
        if (fitted.chain.pca) {
            report.reduction_ratio_value = reduction_ratio(*fitted.chain.pca);
            report.explained_variance = explained_variance_ratio(*fitted.chain.pca);
        }
        if (fitted.resample_plan) {
            report.resample_plans.push_back(
                {fitted.resample_plan->seed,
                 static_cast<std::int64_t>(fitted.resample_plan->source_indices.size()),
                 fitted.resample_plan->per_class_target.empty()
                     ? 0
                     : fitted.resample_plan->per_class_target.begin()->second});
        }
        plan = make_folds(fitted.y, cv.k, cv.stratified, fold_seed);
        for (std::int32_t f = 0; f < cv.k; ++f) {
            FoldData fd;
            const auto train_idx = plan.train_indices(f);
            const auto test_idx = plan.test_indices(f);
            fd.x_train = fitted.x.take_rows(train_idx);
            fd.x_test = fitted.x.take_rows(test_idx);
            for (std::int64_t i : train_idx) fd.y_train.push_back(fitted.y[static_cast<std::size_t>(i)]);
            for (std::int64_t i : test_idx) fd.y_test.push_back(fitted.y[static_cast<std::size_t>(i)]);
            fold_data.push_back(std::move(fd));
        }
    } else {
        report.evaluated_rows = x.rows();
        plan = make_folds(y, cv.k, cv.stratified, fold_seed);
        for (std::int32_t f = 0; f < cv.k; ++f) {
            const auto train_idx = plan.train_indices(f);
            const auto test_idx = plan.test_indices(f);
            Matrix x_train_raw = x.take_rows(train_idx);
            LabelVector y_train;
            for (std::int64_t i : train_idx) y_train.push_back(y[static_cast<std::size_t>(i)]);

            FitChainResult fitted = fit_chain(
                x_train_raw, y_train, transforms,
                Rng::stream(seed, 0xc4a17u, static_cast<std::uint64_t>(f)).next_u64(), C);
            FoldData fd;
            fd.x_train = std::move(fitted.x);
            fd.y_train = std::move(fitted.y);
            fd.x_test = apply_chain(fitted.chain, x.take_rows(test_idx));
            for (std::int64_t i : test_idx) fd.y_test.push_back(y[static_cast<std::size_t>(i)]);
            if (fitted.resample_plan) {
                report.resample_plans.push_back(
                    {fitted.resample_plan->seed,
                     static_cast<std::int64_t>(fitted.resample_plan->source_indices.size()),
                     fitted.resample_plan->per_class_target.empty()
                         ? 0
                         : fitted.resample_plan->per_class_target.begin()->second});
            }
            if (f == 0) {
                report.transformed_width = fd.x_train.cols();
                if (fitted.chain.pca) {
                    report.reduction_ratio_value = reduction_ratio(*fitted.chain.pca);
                    report.explained_variance = explained_variance_ratio(*fitted.chain.pca);
                }
            }
            fold_data.push_back(std::move(fd));
        }
    }

    const std::int64_t total_rows = report.evaluated_rows;

    for (const ModelSpec& spec : models) {
        ModelEvaluation ev;
        ev.model_name = to_string(spec.kind);
        ev.cm_total.num_classes = C;
        ev.cm_total.counts.assign(static_cast<std::size_t>(C) * C, 0);

        // Pooled out-of-fold probabilities in original row order.
        Matrix pooled_proba(total_rows, C);
        LabelVector pooled_true(static_cast<std::size_t>(total_rows), 0);
        std::int64_t pooled_at = 0;

        for (std::int32_t f = 0; f < cv.k; ++f) {
            const FoldData& fd = fold_data[static_cast<std::size_t>(f)];
            const std::uint64_t model_seed =
                Rng::stream(seed, 0x33d31u, static_cast<std::uint64_t>(f)).next_u64();

            const auto t0 = Clock::now();
            TrainedModel model = train_model(spec, fd.x_train, fd.y_train, labels, model_seed);
            const double fit_ms = elapsed_ms(t0);

            const auto t1 = Clock::now();
            Matrix proba = model_predict_proba(model, fd.x_test);
            const double predict_ms = elapsed_ms(t1);

            LabelVector pred(static_cast<std::size_t>(proba.rows()), 0);
            for (std::int64_t i = 0; i < proba.rows(); ++i) {
                std::int32_t best = 0;
                float best_v = proba.at(i, 0);
                for (std::int64_t c = 1; c < C; ++c) {
                    if (proba.at(i, c) > best_v) {
                        best_v = proba.at(i, c);
                        best = static_cast<std::int32_t>(c);
                    }
                }
                pred[static_cast<std::size_t>(i)] = best;
            }

            const ConfusionMatrix cm = confusion_matrix(fd.y_test, pred, C);
            ev.cm_total.add(cm);
            FoldMetrics fm = fold_metrics_from(cm, f, fd.x_train.rows(), fd.x_test.rows());
            fm.auc_value = fold_auc(fd.y_test, proba);
            fm.fit_ms = cv.stable_timings ? 0.0 : fit_ms;
            fm.predict_ms = cv.stable_timings ? 0.0 : predict_ms;
            ev.folds.push_back(fm);
            ev.fit_ms_total += fm.fit_ms;
            ev.predict_ms_total += fm.predict_ms;

            for (std::int64_t i = 0; i < proba.rows(); ++i) {
                pooled_true[static_cast<std::size_t>(pooled_at)] =
                    fd.y_test[static_cast<std::size_t>(i)];
                for (std::int32_t c = 0; c < C; ++c)
                    pooled_proba.at(pooled_at, c) = proba.at(i, c);
                ++pooled_at;
            }
        }
        check_invariant(pooled_at == total_rows, "cross_validate: pooled row count");

        ev.accuracy = accuracy(ev.cm_total);
        ev.macro = precision_recall_f1(ev.cm_total, Averaging::macro);
        ev.weighted = precision_recall_f1(ev.cm_total, Averaging::weighted);
        ev.micro = precision_recall_f1(ev.cm_total, Averaging::micro);

        if (C == 2) {
            std::vector<std::int8_t> pos(pooled_true.size());
            std::vector<double> scores(pooled_true.size());
            for (std::size_t i = 0; i < pooled_true.size(); ++i) {
                pos[i] = pooled_true[i] == 1 ? 1 : 0;
                scores[i] = pooled_proba.at(static_cast<std::int64_t>(i), 1);
            }
            ev.roc_binary = roc_curve(pos, scores);
            ev.auc_binary = auc(pos, scores);
        } else {
            ev.mc_auc = multiclass_auc(pooled_true, pooled_proba);
            ev.roc_per_class.resize(static_cast<std::size_t>(C));
            for (std::int32_t c = 0; c < C; ++c) {
                if (std::isnan(ev.mc_auc.per_class[static_cast<std::size_t>(c)])) continue;
                std::vector<std::int8_t> ovr(pooled_true.size());
                std::vector<double> scores(pooled_true.size());
                for (std::size_t i = 0; i < pooled_true.size(); ++i) {
                    ovr[i] = pooled_true[i] == c ? 1 : 0;
                    scores[i] = pooled_proba.at(static_cast<std::int64_t>(i), c);
                }
                ev.roc_per_class[static_cast<std::size_t>(c)] = roc_curve(ovr, scores);
            }
        }
        report.models.push_back(std::move(ev));
        log::info("cv: " + to_string(spec.kind) + " accuracy " +
                  std::to_string(report.models.back().accuracy));
    }
    return report;
}

} // namespace ids
