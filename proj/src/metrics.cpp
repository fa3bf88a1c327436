#include "ids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ids/errors.hpp"

namespace ids {

std::int64_t ConfusionMatrix::total() const {
    std::int64_t s = 0;
    for (std::int64_t c : counts) s += c;
    return s;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t s = 0;
    for (std::int32_t c = 0; c < num_classes; ++c) s += at(c, c);
    return s;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
    check_invariant(num_classes == other.num_classes, "confusion: size mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

ConfusionMatrix confusion_matrix(const LabelVector& y_true, const LabelVector& y_pred,
                                 std::int32_t num_classes) {
    require(y_true.size() == y_pred.size(), "confusion_matrix: length mismatch");
    ConfusionMatrix cm;
    cm.num_classes = num_classes;
    cm.counts.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const std::int32_t a = y_true[i];
        const std::int32_t p = y_pred[i];
        require(a >= 0 && a < num_classes && p >= 0 && p < num_classes,
                "confusion_matrix: code out of range");
        ++cm.at(a, p);
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    require(total > 0, "accuracy: empty confusion matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

PrfResult precision_recall_f1(const ConfusionMatrix& cm, Averaging averaging) {
    const std::int32_t C = cm.num_classes;
    require(cm.total() > 0, "precision_recall_f1: empty confusion matrix");

    std::vector<std::int64_t> row_sum(static_cast<std::size_t>(C), 0);
    std::vector<std::int64_t> col_sum(static_cast<std::size_t>(C), 0);
    for (std::int32_t a = 0; a < C; ++a)
        for (std::int32_t p = 0; p < C; ++p) {
            row_sum[static_cast<std::size_t>(a)] += cm.at(a, p);
            col_sum[static_cast<std::size_t>(p)] += cm.at(a, p);
        }

    PrfResult out;
    if (averaging == Averaging::micro) {
        // Pooled one-vs-rest TP/FP/FN; for single-label classification this
        // collapses to trace/total for both precision and recall.
        const double tp = static_cast<double>(cm.trace());
        const double total = static_cast<double>(cm.total());
        out.precision = tp / total;
        out.recall = tp / total;
        out.f1 = out.precision + out.recall > 0.0
                     ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                     : 0.0;
        return out;
    }

    double sum_p = 0.0, sum_r = 0.0, sum_f = 0.0, weight_total = 0.0;
    std::int64_t present = 0;
    for (std::int32_t c = 0; c < C; ++c) {
        const std::int64_t support = row_sum[static_cast<std::size_t>(c)];
        if (support == 0 && averaging == Averaging::macro) continue;
        const double tp = static_cast<double>(cm.at(c, c));
        const double predicted = static_cast<double>(col_sum[static_cast<std::size_t>(c)]);
        double prec;
        if (predicted > 0.0) {
            prec = tp / predicted;
        } else {
            prec = 0.0;
            out.zero_division_classes.push_back(c);
        }
        const double rec = support > 0 ? tp / static_cast<double>(support) : 0.0;
        const double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        if (averaging == Averaging::macro) {
            sum_p += prec;
            sum_r += rec;
            sum_f += f1;
            ++present;
        } else { // weighted
            const double w = static_cast<double>(support);
            sum_p += w * prec;
            sum_r += w * rec;
            sum_f += w * f1;
            weight_total += w;
        }
    }
    if (averaging == Averaging::macro) {
        require(present > 0, "precision_recall_f1: no classes present");
        out.precision = sum_p / static_cast<double>(present);
        out.recall = sum_r / static_cast<double>(present);
        out.f1 = sum_f / static_cast<double>(present);
    } else {
        out.precision = sum_p / weight_total;
        out.recall = sum_r / weight_total;
        out.f1 = sum_f / weight_total;
    }
    return out;
}

std::vector<RocPoint> roc_curve(const std::vector<std::int8_t>& y_true,
                                const std::vector<double>& scores) {
    require(y_true.size() == scores.size(), "roc_curve: length mismatch");
    std::int64_t pos = 0, neg = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        require(std::isfinite(scores[i]), "roc_curve: non-finite score");
        if (y_true[i]) ++pos;
        else ++neg;
    }
    require(pos > 0 && neg > 0, "roc_curve: both classes must be present");

    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    std::vector<RocPoint> points;
    points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // Tied scores advance jointly: one step per distinct threshold.
        while (i < order.size() && scores[order[i]] == s) {
            if (y_true[order[i]]) ++tp;
            else ++fp;
            ++i;
        }
        points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos), s});
    }
    return points;
}

double auc(const std::vector<std::int8_t>& y_true, const std::vector<double>& scores) {
    const auto points = roc_curve(y_true, scores);
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) *
                (points[i].tpr + points[i - 1].tpr) / 2.0;
    }
    return area;
}

MulticlassAuc multiclass_auc(const LabelVector& y_true, const Matrix& proba) {
    const std::int32_t C = static_cast<std::int32_t>(proba.cols());
    require(!y_true.empty(), "multiclass_auc: empty input");
    require(y_true.size() == static_cast<std::size_t>(proba.rows()),
            "multiclass_auc: length mismatch");

    std::vector<std::int64_t> support(static_cast<std::size_t>(C), 0);
    for (std::int32_t v : y_true) ++support[static_cast<std::size_t>(v)];
    std::int64_t present = 0;
    for (std::int64_t s : support)
        if (s > 0) ++present;
    require(present >= 2, "multiclass_auc: need >= 2 classes present");

    MulticlassAuc out;
    out.per_class.assign(static_cast<std::size_t>(C),
                         std::numeric_limits<double>::quiet_NaN());
    double sum = 0.0;
    for (std::int32_t c = 0; c < C; ++c) {
        if (support[static_cast<std::size_t>(c)] == 0 ||
            support[static_cast<std::size_t>(c)] == static_cast<std::int64_t>(y_true.size()))
            continue;
        std::vector<std::int8_t> ovr(y_true.size());
        std::vector<double> scores(y_true.size());
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            ovr[i] = y_true[i] == c ? 1 : 0;
            scores[i] = static_cast<double>(proba.at(static_cast<std::int64_t>(i), c));
        }
        const double a = auc(ovr, scores);
        out.per_class[static_cast<std::size_t>(c)] = a;
        sum += a;
    }
    out.macro = sum / static_cast<double>(present);
    return out;
}

} // namespace ids
