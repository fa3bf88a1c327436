#include "ids/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ids/errors.hpp"
#include "ids/parallel.hpp"
#include "ids/tree.hpp"

namespace ids {

double gbt_leaf_weight(double g_sum, double h_sum, double lambda) {
    const double denom = h_sum + lambda;
    return denom > 0.0 ? -g_sum / denom : 0.0;
}

double gbt_split_gain(double g_left, double h_left, double g_right, double h_right,
                      double lambda, double gamma) {
    auto score = [&](double g, double h) {
        const double denom = h + lambda;
        return denom > 0.0 ? (g * g) / denom : 0.0;
    };
    return 0.5 * (score(g_left, h_left) + score(g_right, h_right) -
                  score(g_left + g_right, h_left + h_right)) -
           gamma;
}

double RegTree::predict(std::span<const float> row) const {
    std::int64_t id = 0;
    while (!nodes[static_cast<std::size_t>(id)].is_leaf()) {
        const RegNode& n = nodes[static_cast<std::size_t>(id)];
        id = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(id)].value;
}

namespace {

float split_threshold(float a, float b) {
    float thr = static_cast<float>((static_cast<double>(a) + static_cast<double>(b)) / 2.0);
    if (thr >= b) thr = a;
    if (thr < a) thr = a;
    return thr;
}

struct RegSplit {
    double gain = 0.0;
    std::int32_t feature = -1;
    float threshold = 0.0f;

    bool better_than(const RegSplit& other) const {
        if (gain != other.gain) return gain > other.gain;
        if (feature != other.feature) return feature < other.feature;
        return threshold < other.threshold;
    }
};

struct RegTask {
    std::int32_t node_id;
    std::vector<std::int64_t> rows;
    std::int64_t depth;
    double g_sum;
    double h_sum;
};

// One boosting stage: exact greedy growth on (g, h) maximizing the
// structure-score gain; only positive gains are kept.
RegTree grow_reg_tree(const Matrix& x, const std::vector<double>& g,
                      const std::vector<double>& h, const GbtParams& params) {
    const std::int64_t n = x.rows();
    const std::int64_t d = x.cols();

    RegTree tree;
    std::vector<RegTask> stack;
    {
        std::vector<std::int64_t> rows(static_cast<std::size_t>(n));
        std::iota(rows.begin(), rows.end(), 0);
        double gs = 0.0, hs = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            gs += g[static_cast<std::size_t>(i)];
            hs += h[static_cast<std::size_t>(i)];
        }
        tree.nodes.emplace_back();
        stack.push_back({0, std::move(rows), 0, gs, hs});
    }

    while (!stack.empty()) {
        RegTask task = std::move(stack.back());
        stack.pop_back();

        RegSplit best;
        if (task.depth < params.max_depth &&
            static_cast<std::int64_t>(task.rows.size()) >= 2) {
            std::vector<RegSplit> per_feature(static_cast<std::size_t>(d));
            parallel_for(d, [&](std::int64_t f) {
                std::vector<std::pair<float, std::int64_t>> vals;
                vals.reserve(task.rows.size());
                for (std::int64_t r : task.rows)
                    vals.emplace_back(x.at(r, f), r);
                std::sort(vals.begin(), vals.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });

                RegSplit fb;
                double gl = 0.0, hl = 0.0;
                const std::int64_t total = static_cast<std::int64_t>(vals.size());
                for (std::int64_t i = 0; i + 1 < total; ++i) {
                    const std::int64_t r = vals[static_cast<std::size_t>(i)].second;
                    gl += g[static_cast<std::size_t>(r)];
                    hl += h[static_cast<std::size_t>(r)];
                    const float a = vals[static_cast<std::size_t>(i)].first;
                    const float b = vals[static_cast<std::size_t>(i + 1)].first;
                    if (a == b) continue;
                    const double gain = gbt_split_gain(gl, hl, task.g_sum - gl,
                                                       task.h_sum - hl, params.lambda,
                                                       params.gamma);
                    if (gain > fb.gain) {
                        fb.gain = gain;
                        fb.feature = static_cast<std::int32_t>(f);
                        fb.threshold = split_threshold(a, b);
                    }
                }
                per_feature[static_cast<std::size_t>(f)] = fb;
            });
            for (const RegSplit& s : per_feature)
                if (s.feature >= 0 && s.better_than(best)) best = s;
        }

        if (best.feature < 0 || best.gain <= 0.0) {
            tree.nodes[static_cast<std::size_t>(task.node_id)].value =
                gbt_leaf_weight(task.g_sum, task.h_sum, params.lambda);
            continue;
        }

        std::vector<std::int64_t> left_rows, right_rows;
        double gl = 0.0, hl = 0.0;
        for (std::int64_t r : task.rows) {
            if (x.at(r, best.feature) <= best.threshold) {
                left_rows.push_back(r);
                gl += g[static_cast<std::size_t>(r)];
                hl += h[static_cast<std::size_t>(r)];
            } else {
                right_rows.push_back(r);
            }
        }
        check_invariant(!left_rows.empty() && !right_rows.empty(),
                        "gbt: degenerate split");

        const std::int32_t left_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        const std::int32_t right_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        RegNode& node = tree.nodes[static_cast<std::size_t>(task.node_id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = left_id;
        node.right = right_id;

        stack.push_back({right_id, std::move(right_rows), task.depth + 1,
                         task.g_sum - gl, task.h_sum - hl});
        stack.push_back({left_id, std::move(left_rows), task.depth + 1, gl, hl});
    }
    return tree;
}

void softmax_rows(const std::vector<double>& margins, std::int64_t n,
                  std::int32_t C, std::vector<double>& proba) {
    parallel_for(n, [&](std::int64_t i) {
        const double* m = margins.data() + i * C;
        double* p = proba.data() + i * C;
        double mx = m[0];
        for (std::int32_t c = 1; c < C; ++c) mx = std::max(mx, m[c]);
        double sum = 0.0;
        for (std::int32_t c = 0; c < C; ++c) {
            p[c] = std::exp(m[c] - mx);
            sum += p[c];
        }
        for (std::int32_t c = 0; c < C; ++c) p[c] /= sum;
    });
}

} // namespace

GbtModel gbt_fit(const Matrix& x, const LabelVector& y, const GbtParams& params_in) {
    const std::int64_t n = x.rows();
    require(n >= 2, "gbt_fit: need n >= 2");
    require(n == static_cast<std::int64_t>(y.size()), "gbt_fit: X/y length mismatch");
    require(params_in.learning_rate > 0.0 && params_in.learning_rate <= 1.0,
            "gbt_fit: learning_rate must be in (0, 1]");
    require(params_in.gamma >= 0.0 && params_in.lambda >= 0.0,
            "gbt_fit: gamma and lambda must be >= 0");

    GbtModel model;
    model.params = params_in;
    model.num_classes =
        params_in.num_classes > 0 ? params_in.num_classes : infer_num_classes(y);
    model.num_features = x.cols();
    require(model.num_classes >= 2, "gbt_fit: need >= 2 classes");
    {
        std::int64_t present = 0;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(model.num_classes), 0);
        for (std::int32_t v : y) ++counts[static_cast<std::size_t>(v)];
        for (std::int64_t c : counts)
            if (c > 0) ++present;
        require(present >= 2, "gbt_fit: single-class input");
    }
    const std::int32_t C = model.num_classes;
    const bool binary = C == 2;
    model.objective = binary ? GbtObjective::binary_logistic : GbtObjective::softmax;

    // Prior margins: binary log-odds of the positive class, per-class log
    // prior under softmax.
    std::vector<double> prior(static_cast<std::size_t>(C), 0.0);
    for (std::int32_t v : y) prior[static_cast<std::size_t>(v)] += 1.0;
    for (auto& p : prior) p /= static_cast<double>(n);
    if (binary) {
        const double p = std::clamp(prior[1], 1e-15, 1.0 - 1e-15);
        model.base_scores = {0.0, std::log(p / (1.0 - p))};
    } else {
        model.base_scores.resize(static_cast<std::size_t>(C));
        for (std::int32_t c = 0; c < C; ++c)
            model.base_scores[static_cast<std::size_t>(c)] =
                std::log(std::max(prior[static_cast<std::size_t>(c)], 1e-15));
    }

    const std::int32_t groups = binary ? 1 : C;
    // margins[i*C + c]; binary keeps the logit in column 1 and zero in 0.
    std::vector<double> margins(static_cast<std::size_t>(n * C), 0.0);
    parallel_for(n, [&](std::int64_t i) {
        for (std::int32_t c = 0; c < C; ++c)
            margins[static_cast<std::size_t>(i * C + c)] =
                model.base_scores[static_cast<std::size_t>(c)];
    });

    std::vector<double> proba(static_cast<std::size_t>(n * C), 0.0);
    std::vector<double> g(static_cast<std::size_t>(n), 0.0);
    std::vector<double> h(static_cast<std::size_t>(n), 0.0);

    for (std::int64_t round = 0; round < params_in.n_rounds; ++round) {
        softmax_rows(margins, n, C, proba);
        std::vector<RegTree> group;
        group.reserve(static_cast<std::size_t>(groups));
        for (std::int32_t cls = 0; cls < groups; ++cls) {
            const std::int32_t target = binary ? 1 : cls;
            parallel_for(n, [&](std::int64_t i) {
                const double p = proba[static_cast<std::size_t>(i * C + target)];
                const double label =
                    y[static_cast<std::size_t>(i)] == target ? 1.0 : 0.0;
                g[static_cast<std::size_t>(i)] = p - label;
                h[static_cast<std::size_t>(i)] = std::max(p * (1.0 - p), 1e-16);
            });
            RegTree tree = grow_reg_tree(x, g, h, params_in);
            parallel_for(n, [&](std::int64_t i) {
                margins[static_cast<std::size_t>(i * C + target)] +=
                    params_in.learning_rate * tree.predict(x.row(i));
            });
            group.push_back(std::move(tree));
        }
        model.tree_groups.push_back(std::move(group));

        // Mean cross-entropy at the new margins.
        softmax_rows(margins, n, C, proba);
        const double loss = chunked_sum(n, [&](std::int64_t i) {
            const double p = std::max(
                proba[static_cast<std::size_t>(i * C + y[static_cast<std::size_t>(i)])],
                1e-300);
            return -std::log(p);
        });
        model.train_loss_trace.push_back(loss / static_cast<double>(n));
    }
    return model;
}

Matrix gbt_margins(const GbtModel& m, const Matrix& x) {
    require(x.cols() == m.num_features, "gbt_margins: dimension mismatch");
    const std::int32_t C = m.num_classes;
    const bool binary = m.objective == GbtObjective::binary_logistic;
    Matrix out(x.rows(), C);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto row = x.row(i);
        for (std::int32_t c = 0; c < C; ++c)
            out.at(i, c) = static_cast<float>(m.base_scores[static_cast<std::size_t>(c)]);
        for (const auto& group : m.tree_groups) {
            for (std::size_t gi = 0; gi < group.size(); ++gi) {
                const std::int32_t target = binary ? 1 : static_cast<std::int32_t>(gi);
                out.at(i, target) += static_cast<float>(
                    m.params.learning_rate * group[gi].predict(row));
            }
        }
    });
    return out;
}

Matrix gbt_predict_proba(const GbtModel& m, const Matrix& x) {
    require(x.cols() == m.num_features, "gbt_predict_proba: dimension mismatch");
    const std::int32_t C = m.num_classes;
    const bool binary = m.objective == GbtObjective::binary_logistic;
    Matrix out(x.rows(), C);
    parallel_for(x.rows(), [&](std::int64_t i) {
        auto row = x.row(i);
        thread_local std::vector<double> margin;
        margin.assign(static_cast<std::size_t>(C), 0.0);
        for (std::int32_t c = 0; c < C; ++c)
            margin[static_cast<std::size_t>(c)] = m.base_scores[static_cast<std::size_t>(c)];
        for (const auto& group : m.tree_groups) {
            for (std::size_t gi = 0; gi < group.size(); ++gi) {
                const std::int32_t target = binary ? 1 : static_cast<std::int32_t>(gi);
                margin[static_cast<std::size_t>(target)] +=
                    m.params.learning_rate * group[gi].predict(row);
            }
        }
        double mx = margin[0];
        for (std::int32_t c = 1; c < C; ++c)
            mx = std::max(mx, margin[static_cast<std::size_t>(c)]);
        double sum = 0.0;
        thread_local std::vector<double> e;
        e.assign(static_cast<std::size_t>(C), 0.0);
        for (std::int32_t c = 0; c < C; ++c) {
            e[static_cast<std::size_t>(c)] = std::exp(margin[static_cast<std::size_t>(c)] - mx);
            sum += e[static_cast<std::size_t>(c)];
        }
        for (std::int32_t c = 0; c < C; ++c)
            out.at(i, c) = static_cast<float>(e[static_cast<std::size_t>(c)] / sum);
    });
    return out;
}

LabelVector gbt_predict(const GbtModel& m, const Matrix& x) {
    const Matrix proba = gbt_predict_proba(m, x);
    LabelVector out(static_cast<std::size_t>(x.rows()), 0);
    parallel_for(x.rows(), [&](std::int64_t i) {
        std::int32_t best = 0;
        float best_v = proba.at(i, 0);
        for (std::int64_t c = 1; c < proba.cols(); ++c) {
            if (proba.at(i, c) > best_v) {
                best_v = proba.at(i, c);
                best = static_cast<std::int32_t>(c);
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    });
    return out;
}

} // namespace ids
