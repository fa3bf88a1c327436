#include "ids/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ids/errors.hpp"
#include "ids/parallel.hpp"
#include "ids/rng.hpp"

namespace ids {

double gini(std::span<const double> class_counts) {
    double total = 0.0;
    for (double c : class_counts) {
        require(c >= 0.0, "gini: negative count");
        total += c;
    }
    require(total > 0.0, "gini: all-zero counts");
    double s = 0.0;
    for (double c : class_counts) {
        const double p = c / total;
        s += p * p;
    }
    return 1.0 - s;
}

double entropy(std::span<const double> class_counts) {
    double total = 0.0;
    for (double c : class_counts) {
        require(c >= 0.0, "entropy: negative count");
        total += c;
    }
    require(total > 0.0, "entropy: all-zero counts");
    double s = 0.0;
    for (double c : class_counts) {
        if (c <= 0.0) continue; // 0 * log 0 := 0
        const double p = c / total;
        s -= p * std::log2(p);
    }
    return s;
}

double info_gain(std::span<const double> parent_counts,
                 const std::vector<std::vector<double>>& children_counts) {
    double parent_total = 0.0;
    for (double c : parent_counts) parent_total += c;
    require(parent_total > 0.0, "info_gain: empty parent");
    double weighted = 0.0;
    for (const auto& child : children_counts) {
        double child_total = 0.0;
        for (double c : child) child_total += c;
        if (child_total == 0.0) continue;
        weighted += (child_total / parent_total) *
                    entropy(std::span<const double>(child.data(), child.size()));
    }
    return entropy(parent_counts) - weighted;
}

std::int32_t infer_num_classes(const LabelVector& y) {
    std::int32_t c = 0;
    for (std::int32_t v : y) {
        require(v >= 0, "labels must be non-negative codes");
        c = std::max(c, v + 1);
    }
    return c;
}

std::int64_t MaxFeatures::resolve(std::int64_t d) const {
    std::int64_t m = d;
    switch (kind) {
        case Kind::all: m = d; break;
        case Kind::sqrt: m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(d)))); break;
        case Kind::log2: m = static_cast<std::int64_t>(std::floor(std::log2(static_cast<double>(d)))); break;
        case Kind::fraction: m = static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(d))); break;
    }
    return std::clamp<std::int64_t>(m, 1, d);
}

namespace {

double impurity(Criterion crit, std::span<const double> counts) {
    return crit == Criterion::gini ? gini(counts) : entropy(counts);
}

struct SplitChoice {
    double gain = -std::numeric_limits<double>::infinity();
    std::int32_t feature = -1;
    float threshold = 0.0f;

    bool better_than(const SplitChoice& other) const {
        if (gain != other.gain) return gain > other.gain;
        if (feature != other.feature) return feature < other.feature;
        return threshold < other.threshold;
    }
};

// Midpoint between two consecutive distinct float values, nudged so that
// a <= thr < b holds after the float round (routing is x <= thr -> left).
float split_threshold(float a, float b) {
    float thr = static_cast<float>((static_cast<double>(a) + static_cast<double>(b)) / 2.0);
    if (thr >= b) thr = a;
    if (thr < a) thr = a;
    return thr;
}

struct NodeTask {
    std::int32_t node_id;
    std::vector<std::int64_t> rows;
    std::int64_t depth;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const LabelVector& y, const TreeParams& p,
                std::uint64_t tree_index)
        : x_(x), y_(y), params_(p), tree_index_(tree_index) {
        tree_.num_classes = p.num_classes > 0 ? p.num_classes : infer_num_classes(y);
        tree_.num_features = x.cols();
    }

    Tree build(std::vector<std::int64_t> rows) {
        const std::int64_t d = x_.cols();
        max_candidates_ = params_.max_features.resolve(d);

        std::vector<NodeTask> stack;
        tree_.nodes.emplace_back();
        stack.push_back({0, std::move(rows), 0});

        while (!stack.empty()) {
            NodeTask task = std::move(stack.back());
            stack.pop_back();

            std::vector<double> counts = class_counts(task.rows);
            SplitChoice choice;
            if (should_try_split(task, counts))
                choice = find_best_split(task, counts);

            // A boundary with zero impurity decrease is still taken (the
            // children may split cleanly later, as in XOR); a node becomes a
            // leaf only when no valid boundary exists at all.
            if (choice.feature < 0) {
                make_leaf(task.node_id, counts);
                continue;
            }

            std::vector<std::int64_t> left_rows, right_rows;
            left_rows.reserve(task.rows.size());
            right_rows.reserve(task.rows.size());
            for (std::int64_t r : task.rows) {
                if (x_.at(r, choice.feature) <= choice.threshold)
                    left_rows.push_back(r);
                else
                    right_rows.push_back(r);
            }
            check_invariant(!left_rows.empty() && !right_rows.empty(),
                            "dt_fit: degenerate split");

            const std::int32_t left_id = static_cast<std::int32_t>(tree_.nodes.size());
            tree_.nodes.emplace_back();
            const std::int32_t right_id = static_cast<std::int32_t>(tree_.nodes.size());
            tree_.nodes.emplace_back();

            TreeNode& node = tree_.nodes[static_cast<std::size_t>(task.node_id)];
            node.feature = choice.feature;
            node.threshold = choice.threshold;
            node.left = left_id;
            node.right = right_id;

            // Right pushed first so the left child is processed (and its
            // subtree numbered) before the right subtree.
            stack.push_back({right_id, std::move(right_rows), task.depth + 1});
            stack.push_back({left_id, std::move(left_rows), task.depth + 1});
        }
        return std::move(tree_);
    }

private:
    std::vector<double> class_counts(const std::vector<std::int64_t>& rows) const {
        std::vector<double> counts(static_cast<std::size_t>(tree_.num_classes), 0.0);
        for (std::int64_t r : rows) ++counts[static_cast<std::size_t>(y_[static_cast<std::size_t>(r)])];
        return counts;
    }

    bool should_try_split(const NodeTask& task, const std::vector<double>& counts) const {
        const std::int64_t n = static_cast<std::int64_t>(task.rows.size());
        if (n < params_.min_samples_split) return false;
        if (n < 2 * params_.min_samples_leaf) return false;
        if (params_.max_depth && task.depth >= *params_.max_depth) return false;
        std::int64_t present = 0;
        for (double c : counts)
            if (c > 0.0) ++present;
        return present > 1; // pure node
    }

    std::vector<std::int32_t> sample_candidates(Rng& rng) const {
        const std::int64_t d = x_.cols();
        if (max_candidates_ >= d) {
            std::vector<std::int32_t> all(static_cast<std::size_t>(d));
            std::iota(all.begin(), all.end(), 0);
            return all;
        }
        // Partial Fisher-Yates, then sorted so tie-breaking by feature index
        // is independent of the draw order.
        std::vector<std::int32_t> perm(static_cast<std::size_t>(d));
        std::iota(perm.begin(), perm.end(), 0);
        for (std::int64_t i = 0; i < max_candidates_; ++i) {
            const std::uint64_t j =
                i + rng.uniform_index(static_cast<std::uint64_t>(d - i));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        std::vector<std::int32_t> out(perm.begin(), perm.begin() + max_candidates_);
        std::sort(out.begin(), out.end());
        return out;
    }

    SplitChoice find_best_split(const NodeTask& task, const std::vector<double>& counts) {
        Rng rng = Rng::stream(params_.seed, tree_index_,
                              static_cast<std::uint64_t>(task.node_id));
        const std::vector<std::int32_t> candidates = sample_candidates(rng);
        const double parent_imp = impurity(params_.criterion, counts);
        const double n = static_cast<double>(task.rows.size());

        // Random-splitter thresholds are drawn from the node stream per
        // candidate up front, in candidate order, so the evaluation below
        // may run feature-parallel without touching shared state.
        std::vector<double> uniforms;
        if (params_.splitter == Splitter::random) {
            uniforms.resize(candidates.size());
            for (auto& u : uniforms) u = rng.next_double();
        }

        std::vector<SplitChoice> per_candidate(candidates.size());
        parallel_for(static_cast<std::int64_t>(candidates.size()), [&](std::int64_t ci) {
            const std::int32_t f = candidates[static_cast<std::size_t>(ci)];
            SplitChoice best;
            if (params_.splitter == Splitter::best) {
                best = best_split_on_feature(task.rows, f, counts, parent_imp, n);
            } else {
                best = random_split_on_feature(task.rows, f, counts, parent_imp, n,
                                               uniforms[static_cast<std::size_t>(ci)]);
            }
            per_candidate[static_cast<std::size_t>(ci)] = best;
        });

        SplitChoice best;
        for (const SplitChoice& c : per_candidate)
            if (c.feature >= 0 && c.better_than(best)) best = c;
        return best;
    }

    SplitChoice best_split_on_feature(const std::vector<std::int64_t>& rows,
                                      std::int32_t f,
                                      const std::vector<double>& counts,
                                      double parent_imp, double n) {
        const std::size_t C = counts.size();
        std::vector<std::pair<float, std::int32_t>> vals;
        vals.reserve(rows.size());
        for (std::int64_t r : rows)
            vals.emplace_back(x_.at(r, f), y_[static_cast<std::size_t>(r)]);
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        SplitChoice best;
        std::vector<double> left(C, 0.0);
        std::vector<double> right(counts);
        std::int64_t nl = 0;
        const std::int64_t total = static_cast<std::int64_t>(vals.size());

        for (std::int64_t i = 0; i + 1 < total; ++i) {
            ++left[static_cast<std::size_t>(vals[static_cast<std::size_t>(i)].second)];
            --right[static_cast<std::size_t>(vals[static_cast<std::size_t>(i)].second)];
            ++nl;
            const float a = vals[static_cast<std::size_t>(i)].first;
            const float b = vals[static_cast<std::size_t>(i + 1)].first;
            if (a == b) continue; // only boundaries between distinct values
            const std::int64_t nr = total - nl;
            if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) continue;
            const double gain =
                parent_imp - (static_cast<double>(nl) / n) * impurity(params_.criterion, left) -
                (static_cast<double>(nr) / n) * impurity(params_.criterion, right);
            if (gain > best.gain) {
                best.gain = gain;
                best.feature = f;
                best.threshold = split_threshold(a, b);
            }
        }
        return best;
    }

    SplitChoice random_split_on_feature(const std::vector<std::int64_t>& rows,
                                        std::int32_t f,
                                        const std::vector<double>& counts,
                                        double parent_imp, double n, double u) {
        float lo = std::numeric_limits<float>::infinity();
        float hi = -std::numeric_limits<float>::infinity();
        for (std::int64_t r : rows) {
            const float v = x_.at(r, f);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        SplitChoice out;
        if (!(lo < hi)) return out; // constant feature at this node

        float thr = static_cast<float>(static_cast<double>(lo) +
                                       u * (static_cast<double>(hi) - static_cast<double>(lo)));
        if (thr >= hi) thr = std::nextafter(hi, lo);
        if (thr < lo) thr = lo;

        const std::size_t C = counts.size();
        std::vector<double> left(C, 0.0);
        std::int64_t nl = 0;
        for (std::int64_t r : rows) {
            if (x_.at(r, f) <= thr) {
                ++left[static_cast<std::size_t>(y_[static_cast<std::size_t>(r)])];
                ++nl;
            }
        }
        const std::int64_t nr = static_cast<std::int64_t>(rows.size()) - nl;
        if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) return out;
        std::vector<double> right(C);
        for (std::size_t c = 0; c < C; ++c) right[c] = counts[c] - left[c];
        out.gain = parent_imp -
                   (static_cast<double>(nl) / n) * impurity(params_.criterion, left) -
                   (static_cast<double>(nr) / n) * impurity(params_.criterion, right);
        out.feature = f;
        out.threshold = thr;
        return out;
    }

    void make_leaf(std::int32_t node_id, const std::vector<double>& counts) {
        TreeNode& node = tree_.nodes[static_cast<std::size_t>(node_id)];
        node.feature = -1;
        node.counts_offset = static_cast<std::int64_t>(tree_.leaf_counts.size());
        tree_.leaf_counts.insert(tree_.leaf_counts.end(), counts.begin(), counts.end());
    }

    const Matrix& x_;
    const LabelVector& y_;
    const TreeParams& params_;
    std::uint64_t tree_index_;
    std::int64_t max_candidates_ = 0;
    Tree tree_;
};

} // namespace

Tree dt_fit(const Matrix& x, const LabelVector& y, const TreeParams& params,
            std::uint64_t tree_index, const std::vector<std::int64_t>* row_subset) {
    require(x.rows() >= 1, "dt_fit: empty data");
    require(x.rows() == static_cast<std::int64_t>(y.size()), "dt_fit: X/y length mismatch");
    require(params.min_samples_split >= 2, "dt_fit: min_samples_split must be >= 2");
    require(params.min_samples_leaf >= 1, "dt_fit: min_samples_leaf must be >= 1");

    std::vector<std::int64_t> rows;
    if (row_subset) {
        require(!row_subset->empty(), "dt_fit: empty row subset");
        rows = *row_subset;
    } else {
        rows.resize(static_cast<std::size_t>(x.rows()));
        std::iota(rows.begin(), rows.end(), 0);
    }
    TreeBuilder builder(x, y, params, tree_index);
    return builder.build(std::move(rows));
}

std::int64_t Tree::leaf_for(std::span<const float> row) const {
    std::int64_t id = 0;
    while (!nodes[static_cast<std::size_t>(id)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        id = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return id;
}

std::int64_t Tree::depth() const {
    // Iterative depth over the flat layout.
    std::vector<std::pair<std::int64_t, std::int64_t>> stack{{0, 0}};
    std::int64_t best = 0;
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        best = std::max(best, depth);
        const TreeNode& n = nodes[static_cast<std::size_t>(id)];
        if (!n.is_leaf()) {
            stack.push_back({n.left, depth + 1});
            stack.push_back({n.right, depth + 1});
        }
    }
    return best;
}

Matrix tree_predict_proba(const Tree& t, const Matrix& x) {
    require(x.cols() == t.num_features, "tree_predict_proba: dimension mismatch");
    const std::int32_t C = t.num_classes;
    Matrix out(x.rows(), C);
    parallel_for(x.rows(), [&](std::int64_t i) {
        const std::int64_t leaf = t.leaf_for(x.row(i));
        auto counts = t.counts_at(t.nodes[static_cast<std::size_t>(leaf)]);
        double total = 0.0;
        for (double c : counts) total += c;
        for (std::int32_t c = 0; c < C; ++c)
            out.at(i, c) = static_cast<float>(counts[static_cast<std::size_t>(c)] / total);
    });
    return out;
}

LabelVector tree_predict(const Tree& t, const Matrix& x) {
    require(x.cols() == t.num_features, "tree_predict: dimension mismatch");
    LabelVector out(static_cast<std::size_t>(x.rows()), 0);
    parallel_for(x.rows(), [&](std::int64_t i) {
        const std::int64_t leaf = t.leaf_for(x.row(i));
        auto counts = t.counts_at(t.nodes[static_cast<std::size_t>(leaf)]);
        std::int32_t best = 0;
        double best_v = counts[0];
        for (std::int32_t c = 1; c < t.num_classes; ++c) {
            if (counts[static_cast<std::size_t>(c)] > best_v) {
                best_v = counts[static_cast<std::size_t>(c)];
                best = c;
            }
        }
        out[static_cast<std::size_t>(i)] = best;
    });
    return out;
}

} // namespace ids
