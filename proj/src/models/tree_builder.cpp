#include "tree_builder.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace modeswitch {

std::size_t Tree::n_leaves() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    // Children are always stored after their parent.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
            level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
        }
    }
    return deepest;
}

namespace detail {

PresortedData::PresortedData(const Dataset& data)
    : n_rows(data.n_rows()), n_features(data.n_features()), columns(n_features),
      sorted_rows(n_features) {
    for (std::size_t f = 0; f < n_features; ++f) {
        columns[f] = data.column(f);
        auto& order = sorted_rows[f];
        order.resize(n_rows);
        std::iota(order.begin(), order.end(), std::uint32_t{0});
        const auto& col = columns[f];
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
}

std::vector<std::uint32_t> bootstrap_counts(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> counts(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[rng.uniform_index(n)];
    return counts;
}

TreeGrower::TreeGrower(const PresortedData& data)
    : data_(data), order_(data.n_features), goes_left_(data.n_rows, 0),
      feature_pool_(data.n_features), row_leaf_(data.n_rows, -1) {}

namespace {

double gini_mass(double n, double ones) { return n > 0.0 ? 2.0 * ones * (n - ones) / n : 0.0; }

} // namespace

TreeGrower::Split TreeGrower::best_split(std::size_t lo, std::size_t hi, double n, double sum,
                                         const GrowOptions& options, Rng* rng) {
    Split best;
    const double min_leaf = options.min_obs_leaf;
    if (n < 2.0 * min_leaf) return best;
    const bool gini = options.criterion == SplitCriterion::gini;
    if (gini && (sum == 0.0 || sum == n)) return best;

    const int p = static_cast<int>(data_.n_features);
    std::span<const int> candidates;
    if (options.mtry > 0 && options.mtry < p) {
        if (rng == nullptr) throw std::logic_error("feature subsampling needs a random stream");
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        for (int j = 0; j < options.mtry; ++j) {
            const auto pick = j + static_cast<int>(rng->uniform_index(static_cast<std::size_t>(p - j)));
            std::swap(feature_pool_[static_cast<std::size_t>(j)], feature_pool_[static_cast<std::size_t>(pick)]);
        }
        std::sort(feature_pool_.begin(), feature_pool_.begin() + options.mtry);
        candidates = std::span<const int>(feature_pool_.data(), static_cast<std::size_t>(options.mtry));
    } else {
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        candidates = feature_pool_;
    }

    const double parent = gini ? gini_mass(n, sum) : sum * sum / n;
    const double min_gain = 1e-12 * n;
    best.gain = min_gain;

    for (const int f : candidates) {
        const auto& col = data_.columns[static_cast<std::size_t>(f)];
        const std::uint32_t* ord = order_[static_cast<std::size_t>(f)].data();
        if (col[ord[lo]] == col[ord[hi - 1]]) continue;
        double n_left = 0.0, s_left = 0.0;
        for (std::size_t j = lo; j + 1 < hi; ++j) {
            const std::uint32_t r = ord[j];
            n_left += 1.0;
            s_left += target_[r];
            const double x = col[r], x_next = col[ord[j + 1]];
            if (x == x_next || n_left < min_leaf) continue;
            const double n_right = n - n_left;
            if (n_right < min_leaf) break;
            const double s_right = sum - s_left;
            const double gain = gini ? parent - gini_mass(n_left, s_left) - gini_mass(n_right, s_right)
                                     : s_left * s_left / n_left + s_right * s_right / n_right - parent;
            if (gain > best.gain) {
                double threshold = x + 0.5 * (x_next - x);
                if (!(threshold > x)) threshold = x_next;
                best = Split{f, threshold, gain, j + 1 - lo};
            }
        }
    }
    if (best.feature < 0) best.gain = 0.0;
    return best;
}

Tree TreeGrower::grow(std::span<const std::uint32_t> counts, std::span<const double> target,
                      std::span<const double> hessian, const GrowOptions& options, Rng* rng) {
    const std::size_t p = data_.n_features;
    if (counts.size() != data_.n_rows || target.size() != data_.n_rows)
        throw std::invalid_argument("tree grower: counts/target size mismatch");
    const bool gini = options.criterion == SplitCriterion::gini;
    if (!gini && hessian.size() != data_.n_rows)
        throw std::invalid_argument("tree grower: hessian size mismatch");
    target_ = target;
    hessian_ = hessian;

    std::size_t n_samples = 0;
    for (auto c : counts) n_samples += c;
    if (n_samples == 0) throw std::invalid_argument("tree grower: empty sample");
    for (std::size_t f = 0; f < p; ++f) {
        auto& ord = order_[f];
        ord.clear();
        ord.reserve(n_samples);
        for (std::uint32_t r : data_.sorted_rows[f])
            for (std::uint32_t c = 0; c < counts[r]; ++c) ord.push_back(r);
    }
    scratch_.resize(n_samples);

    struct NodeInfo {
        std::size_t lo, hi;
        double n, sum;
        Split split;
    };
    std::vector<NodeInfo> info;
    Tree tree;

    auto make_node = [&](std::size_t lo, std::size_t hi) {
        double sum = 0.0, hsum = 0.0;
        const std::uint32_t* ord = order_[0].data();
        for (std::size_t j = lo; j < hi; ++j) {
            sum += target[ord[j]];
            if (!gini) hsum += hessian[ord[j]];
        }
        const double n = static_cast<double>(hi - lo);
        TreeNode node;
        node.value = gini ? sum / n : (hsum > 1e-300 ? sum / hsum : 0.0);
        tree.nodes.push_back(node);
        info.push_back(NodeInfo{lo, hi, n, sum, best_split(lo, hi, n, sum, options, rng)});
        return static_cast<int>(tree.nodes.size() - 1);
    };

    auto worse = [&](int a, int b) {
        const double ga = info[static_cast<std::size_t>(a)].split.gain;
        const double gb = info[static_cast<std::size_t>(b)].split.gain;
        return ga != gb ? ga < gb : a > b;
    };
    std::priority_queue<int, std::vector<int>, decltype(worse)> frontier(worse);

    if (make_node(0, n_samples) >= 0 && info[0].split.feature >= 0) frontier.push(0);
    std::size_t leaves = 1;
    while (!frontier.empty() &&
           (options.max_leaves <= 0 || leaves < static_cast<std::size_t>(options.max_leaves))) {
        const int id = frontier.top();
        frontier.pop();
        const NodeInfo node = info[static_cast<std::size_t>(id)];
        const auto f_split = static_cast<std::size_t>(node.split.feature);
        const std::size_t mid = node.lo + node.split.n_left;

        for (std::size_t j = node.lo; j < node.hi; ++j) goes_left_[order_[f_split][j]] = 0;
        for (std::size_t j = node.lo; j < mid; ++j) goes_left_[order_[f_split][j]] = 1;
        for (std::size_t f = 0; f < p; ++f) {
            if (f == f_split) continue;
            std::uint32_t* ord = order_[f].data();
            std::size_t left = node.lo, right = 0;
            for (std::size_t j = node.lo; j < node.hi; ++j) {
                const std::uint32_t r = ord[j];
                if (goes_left_[r])
                    ord[left++] = r;
                else
                    scratch_[right++] = r;
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(right), ord + left);
        }

        const int left_id = make_node(node.lo, mid);
        const int right_id = make_node(mid, node.hi);
        auto& parent = tree.nodes[static_cast<std::size_t>(id)];
        parent.feature = node.split.feature;
        parent.threshold = node.split.threshold;
        parent.left = left_id;
        parent.right = right_id;
        ++leaves;
        if (info[static_cast<std::size_t>(left_id)].split.feature >= 0) frontier.push(left_id);
        if (info[static_cast<std::size_t>(right_id)].split.feature >= 0) frontier.push(right_id);
    }

    std::fill(row_leaf_.begin(), row_leaf_.end(), -1);
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        if (!tree.nodes[id].is_leaf()) continue;
        for (std::size_t j = info[id].lo; j < info[id].hi; ++j)
            row_leaf_[order_[0][j]] = static_cast<int>(id);
    }
    return tree;
}

} // namespace detail
} // namespace modeswitch
