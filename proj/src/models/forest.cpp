#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/parallel.hpp"

#include "tree_builder.hpp"

#include <stdexcept>

namespace modeswitch {

namespace {

std::vector<double> response_as_double(const Dataset& data) {
    std::vector<double> y(data.n_rows());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = data.response(i);
    return y;
}

ForestParams grow_forest(const Dataset& train, int n_trees, const detail::GrowOptions& options,
                         bool bootstrap, std::uint64_t seed, int threads) {
    if (train.n_rows() == 0) throw ModelError("cannot grow trees on an empty training set");
    const detail::PresortedData data(train);
    const auto y = response_as_double(train);
    const std::vector<std::uint32_t> all_rows(train.n_rows(), 1);

    ForestParams forest;
    forest.trees.resize(static_cast<std::size_t>(n_trees));
    parallel_for(forest.trees.size(), threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        const auto counts = bootstrap ? detail::bootstrap_counts(train.n_rows(), rng) : all_rows;
        detail::TreeGrower grower(data);
        forest.trees[t] = grower.grow(counts, y, {}, options, &rng);
    });
    return forest;
}

} // namespace

SoftClassifier fit_cart(const Dataset& train, const Hyperparams& hp) {
    validate(hp);
    if (train.n_rows() == 0) throw ModelError("cart: empty training set");
    const detail::PresortedData data(train);
    const auto y = response_as_double(train);
    const std::vector<std::uint32_t> counts(train.n_rows(), 1);
    detail::GrowOptions options;
    options.min_obs_leaf = hp.cart.min_obs_leaf;
    options.max_leaves = hp.cart.max_leaves;
    detail::TreeGrower grower(data);
    ForestParams params;
    params.trees.push_back(grower.grow(counts, y, {}, options, nullptr));
    return SoftClassifier(ModelKind::cart, hp, std::move(params), train.specs());
}

SoftClassifier fit_bag(const Dataset& train, const Hyperparams& hp, std::uint64_t seed, int threads) {
    validate(hp);
    detail::GrowOptions options;
    options.min_obs_leaf = hp.bag.min_obs_leaf;
    auto params = grow_forest(train, hp.bag.n_trees, options, hp.bag.bootstrap, seed, threads);
    return SoftClassifier(ModelKind::bag, hp, std::move(params), train.specs());
}

SoftClassifier fit_rf(const Dataset& train, const Hyperparams& hp, std::uint64_t seed, int threads) {
    validate(hp);
    if (static_cast<std::size_t>(hp.rf.mtry) > train.n_features())
        throw std::invalid_argument("rf: mtry (" + std::to_string(hp.rf.mtry) +
                                    ") exceeds the number of features (" +
                                    std::to_string(train.n_features()) + ")");
    detail::GrowOptions options;
    options.min_obs_leaf = hp.rf.min_obs_leaf;
    options.mtry = hp.rf.mtry;
    auto params = grow_forest(train, hp.rf.n_trees, options, hp.rf.bootstrap, seed, threads);
    return SoftClassifier(ModelKind::rf, hp, std::move(params), train.specs());
}

} // namespace modeswitch
