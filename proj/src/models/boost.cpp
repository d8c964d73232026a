#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"

#include "tree_builder.hpp"

#include <cmath>

namespace modeswitch {

// Stagewise gradient boosting on binomial deviance. Each stage fits a
// least-squares tree (at most interaction_depth splits) to the residuals
// y - p, sets every leaf to one Newton step sum(r) / sum(p(1 - p)), and adds
// it scaled by the shrinkage.
SoftClassifier fit_boost(const Dataset& train, const Hyperparams& hp) {
    validate(hp);
    const std::size_t n = train.n_rows();
    double positives = 0.0;
    for (std::size_t i = 0; i < n; ++i) positives += train.response(i);
    if (positives == 0.0 || positives == static_cast<double>(n))
        throw ModelError("boost needs both classes in the training set");

    BoostParams params;
    params.shrinkage = hp.boost.shrinkage;
    const double base_rate = positives / static_cast<double>(n);
    params.init_score = std::log(base_rate / (1.0 - base_rate));

    const detail::PresortedData data(train);
    detail::TreeGrower grower(data);
    detail::GrowOptions options;
    options.criterion = detail::SplitCriterion::least_squares;
    options.min_obs_leaf = hp.boost.min_obs_leaf;
    options.max_leaves = hp.boost.interaction_depth + 1;

    const std::vector<std::uint32_t> counts(n, 1);
    std::vector<double> score(n, params.init_score), residual(n), hessian(n);
    const auto& y = train.responses();
    params.train_deviance.push_back(binomial_deviance(y, score));
    params.trees.reserve(static_cast<std::size_t>(hp.boost.n_trees));

    for (int stage = 0; stage < hp.boost.n_trees; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            const double f = score[i];
            const double prob = f >= 0 ? 1.0 / (1.0 + std::exp(-f)) : std::exp(f) / (1.0 + std::exp(f));
            residual[i] = y[i] - prob;
            hessian[i] = prob * (1.0 - prob);
        }
        Tree tree = grower.grow(counts, residual, hessian, options, nullptr);
        if (tree.nodes.size() == 1) tree.nodes[0].value = 0.0;  // no split improved: null stage

        const auto& leaf = grower.row_leaf();
        for (std::size_t i = 0; i < n; ++i)
            score[i] += params.shrinkage * tree.nodes[static_cast<std::size_t>(leaf[i])].value;
        params.train_deviance.push_back(binomial_deviance(y, score));
        if (!std::isfinite(params.train_deviance.back()))
            throw ModelError("boost: training deviance became non-finite at stage " +
                             std::to_string(stage + 1));
        params.trees.push_back(std::move(tree));
    }
    return SoftClassifier(ModelKind::boost, hp, std::move(params), train.specs());
}

} // namespace modeswitch
