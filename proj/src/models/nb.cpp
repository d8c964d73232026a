#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"

#include <algorithm>

namespace modeswitch {

// Gaussian class-conditionals for continuous features (sample variance,
// floored), empirical level frequencies for binary and discrete features.
SoftClassifier fit_nb(const Dataset& train, const Hyperparams& hp) {
    validate(hp);
    const std::size_t n = train.n_rows();
    std::array<double, 2> class_n{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) class_n[static_cast<std::size_t>(train.response(i))] += 1.0;
    if (class_n[0] == 0.0 || class_n[1] == 0.0)
        throw ModelError("naive Bayes needs both classes in the training set");

    NbParams params;
    params.prior1 = class_n[1] / static_cast<double>(n);
    for (std::size_t t = 0; t < train.n_features(); ++t) {
        NbFeature f;
        f.kind = train.spec(t).kind;
        if (f.kind == FeatureKind::continuous) {
            std::array<double, 2> sum{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) sum[static_cast<std::size_t>(train.response(i))] += train.at(i, t);
            for (int c = 0; c < 2; ++c) f.mean[c] = sum[c] / class_n[c];
            std::array<double, 2> ss{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<std::size_t>(train.response(i));
                const double d = train.at(i, t) - f.mean[c];
                ss[c] += d * d;
            }
            for (int c = 0; c < 2; ++c) {
                const double var = class_n[c] > 1.0 ? ss[c] / (class_n[c] - 1.0) : 0.0;
                f.variance[c] = std::max(var, hp.nb.variance_floor);
            }
        } else {
            f.levels = train.column(t);
            std::sort(f.levels.begin(), f.levels.end());
            f.levels.erase(std::unique(f.levels.begin(), f.levels.end()), f.levels.end());
            for (int c = 0; c < 2; ++c) f.level_prob[c].assign(f.levels.size(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<std::size_t>(train.response(i));
                const auto j = static_cast<std::size_t>(
                    std::lower_bound(f.levels.begin(), f.levels.end(), train.at(i, t)) - f.levels.begin());
                f.level_prob[c][j] += 1.0;
            }
            for (int c = 0; c < 2; ++c)
                for (auto& v : f.level_prob[c]) v /= class_n[c];
        }
        params.features.push_back(std::move(f));
    }
    return SoftClassifier(ModelKind::nb, hp, std::move(params), train.specs());
}

} // namespace modeswitch
