#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace modeswitch {

namespace {

double sigmoid(double u) {
    return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

struct ProbaVisitor {
    std::span<const double> row;

    double operator()(const LogitParams& m) const {
        double u = m.intercept;
        for (std::size_t t = 0; t < m.coef.size(); ++t) u += m.coef[t] * row[t];
        return sigmoid(u);
    }

    double operator()(const NbParams& m) const {
        double log1 = std::log(m.prior1), log0 = std::log(1.0 - m.prior1);
        for (std::size_t t = 0; t < m.features.size(); ++t) {
            const auto& f = m.features[t];
            const double x = row[t];
            if (f.kind == FeatureKind::continuous) {
                for (int c = 0; c < 2; ++c) {
                    const double d = x - f.mean[c];
                    const double ll = -0.5 * std::log(2.0 * std::numbers::pi * f.variance[c]) -
                                      0.5 * d * d / f.variance[c];
                    (c == 0 ? log0 : log1) += ll;
                }
                continue;
            }
            const auto it = std::find(f.levels.begin(), f.levels.end(), x);
            if (it == f.levels.end()) continue;  // unseen level: uninformative
            const auto j = static_cast<std::size_t>(it - f.levels.begin());
            const double p0 = f.level_prob[0][j], p1 = f.level_prob[1][j];
            if (p0 == 0.0 && p1 == 0.0) continue;
            log0 += p0 > 0.0 ? std::log(p0) : -std::numeric_limits<double>::infinity();
            log1 += p1 > 0.0 ? std::log(p1) : -std::numeric_limits<double>::infinity();
        }
        if (std::isinf(log0) && std::isinf(log1)) return m.prior1;
        if (std::isinf(log1)) return 0.0;
        if (std::isinf(log0)) return 1.0;
        return sigmoid(log1 - log0);
    }

    double operator()(const ForestParams& m) const {
        double sum = 0.0;
        for (const auto& tree : m.trees) sum += tree.predict(row);
        return std::clamp(sum / static_cast<double>(m.trees.size()), 0.0, 1.0);
    }

    double operator()(const BoostParams& m) const {
        return sigmoid(boost_log_odds(m, row, m.trees.size()));
    }

    double operator()(const NnParams& m) const {
        const std::size_t p = m.input_mean.size();
        const auto h = static_cast<std::size_t>(m.hidden_units);
        const double* w1 = m.weights.data();
        const double* b1 = w1 + h * p;
        const double* w2 = b1 + h;
        const double b2 = w2[h];
        double out = b2;
        for (std::size_t k = 0; k < h; ++k) {
            double a = b1[k];
            for (std::size_t t = 0; t < p; ++t)
                a += w1[k * p + t] * ((row[t] - m.input_mean[t]) / m.input_scale[t]);
            out += w2[k] * sigmoid(a);
        }
        return sigmoid(out);
    }
};

} // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::logit: return "logit";
    case ModelKind::nb: return "nb";
    case ModelKind::cart: return "cart";
    case ModelKind::bag: return "bag";
    case ModelKind::rf: return "rf";
    case ModelKind::boost: return "boost";
    case ModelKind::nn: return "nn";
    }
    return "logit";
}

ModelKind model_kind_from_string(std::string_view text) {
    for (auto k : kAllModelKinds)
        if (to_string(k) == text) return k;
    throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

void validate(const Hyperparams& hp) {
    auto positive = [](int v, const char* what) {
        if (v <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
    };
    positive(hp.boost.n_trees, "boost.n_trees");
    positive(hp.boost.interaction_depth, "boost.interaction_depth");
    positive(hp.boost.min_obs_leaf, "boost.min_obs_leaf");
    if (!(hp.boost.shrinkage > 0.0 && hp.boost.shrinkage <= 1.0))
        throw std::invalid_argument("boost.shrinkage must lie in (0, 1]");
    positive(hp.bag.n_trees, "bag.n_trees");
    positive(hp.bag.min_obs_leaf, "bag.min_obs_leaf");
    positive(hp.rf.n_trees, "rf.n_trees");
    positive(hp.rf.mtry, "rf.mtry");
    positive(hp.rf.min_obs_leaf, "rf.min_obs_leaf");
    positive(hp.nn.hidden_units, "nn.hidden_units");
    positive(hp.nn.max_iter, "nn.max_iter");
    if (!(hp.nn.weight_decay >= 0.0)) throw std::invalid_argument("nn.weight_decay must be >= 0");
    if (!(hp.nn.initial_step > 0.0)) throw std::invalid_argument("nn.initial_step must be positive");
    positive(hp.cart.min_obs_leaf, "cart.min_obs_leaf");
    if (hp.cart.max_leaves < 0) throw std::invalid_argument("cart.max_leaves must be >= 0 (0: unlimited)");
    positive(hp.logit.max_iter, "logit.max_iter");
    if (!(hp.logit.tol > 0.0)) throw std::invalid_argument("logit.tol must be positive");
    if (!(hp.nb.variance_floor > 0.0)) throw std::invalid_argument("nb.variance_floor must be positive");
}

SoftClassifier::SoftClassifier(ModelKind kind, Hyperparams hp, ModelParams params,
                               std::vector<FeatureSpec> feature_specs)
    : kind_(kind), hp_(hp), params_(std::move(params)), specs_(std::move(feature_specs)) {}

double SoftClassifier::predict_proba(std::span<const double> row) const {
    if (row.size() != specs_.size())
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " values, model expects " +
                                    std::to_string(specs_.size()));
    return std::visit(ProbaVisitor{row}, params_);
}

int SoftClassifier::predict_class(std::span<const double> row) const {
    return class_from_probability(predict_proba(row));
}

std::vector<double> SoftClassifier::predict_proba(const Dataset& data) const {
    std::vector<double> out(data.n_rows());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict_proba(data.row(i));
    return out;
}

std::vector<int> SoftClassifier::predict_class(const Dataset& data) const {
    std::vector<int> out(data.n_rows());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = predict_class(data.row(i));
    return out;
}

double boost_log_odds(const BoostParams& params, std::span<const double> row, std::size_t stages) {
    double f = params.init_score;
    const std::size_t m = std::min(stages, params.trees.size());
    for (std::size_t s = 0; s < m; ++s) f += params.shrinkage * params.trees[s].predict(row);
    return f;
}

double binomial_deviance(std::span<const int> y, std::span<const double> log_odds) {
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double f = log_odds[i];
        const double softplus = f > 0 ? f + std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
        sum += y[i] * f - softplus;
    }
    return -2.0 * sum / static_cast<double>(y.size());
}

SoftClassifier fit_model(ModelKind kind, const Dataset& train, const Hyperparams& hp,
                         std::uint64_t seed, int threads) {
    switch (kind) {
    case ModelKind::logit: return fit_logit(train, hp);
    case ModelKind::nb: return fit_nb(train, hp);
    case ModelKind::cart: return fit_cart(train, hp);
    case ModelKind::bag: return fit_bag(train, hp, seed, threads);
    case ModelKind::rf: return fit_rf(train, hp, seed, threads);
    case ModelKind::boost: return fit_boost(train, hp);
    case ModelKind::nn: return fit_nn(train, hp, seed);
    }
    throw std::invalid_argument("unknown model kind");
}

} // namespace modeswitch
