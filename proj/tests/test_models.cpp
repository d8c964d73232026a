#include "doctest.h"
#include "helpers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace modeswitch;
using testutil::spec;

namespace {

Hyperparams small_hp(std::size_t p) {
    Hyperparams hp;
    hp.boost.n_trees = 60;
    hp.bag.n_trees = 15;
    hp.rf.n_trees = 15;
    hp.rf.mtry = static_cast<int>(std::max<std::size_t>(1, p / 2));
    hp.nn.max_iter = 200;
    return hp;
}

Dataset one_feature(const std::vector<double>& x, const std::vector<int>& y) { return Dataset({spec("x")}, x, y); }

struct Candidate {
    int feature;
    double threshold;
    double impurity;
};

// Every (feature, midpoint) split of the full sample with its weighted Gini.
std::vector<Candidate> all_splits(const Dataset& d, std::size_t min_leaf) {
    std::vector<Candidate> out;
    const std::size_t n = d.n_rows();
    for (std::size_t t = 0; t < d.n_features(); ++t) {
        auto values = d.column(t);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            const double thr = 0.5 * (values[k] + values[k + 1]);
            double nl = 0, pl = 0, nr = 0, pr = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (d.at(i, t) < thr) {
                    nl += 1;
                    pl += d.response(i);
                } else {
                    nr += 1;
                    pr += d.response(i);
                }
            }
            if (nl < static_cast<double>(min_leaf) || nr < static_cast<double>(min_leaf)) continue;
            auto gini = [](double m, double pos) {
                const double q = pos / m;
                return 2.0 * q * (1.0 - q);
            };
            out.push_back({static_cast<int>(t), thr, (nl * gini(nl, pl) + nr * gini(nr, pr)) / static_cast<double>(n)});
        }
    }
    return out;
}

double weighted_gini(const Dataset& d, int feature, double thr) {
    for (const auto& c : all_splits(d, 1))
        if (c.feature == feature && c.threshold == thr) return c.impurity;
    return std::numeric_limits<double>::infinity();
}

const Tree& only_tree(const SoftClassifier& m) { return std::get<ForestParams>(m.params()).trees.at(0); }

} // namespace

TEST_SUITE("models") {

TEST_CASE("logit matches a hand-coded Newton oracle") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    const std::vector<int> y{0, 0, 1, 0, 1, 1};
    double b0 = 0.0, b1 = 0.0;
    for (int it = 0; it < 100; ++it) {
        double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
        for (std::size_t i = 0; i < 6; ++i) {
            const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * x[i])));
            g0 += y[i] - p;
            g1 += (y[i] - p) * x[i];
            const double w = p * (1 - p);
            h00 += w;
            h01 += w * x[i];
            h11 += w * x[i] * x[i];
        }
        const double det = h00 * h11 - h01 * h01;
        b0 += (h11 * g0 - h01 * g1) / det;
        b1 += (-h01 * g0 + h00 * g1) / det;
    }
    const auto m = fit_logit(one_feature(x, y));
    const auto& p = std::get<LogitParams>(m.params());
    CHECK(p.converged);
    CHECK(p.intercept == doctest::Approx(b0).epsilon(1e-6));
    CHECK(p.coef[0] == doctest::Approx(b1).epsilon(1e-6));
}

TEST_CASE("logit on separable and one-class data") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = -5; i <= 5; ++i) {
        if (i == 0) continue;
        x.push_back(i);
        y.push_back(i > 0);
    }
    testutil::WarningCapture capture;
    const auto m = fit_logit(one_feature(x, y));
    CHECK(m.predict_proba(std::vector<double>{2.0}) > 0.9);
    CHECK(m.predict_proba(std::vector<double>{-2.0}) < 0.1);

    const auto ones = fit_logit(one_feature({1, 2, 3, 4}, {1, 1, 1, 1}));
    for (double v : {-10.0, 0.0, 1.0, 10.0}) CHECK(ones.predict_proba(std::vector<double>{v}) >= 0.99);
    CHECK(capture.messages.empty());

    Hyperparams short_run;
    short_run.logit.max_iter = 2;
    const auto stopped = fit_logit(one_feature(x, y), short_run);
    CHECK(!std::get<LogitParams>(stopped.params()).converged);
    CHECK(capture.messages.size() == 1);
}

TEST_CASE("naive Bayes forced and uninformative posteriors") {
    const Dataset forced({spec("b", FeatureKind::binary)}, {1, 1, 0, 0}, {1, 1, 0, 0});
    const auto m = fit_nb(forced);
    CHECK(m.predict_proba(std::vector<double>{1.0}) == 1.0);
    CHECK(m.predict_proba(std::vector<double>{0.0}) == 0.0);

    const Dataset flat({spec("b", FeatureKind::binary)}, {1, 0, 1, 0, 1, 0}, {1, 1, 0, 0, 0, 0});
    const auto f = fit_nb(flat);
    CHECK(f.predict_proba(std::vector<double>{1.0}) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    CHECK(f.predict_proba(std::vector<double>{0.0}) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("naive Bayes matches a hand Bayes computation") {
    // class 1: c = 1, 2, 3; b = 1, 1, 0. class 0: c = 4..8; b = 0, 0, 1, 0, 0.
    const Dataset d({spec("c"), spec("b", FeatureKind::binary)},
                    {1, 1, 2, 1, 3, 0, 4, 0, 5, 0, 6, 1, 7, 0, 8, 0}, {1, 1, 1, 0, 0, 0, 0, 0});
    const auto m = fit_nb(d);
    auto normal = [](double x, double mu, double var) {
        return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * std::numbers::pi * var);
    };
    // mean 2, variance 1 vs mean 6, variance 2.5; P(b=1) 2/3 vs 1/5
    const double l1 = 3.0 / 8.0 * normal(3.5, 2.0, 1.0) * (2.0 / 3.0);
    const double l0 = 5.0 / 8.0 * normal(3.5, 6.0, 2.5) * (1.0 / 5.0);
    CHECK(m.predict_proba(std::vector<double>{3.5, 1.0}) == doctest::Approx(l1 / (l1 + l0)).epsilon(1e-9));
    const double k1 = 3.0 / 8.0 * normal(5.0, 2.0, 1.0) * (1.0 / 3.0);
    const double k0 = 5.0 / 8.0 * normal(5.0, 6.0, 2.5) * (4.0 / 5.0);
    CHECK(m.predict_proba(std::vector<double>{5.0, 0.0}) == doctest::Approx(k1 / (k1 + k0)).epsilon(1e-9));
}

TEST_CASE("naive Bayes floors a zero within-class variance") {
    const Dataset d({spec("c")}, {1, 1, 2, 3}, {1, 1, 0, 0});
    const auto m = fit_nb(d);
    CHECK(std::get<NbParams>(m.params()).features[0].variance[1] == 1e-9);
    CHECK(m.predict_proba(std::vector<double>{1.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_nb(one_feature({1, 2}, {1, 1})), ModelError);
}

TEST_CASE("cart separates separable data and stops on pure data") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(i);
        y.push_back(i >= 10);
    }
    const auto m = fit_cart(one_feature(x, y));
    const auto& tree = only_tree(m);
    REQUIRE(tree.n_leaves() == 2);
    CHECK(tree.nodes[0].threshold == 9.5);
    CHECK(m.predict_proba(std::vector<double>{3.0}) == 0.0);
    CHECK(m.predict_proba(std::vector<double>{15.0}) == 1.0);

    const auto pure = fit_cart(one_feature({1, 2, 3, 4}, {1, 1, 1, 1}));
    CHECK(only_tree(pure).nodes.size() == 1);
    CHECK(pure.predict_proba(std::vector<double>{9.0}) == 1.0);
}

TEST_CASE("cart root split matches the exhaustive oracle") {
    // Unique optimum: x1 at 4.5 separates the classes.
    const Dataset hand({spec("x0"), spec("x1")},
                       {1, 1, 2, 2, 3, 8, 4, 3, 5, 9, 6, 7, 7, 4, 8, 6, 9, 10, 10, 5},
                       {0, 0, 1, 0, 1, 1, 0, 1, 1, 1});
    Hyperparams hp;
    hp.cart.min_obs_leaf = 1;
    hp.cart.max_leaves = 2;
    {
        const auto splits = all_splits(hand, 1);
        const auto best = std::min_element(splits.begin(), splits.end(),
                                           [](const auto& a, const auto& b) { return a.impurity < b.impurity; });
        std::size_t ties = 0;
        for (const auto& c : splits) ties += c.impurity == best->impurity;
        REQUIRE(ties == 1);
        const auto model = fit_cart(hand, hp);
        const auto root = only_tree(model).nodes[0];
        CHECK(root.feature == best->feature);
        CHECK(root.threshold == best->threshold);
    }
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto d = testutil::random_dataset(10, 3, seed);
        const auto splits = all_splits(d, 1);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : splits) best = std::min(best, c.impurity);
        const auto model = fit_cart(d, hp);
        const auto root = only_tree(model).nodes[0];
        REQUIRE(root.feature >= 0);
        CHECK(weighted_gini(d, root.feature, root.threshold) <= best + 1e-12);
    }
}

TEST_CASE("cart respects min_obs_leaf and max_leaves") {
    const auto d = testutil::random_dataset(300, 4, 3);
    Hyperparams hp;
    hp.cart.min_obs_leaf = 25;
    hp.cart.max_leaves = 6;
    const auto m = fit_cart(d, hp);
    const auto& tree = only_tree(m);
    CHECK(tree.n_leaves() <= 6);
    std::vector<int> per_leaf(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        int n = 0;
        while (!tree.nodes[static_cast<std::size_t>(n)].is_leaf()) {
            const auto& node = tree.nodes[static_cast<std::size_t>(n)];
            n = d.at(i, static_cast<std::size_t>(node.feature)) < node.threshold ? node.left : node.right;
        }
        ++per_leaf[static_cast<std::size_t>(n)];
    }
    for (std::size_t k = 0; k < tree.nodes.size(); ++k)
        if (tree.nodes[k].is_leaf()) CHECK(per_leaf[k] >= 25);
}

TEST_CASE("bagging replays from reconstructed bootstrap samples") {
    const auto d = testutil::random_dataset(12, 3, 8);
    Hyperparams hp;
    hp.bag.n_trees = 3;
    const std::uint64_t seed = 77;
    const auto bag = fit_bag(d, hp, seed);

    Hyperparams unpruned;
    unpruned.cart.min_obs_leaf = 1;
    unpruned.cart.max_leaves = 0;
    std::vector<SoftClassifier> replay;
    for (std::uint64_t t = 0; t < 3; ++t) {
        Rng rng(derive_seed(seed, t));
        std::vector<std::size_t> sample;
        for (std::size_t i = 0; i < d.n_rows(); ++i) sample.push_back(rng.uniform_index(d.n_rows()));
        std::sort(sample.begin(), sample.end());
        replay.push_back(fit_cart(d.subset(sample), unpruned));
    }
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        double sum = 0.0;
        for (const auto& m : replay) sum += m.predict_proba(d.row(i));
        CHECK(bag.predict_proba(d.row(i)) == sum / 3.0);
    }
}

TEST_CASE("reduction chain: rf with mtry = p is bag, one unbootstrapped tree is cart") {
    const auto d = testutil::random_dataset(200, 4, 21);
    Hyperparams hp;
    hp.bag.n_trees = 20;
    hp.rf.n_trees = 20;
    hp.rf.mtry = 4;
    const auto bag = fit_bag(d, hp, 5);
    const auto rf = fit_rf(d, hp, 5);
    for (std::size_t i = 0; i < d.n_rows(); ++i) CHECK(rf.predict_proba(d.row(i)) == bag.predict_proba(d.row(i)));

    hp.bag.n_trees = 1;
    hp.bag.bootstrap = false;
    hp.cart.min_obs_leaf = hp.bag.min_obs_leaf;
    hp.cart.max_leaves = 0;
    const auto one = fit_bag(d, hp, 5);
    const auto cart = fit_cart(d, hp);
    for (std::size_t i = 0; i < d.n_rows(); ++i) CHECK(one.predict_proba(d.row(i)) == cart.predict_proba(d.row(i)));
}

TEST_CASE("random forest with mtry 1 still learns and rejects mtry above p") {
    Rng rng(4);
    std::vector<double> rows;
    std::vector<int> y;
    for (int i = 0; i < 200; ++i) {
        const double informative = rng.uniform() * 10.0;
        rows.push_back(std::round(rng.uniform() * 100.0));
        rows.push_back(informative);
        rows.push_back(std::round(rng.uniform() * 100.0));
        y.push_back(informative > 5.0);
    }
    const Dataset d({spec("noise0"), spec("signal"), spec("noise1")}, rows, y);
    Hyperparams hp;
    hp.rf.n_trees = 30;
    hp.rf.mtry = 1;
    const auto rf = fit_rf(d, hp, 9);
    int correct = 0, ones = 0;
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        correct += rf.predict_class(d.row(i)) == d.response(i);
        ones += d.response(i);
    }
    const double base = std::max(ones, 200 - ones) / 200.0;
    CHECK(correct / 200.0 > base);
    hp.rf.mtry = 4;
    CHECK_THROWS_AS(fit_rf(d, hp, 9), std::invalid_argument);
}

TEST_CASE("boosting descends and stages add exactly") {
    const auto d = testutil::random_dataset(300, 4, 12);
    Hyperparams hp;
    hp.boost.n_trees = 100;
    const auto m = fit_boost(d, hp);
    const auto& p = std::get<BoostParams>(m.params());
    REQUIRE(p.train_deviance.size() == 101);
    for (std::size_t s = 1; s < p.train_deviance.size(); ++s)
        CHECK(p.train_deviance[s] <= p.train_deviance[s - 1] + 1e-12);
    for (const auto& tree : p.trees) CHECK(tree.n_splits() <= 45);

    for (std::size_t i = 0; i < d.n_rows(); i += 7) {
        const auto row = d.row(i);
        for (std::size_t s = 1; s <= p.trees.size(); s += 11)
            CHECK(boost_log_odds(p, row, s) == boost_log_odds(p, row, s - 1) + p.shrinkage * p.trees[s - 1].predict(row));
    }

    std::vector<double> scores(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) scores[i] = boost_log_odds(p, d.row(i), p.trees.size());
    CHECK(binomial_deviance(d.responses(), scores) == doctest::Approx(p.train_deviance.back()).epsilon(1e-12));
}

TEST_CASE("boosting prediction is the logistic of the summed stages") {
    const auto d = testutil::random_dataset(100, 3, 2);
    Hyperparams hp;
    hp.boost.n_trees = 3;
    const auto m = fit_boost(d, hp);
    const auto& p = std::get<BoostParams>(m.params());
    const double base = std::accumulate(d.responses().begin(), d.responses().end(), 0.0) / 100.0;
    CHECK(p.init_score == doctest::Approx(std::log(base / (1 - base))).epsilon(1e-15));
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        const auto row = d.row(i);
        const double f = p.init_score + p.shrinkage * p.trees[0].predict(row) + p.shrinkage * p.trees[1].predict(row) +
                         p.shrinkage * p.trees[2].predict(row);
        CHECK(m.predict_proba(row) == doctest::Approx(1.0 / (1.0 + std::exp(-f))).epsilon(1e-14));
    }
}

TEST_CASE("boosting fits separable data") {
    std::vector<double> x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(i);
        y.push_back(i >= 20);
    }
    Hyperparams hp;
    hp.boost.n_trees = 50;
    const auto d = one_feature(x, y);
    const auto m = fit_boost(d, hp);
    for (std::size_t i = 20; i < 40; ++i) CHECK(m.predict_proba(d.row(i)) >= 0.9);
    CHECK_THROWS_AS(fit_boost(one_feature({1, 2}, {0, 0}), hp), ModelError);
}

TEST_CASE("network gradient matches central differences") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        NnObjective obj;
        obj.n_inputs = 3;
        obj.hidden_units = 4;
        obj.decay = 0.1;
        for (int i = 0; i < 5; ++i) {
            for (int t = 0; t < 3; ++t) obj.inputs.push_back(rng.normal());
            obj.targets.push_back(rng.uniform() < 0.5);
        }
        std::vector<double> w(obj.n_weights()), g(w.size());
        for (auto& v : w) v = 2.0 * rng.uniform() - 1.0;
        obj.evaluate(w, g);
        const double h = 1e-5;
        double diff = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            auto up = w, down = w;
            up[k] += h;
            down[k] -= h;
            const double fd = (obj.evaluate(up, {}) - obj.evaluate(down, {})) / (2.0 * h);
            diff += (fd - g[k]) * (fd - g[k]);
            scale += g[k] * g[k];
        }
        CHECK(std::sqrt(diff / scale) < 1e-5);
    }
}

TEST_CASE("network training descends and rejects zero hidden units") {
    const auto d = testutil::random_dataset(120, 3, 17);
    Hyperparams hp;
    hp.nn.max_iter = 300;
    const auto m = fit_nn(d, hp, 4);
    const auto& loss = std::get<NnParams>(m.params()).train_loss;
    REQUIRE(loss.size() > 10);
    for (std::size_t s = 1; s < loss.size(); ++s) CHECK(loss[s] <= loss[s - 1]);
    hp.nn.hidden_units = 0;
    CHECK_THROWS_AS(fit_nn(d, hp, 4), std::invalid_argument);
}

TEST_CASE("prediction contract for every kind") {
    const auto d = testutil::random_dataset(150, 4, 23);
    const auto hp = small_hp(4);
    for (auto kind : kAllModelKinds) {
        INFO(to_string(kind));
        const auto a = fit_model(kind, d, hp, 13);
        const auto b = fit_model(kind, d, hp, 13);
        for (std::size_t i = 0; i < d.n_rows(); ++i) {
            const double p = a.predict_proba(d.row(i));
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            CHECK(p == b.predict_proba(d.row(i)));
            CHECK(a.predict_proba_class0(d.row(i)) + p == 1.0);
        }
        CHECK_THROWS_AS(a.predict_proba(std::vector<double>{1.0, 2.0}), std::invalid_argument);
    }
}

TEST_CASE("class rule with the tie going to class 1") {
    const auto specs = std::vector<FeatureSpec>{spec("x")};
    CHECK(testutil::stump_model(0, 0.0, 0.7, 0.7, specs).predict_class(std::vector<double>{1.0}) == 1);
    CHECK(testutil::stump_model(0, 0.0, 0.3, 0.3, specs).predict_class(std::vector<double>{1.0}) == 0);
    CHECK(testutil::stump_model(0, 0.0, 0.5, 0.5, specs).predict_class(std::vector<double>{1.0}) == 1);
    CHECK(testutil::constant_model(0.35, 3).predict_proba(std::vector<double>{1, 2, 3}) == 0.35);
}

TEST_CASE("model json round trip preserves predictions bit for bit") {
    const auto d = testutil::random_dataset(150, 4, 29);
    const auto hp = small_hp(4);
    for (auto kind : kAllModelKinds) {
        INFO(to_string(kind));
        const auto m = fit_model(kind, d, hp, 3);
        const auto text = model_to_json(m);
        const auto back = model_from_json(text);
        CHECK(back.kind() == kind);
        CHECK(model_to_json(back) == text);
        CHECK(back.hyperparams().rf.mtry == hp.rf.mtry);
        for (std::size_t i = 0; i < d.n_rows(); ++i) CHECK(back.predict_proba(d.row(i)) == m.predict_proba(d.row(i)));
    }
}

TEST_CASE("model json rejects malformed documents") {
    CHECK_THROWS_AS(model_from_json("{"), ModelError);
    CHECK_THROWS_AS(model_from_json("{\"format\":\"other\"}"), ModelError);
    const auto text = model_to_json(testutil::constant_model(0.4, 2));
    auto versioned = text;
    const auto at = versioned.find("\"version\":1");
    REQUIRE(at != std::string::npos);
    versioned.replace(at, 11, "\"version\":9");
    CHECK_THROWS_WITH_AS(model_from_json(versioned), "unsupported model format version 9", ModelError);
}

TEST_CASE("hyperparameter validation") {
    Hyperparams hp;
    CHECK_NOTHROW(validate(hp));
    hp.boost.shrinkage = 0.0;
    CHECK_THROWS_AS(validate(hp), std::invalid_argument);
    hp = {};
    hp.bag.n_trees = 0;
    CHECK_THROWS_AS(validate(hp), std::invalid_argument);
    CHECK(model_kind_from_string("boost") == ModelKind::boost);
    CHECK_THROWS(model_kind_from_string("svm"));
}

} // TEST_SUITE
