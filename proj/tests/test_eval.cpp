#include "doctest.h"
#include "helpers.hpp"

#include "modeswitch/eval.hpp"

#include <sstream>

using namespace modeswitch;
using testutil::spec;

namespace {

const std::vector<std::string> kModeKeys{"Current_Mode_Car", "Current_Mode_Walk", "Current_Mode_Bike"};

// Columns: x, then the three mode indicators. mode 0 Car, 1 Walk, 2 Bike, 3 Bus.
Dataset segmented(const std::vector<int>& modes, const std::vector<int>& y) {
    std::vector<FeatureSpec> specs{spec("x"), spec(kModeKeys[0], FeatureKind::binary),
                                   spec(kModeKeys[1], FeatureKind::binary), spec(kModeKeys[2], FeatureKind::binary)};
    std::vector<double> rows;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        rows.push_back(static_cast<double>(i));
        for (int m = 0; m < 3; ++m) rows.push_back(modes[i] == m ? 1.0 : 0.0);
    }
    return Dataset(specs, rows, y, kModeKeys);
}

CVReport report_of(std::vector<std::pair<ModelKind, double>> means) {
    CVReport r;
    for (auto [kind, mean] : means) r.models.push_back(CVModelResult{kind, {mean}, mean});
    return r;
}

} // namespace

TEST_SUITE("eval") {

TEST_CASE("accuracy examples") {
    CHECK(accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{1, 0, 0}) == doctest::Approx(2.0 / 3.0));
    CHECK(accuracy(std::vector<int>{1, 0, 1, 1}, std::vector<int>{1, 0, 1, 1}) == 1.0);
    CHECK(accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{0, 1, 0}) == 0.0);
    CHECK(accuracy(std::vector<int>{0, 1, 1}, std::vector<int>{0, 0, 1}) ==
          accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{0, 0, 1}));
    CHECK_THROWS_AS(accuracy(std::vector<int>{1}, std::vector<int>{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("market share examples") {
    const auto s = market_share(std::vector<double>(100, 0.51));
    CHECK(s.q1 == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(s.q0 + s.q1 == doctest::Approx(1.0).epsilon(1e-12));
    const auto z = market_share(std::vector<double>(7, 0.0));
    CHECK(z.q0 == 1.0);
    CHECK(z.q1 == 0.0);
    CHECK(market_share(std::vector<double>{0.2, 0.4, 0.9}).q1 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(market_share(std::vector<double>{1, 0, 0, 1, 1}).q1 == doctest::Approx(0.6));
    CHECK_THROWS(market_share(std::vector<double>{}));
    CHECK_THROWS(market_share(std::vector<double>{1.2}));
}

TEST_CASE("l1 norm examples") {
    CHECK(l1_norm({0.6472, 0.3528}, {0.66, 0.34}) == doctest::Approx(0.0256).epsilon(1e-9));
    CHECK(l1_norm({0.3, 0.7}, {0.3, 0.7}) == 0.0);
    CHECK(l1_norm({1, 0}, {0, 1}) == 2.0);
    CHECK(l1_norm({0.2, 0.8}, {0.5, 0.5}) == l1_norm({0.5, 0.5}, {0.2, 0.8}));
    CHECK(l1_norm({0.2, 0.8}, {0.9, 0.1}) <= l1_norm({0.2, 0.8}, {0.5, 0.5}) + l1_norm({0.5, 0.5}, {0.9, 0.1}));
    CHECK_THROWS(l1_norm({0.5, 0.6}, {0.5, 0.5}));
}

TEST_CASE("metric report for a hand 8-row case") {
    const std::vector<int> y{1, 1, 1, 0, 0, 0, 0, 0};
    const std::vector<double> p{0.9, 0.6, 0.2, 0.1, 0.5, 0.3, 0.4, 0.2};
    const auto r = metric_report("All", y, p);
    REQUIRE(r.present);
    CHECK(r.n_instances == 8);
    // predicted 1 1 0 0 1 0 0 0
    CHECK(*r.overall_accuracy == doctest::Approx(6.0 / 8.0));
    CHECK(*r.true_positive_rate == doctest::Approx(2.0 / 3.0));
    CHECK(*r.true_negative_rate == doctest::Approx(4.0 / 5.0));
    CHECK(r.market_share_pred->q1 == doctest::Approx(3.2 / 8.0));
    CHECK(r.market_share_obs->q1 == doctest::Approx(3.0 / 8.0));
    CHECK(*r.l1_norm == doctest::Approx(2.0 * 0.2 / 8.0));
}

TEST_CASE("segment report partitions the overall report") {
    const std::vector<int> modes{0, 0, 1, 1, 1, 2, 3, 3};
    const std::vector<int> y{1, 0, 0, 0, 1, 1, 1, 0};
    const std::vector<double> p{0.8, 0.7, 0.1, 0.4, 0.3, 0.9, 0.6, 0.2};
    const auto d = segmented(modes, y);
    const auto reports = segment_report(d, p);
    REQUIRE(reports.size() == 5);
    CHECK(reports[0].segment == "All");
    CHECK(reports[1].segment == "Car");
    CHECK(reports[4].segment == "Bus");
    CHECK(reports[1].n_instances == 2);
    CHECK(*reports[1].overall_accuracy == 0.5);
    CHECK(*reports[2].overall_accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(*reports[3].overall_accuracy == 1.0);
    CHECK(*reports[4].overall_accuracy == 1.0);
    CHECK(!reports[3].true_negative_rate);

    double weighted = 0.0;
    for (std::size_t s = 1; s < reports.size(); ++s)
        weighted += *reports[s].overall_accuracy * static_cast<double>(reports[s].n_instances);
    CHECK(*reports[0].overall_accuracy == doctest::Approx(weighted / 8.0).epsilon(1e-15));
    CHECK(*reports[4].l1_norm == doctest::Approx(2.0 * std::fabs(0.5 - 0.4)));
}

TEST_CASE("segment report flags empty segments") {
    const auto d = segmented({3}, {1});
    const auto model = testutil::constant_model(0.9, 4);
    const auto reports = segment_report(model, d);
    CHECK(*reports[4].overall_accuracy == 1.0);
    for (std::size_t s = 1; s <= 3; ++s) {
        CHECK(!reports[s].present);
        CHECK(!reports[s].overall_accuracy);
        CHECK(!reports[s].l1_norm);
    }
    std::ostringstream csv;
    write_metric_csv(csv, reports);
    CHECK(csv.str().find("Car,0,no,,,,,,,,\n") != std::string::npos);
}

TEST_CASE("cross validation folds replay as single fits") {
    const auto d = testutil::random_dataset(120, 3, 41);
    Hyperparams hp;
    hp.bag.n_trees = 5;
    const std::vector<ModelKind> kinds{ModelKind::logit, ModelKind::cart, ModelKind::bag};
    const auto report = cross_validate(d, 4, kinds, 19, hp);
    REQUIRE(report.models.size() == 3);
    CHECK(report.folds == kfold_partition(120, 4, 19));
    for (const auto& m : report.models) {
        double sum = 0.0;
        for (std::size_t f = 0; f < 4; ++f) {
            std::vector<std::size_t> train_rows;
            for (std::size_t g = 0; g < 4; ++g)
                if (g != f) train_rows.insert(train_rows.end(), report.folds[g].begin(), report.folds[g].end());
            std::sort(train_rows.begin(), train_rows.end());
            const auto model = fit_model(m.kind, d.subset(train_rows), hp, 19);
            const auto held = d.subset(report.folds[f]);
            const double acc = accuracy(held.responses(), model.predict_class(held));
            CHECK(m.fold_accuracy[f] == acc);
            sum += acc;
        }
        CHECK(m.mean_accuracy == doctest::Approx(sum / 4.0).epsilon(1e-15));
    }

    const auto again = cross_validate(d, 4, kinds, 19, hp, 3);
    CHECK(cv_report_to_json(again) == cv_report_to_json(report));
}

TEST_CASE("cross validation of a constant predictor gives the majority share") {
    Rng rng(2);
    std::vector<double> x(2500);
    std::vector<int> y(2500, 0);
    for (auto& v : x) v = rng.uniform();
    for (std::size_t i = 0; i < 882; ++i) y[i * 2] = 1;  // 1618 non-switchers out of 2500
    const Dataset d({spec("x")}, x, y);
    Hyperparams hp;
    hp.cart.max_leaves = 1;
    const std::vector<ModelKind> kinds{ModelKind::cart};
    const auto report = cross_validate(d, 10, kinds, 7, hp);
    CHECK(report.models[0].mean_accuracy == doctest::Approx(0.6472).epsilon(1e-12));
}

TEST_CASE("cross validation with a class missing from a fold falls back to the majority") {
    // Only one positive: the fold that holds it trains on negatives only.
    std::vector<int> y(10, 0);
    y[3] = 1;
    const Dataset d({spec("x")}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, y);
    testutil::WarningCapture capture;
    const std::vector<ModelKind> kinds{ModelKind::boost};
    Hyperparams hp;
    hp.boost.n_trees = 5;
    const auto report = cross_validate(d, 5, kinds, 1, hp);
    CHECK(report.models[0].mean_accuracy == doctest::Approx(0.9));
    CHECK(capture.messages.size() == 1);
}

TEST_CASE("model selection and its tie order") {
    CHECK(select_model(report_of({{ModelKind::boost, 0.871}, {ModelKind::rf, 0.860}, {ModelKind::bag, 0.859}})) ==
          ModelKind::boost);
    CHECK(select_model(report_of({{ModelKind::nb, 0.5}})) == ModelKind::nb);
    CHECK(select_model(report_of({{ModelKind::rf, 0.8}, {ModelKind::boost, 0.8}})) == ModelKind::boost);
    CHECK(select_model(report_of({{ModelKind::cart, 0.7}, {ModelKind::logit, 0.7}, {ModelKind::nn, 0.7}})) ==
          ModelKind::nn);
    CHECK(select_model(report_of({{ModelKind::logit, 0.9}, {ModelKind::boost, 0.8}})) == ModelKind::logit);
    CHECK_THROWS(select_model(CVReport{}));
}

TEST_CASE("cv export layout") {
    CVReport r;
    r.k = 2;
    r.seed = 3;
    r.folds = {{0}, {1}};
    r.models = {CVModelResult{ModelKind::logit, {0.5, 0.75}, 0.625}, CVModelResult{ModelKind::boost, {1.0, 0.5}, 0.75}};
    r.selected_model = ModelKind::boost;
    std::ostringstream csv;
    write_cv_csv(csv, r);
    CHECK(csv.str() ==
          "model,fold,accuracy\nlogit,1,0.5000\nlogit,2,0.7500\nboost,1,1.0000\nboost,2,0.5000\n"
          "logit,mean,0.6250\nboost,mean,0.7500\nboost,selected,0.7500\n");
    const auto json = cv_report_to_json(r);
    CHECK(json.find("\"selected_model\": \"boost\"") != std::string::npos);
}

} // TEST_SUITE
