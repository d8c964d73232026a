#include "modeswitch/eval.hpp"

#include "../format.hpp"
#include "json.hpp"

#include <ostream>

namespace modeswitch {

namespace {

using nlohmann::json;
using detail::fixed;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json shares_json(const std::optional<Shares>& s) {
    if (!s) return nullptr;
    return {{"q0", s->q0}, {"q1", s->q1}};
}

std::string optional_fixed(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : std::string();
}

} // namespace

std::string cv_report_to_json(const CVReport& report) {
    json j;
    j["k"] = report.k;
    j["seed"] = report.seed;
    j["folds"] = report.folds;
    j["models"] = json::array();
    for (const auto& m : report.models)
        j["models"].push_back({{"kind", std::string(to_string(m.kind))},
                               {"fold_accuracy", m.fold_accuracy},
                               {"mean_accuracy", m.mean_accuracy}});
    j["selected_model"] = std::string(to_string(report.selected_model));
    return j.dump(2) + "\n";
}

void write_cv_csv(std::ostream& out, const CVReport& report) {
    out << "model,fold,accuracy\n";
    for (const auto& m : report.models)
        for (std::size_t f = 0; f < m.fold_accuracy.size(); ++f)
            out << to_string(m.kind) << ',' << f + 1 << ',' << fixed(m.fold_accuracy[f], 4) << '\n';
    for (const auto& m : report.models) out << to_string(m.kind) << ",mean," << fixed(m.mean_accuracy, 4) << '\n';
    for (const auto& m : report.models)
        if (m.kind == report.selected_model)
            out << to_string(m.kind) << ",selected," << fixed(m.mean_accuracy, 4) << '\n';
}

std::string metric_reports_to_json(const std::vector<MetricReport>& reports) {
    json j = json::array();
    for (const auto& r : reports)
        j.push_back({{"segment", r.segment},
                     {"n_instances", r.n_instances},
                     {"present", r.present},
                     {"overall_accuracy", optional_number(r.overall_accuracy)},
                     {"true_positive_rate", optional_number(r.true_positive_rate)},
                     {"true_negative_rate", optional_number(r.true_negative_rate)},
                     {"market_share_pred", shares_json(r.market_share_pred)},
                     {"market_share_obs", shares_json(r.market_share_obs)},
                     {"l1_norm", optional_number(r.l1_norm)}});
    return j.dump(2) + "\n";
}

void write_metric_csv(std::ostream& out, const std::vector<MetricReport>& reports) {
    out << "segment,n,present,accuracy,true_positive_rate,true_negative_rate,q0_pred,q1_pred,q0_obs,q1_obs,"
           "l1_norm\n";
    for (const auto& r : reports) {
        out << r.segment << ',' << r.n_instances << ',' << (r.present ? "yes" : "no") << ','
            << optional_fixed(r.overall_accuracy, 4) << ',' << optional_fixed(r.true_positive_rate, 4) << ','
            << optional_fixed(r.true_negative_rate, 4) << ',';
        if (r.market_share_pred)
            out << fixed(r.market_share_pred->q0, 4) << ',' << fixed(r.market_share_pred->q1, 4) << ',';
        else
            out << ",,";
        if (r.market_share_obs)
            out << fixed(r.market_share_obs->q0, 4) << ',' << fixed(r.market_share_obs->q1, 4) << ',';
        else
            out << ",,";
        out << optional_fixed(r.l1_norm, 5) << '\n';
    }
}

} // namespace modeswitch
