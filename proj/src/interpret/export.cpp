#include "modeswitch/interpret.hpp"
#include "modeswitch/rng.hpp"

#include "../format.hpp"
#include "json.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

namespace modeswitch {

namespace {

using nlohmann::json;
using detail::fixed;

json condition_json(const std::optional<Condition>& c) {
    if (!c) return nullptr;
    json terms = json::array();
    for (const auto& [feature, value] : c->terms) terms.push_back({{"feature", feature}, {"value", value}});
    return terms;
}

std::string value_text(const EffectRow& r) {
    if (!r.value) return {};
    return r.kind == EffectKind::marginal ? detail::percent(*r.value) : fixed(*r.value, 4);
}

} // namespace

std::vector<std::size_t> exported_curve_rows(const CurveFamily& family, const CurveExportOptions& options) {
    const std::size_t n = family.curves.size();
    std::vector<std::size_t> picks(n);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    if (n <= options.max_curves) return picks;
    Rng rng(options.seed);
    for (std::size_t j = 0; j < options.max_curves; ++j)
        std::swap(picks[j], picks[j + rng.uniform_index(n - j)]);
    picks.resize(options.max_curves);
    std::sort(picks.begin(), picks.end());
    return picks;
}

void write_curves_csv(std::ostream& out, const CurveFamily& family, const CurveExportOptions& options) {
    out << "grid_value,instance_id,probability\n";
    const auto& x = family.grid.values;
    for (const auto k : exported_curve_rows(family, options))
        for (std::size_t j = 0; j < x.size(); ++j)
            out << format_double(x[j]) << ',' << family.instance_ids[k] << ',' << fixed(family.curves[k][j], 4)
                << '\n';
    for (std::size_t j = 0; j < x.size(); ++j)
        out << format_double(x[j]) << ",AVG," << fixed(family.average[j], 4) << '\n';
}

std::string curves_to_json(const CurveFamily& family, const CurveExportOptions& options) {
    json j;
    j["feature"] = family.grid.feature;
    j["grid"] = family.grid.values;
    j["condition"] = condition_json(family.condition);
    j["n_instances"] = family.instance_ids.size();
    j["centered"] = family.centered;
    j["anchor"] = family.centered ? json(family.anchor) : json(nullptr);
    j["curves"] = json::array();
    for (const auto k : exported_curve_rows(family, options))
        j["curves"].push_back({{"instance_id", family.instance_ids[k]}, {"values", family.curves[k]}});
    j["average"] = family.average;
    return j.dump(2) + "\n";
}

void write_effects_csv(std::ostream& out, const std::vector<EffectRow>& rows) {
    out << "feature,delta,segment,kind,value,n_in_range\n";
    for (const auto& r : rows)
        out << r.feature << ',' << format_double(r.delta) << ',' << r.segment << ',' << to_string(r.kind) << ','
            << value_text(r) << ',' << r.n_in_range << '\n';
}

std::string effects_to_json(const std::vector<EffectRow>& rows) {
    json j = json::array();
    for (const auto& r : rows)
        j.push_back({{"feature", r.feature},
                     {"delta", r.delta},
                     {"segment", r.segment},
                     {"kind", std::string(to_string(r.kind))},
                     {"value", r.value ? json(*r.value) : json(nullptr)},
                     {"n_in_range", r.n_in_range}});
    return j.dump(2) + "\n";
}

void write_slopes_csv(std::ostream& out, const std::vector<SlopeRow>& rows) {
    out << "feature,segment,slope,n_instances\n";
    for (const auto& r : rows)
        out << r.feature << ',' << r.segment << ',' << fixed(r.slope, 4) << ',' << r.n_instances << '\n';
}

std::string slopes_to_json(const std::vector<SlopeRow>& rows) {
    json j = json::array();
    for (const auto& r : rows)
        j.push_back({{"feature", r.feature}, {"segment", r.segment}, {"slope", r.slope},
                     {"n_instances", r.n_instances}});
    return j.dump(2) + "\n";
}

} // namespace modeswitch
