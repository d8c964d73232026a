#include "modeswitch/interpret.hpp"
#include "modeswitch/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace modeswitch {

std::string_view to_string(EffectKind kind) {
    return kind == EffectKind::marginal ? "marginal" : "elasticity";
}

namespace {

double perturb(double x, double delta, DeltaMode mode) {
    return mode == DeltaMode::unit ? x + delta : x * (1.0 + delta);
}

DeltaMode mode_of(EffectKind kind) { return kind == EffectKind::marginal ? DeltaMode::unit : DeltaMode::fraction; }

void check_request(const Dataset& data, std::size_t t, double delta, EffectKind kind) {
    if (delta == 0.0 || !std::isfinite(delta)) throw std::invalid_argument("delta must be finite and nonzero");
    if (kind == EffectKind::elasticity && data.spec(t).kind != FeatureKind::continuous)
        throw std::invalid_argument("elasticity is only defined for continuous features; '" + data.spec(t).name +
                                    "' is " + std::string(to_string(data.spec(t).kind)));
}

// Per-row probabilities before and after the perturbation. Rows whose
// perturbed value leaves the observed range are flagged and not predicted.
struct Perturbation {
    std::vector<double> base;
    std::vector<double> moved;
    std::vector<char> in_range;
};

std::vector<double> base_probabilities(const SoftClassifier& model, const Dataset& data, int threads) {
    std::vector<double> out(data.n_rows());
    parallel_for(data.n_rows(), threads, [&](std::size_t i) { out[i] = model.predict_proba(data.row(i)); });
    return out;
}

Perturbation perturbed(const SoftClassifier& model, const Dataset& data, std::size_t t, double delta,
                       DeltaMode mode, std::vector<double> base, int threads) {
    Perturbation p;
    p.base = std::move(base);
    p.moved.assign(data.n_rows(), 0.0);
    p.in_range.assign(data.n_rows(), 0);
    const FeatureSpec& spec = data.spec(t);
    parallel_for(data.n_rows(), threads, [&](std::size_t i) {
        const auto src = data.row(i);
        const double v = perturb(src[t], delta, mode);
        if (!(v >= spec.observed_min && v <= spec.observed_max)) return;
        p.in_range[i] = 1;
        std::vector<double> row(src.begin(), src.end());
        row[t] = v;
        p.moved[i] = model.predict_proba(row);
    });
    return p;
}

EffectRow summarize(const FeatureSpec& spec, double delta, EffectKind kind,
                    const std::vector<std::size_t>& rows, std::string segment, const Perturbation& p) {
    EffectRow r{spec.name, delta, std::move(segment), kind, std::nullopt, 0};
    double before = 0.0, after = 0.0;
    for (const auto i : rows) {
        if (!p.in_range[i]) continue;
        before += p.base[i];
        after += p.moved[i];
        ++r.n_in_range;
    }
    if (r.n_in_range == 0) return r;
    const double n = static_cast<double>(r.n_in_range);
    const double q_before = before / n, q_after = after / n;
    if (kind == EffectKind::marginal) {
        r.value = (q_after - q_before) / std::fabs(delta);
    } else if (q_before > 0.0) {
        r.value = ((q_after - q_before) / q_before) / std::fabs(delta);
    }
    return r;
}

EffectRow single_effect(const SoftClassifier& model, const Dataset& data, std::string_view feature,
                        double delta, EffectKind kind, const std::optional<Condition>& condition, int threads) {
    const std::size_t t = data.feature_index(feature);
    check_request(data, t, delta, kind);
    const auto rows = data.select(condition ? *condition : Condition{});
    const auto p = perturbed(model, data, t, delta, mode_of(kind), base_probabilities(model, data, threads), threads);
    return summarize(data.spec(t), delta, kind, rows, condition ? condition->label() : "All", p);
}

} // namespace

std::vector<std::size_t> in_range_filter(const Dataset& data, std::string_view feature, double delta,
                                         DeltaMode mode) {
    const std::size_t t = data.feature_index(feature);
    if (delta == 0.0 || !std::isfinite(delta)) throw std::invalid_argument("delta must be finite and nonzero");
    const FeatureSpec& spec = data.spec(t);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < data.n_rows(); ++i) {
        const double v = perturb(data.at(i, t), delta, mode);
        if (v >= spec.observed_min && v <= spec.observed_max) out.push_back(i);
    }
    return out;
}

EffectRow marginal_effect(const SoftClassifier& model, const Dataset& data, std::string_view feature,
                          double delta, const std::optional<Condition>& condition, int threads) {
    return single_effect(model, data, feature, delta, EffectKind::marginal, condition, threads);
}

EffectRow elasticity(const SoftClassifier& model, const Dataset& data, std::string_view feature, double delta,
                     const std::optional<Condition>& condition, int threads) {
    return single_effect(model, data, feature, delta, EffectKind::elasticity, condition, threads);
}

std::vector<EffectSpec> default_effect_specs() {
    using K = EffectKind;
    return {{"Wait_Time", 1.0, K::marginal},  {"Wait_Time", -2.0, K::marginal}, {"Transfer", 1.0, K::marginal},
            {"Transfer", -1.0, K::marginal},  {"Rideshare", 1.0, K::marginal}, {"Rideshare", -1.0, K::marginal},
            {"TT_MOD", 1.0, K::marginal},     {"TT_MOD", -1.0, K::marginal},   {"TT_MOD", 0.1, K::elasticity},
            {"TT_MOD", -0.1, K::elasticity}};
}

std::vector<EffectRow> effects_suite(const SoftClassifier& model, const Dataset& data,
                                     const std::vector<EffectSpec>& specs, int threads) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> segments;
    segments.emplace_back("All", data.select(Condition{}));
    if (!data.segment_keys().empty())
        for (const auto& seg : mode_segments(data)) segments.emplace_back(seg.name, data.select(seg.condition));

    const auto base = base_probabilities(model, data, threads);
    std::vector<EffectRow> out;
    for (const auto& s : specs) {
        const std::size_t t = data.feature_index(s.feature);
        check_request(data, t, s.delta, s.kind);
        const auto p = perturbed(model, data, t, s.delta, mode_of(s.kind), base, threads);
        for (const auto& [name, rows] : segments)
            out.push_back(summarize(data.spec(t), s.delta, s.kind, rows, name, p));
    }
    return out;
}

} // namespace modeswitch
