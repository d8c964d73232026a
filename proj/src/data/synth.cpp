#include "modeswitch/synth.hpp"
#include "modeswitch/error.hpp"
#include "modeswitch/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace modeswitch {

namespace {

constexpr std::string_view kModePrefix = "Current_Mode_";

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double logistic(double u) {
    return u >= 0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

std::vector<double> support_of(const FeatureTarget& f) {
    if (!f.support.empty()) return f.support;
    std::vector<double> out;
    for (double v = std::ceil(f.min); v <= f.max; v += 1.0) out.push_back(v);
    return out;
}

// Utility terms with feature names resolved to column indices.
struct CompiledTerms {
    double intercept = 0.0;
    std::vector<std::pair<std::size_t, double>> linear;
    std::vector<std::tuple<std::size_t, double, double>> hinges;  // column, knot, coef
    struct Step {
        std::vector<std::tuple<std::size_t, double, bool>> when;
        double coef = 0.0;
    };
    std::vector<Step> steps;
    std::vector<std::tuple<std::size_t, std::size_t, double>> interactions;

    double eval(std::span<const double> row) const {
        double u = intercept;
        for (const auto& [c, coef] : linear) u += coef * row[c];
        for (const auto& [c, knot, coef] : hinges) u += coef * std::max(0.0, row[c] - knot);
        for (const auto& step : steps) {
            bool hit = true;
            for (const auto& [c, knot, above] : step.when) hit = hit && (above ? row[c] > knot : row[c] < knot);
            if (hit) u += step.coef;
        }
        for (const auto& [a, b, coef] : interactions) u += coef * row[a] * row[b];
        return u;
    }
};

struct CompiledUtility {
    CompiledTerms common;
    std::vector<CompiledTerms> per_mode;     // indexed like mode_order
    std::vector<std::size_t> indicator_cols; // one per non-reference mode

    explicit CompiledUtility(const SynthConfig& config) {
        const Schema schema = synth_schema(config);
        auto column = [&](const std::string& name) {
            for (std::size_t t = 0; t < schema.features.size(); ++t)
                if (schema.features[t].name == name) return t;
            throw std::invalid_argument("utility term references unknown feature '" + name + "'");
        };
        auto compile = [&](const UtilityTerms& terms) {
            CompiledTerms out;
            out.intercept = terms.intercept;
            for (const auto& [name, coef] : terms.linear) out.linear.emplace_back(column(name), coef);
            for (const auto& h : terms.hinges) out.hinges.emplace_back(column(h.feature), h.knot, h.coef);
            for (const auto& st : terms.steps) {
                CompiledTerms::Step step{{}, st.coef};
                for (const auto& w : st.when) step.when.emplace_back(column(w.feature), w.knot, w.above);
                out.steps.push_back(std::move(step));
            }
            for (const auto& x : terms.interactions)
                out.interactions.emplace_back(column(x.a), column(x.b), x.coef);
            return out;
        };
        common = compile(config.utility.common);
        for (const auto& mode : config.mode_order) {
            auto it = config.utility.segments.find(mode);
            per_mode.push_back(it == config.utility.segments.end() ? CompiledTerms{} : compile(it->second));
        }
        for (std::size_t m = 0; m + 1 < config.mode_order.size(); ++m)
            indicator_cols.push_back(column(std::string(kModePrefix) + config.mode_order[m]));
    }

    double eval(std::span<const double> row) const {
        std::size_t mode = per_mode.size() - 1;
        for (std::size_t m = 0; m < indicator_cols.size(); ++m)
            if (row[indicator_cols[m]] == 1.0) {
                mode = m;
                break;
            }
        return common.eval(row) + per_mode[mode].eval(row);
    }
};

double draw_truncated(const TruncatedNormal& tn, Rng& rng) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double x = tn.mu + tn.sigma * rng.normal();
        if (x >= tn.lo && x <= tn.hi) return x;
    }
    throw std::runtime_error("truncated normal rejection sampler did not accept a draw");
}

std::size_t draw_categorical(std::span<const double> cumulative, Rng& rng) {
    const double u = rng.uniform();
    for (std::size_t j = 0; j + 1 < cumulative.size(); ++j)
        if (u < cumulative[j]) return j;
    return cumulative.size() - 1;
}

std::vector<double> cumulate(std::span<const double> probs) {
    std::vector<double> out(probs.size());
    std::partial_sum(probs.begin(), probs.end(), out.begin());
    return out;
}

} // namespace

double TruncatedNormal::mean() const {
    const double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
    const double z = normal_cdf(b) - normal_cdf(a);
    return mu + sigma * (normal_pdf(a) - normal_pdf(b)) / z;
}

double TruncatedNormal::sd() const {
    const double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
    const double z = normal_cdf(b) - normal_cdf(a);
    const double r = (normal_pdf(a) - normal_pdf(b)) / z;
    const double var = sigma * sigma * (1.0 + (a * normal_pdf(a) - b * normal_pdf(b)) / z - r * r);
    return std::sqrt(std::max(var, 0.0));
}

TruncatedNormal fit_truncated_normal(double mean, double sd, double lo, double hi) {
    if (!(lo < mean && mean < hi && sd > 0.0))
        throw std::invalid_argument("truncated normal target must have lo < mean < hi and sd > 0");
    // Newton on (mu, log sigma) with a forward-difference Jacobian.
    double mu = mean, log_sigma = std::log(sd);
    auto residual = [&](double m, double ls) {
        TruncatedNormal tn{m, std::exp(ls), lo, hi};
        return std::pair{(tn.mean() - mean) / sd, (tn.sd() - sd) / sd};
    };
    auto norm = [](std::pair<double, double> r) { return std::hypot(r.first, r.second); };
    auto r = residual(mu, log_sigma);
    for (int iter = 0; iter < 200 && norm(r) > 1e-12; ++iter) {
        const double h = 1e-7;
        const auto rm = residual(mu + h * sd, log_sigma);
        const auto rs = residual(mu, log_sigma + h);
        const double j11 = (rm.first - r.first) / (h * sd), j12 = (rs.first - r.first) / h;
        const double j21 = (rm.second - r.second) / (h * sd), j22 = (rs.second - r.second) / h;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        const double dmu = -(j22 * r.first - j12 * r.second) / det;
        const double dls = -(-j21 * r.first + j11 * r.second) / det;
        double step = 1.0;
        for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
            const auto trial = residual(mu + step * dmu, log_sigma + step * dls);
            if (std::isfinite(trial.first) && std::isfinite(trial.second) && norm(trial) < norm(r)) {
                mu += step * dmu;
                log_sigma += step * dls;
                r = trial;
                break;
            }
        }
    }
    if (norm(r) > 1e-6)
        throw std::invalid_argument("cannot match truncated normal moments (mean " +
                                    format_double(mean) + ", sd " + format_double(sd) + ")");
    return TruncatedNormal{mu, std::exp(log_sigma), lo, hi};
}

std::vector<double> fit_categorical(std::span<const double> support, double mean, double sd) {
    const std::size_t k = support.size();
    if (k == 0) throw std::invalid_argument("empty categorical support");
    if (k == 1) return {1.0};
    if (k == 2) {
        const double w = (mean - support[0]) / (support[1] - support[0]);
        if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("categorical mean outside support");
        return {1.0 - w, w};
    }
    // Exponential family p_j ~ exp(a z_j + b z_j^2) on standardized support;
    // Newton on the convex dual log Z(a, b) - a*0 - b*1.
    std::vector<double> z(k);
    for (std::size_t j = 0; j < k; ++j) z[j] = (support[j] - mean) / sd;
    auto probs = [&](double a, double b) {
        std::vector<double> p(k);
        double top = -INFINITY;
        for (std::size_t j = 0; j < k; ++j) top = std::max(top, a * z[j] + b * z[j] * z[j]);
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) total += p[j] = std::exp(a * z[j] + b * z[j] * z[j] - top);
        for (auto& v : p) v /= total;
        return std::pair{p, std::log(total) + top};
    };
    double a = 0.0, b = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const auto [p, log_z] = probs(a, b);
        double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
        for (std::size_t j = 0; j < k; ++j) {
            m1 += p[j] * z[j];
            m2 += p[j] * z[j] * z[j];
            m3 += p[j] * z[j] * z[j] * z[j];
            m4 += p[j] * z[j] * z[j] * z[j] * z[j];
        }
        const double g1 = m1, g2 = m2 - 1.0;
        if (std::hypot(g1, g2) < 1e-13) return p;
        const double h11 = m2 - m1 * m1, h12 = m3 - m1 * m2, h22 = m4 - m2 * m2;
        const double det = h11 * h22 - h12 * h12;
        if (!(det > 0.0)) break;
        const double da = -(h22 * g1 - h12 * g2) / det;
        const double db = -(-h12 * g1 + h11 * g2) / det;
        const double dual = log_z - b;
        double step = 1.0;
        for (int halving = 0; halving < 50; ++halving, step *= 0.5) {
            const double na = a + step * da, nb = b + step * db;
            if (probs(na, nb).second - nb < dual) {
                a = na;
                b = nb;
                break;
            }
        }
    }
    const auto p = probs(a, b).first;
    double m1 = 0, m2 = 0;
    for (std::size_t j = 0; j < k; ++j) {
        m1 += p[j] * z[j];
        m2 += p[j] * z[j] * z[j];
    }
    if (std::abs(m1) > 1e-6 || std::abs(m2 - 1.0) > 1e-6)
        throw std::invalid_argument("cannot match categorical moments (mean " + format_double(mean) +
                                    ", sd " + format_double(sd) + ")");
    return p;
}

Schema synth_schema(const SynthConfig& config) {
    Schema schema;
    for (const auto& f : config.features) {
        FeatureSpec spec;
        spec.name = f.name;
        spec.kind = f.kind;
        spec.unit = f.unit;
        spec.observed_min = f.kind == FeatureKind::binary ? 0.0 : f.min;
        spec.observed_max = f.kind == FeatureKind::binary ? 1.0 : f.max;
        schema.features.push_back(std::move(spec));
    }
    for (std::size_t m = 0; m + 1 < config.mode_order.size(); ++m) {
        const std::string name = std::string(kModePrefix) + config.mode_order[m];
        schema.features.push_back(FeatureSpec{name, FeatureKind::binary, "indicator", 0.0, 1.0});
        schema.segment_keys.push_back(name);
    }
    if (!config.mode_order.empty()) schema.reference_segment = config.mode_order.back();
    return schema;
}

Schema default_schema() { return synth_schema(default_synth_config()); }

void validate(const SynthConfig& config) {
    if (config.n_rows == 0) throw std::invalid_argument("empty dataset requested");
    if (config.mode_order.size() < 2) throw std::invalid_argument("at least two modes are required");
    double total = 0.0;
    for (const auto& mode : config.mode_order) {
        auto it = config.mode_shares.find(mode);
        if (it == config.mode_shares.end())
            throw std::invalid_argument("no share given for mode " + mode);
        if (it->second < 0.0) throw std::invalid_argument("negative share for mode " + mode);
        total += it->second;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mode shares must sum to 1");
    for (const auto& [mode, terms] : config.utility.segments)
        if (std::find(config.mode_order.begin(), config.mode_order.end(), mode) == config.mode_order.end())
            throw std::invalid_argument("utility given for unknown mode " + mode);
    for (const auto& f : config.features) {
        if (f.kind == FeatureKind::binary) {
            if (!(f.mean >= 0.0 && f.mean <= 1.0))
                throw std::invalid_argument("binary feature " + f.name + " needs mean in [0, 1]");
        } else if (!(f.min <= f.max)) {
            throw std::invalid_argument("feature " + f.name + " has min > max");
        }
    }
    CompiledUtility check(config);  // resolves every term's feature name
}

Dataset synthesize(const SynthConfig& config) {
    validate(config);
    const Schema schema = synth_schema(config);
    const std::size_t p = schema.features.size();

    // Per-feature samplers, fitted once.
    std::vector<TruncatedNormal> normals(config.features.size());
    std::vector<std::vector<double>> supports(config.features.size());
    std::vector<std::vector<double>> cumulative(config.features.size());
    for (std::size_t f = 0; f < config.features.size(); ++f) {
        const auto& target = config.features[f];
        if (target.kind == FeatureKind::continuous) {
            normals[f] = fit_truncated_normal(target.mean, target.sd, target.min, target.max);
        } else if (target.kind == FeatureKind::discrete_ordinal) {
            supports[f] = support_of(target);
            cumulative[f] = cumulate(fit_categorical(supports[f], target.mean, target.sd));
        }
    }
    std::vector<double> mode_probs;
    for (const auto& mode : config.mode_order) mode_probs.push_back(config.mode_shares.at(mode));
    const auto mode_cumulative = cumulate(mode_probs);
    const CompiledUtility utility(config);

    Rng rng(config.seed);
    std::vector<double> rows(config.n_rows * p, 0.0);
    std::vector<int> response(config.n_rows);
    for (std::size_t i = 0; i < config.n_rows; ++i) {
        std::span<double> row(rows.data() + i * p, p);
        for (std::size_t f = 0; f < config.features.size(); ++f) {
            const auto& target = config.features[f];
            switch (target.kind) {
            case FeatureKind::continuous: {
                const double x = std::round(draw_truncated(normals[f], rng) * 100.0) / 100.0;
                row[f] = std::clamp(x, target.min, target.max);
                break;
            }
            case FeatureKind::discrete_ordinal:
                row[f] = supports[f][draw_categorical(cumulative[f], rng)];
                break;
            case FeatureKind::binary:
                row[f] = rng.bernoulli(target.mean) ? 1.0 : 0.0;
                break;
            }
        }
        const std::size_t mode = draw_categorical(mode_cumulative, rng);
        if (mode + 1 < config.mode_order.size()) row[config.features.size() + mode] = 1.0;
        response[i] = rng.bernoulli(logistic(utility.eval(row))) ? 1 : 0;
    }
    return Dataset(schema.features, std::move(rows), std::move(response), schema.segment_keys,
                   schema.reference_segment);
}

double planted_utility(const SynthConfig& config, std::span<const double> row) {
    const CompiledUtility utility(config);
    return utility.eval(row);
}

double planted_probability(const SynthConfig& config, std::span<const double> row) {
    return logistic(planted_utility(config, row));
}

// ---------------------------------------------------------------------------
// Defaults

SynthConfig default_synth_config() {
    SynthConfig c;
    using K = FeatureKind;
    c.features = {
        {"TT_Drive", K::continuous, "min", 15.21, 6.62, 2.0, 40.0, {}},
        {"TT_Walk", K::continuous, "min", 32.30, 23.08, 3.0, 120.0, {}},
        {"TT_Bike", K::continuous, "min", 15.34, 10.45, 1.0, 55.0, {}},
        {"TT_MOD", K::continuous, "min", 18.68, 4.75, 6.2, 34.0, {}},
        {"Wait_Time", K::discrete_ordinal, "min", 5.00, 2.07, 3.0, 8.0, {3.0, 5.0, 8.0}},
        {"Transfer", K::discrete_ordinal, "count", 0.33, 0.65, 0.0, 2.0, {}},
        {"Rideshare", K::discrete_ordinal, "count", 1.11, 0.82, 0.0, 2.0, {}},
        {"Income", K::discrete_ordinal, "level", 1.93, 1.34, 1.0, 6.0, {}},
        {"Bike_Walkability", K::discrete_ordinal, "level", 3.22, 0.95, 1.0, 4.0, {}},
        {"MOD_Access", K::discrete_ordinal, "level", 3.09, 1.02, 1.0, 4.0, {}},
        {"CarPerCap", K::continuous, "cars/person", 0.53, 0.48, 0.0, 3.0, {}},
        {"Female", K::binary, "indicator", 0.5632, 0.0, 0.0, 1.0, {}},
        {"Student", K::binary, "indicator", 0.7352, 0.0, 0.0, 1.0, {}},
    };
    c.mode_shares = {{"Car", 0.1668}, {"Walk", 0.4041}, {"Bike", 0.0825}, {"Bus", 0.3466}};

    UtilityTerms common;
    common.intercept = -0.36;
    common.linear = {{"MOD_Access", 0.63}, {"CarPerCap", -1.08}, {"Student", 1.08},
                     {"Female", 0.18},     {"Bike_Walkability", -0.45}, {"Income", 0.09}};
    // Threshold effects, some of them joint. Trees pick these up directly;
    // smooth learners have to approximate them.
    common.steps = {{{{"TT_MOD", 24.0, true}}, -2.16},
                    {{{"CarPerCap", 1.0, true}}, -1.8},
                    {{{"Income", 3.5, true}}, -1.62},
                    {{{"Bike_Walkability", 2.5, true}}, -1.08},
                    {{{"Student", 0.5, true}, {"Income", 2.5, false}}, 3.6},
                    {{{"TT_MOD", 18.0, true}, {"MOD_Access", 2.5, false}}, -3.6}};
    c.utility.common = common;

    // In-service time is flat below 10 minutes and penalized beyond it; the
    // wait-time penalty flattens past 5 minutes; the second transfer costs
    // more than the first. Rideshare sensitivity is largest for Car users.
    auto segment = [](double intercept, double tt_slope, double wait, double wait_relief,
                      double transfer, double second_transfer, double rideshare) {
        UtilityTerms t;
        t.intercept = intercept;
        t.linear = {{"Wait_Time", wait}, {"Transfer", transfer}, {"Rideshare", rideshare}};
        t.hinges = {{"TT_MOD", 10.0, tt_slope},
                    {"Wait_Time", 5.0, wait_relief},
                    {"Transfer", 1.0, second_transfer}};
        return t;
    };
    auto car = segment(6.3, -0.43, -0.81, 0.54, -1.62, -0.9, -1.98);
    car.linear["TT_Drive"] = 0.18;
    car.steps = {{{{"Rideshare", 0.5, true}}, -1.8},
                 {{{"TT_Drive", 20.0, true}}, 1.8},
                 {{{"TT_MOD", 20.0, true}, {"CarPerCap", 0.8, true}}, -4.32}};
    auto walk = segment(-0.18, -0.54, -0.54, 0.32, -0.63, -1.08, -0.9);
    walk.linear["TT_Walk"] = 0.06;
    walk.steps = {{{{"TT_Walk", 45.0, true}}, 2.16},
                  {{{"TT_Walk", 30.0, true}, {"Bike_Walkability", 2.5, false}}, 4.32}};
    auto bike = segment(-2.0, -0.47, -0.45, 0.27, -0.63, -0.9, -0.63);
    bike.linear["TT_Bike"] = 0.09;
    bike.steps = {{{{"TT_Bike", 25.0, true}}, 2.16},
                  {{{"TT_Bike", 15.0, true}, {"Female", 0.5, true}}, 3.6}};
    auto bus = segment(7.84, -0.43, -0.5, 0.27, -1.62, -1.26, -0.54);
    bus.steps = {{{{"Wait_Time", 6.0, true}}, -1.44},
                 {{{"Transfer", 0.5, true}, {"Wait_Time", 6.0, true}}, -4.32}};
    c.utility.segments = {{"Car", car}, {"Walk", walk}, {"Bike", bike}, {"Bus", bus}};
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json terms_to_json(const UtilityTerms& t) {
    json j;
    j["intercept"] = t.intercept;
    j["linear"] = t.linear;
    j["hinges"] = json::array();
    for (const auto& h : t.hinges)
        j["hinges"].push_back({{"feature", h.feature}, {"knot", h.knot}, {"coef", h.coef}});
    j["steps"] = json::array();
    for (const auto& st : t.steps) {
        json when = json::array();
        for (const auto& w : st.when) when.push_back({{"feature", w.feature}, {"knot", w.knot}, {"above", w.above}});
        j["steps"].push_back({{"when", when}, {"coef", st.coef}});
    }
    j["interactions"] = json::array();
    for (const auto& x : t.interactions)
        j["interactions"].push_back({{"a", x.a}, {"b", x.b}, {"coef", x.coef}});
    return j;
}

UtilityTerms terms_from_json(const json& j) {
    UtilityTerms t;
    t.intercept = j.value("intercept", 0.0);
    if (j.contains("linear")) t.linear = j.at("linear").get<std::map<std::string, double>>();
    if (j.contains("hinges"))
        for (const auto& h : j.at("hinges"))
            t.hinges.push_back({h.at("feature").get<std::string>(), h.at("knot").get<double>(),
                                h.at("coef").get<double>()});
    if (j.contains("steps"))
        for (const auto& h : j.at("steps")) {
            StepTerm st;
            st.coef = h.at("coef").get<double>();
            for (const auto& w : h.at("when"))
                st.when.push_back({w.at("feature").get<std::string>(), w.at("knot").get<double>(),
                                   w.value("above", true)});
            if (st.when.empty()) throw std::invalid_argument("step term without thresholds");
            t.steps.push_back(std::move(st));
        }
    if (j.contains("interactions"))
        for (const auto& x : j.at("interactions"))
            t.interactions.push_back(
                {x.at("a").get<std::string>(), x.at("b").get<std::string>(), x.at("coef").get<double>()});
    return t;
}

} // namespace

std::string synth_config_to_json(const SynthConfig& config) {
    json j;
    j["n_rows"] = config.n_rows;
    j["seed"] = config.seed;
    j["marginal_targets"] = json::array();
    for (const auto& f : config.features) {
        json t{{"name", f.name}, {"kind", std::string(to_string(f.kind))}, {"unit", f.unit},
               {"mean", f.mean}, {"sd", f.sd}, {"min", f.min}, {"max", f.max}};
        if (!f.support.empty()) t["support"] = f.support;
        j["marginal_targets"].push_back(std::move(t));
    }
    j["mode_order"] = config.mode_order;
    j["mode_shares"] = config.mode_shares;
    j["utility_spec"]["common"] = terms_to_json(config.utility.common);
    for (const auto& [mode, terms] : config.utility.segments)
        j["utility_spec"]["segments"][mode] = terms_to_json(terms);
    return j.dump(2);
}

SynthConfig synth_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid synth config JSON: ") + e.what());
    }
    SynthConfig c = default_synth_config();
    try {
        if (j.contains("n_rows")) c.n_rows = j.at("n_rows").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("marginal_targets")) {
            c.features.clear();
            for (const auto& t : j.at("marginal_targets")) {
                FeatureTarget f;
                f.name = t.at("name").get<std::string>();
                f.kind = feature_kind_from_string(t.at("kind").get<std::string>());
                f.unit = t.value("unit", "");
                f.mean = t.at("mean").get<double>();
                f.sd = t.value("sd", 0.0);
                f.min = t.value("min", 0.0);
                f.max = t.value("max", 1.0);
                if (t.contains("support")) f.support = t.at("support").get<std::vector<double>>();
                c.features.push_back(std::move(f));
            }
        }
        if (j.contains("mode_order")) c.mode_order = j.at("mode_order").get<std::vector<std::string>>();
        if (j.contains("mode_shares"))
            c.mode_shares = j.at("mode_shares").get<std::map<std::string, double>>();
        if (j.contains("utility_spec")) {
            const auto& u = j.at("utility_spec");
            c.utility = UtilitySpec{};
            if (u.contains("common")) c.utility.common = terms_from_json(u.at("common"));
            if (u.contains("segments"))
                for (const auto& [mode, terms] : u.at("segments").items())
                    c.utility.segments[mode] = terms_from_json(terms);
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("invalid synth config: ") + e.what());
    }
    return c;
}

} // namespace modeswitch
