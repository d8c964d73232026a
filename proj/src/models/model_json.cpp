#include "modeswitch/error.hpp"
#include "modeswitch/models.hpp"

#include "json.hpp"

namespace modeswitch {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "modeswitch-model";

json hyperparams_to_json(const Hyperparams& hp) {
    return {
        {"boost", {{"n_trees", hp.boost.n_trees}, {"shrinkage", hp.boost.shrinkage},
                   {"interaction_depth", hp.boost.interaction_depth}, {"min_obs_leaf", hp.boost.min_obs_leaf}}},
        {"bag", {{"n_trees", hp.bag.n_trees}, {"min_obs_leaf", hp.bag.min_obs_leaf}, {"bootstrap", hp.bag.bootstrap}}},
        {"rf", {{"n_trees", hp.rf.n_trees}, {"mtry", hp.rf.mtry}, {"min_obs_leaf", hp.rf.min_obs_leaf},
                {"bootstrap", hp.rf.bootstrap}}},
        {"nn", {{"hidden_units", hp.nn.hidden_units}, {"weight_decay", hp.nn.weight_decay},
                {"max_iter", hp.nn.max_iter}, {"tol", hp.nn.tol}, {"initial_step", hp.nn.initial_step}}},
        {"cart", {{"min_obs_leaf", hp.cart.min_obs_leaf}, {"max_leaves", hp.cart.max_leaves}}},
        {"logit", {{"max_iter", hp.logit.max_iter}, {"tol", hp.logit.tol}}},
        {"nb", {{"variance_floor", hp.nb.variance_floor}}},
    };
}

Hyperparams hyperparams_from_json(const json& j) {
    Hyperparams hp;
    const auto& b = j.at("boost");
    hp.boost.n_trees = b.at("n_trees");
    hp.boost.shrinkage = b.at("shrinkage");
    hp.boost.interaction_depth = b.at("interaction_depth");
    hp.boost.min_obs_leaf = b.at("min_obs_leaf");
    const auto& g = j.at("bag");
    hp.bag.n_trees = g.at("n_trees");
    hp.bag.min_obs_leaf = g.at("min_obs_leaf");
    hp.bag.bootstrap = g.at("bootstrap");
    const auto& r = j.at("rf");
    hp.rf.n_trees = r.at("n_trees");
    hp.rf.mtry = r.at("mtry");
    hp.rf.min_obs_leaf = r.at("min_obs_leaf");
    hp.rf.bootstrap = r.at("bootstrap");
    const auto& nn = j.at("nn");
    hp.nn.hidden_units = nn.at("hidden_units");
    hp.nn.weight_decay = nn.at("weight_decay");
    hp.nn.max_iter = nn.at("max_iter");
    hp.nn.tol = nn.at("tol");
    hp.nn.initial_step = nn.at("initial_step");
    hp.cart.min_obs_leaf = j.at("cart").at("min_obs_leaf");
    hp.cart.max_leaves = j.at("cart").at("max_leaves");
    hp.logit.max_iter = j.at("logit").at("max_iter");
    hp.logit.tol = j.at("logit").at("tol");
    hp.nb.variance_floor = j.at("nb").at("variance_floor");
    return hp;
}

json tree_to_json(const Tree& tree) {
    json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
         value = json::array();
    for (const auto& n : tree.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

Tree tree_from_json(const json& j, std::size_t n_features) {
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto value = j.at("value").get<std::vector<double>>();
    const std::size_t m = feature.size();
    if (m == 0 || threshold.size() != m || left.size() != m || right.size() != m || value.size() != m)
        throw ModelError("malformed tree: node arrays differ in length");
    Tree tree;
    tree.nodes.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto& node = tree.nodes[i];
        node = TreeNode{feature[i], threshold[i], left[i], right[i], value[i]};
        if (node.is_leaf()) continue;
        const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(m); };
        if (static_cast<std::size_t>(node.feature) >= n_features || !in_range(node.left) || !in_range(node.right))
            throw ModelError("malformed tree: bad feature or child index at node " + std::to_string(i));
    }
    return tree;
}

json specs_to_json(const std::vector<FeatureSpec>& specs) {
    json out = json::array();
    for (const auto& s : specs)
        out.push_back({{"name", s.name}, {"kind", std::string(to_string(s.kind))}, {"unit", s.unit},
                       {"observed_min", s.observed_min}, {"observed_max", s.observed_max}});
    return out;
}

std::vector<FeatureSpec> specs_from_json(const json& j) {
    std::vector<FeatureSpec> out;
    for (const auto& s : j)
        out.push_back(FeatureSpec{s.at("name"), feature_kind_from_string(s.at("kind").get<std::string>()),
                                  s.value("unit", ""), s.at("observed_min"), s.at("observed_max")});
    return out;
}

struct ParamsToJson {
    json operator()(const LogitParams& m) const {
        return {{"intercept", m.intercept}, {"coef", m.coef}, {"iterations", m.iterations},
                {"converged", m.converged}};
    }
    json operator()(const NbParams& m) const {
        json features = json::array();
        for (const auto& f : m.features)
            features.push_back({{"kind", std::string(to_string(f.kind))}, {"mean", f.mean},
                                {"variance", f.variance}, {"levels", f.levels},
                                {"level_prob", {f.level_prob[0], f.level_prob[1]}}});
        return {{"prior1", m.prior1}, {"features", features}};
    }
    json operator()(const ForestParams& m) const {
        json trees = json::array();
        for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
        return {{"trees", trees}};
    }
    json operator()(const BoostParams& m) const {
        json trees = json::array();
        for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
        return {{"init_score", m.init_score}, {"shrinkage", m.shrinkage}, {"trees", trees},
                {"train_deviance", m.train_deviance}};
    }
    json operator()(const NnParams& m) const {
        return {{"hidden_units", m.hidden_units}, {"input_mean", m.input_mean},
                {"input_scale", m.input_scale},   {"weights", m.weights},
                {"train_loss", m.train_loss},     {"iterations", m.iterations}};
    }
};

ModelParams params_from_json(ModelKind kind, const json& j, std::size_t p) {
    switch (kind) {
    case ModelKind::logit: {
        LogitParams m;
        m.intercept = j.at("intercept");
        m.coef = j.at("coef").get<std::vector<double>>();
        m.iterations = j.value("iterations", 0);
        m.converged = j.value("converged", false);
        if (m.coef.size() != p) throw ModelError("logit coefficient count does not match features");
        return m;
    }
    case ModelKind::nb: {
        NbParams m;
        m.prior1 = j.at("prior1");
        for (const auto& f : j.at("features")) {
            NbFeature nf;
            nf.kind = feature_kind_from_string(f.at("kind").get<std::string>());
            nf.mean = f.at("mean").get<std::array<double, 2>>();
            nf.variance = f.at("variance").get<std::array<double, 2>>();
            nf.levels = f.at("levels").get<std::vector<double>>();
            nf.level_prob[0] = f.at("level_prob").at(0).get<std::vector<double>>();
            nf.level_prob[1] = f.at("level_prob").at(1).get<std::vector<double>>();
            m.features.push_back(std::move(nf));
        }
        if (m.features.size() != p) throw ModelError("naive Bayes feature count does not match");
        return m;
    }
    case ModelKind::cart:
    case ModelKind::bag:
    case ModelKind::rf: {
        ForestParams m;
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, p));
        if (m.trees.empty()) throw ModelError("tree ensemble has no trees");
        return m;
    }
    case ModelKind::boost: {
        BoostParams m;
        m.init_score = j.at("init_score");
        m.shrinkage = j.at("shrinkage");
        for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, p));
        m.train_deviance = j.value("train_deviance", std::vector<double>{});
        return m;
    }
    case ModelKind::nn: {
        NnParams m;
        m.hidden_units = j.at("hidden_units");
        m.input_mean = j.at("input_mean").get<std::vector<double>>();
        m.input_scale = j.at("input_scale").get<std::vector<double>>();
        m.weights = j.at("weights").get<std::vector<double>>();
        m.train_loss = j.value("train_loss", std::vector<double>{});
        m.iterations = j.value("iterations", 0);
        const auto h = static_cast<std::size_t>(m.hidden_units);
        if (m.input_mean.size() != p || m.input_scale.size() != p || m.weights.size() != h * p + 2 * h + 1)
            throw ModelError("network parameter sizes do not match");
        return m;
    }
    }
    throw ModelError("unknown model kind");
}

} // namespace

std::string model_to_json(const SoftClassifier& model) {
    json j;
    j["format"] = kFormatName;
    j["version"] = kFormatVersion;
    j["kind"] = std::string(to_string(model.kind()));
    j["hyperparams"] = hyperparams_to_json(model.hyperparams());
    j["feature_specs"] = specs_to_json(model.feature_specs());
    j["params"] = std::visit(ParamsToJson{}, model.params());
    return j.dump();
}

SoftClassifier model_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        if (j.value("format", "") != kFormatName) throw ModelError("not a modeswitch model document");
        const int version = j.at("version");
        if (version != kFormatVersion)
            throw ModelError("unsupported model format version " + std::to_string(version));
        const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
        auto specs = specs_from_json(j.at("feature_specs"));
        auto params = params_from_json(kind, j.at("params"), specs.size());
        return SoftClassifier(kind, hyperparams_from_json(j.at("hyperparams")), std::move(params),
                              std::move(specs));
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ModelError(std::string("malformed model JSON: ") + e.what());
    }
}

} // namespace modeswitch
