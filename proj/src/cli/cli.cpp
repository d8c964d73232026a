#include "modeswitch/cli.hpp"

#include "modeswitch/data.hpp"
#include "modeswitch/error.hpp"
#include "modeswitch/eval.hpp"
#include "modeswitch/interpret.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/svg.hpp"
#include "modeswitch/synth.hpp"

#include "../format.hpp"
#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace modeswitch {

namespace {

namespace fs = std::filesystem;

// Bad flags or flag combinations.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t kDefaultSeed = 42;
constexpr const char* kModePrefix = "Current_Mode_";

struct Options {
    std::string data, model, out, test_out, config, format;
    std::string feature, segment, segment_by, model_kind = "boost", models;
    std::vector<std::string> features;
    std::optional<std::uint64_t> seed;
    std::optional<double> value;
    std::optional<std::size_t> n_rows;
    int grid_points = 50;
    std::size_t k = 10;
    double test_fraction = 0.1;
    int threads = 1;
    bool center = false;
    std::size_t anchor = 0;
    std::size_t max_curves = 100;
};

std::uint64_t default_seed() {
    const char* env = std::getenv(kSeedEnv);
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    std::uint64_t v = 0;
    const std::string text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer: '" + text + "'");
    return v;
}

std::uint64_t seed_of(const Options& o) { return o.seed ? *o.seed : default_seed(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Temp file in the target directory, then rename over the target.
void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + path + "'");
        out << content;
        out.flush();
        if (!out) throw IoError("cannot write '" + path + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot write '" + path + "'");
    }
}

std::string require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing required option ") + flag);
    return value;
}

// Explicit --format, else the output extension, else csv.
std::string output_format(const Options& o, std::initializer_list<const char*> allowed) {
    std::string f = o.format;
    if (f.empty()) {
        const std::string ext = fs::path(o.out).extension().string();
        f = ext == ".json" ? "json" : ext == ".svg" ? "svg" : "csv";
    }
    for (const char* a : allowed)
        if (f == a) return f;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw UsageError("--format " + f + " is not available for this command (use " + list + ")");
}

SynthConfig synth_config(const Options& o) {
    if (o.config.empty()) return default_synth_config();
    return synth_config_from_json(read_file(o.config));
}

Dataset load_data(const Options& o, const Schema& schema) {
    const std::string path = require(o.data, "--data");
    if (!fs::exists(path)) throw IoError("cannot open '" + path + "'");
    try {
        return load_csv(path, schema);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

Dataset load_plain_data(const Options& o) { return load_data(o, synth_schema(synth_config(o))); }

SoftClassifier load_model(const Options& o) {
    const std::string path = require(o.model, "--model");
    try {
        return model_from_json(read_file(path));
    } catch (const ModelError& e) {
        throw ModelError(path + ": " + e.what());
    }
}

// Data laid out as the model expects: its feature columns, with the
// current-mode indicators as segment keys.
Dataset load_model_data(const Options& o, const SoftClassifier& model) {
    Schema schema;
    schema.features = model.feature_specs();
    for (const auto& f : schema.features)
        if (f.name.rfind(kModePrefix, 0) == 0) schema.segment_keys.push_back(f.name);
    if (!o.config.empty()) schema.reference_segment = synth_config(o).mode_order.back();
    return load_data(o, schema);
}

std::optional<Condition> condition_of(const Options& o, const Dataset& data) {
    if (!o.segment.empty() && !o.segment_by.empty())
        throw UsageError("--segment and --segment-by are mutually exclusive");
    if (!o.segment_by.empty()) {
        if (!o.value) throw UsageError("--segment-by needs --value");
        data.feature_index(o.segment_by);
        return Condition::on(o.segment_by, *o.value);
    }
    if (o.value) throw UsageError("--value needs --segment-by");
    if (o.segment.empty() || o.segment == "All") return std::nullopt;
    if (data.segment_keys().empty()) throw UsageError("--segment: data has no current-mode columns");
    for (const auto& seg : mode_segments(data))
        if (seg.name == o.segment) return seg.condition;
    throw UsageError("--segment: unknown segment '" + o.segment + "'");
}

std::string dataset_csv(const Dataset& d) {
    std::ostringstream ss;
    write_csv(ss, d);
    return ss.str();
}

// ---------------------------------------------------------------------------
// Commands. Each returns the one-line summary.

std::string cmd_synth(const Options& o) {
    const std::string out = require(o.out, "--out");
    output_format(o, {"csv"});
    SynthConfig config = synth_config(o);
    config.seed = seed_of(o);
    if (o.n_rows) config.n_rows = *o.n_rows;
    const Dataset data = synthesize(config);
    write_atomic(out, dataset_csv(data));
    std::size_t ones = 0;
    for (int y : data.responses()) ones += static_cast<std::size_t>(y);
    return "wrote " + out + ": " + std::to_string(data.n_rows()) + " rows, switching share " +
           detail::percent(static_cast<double>(ones) / static_cast<double>(data.n_rows()));
}

std::string cmd_split(const Options& o) {
    const std::string out = require(o.out, "--out"), test_out = require(o.test_out, "--test-out");
    if (!(o.test_fraction > 0.0 && o.test_fraction < 1.0)) throw UsageError("--test-fraction must lie in (0, 1)");
    const Dataset data = load_plain_data(o);
    const auto split = stratified_split_indices(data, o.test_fraction, seed_of(o));
    write_atomic(out, dataset_csv(data.subset(split.train_indices)));
    write_atomic(test_out, dataset_csv(data.subset(split.test_indices)));
    return "wrote " + out + " (" + std::to_string(split.train_indices.size()) + " rows) and " + test_out + " (" +
           std::to_string(split.test_indices.size()) + " rows)";
}

std::string cmd_vif(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json"});
    const Dataset data = load_plain_data(o);
    const auto v = vif(data);
    std::ostringstream ss;
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (std::size_t t = 0; t < v.size(); ++t)
            j.push_back({{"feature", data.spec(t).name}, {"vif", std::isfinite(v[t]) ? nlohmann::json(v[t]) : nullptr}});
        ss << j.dump(2) << '\n';
    } else {
        ss << "feature,vif\n";
        for (std::size_t t = 0; t < v.size(); ++t)
            ss << data.spec(t).name << ',' << (std::isfinite(v[t]) ? detail::fixed(v[t], 4) : "inf") << '\n';
    }
    write_atomic(out, ss.str());
    const double worst = *std::max_element(v.begin(), v.end());
    return "wrote " + out + ": " + std::to_string(v.size()) + " features, max VIF " +
           (std::isfinite(worst) ? detail::fixed(worst, 2) : "inf");
}

std::string cmd_crosstab(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json"});
    const CrossTab tab = crosstab(load_plain_data(o));
    std::ostringstream ss;
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (std::size_t m = 0; m < tab.modes.size(); ++m)
            j.push_back({{"mode", tab.modes[m]}, {"no_switch", tab.counts[m][0]}, {"switch", tab.counts[m][1]}});
        ss << j.dump(2) << '\n';
    } else {
        ss << "mode,no_switch,switch,total\n";
        for (std::size_t m = 0; m < tab.modes.size(); ++m)
            ss << tab.modes[m] << ',' << tab.counts[m][0] << ',' << tab.counts[m][1] << ','
               << tab.counts[m][0] + tab.counts[m][1] << '\n';
    }
    write_atomic(out, ss.str());
    return "wrote " + out + ": " + std::to_string(tab.total()) + " rows in " + std::to_string(tab.modes.size()) +
           " modes";
}

std::vector<ModelKind> model_list(const Options& o) {
    if (o.models.empty()) return {kAllModelKinds.begin(), kAllModelKinds.end()};
    std::vector<ModelKind> kinds;
    std::stringstream ss(o.models);
    std::string item;
    while (std::getline(ss, item, ',')) kinds.push_back(model_kind_from_string(item));
    return kinds;
}

std::string cmd_cv(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json"});
    if (o.k < 2) throw UsageError("--k must be at least 2");
    const auto kinds = model_list(o);
    const Dataset data = load_plain_data(o);
    const CVReport report = cross_validate(data, o.k, kinds, seed_of(o), Hyperparams{}, o.threads);
    std::ostringstream ss;
    if (format == "json")
        ss << cv_report_to_json(report);
    else
        write_cv_csv(ss, report);
    write_atomic(out, ss.str());
    return "wrote " + out + ": " + std::to_string(kinds.size()) + " models x " + std::to_string(o.k) +
           " folds, selected " + std::string(to_string(report.selected_model));
}

std::string cmd_train(const Options& o) {
    const std::string out = require(o.out, "--out");
    output_format(o, {"json"});
    const ModelKind kind = model_kind_from_string(o.model_kind);
    const Dataset data = load_plain_data(o);
    const SoftClassifier model = fit_model(kind, data, Hyperparams{}, seed_of(o), o.threads);
    write_atomic(out, model_to_json(model) + "\n");
    return "wrote " + out + ": " + std::string(to_string(kind)) + " fitted on " + std::to_string(data.n_rows()) +
           " rows";
}

std::string cmd_evaluate(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json"});
    const SoftClassifier model = load_model(o);
    const Dataset data = load_model_data(o, model);
    const auto reports = segment_report(model, data);
    std::ostringstream ss;
    if (format == "json")
        ss << metric_reports_to_json(reports);
    else
        write_metric_csv(ss, reports);
    write_atomic(out, ss.str());
    return "wrote " + out + ": accuracy " + detail::fixed(*reports.front().overall_accuracy, 4) + ", L1-norm " +
           detail::fixed(*reports.front().l1_norm, 5);
}

enum class CurveCommand { pdp, ice, cpdp, cipdp };

std::string cmd_curves(const Options& o, CurveCommand which) {
    const std::string out = require(o.out, "--out");
    const std::string feature = require(o.feature, "--feature");
    const std::string format = output_format(o, {"csv", "json", "svg"});
    const SoftClassifier model = load_model(o);
    const Dataset data = load_model_data(o, model);
    const auto condition = condition_of(o, data);
    const bool conditional = which == CurveCommand::cpdp || which == CurveCommand::cipdp;
    if (conditional && !condition) throw UsageError("this command needs --segment or --segment-by/--value");
    if (!conditional && condition && which == CurveCommand::pdp)
        throw UsageError("pdp takes no condition; use cpdp");
    const Grid grid = make_grid(data, feature, o.grid_points);

    CurveFamily family;
    switch (which) {
    case CurveCommand::pdp: family = pdp(model, data, grid, o.threads); break;
    case CurveCommand::ice: family = ice(model, data, grid, condition, o.threads); break;
    case CurveCommand::cpdp: family = cpdp(model, data, grid, *condition, o.threads); break;
    case CurveCommand::cipdp: family = cipdp(model, data, grid, *condition, o.threads); break;
    }
    if (o.center) family = center_curves(family, o.anchor);

    const CurveExportOptions exp{o.max_curves, seed_of(o)};
    std::ostringstream ss;
    if (format == "json")
        ss << curves_to_json(family, exp);
    else if (format == "svg")
        ss << render_svg(family, exp);
    else
        write_curves_csv(ss, family, exp);
    write_atomic(out, ss.str());
    std::string summary = "wrote " + out + ": " + feature + ", " + std::to_string(grid.values.size()) +
                          " grid points, " + std::to_string(family.instance_ids.size()) + " instances";
    if (!family.centered && grid.values.size() > 1 && grid.values.back() > grid.values.front())
        summary += ", slope " + detail::fixed(global_slope(family), 4);
    return summary;
}

std::string cmd_slopes(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json"});
    const SoftClassifier model = load_model(o);
    const Dataset data = load_model_data(o, model);
    const std::vector<std::string> features =
        o.features.empty() ? std::vector<std::string>{"TT_MOD", "Wait_Time", "Transfer", "Rideshare"} : o.features;
    std::vector<std::pair<std::string, std::optional<Condition>>> segments{{"All", std::nullopt}};
    if (!data.segment_keys().empty())
        for (const auto& seg : mode_segments(data)) segments.emplace_back(seg.name, seg.condition);

    std::vector<SlopeRow> rows;
    for (const auto& f : features) {
        const Grid grid = make_grid(data, f, o.grid_points);
        for (const auto& [name, cond] : segments) {
            if (cond && data.select(*cond).empty()) continue;
            const CurveFamily fam =
                cond ? cpdp(model, data, grid, *cond, o.threads) : pdp(model, data, grid, o.threads);
            rows.push_back({f, name, global_slope(fam), fam.instance_ids.size()});
        }
    }
    std::ostringstream ss;
    if (format == "json")
        ss << slopes_to_json(rows);
    else
        write_slopes_csv(ss, rows);
    write_atomic(out, ss.str());
    return "wrote " + out + ": " + std::to_string(rows.size()) + " slopes";
}

std::string cmd_effects(const Options& o) {
    const std::string out = require(o.out, "--out");
    const std::string format = output_format(o, {"csv", "json", "svg"});
    const SoftClassifier model = load_model(o);
    const Dataset data = load_model_data(o, model);
    const auto rows = effects_suite(model, data, default_effect_specs(), o.threads);
    std::ostringstream ss;
    if (format == "json")
        ss << effects_to_json(rows);
    else if (format == "svg")
        ss << render_svg(rows);
    else
        write_effects_csv(ss, rows);
    write_atomic(out, ss.str());
    return "wrote " + out + ": " + std::to_string(rows.size()) + " effect rows";
}

int run_manifest(const std::string& path, std::ostream& out, std::ostream& err) {
    nlohmann::json steps;
    try {
        steps = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        err << "error: --manifest " << path << ": " << e.what() << '\n';
        return kExitUsage;
    }
    if (!steps.is_array()) {
        err << "error: --manifest " << path << ": expected a JSON array of argument lists\n";
        return kExitUsage;
    }
    for (std::size_t s = 0; s < steps.size(); ++s) {
        std::vector<std::string> args;
        try {
            args = steps[s].get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception&) {
            err << "error: --manifest " << path << ": step " << s + 1 << " is not a list of strings\n";
            return kExitUsage;
        }
        if (std::find(args.begin(), args.end(), "--manifest") != args.end()) {
            err << "error: --manifest " << path << ": step " << s + 1 << " nests another manifest\n";
            return kExitUsage;
        }
        const int status = run_cli(args, out, err);
        if (status != kExitOk) {
            err << "error: --manifest " << path << ": step " << s + 1 << " failed\n";
            return status;
        }
    }
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "output file");
    cmd->add_option("--format", o.format, "csv, json or svg (default: from the --out extension)");
    cmd->add_option("--config", o.config, "synthetic-data configuration (JSON); defines the CSV schema");
}

void add_curve_options(CLI::App* cmd, Options& o) {
    add_common(cmd, o);
    cmd->add_option("--model", o.model, "model file from `train`");
    cmd->add_option("--data", o.data, "CSV data");
    cmd->add_option("--feature", o.feature, "feature on the x axis");
    cmd->add_option("--grid-points", o.grid_points, "grid resolution for continuous features");
    cmd->add_option("--segment", o.segment, "current-mode segment (Car, Walk, Bike, Bus)");
    cmd->add_option("--segment-by", o.segment_by, "conditioning feature");
    cmd->add_option("--value", o.value, "value of the conditioning feature");
    cmd->add_flag("--center", o.center, "subtract each curve's value at the anchor");
    cmd->add_option("--anchor", o.anchor, "grid index used by --center");
    cmd->add_option("--max-curves", o.max_curves, "curves exported at most (seeded subsample)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    std::string manifest;
    CLI::App app{"Mode-switching analysis: synthetic data, soft classifiers and interpretation tools", "modeswitch"};
    app.set_version_flag("--version", "modeswitch 1.0");
    app.add_option("--manifest", manifest, "JSON list of argument lists, run in order");
    app.add_option("--threads", o.threads, "worker threads (default 1)")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, std::string("random seed (default 42, or $") + kSeedEnv + ")");
    app.fallthrough();
    app.require_subcommand(0, 1);

    auto* synth = app.add_subcommand("synth", "generate the synthetic survey dataset");
    add_common(synth, o);
    synth->add_option("--n-rows", o.n_rows, "number of rows");

    auto* split = app.add_subcommand("split", "stratified train/test split");
    add_common(split, o);
    split->add_option("--data", o.data, "CSV data");
    split->add_option("--test-out", o.test_out, "test-set output file");
    split->add_option("--test-fraction", o.test_fraction, "test fraction (default 0.1)");

    auto* vif_cmd = app.add_subcommand("vif", "variance inflation factors");
    add_common(vif_cmd, o);
    vif_cmd->add_option("--data", o.data, "CSV data");

    auto* xtab = app.add_subcommand("crosstab", "current mode by switching decision");
    add_common(xtab, o);
    xtab->add_option("--data", o.data, "CSV data");

    auto* cv = app.add_subcommand("cv", "k-fold cross-validation and model selection");
    add_common(cv, o);
    cv->add_option("--data", o.data, "CSV training data");
    cv->add_option("--k", o.k, "folds (default 10)");
    cv->add_option("--models", o.models, "comma-separated kinds (default: all seven)");

    auto* train = app.add_subcommand("train", "fit one model and save it as JSON");
    add_common(train, o);
    train->add_option("--data", o.data, "CSV training data");
    train->add_option("--model-kind", o.model_kind, "logit, nb, cart, bag, rf, boost or nn (default boost)");

    auto* evaluate = app.add_subcommand("evaluate", "accuracy and market-share report by segment");
    add_common(evaluate, o);
    evaluate->add_option("--model", o.model, "model file from `train`");
    evaluate->add_option("--data", o.data, "CSV test data");

    auto* pdp_cmd = app.add_subcommand("pdp", "partial dependence");
    add_curve_options(pdp_cmd, o);
    auto* ice_cmd = app.add_subcommand("ice", "individual conditional expectation curves");
    add_curve_options(ice_cmd, o);
    auto* cpdp_cmd = app.add_subcommand("cpdp", "conditional partial dependence");
    add_curve_options(cpdp_cmd, o);
    auto* cipdp_cmd = app.add_subcommand("cipdp", "conditional individual curves");
    add_curve_options(cipdp_cmd, o);

    auto* slopes = app.add_subcommand("slopes", "approximate global slopes by segment");
    add_common(slopes, o);
    slopes->add_option("--model", o.model, "model file from `train`");
    slopes->add_option("--data", o.data, "CSV data");
    slopes->add_option("--features", o.features, "features (default: TT_MOD Wait_Time Transfer Rideshare)")
        ->delimiter(',');
    slopes->add_option("--grid-points", o.grid_points, "grid resolution for continuous features");

    auto* effects = app.add_subcommand("effects", "marginal effects and elasticities by segment");
    add_common(effects, o);
    effects->add_option("--model", o.model, "model file from `train`");
    effects->add_option("--data", o.data, "CSV data");

    const WarningHandler previous = set_warning_handler([&err](const std::string& m) { err << "warning: " << m << '\n'; });
    struct Restore {
        WarningHandler h;
        ~Restore() { set_warning_handler(h); }
    } restore{previous};

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!manifest.empty()) {
            if (app.get_subcommands().size() > 0) throw UsageError("--manifest cannot be combined with a command");
            return run_manifest(manifest, out, err);
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kExitUsage;
        }
        const CLI::App* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        std::string summary;
        if (name == "synth") summary = cmd_synth(o);
        else if (name == "split") summary = cmd_split(o);
        else if (name == "vif") summary = cmd_vif(o);
        else if (name == "crosstab") summary = cmd_crosstab(o);
        else if (name == "cv") summary = cmd_cv(o);
        else if (name == "train") summary = cmd_train(o);
        else if (name == "evaluate") summary = cmd_evaluate(o);
        else if (name == "pdp") summary = cmd_curves(o, CurveCommand::pdp);
        else if (name == "ice") summary = cmd_curves(o, CurveCommand::ice);
        else if (name == "cpdp") summary = cmd_curves(o, CurveCommand::cpdp);
        else if (name == "cipdp") summary = cmd_curves(o, CurveCommand::cipdp);
        else if (name == "slopes") summary = cmd_slopes(o);
        else if (name == "effects") summary = cmd_effects(o);
        out << summary << '\n';
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        // DataError, ModelError, IoError and anything raised while computing.
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace modeswitch
