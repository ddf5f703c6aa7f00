#include "gridcast/cli/app.hpp"

#include "gridcast/core/csv.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/diagnostics/adf.hpp"
#include "gridcast/diagnostics/correlogram.hpp"
#include "gridcast/eval/forecaster.hpp"
#include "gridcast/eval/grid_search.hpp"
#include "gridcast/eval/metrics.hpp"
#include "gridcast/eval/split.hpp"
#include "gridcast/io/artifact.hpp"
#include "gridcast/io/svg.hpp"
#include "gridcast/ml/rollout.hpp"
#include "gridcast/models/auto_arima.hpp"
#include "gridcast/numeric/parallel.hpp"
#include "gridcast/preprocess/transforms.hpp"
#include "gridcast/synth/generator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

namespace gridcast::cli {

using nlohmann::json;

namespace {

std::string out_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* base = std::getenv("GRIDCAST_OUT_DIR");
    if (!base || !*base) return path;
    std::string joined = base;
    if (joined.back() != '/') joined += '/';
    return joined + path;
}

struct PreprocessOptions {
    bool interpolate = true;
    bool savgol = false;
    int savgol_window = 7; // weekly window for daily data
    int savgol_order = 2;
    bool log = true;

    int effective_savgol_window() const { return savgol ? savgol_window : 0; }
};

void add_preprocess_flags(CLI::App* cmd, PreprocessOptions& opt) {
    cmd->add_flag("--interpolate,!--no-interpolate", opt.interpolate,
                  "fill missing values by linear interpolation (default on)");
    cmd->add_flag("--savgol", opt.savgol, "smooth outliers with a Savitzky-Golay filter");
    cmd->add_option("--savgol-window", opt.savgol_window,
                    "Savitzky-Golay window (odd, >= 3)")
        ->needs("--savgol");
    cmd->add_option("--savgol-order", opt.savgol_order, "Savitzky-Golay polynomial order")
        ->needs("--savgol");
    cmd->add_flag("--log,!--no-log", opt.log, "apply ln(1+y) variance stabilization");
}

struct Prepared {
    core::Series original;    // after interpolation/smoothing, pre-log
    core::Series transformed; // model scale
    preprocess::TransformChain chain;
};

Prepared prepare_series(const core::Dataset& ds, const std::string& target,
                        const PreprocessOptions& opt) {
    core::Series s = core::select_series(ds, target);
    if (opt.interpolate) {
        if (s.values().size() && (core::is_missing(s.values().front()) ||
                                  core::is_missing(s.values().back()))) {
            std::cerr << "note: leading/trailing missing values filled by nearest value\n";
        }
        s = preprocess::interpolate_missing(s);
    } else if (s.has_missing()) {
        throw ConfigError("series has missing values; enable --interpolate");
    }
    if (opt.effective_savgol_window() > 0) {
        s = preprocess::savgol_smooth(s, opt.effective_savgol_window(), opt.savgol_order);
    }
    Prepared out{s, s, {}};
    if (opt.log) {
        out.transformed = preprocess::log_transform(s, out.chain);
    }
    return out;
}

core::ExogMatrix prepare_exog(const core::Dataset& ds, const std::vector<std::string>& cols) {
    std::vector<std::vector<double>> data;
    data.reserve(cols.size());
    for (const auto& name : cols) {
        core::Series s("exog_" + name, ds.start_date(), ds.column(name),
                       name == "temperature" ? "C" : "%");
        data.push_back(preprocess::interpolate_missing(s).values());
    }
    return core::ExogMatrix(ds.start_date(), cols, std::move(data));
}

eval::ParamMap parse_params(const std::vector<std::string>& kvs) {
    eval::ParamMap out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("expected key=value, got '" + kv + "'");
        }
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("parameter '" + kv + "' has a non-numeric value");
        }
    }
    return out;
}

json metrics_to_json(const eval::Metrics& m) {
    json j;
    j["scale"] = m.scale;
    j["n"] = m.n;
    j["mse"] = m.mse;
    j["rmse"] = m.rmse;
    j["mae"] = m.mae;
    if (m.mape_defined) {
        j["mape"] = m.mape;
        j["mapa"] = m.mapa;
    } else {
        j["mape"] = nullptr;
        j["mapa"] = nullptr;
        j["mape_note"] = "undefined: some actual values are zero";
    }
    return j;
}

// -------------------------------------------------------------------------
// Paper-derived presets: published order/hyperparameter choices per target
// plus the published train/test split and horizon.

struct Preset {
    std::string target;
    eval::ParamMap arima, sarima, arimax, lstm, gbt;
    std::string split_date = "2023-05-01";
    std::string horizon_end = "2025-12-31";
};

Preset preset_for(const std::string& name) {
    Preset p;
    p.gbt = {{"trees", 200}, {"eta", 0.01}, {"depth", 3}};
    p.lstm = {{"units", 100}, {"batch", 32}};
    if (name == "paper-load") {
        p.target = "load";
        p.arima = {{"p", 2}, {"d", 1}, {"q", 2}};
        p.sarima = {{"p", 3}, {"d", 0}, {"q", 1}, {"P", 1}, {"D", 2}, {"Q", 0}, {"s", 12}};
        p.arimax = {{"p", 1}, {"d", 1}, {"q", 0}};
    } else if (name == "paper-deficit") {
        p.target = "deficit";
        p.arima = {{"p", 2}, {"d", 0}, {"q", 1}};
        p.sarima = {{"p", 3}, {"d", 0}, {"q", 0}, {"P", 0}, {"D", 0}, {"Q", 1}, {"s", 12}};
        p.arimax = {{"p", 1}, {"d", 0}, {"q", 2}};
    } else if (name == "paper-generation") {
        p.target = "generation";
        p.arima = {{"p", 1}, {"d", 1}, {"q", 1}};
        p.sarima = {{"p", 0}, {"d", 1}, {"q", 2}, {"P", 1}, {"D", 1}, {"Q", 0}, {"s", 12}};
        p.arimax = {{"p", 2}, {"d", 1}, {"q", 0}};
    } else {
        throw ConfigError("unknown preset '" + name +
                          "' (use paper-load|paper-deficit|paper-generation)");
    }
    return p;
}

// Default family configurations for compare on arbitrary data.
eval::ParamMap default_params(const std::string& family, std::uint64_t seed) {
    if (family == "arima") return {{"p", 2}, {"d", 1}, {"q", 2}};
    if (family == "sarima") {
        return {{"p", 1}, {"d", 0}, {"q", 1}, {"P", 1}, {"D", 0}, {"Q", 1}, {"s", 7}};
    }
    if (family == "arimax") return {{"p", 1}, {"d", 1}, {"q", 0}};
    if (family == "ses") return {};
    if (family == "lstm") {
        return {{"units", 50},  {"window", 14},      {"epochs", 400}, {"batch", 64},
                {"step_size", 2e-3}, {"seed", static_cast<double>(seed)}};
    }
    if (family == "gbt") return {{"trees", 200}, {"eta", 0.01}, {"depth", 3}, {"window", 30}};
    if (family == "naive") return {};
    throw UnknownFamily("unknown model family '" + family + "'");
}

std::string display_name(const std::string& family) {
    if (family == "arima") return "ARIMA";
    if (family == "sarima") return "SARIMA";
    if (family == "arimax") return "Dynamic ARIMA";
    if (family == "ses") return "SES";
    if (family == "lstm") return "LSTM";
    if (family == "gbt") return "XGBoost";
    if (family == "naive") return "Naive";
    return family;
}

std::vector<double> invert_scale(const std::vector<double>& transformed,
                                 const preprocess::TransformChain& chain) {
    std::vector<double> out = transformed;
    if (chain.log_applied) {
        for (double& v : out) v = std::expm1(v);
    }
    return out;
}

// -------------------------------------------------------------------------

int cmd_synth(std::uint64_t seed, const std::string& out, const std::string& start,
              const std::string& end, const std::string& config_path) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    if (!start.empty()) cfg.start = core::Date::parse(start);
    if (!end.empty()) cfg.end = core::Date::parse(end);
    if (!config_path.empty()) {
        const json j = json::parse(io::read_file(config_path));
        if (j.contains("start")) cfg.start = core::Date::parse(j.at("start").get<std::string>());
        if (j.contains("end")) cfg.end = core::Date::parse(j.at("end").get<std::string>());
        cfg.seed = j.value("seed", cfg.seed);
        cfg.load_base = j.value("load_base", cfg.load_base);
        cfg.annual_amplitude = j.value("annual_amplitude", cfg.annual_amplitude);
        cfg.weekly_amplitude = j.value("weekly_amplitude", cfg.weekly_amplitude);
        cfg.temperature_coupling = j.value("temperature_coupling", cfg.temperature_coupling);
        cfg.ar_phi = j.value("ar_phi", cfg.ar_phi);
        cfg.ar_sigma = j.value("ar_sigma", cfg.ar_sigma);
        cfg.slow_phi = j.value("slow_phi", cfg.slow_phi);
        cfg.slow_sigma = j.value("slow_sigma", cfg.slow_sigma);
        cfg.temp_mean = j.value("temp_mean", cfg.temp_mean);
        cfg.temp_amplitude = j.value("temp_amplitude", cfg.temp_amplitude);
        cfg.temp_sigma = j.value("temp_sigma", cfg.temp_sigma);
        cfg.humidity_mean = j.value("humidity_mean", cfg.humidity_mean);
        cfg.humidity_sigma = j.value("humidity_sigma", cfg.humidity_sigma);
        cfg.margin_mean = j.value("margin_mean", cfg.margin_mean);
        cfg.margin_sigma = j.value("margin_sigma", cfg.margin_sigma);
        cfg.outage_rate = j.value("outage_rate", cfg.outage_rate);
        cfg.outage_depth_mean = j.value("outage_depth_mean", cfg.outage_depth_mean);
    }
    const auto ds = synth::generate_synthetic(cfg);
    io::write_file_atomic(out_path(out), core::write_dataset(ds));
    std::cout << "wrote " << ds.size() << " days to " << out_path(out) << "\n";
    return 0;
}

int cmd_diagnose(const std::string& input, const std::string& target, const std::string& spec,
                 int max_lag, int lags, int difference_d, PreprocessOptions opt,
                 const std::string& prefix) {
    const auto ds = core::read_dataset_file(input);
    const auto prep = prepare_series(ds, target, opt);
    core::Series s = prep.transformed;
    if (difference_d > 0) {
        auto diffed = preprocess::difference(s, difference_d, 0, 1);
        s = core::Series(s.name() + "_diff", s.start_date() + difference_d,
                         std::move(diffed.values), s.unit());
    }

    const auto adf_spec = diagnostics::adf_spec_from_name(spec);
    const auto adf = diagnostics::adf_test(
        s, adf_spec, max_lag >= 0 ? std::optional<int>(max_lag) : std::nullopt);

    const int nlags = std::min<int>(lags, static_cast<int>(s.size()) / 2 - 1);
    const auto acf_points = diagnostics::acf(s, nlags);
    const auto pacf_points = diagnostics::pacf(s, nlags);

    json j;
    j["target"] = target;
    j["n"] = s.size();
    j["differenced"] = difference_d;
    j["adf"] = {{"statistic", adf.statistic},
                {"p_value", adf.p_value},
                {"used_lag", adf.used_lag},
                {"spec", diagnostics::adf_spec_name(adf.spec)},
                {"critical_values",
                 {{"1%", adf.crit_1pct}, {"5%", adf.crit_5pct}, {"10%", adf.crit_10pct}}},
                {"n_obs", adf.n_obs},
                {"stationary", adf.stationary}};
    auto points_json = [](const std::vector<diagnostics::CorrelogramPoint>& pts) {
        json arr = json::array();
        for (const auto& p : pts) {
            arr.push_back(json{{"lag", p.lag}, {"value", p.value}, {"band", p.band}});
        }
        return arr;
    };
    j["acf"] = points_json(acf_points);
    j["pacf"] = points_json(pacf_points);

    io::write_file_atomic(out_path(prefix + ".json"), j.dump(2) + "\n");
    io::write_file_atomic(out_path(prefix + ".svg"),
                          io::svg_correlogram(target + " correlogram", acf_points, pacf_points));
    std::cout << "ADF statistic " << adf.statistic << ", p-value " << adf.p_value << " ("
              << (adf.stationary ? "stationary" : "non-stationary") << ") -> "
              << out_path(prefix + ".json") << "\n";
    return 0;
}

io::ModelArtifact fit_family(const std::string& family, const eval::ParamMap& params,
                             const Prepared& prep, const core::Dataset& ds, json& report);

int cmd_fit(const std::string& input, const std::string& target, const std::string& family,
            const std::vector<std::string>& param_kvs, bool auto_mode,
            const std::vector<std::string>& grid_specs, int folds, double min_train_frac,
            PreprocessOptions opt, const std::string& preset_name, const std::string& out,
            const std::string& report_path) {
    if (auto_mode && !grid_specs.empty()) {
        throw UsageError("choose one model-selection mode: fixed, --auto or --grid");
    }
    const auto ds = core::read_dataset_file(input);

    std::string the_target = target;
    eval::ParamMap params = parse_params(param_kvs);
    std::string the_family = family;
    if (!preset_name.empty()) {
        const Preset preset = preset_for(preset_name);
        if (the_target.empty()) the_target = preset.target;
        eval::ParamMap preset_params;
        if (the_family == "arima") preset_params = preset.arima;
        else if (the_family == "sarima") preset_params = preset.sarima;
        else if (the_family == "arimax") preset_params = preset.arimax;
        else if (the_family == "lstm") preset_params = preset.lstm;
        else if (the_family == "gbt") preset_params = preset.gbt;
        for (const auto& [k, v] : preset_params) params.emplace(k, v); // explicit flags win
    }
    if (the_target.empty()) throw UsageError("--target is required (or use --preset)");

    const auto prep = prepare_series(ds, the_target, opt);
    json report;
    report["family"] = the_family;
    report["target"] = the_target;
    report["n"] = prep.transformed.size();
    report["log"] = prep.chain.log_applied;

    if (auto_mode) {
        if (the_family != "arima" && the_family != "sarima" && the_family != "arimax") {
            throw UsageError("--auto applies to the arima/sarima/arimax families");
        }
        models::AutoArimaBounds bounds;
        bounds.max_p = static_cast<int>(eval::param_or(params, "max_p", 3));
        bounds.max_q = static_cast<int>(eval::param_or(params, "max_q", 3));
        bounds.max_d = static_cast<int>(eval::param_or(params, "max_d", 2));
        if (the_family == "sarima") {
            bounds.s = static_cast<int>(eval::param_or(params, "s", 7));
            bounds.max_P = static_cast<int>(eval::param_or(params, "max_P", 1));
            bounds.max_Q = static_cast<int>(eval::param_or(params, "max_Q", 1));
            bounds.max_D = static_cast<int>(eval::param_or(params, "max_D", 1));
        }
        const auto criterion = eval::param_or(params, "bic", 0) != 0 ? models::Criterion::Bic
                                                                     : models::Criterion::Aic;
        std::optional<core::ExogMatrix> exog;
        if (the_family == "arimax") exog = prepare_exog(ds, {"temperature", "humidity"});
        models::ArimaConfig cfg;
        cfg.log_applied = prep.chain.log_applied;
        auto result = models::auto_arima(prep.transformed, bounds, criterion,
                                         exog ? &*exog : nullptr, cfg);
        json trace = json::array();
        for (const auto& entry : result.trace) {
            trace.push_back(json{{"order", entry.order.to_string()},
                                 {"criterion", entry.ok ? json(entry.criterion) : json(nullptr)},
                                 {"ok", entry.ok},
                                 {"error", entry.error}});
        }
        report["auto"] = {{"chosen_d", result.chosen_d},
                          {"criterion", criterion == models::Criterion::Bic ? "bic" : "aic"},
                          {"selected", result.fit.order.to_string()},
                          {"trace", trace}};
        io::ModelArtifact artifact;
        artifact.family = the_family;
        artifact.chain = result.fit.chain;
        artifact.series_name = the_target;
        artifact.unit = prep.transformed.unit();
        artifact.origin = prep.transformed.end_date();
        artifact.arima = std::move(result.fit);
        if (exog) artifact.exog_climatology = ml::build_climatology(*exog);
        report["aic"] = artifact.arima->aic;
        report["bic"] = artifact.arima->bic;
        io::save_model(artifact, out_path(out));
    } else if (!grid_specs.empty()) {
        std::vector<eval::GridAxis> grid;
        for (const auto& spec : grid_specs) {
            if (spec == "paper-lstm-units") {
                // The published unit search: three options, 50/100/200.
                grid.push_back({"units", {50, 100, 200}});
                continue;
            }
            const auto eq = spec.find('=');
            if (eq == std::string::npos) throw UsageError("grid spec must be name=v1,v2,...");
            eval::GridAxis axis;
            axis.name = spec.substr(0, eq);
            std::stringstream ss(spec.substr(eq + 1));
            std::string tok;
            while (std::getline(ss, tok, ',')) axis.values.push_back(std::stod(tok));
            grid.push_back(std::move(axis));
        }
        std::optional<core::ExogMatrix> exog;
        if (the_family == "arimax" || the_family == "lstm" || the_family == "gbt") {
            exog = prepare_exog(ds, {"temperature", "humidity"});
        }
        const std::size_t min_train = static_cast<std::size_t>(
            min_train_frac * static_cast<double>(prep.transformed.size()));
        const auto plan = eval::expanding_folds(prep.transformed.size(),
                                                static_cast<std::size_t>(folds), min_train);
        auto gr = eval::grid_search(the_family, grid, prep.transformed,
                                    exog ? &*exog : nullptr, plan, "mse");
        json trace = json::array();
        for (const auto& cand : gr.evaluated) {
            trace.push_back(json{{"params", cand.params},
                                 {"mean_score", cand.ok ? json(cand.mean_score) : json(nullptr)},
                                 {"fold_scores", cand.fold_scores},
                                 {"ok", cand.ok},
                                 {"error", cand.error}});
        }
        report["grid"] = {{"best", gr.best().params},
                          {"best_score", gr.best().mean_score},
                          {"tie_break", gr.tie_break},
                          {"trace", trace}};
        for (const auto& [k, v] : gr.best().params) params[k] = v; // refit best on all data
        auto artifact = fit_family(the_family, params, prep, ds, report);
        io::save_model(artifact, out_path(out));
    } else {
        auto artifact = fit_family(the_family, params, prep, ds, report);
        io::save_model(artifact, out_path(out));
    }

    if (!report_path.empty()) {
        io::write_file_atomic(out_path(report_path), report.dump(2) + "\n");
    }
    std::cout << "saved model to " << out_path(out) << "\n";
    return 0;
}

io::ModelArtifact fit_family(const std::string& family, const eval::ParamMap& params,
                             const Prepared& prep, const core::Dataset& ds, json& report) {
    io::ModelArtifact artifact;
    artifact.family = family;
    artifact.chain = prep.chain;
    artifact.series_name = prep.transformed.name();
    artifact.unit = prep.transformed.unit();
    artifact.origin = prep.transformed.end_date();

    auto as_int = [&](const std::string& key, int fallback) {
        return static_cast<int>(eval::param_or(params, key, fallback));
    };

    if (family == "arima" || family == "sarima" || family == "arimax") {
        models::ArimaOrder order;
        order.p = as_int("p", 1);
        order.d = as_int("d", 0);
        order.q = as_int("q", 0);
        if (family == "sarima") {
            order.P = as_int("P", 0);
            order.D = as_int("D", 0);
            order.Q = as_int("Q", 0);
            order.s = as_int("s", 7);
        }
        order.validate();
        std::optional<core::ExogMatrix> exog;
        if (family == "arimax") exog = prepare_exog(ds, {"temperature", "humidity"});
        models::ArimaConfig cfg;
        cfg.log_applied = prep.chain.log_applied;
        auto fit = models::fit_arima(prep.transformed, order, exog ? &*exog : nullptr, cfg);
        report["order"] = fit.order.to_string();
        report["aic"] = fit.aic;
        report["bic"] = fit.bic;
        report["sigma2"] = fit.sigma2;
        report["loglik"] = fit.loglik;
        report["converged"] = fit.converged;
        report["roots"] = {{"ar", fit.min_ar_root},
                           {"ma", fit.min_ma_root},
                           {"sar", fit.min_sar_root},
                           {"sma", fit.min_sma_root}};
        artifact.chain = fit.chain;
        artifact.arima = std::move(fit);
        if (exog) artifact.exog_climatology = ml::build_climatology(*exog);
        return artifact;
    }
    if (family == "ses") {
        std::optional<double> alpha;
        if (params.count("alpha")) alpha = params.at("alpha");
        auto [fit, fc] = models::ses_forecast(prep.transformed, alpha, 0, prep.chain);
        report["alpha"] = fit.alpha;
        report["alpha_estimated"] = fit.alpha_estimated;
        report["sse"] = fit.sse;
        artifact.ses = fit;
        return artifact;
    }
    if (family == "lstm" || family == "gbt") {
        const bool use_exog = as_int("exog", 1) != 0;
        std::optional<core::ExogMatrix> exog;
        if (use_exog) exog = prepare_exog(ds, {"temperature", "humidity"});
        const int window = as_int("window", 30);
        if (family == "lstm") {
            auto data = ml::make_windows(prep.transformed, window, exog ? &*exog : nullptr,
                                         ml::CalendarEncoding::Cyclic);
            ml::TrainConfig cfg;
            cfg.epochs = as_int("epochs", 200);
            cfg.batch_size = as_int("batch", 0);
            cfg.step_size = eval::param_or(params, "step_size", 1e-3);
            cfg.seed = static_cast<std::uint64_t>(as_int("seed", 0));
            auto model = ml::lstm_fit(data, as_int("units", 100), cfg);
            model.chain = prep.chain;
            if (exog) model.climatology = ml::build_climatology(*exog);
            model.origin = prep.transformed.end_date();
            model.series_name = prep.transformed.name();
            model.unit = prep.transformed.unit();
            report["units"] = model.params.hidden;
            report["window"] = window;
            report["final_loss"] = model.loss_trace.back();
            report["epochs"] = cfg.epochs;
            artifact.lstm = std::move(model);
        } else {
            auto data = ml::make_windows(prep.transformed, window, exog ? &*exog : nullptr,
                                         ml::CalendarEncoding::OneHot);
            ml::GbtConfig cfg;
            cfg.n_trees = as_int("trees", 200);
            cfg.learning_rate = eval::param_or(params, "eta", 0.01);
            cfg.max_depth = as_int("depth", 3);
            cfg.gamma = eval::param_or(params, "gamma", 0.0);
            cfg.lambda = eval::param_or(params, "lambda", 1.0);
            auto model = ml::gbt_fit(data, cfg);
            model.chain = prep.chain;
            if (exog) model.climatology = ml::build_climatology(*exog);
            model.origin = prep.transformed.end_date();
            model.series_name = prep.transformed.name();
            model.unit = prep.transformed.unit();
            report["trees"] = cfg.n_trees;
            report["window"] = window;
            report["final_loss"] = model.loss_trace.back();
            artifact.gbt = std::move(model);
        }
        return artifact;
    }
    throw UnknownFamily("unknown model family '" + family + "'");
}

int cmd_forecast(const std::string& model_path, const std::string& input, int horizon,
                 std::string until, const std::string& preset_name,
                 const std::string& prefix) {
    const auto artifact = io::load_model(model_path);
    const auto ds = core::read_dataset_file(input);

    PreprocessOptions opt;
    opt.log = artifact.chain.log_applied;
    const auto prep = prepare_series(ds, artifact.series_name, opt);

    if (!preset_name.empty() && until.empty() && horizon < 1) {
        until = preset_for(preset_name).horizon_end; // published multi-year horizon
    }
    const core::Date origin =
        (artifact.arima || artifact.ses) ? artifact.origin : prep.transformed.end_date();
    int h = horizon;
    if (!until.empty()) {
        h = core::Date::parse(until) - origin;
        if (h < 1) throw ConfigError("--until must lie after the forecast origin");
    }
    if (h < 1) throw UsageError("provide --horizon, --until or --preset");

    const auto transformed = artifact.forecast(h, prep.transformed, nullptr);
    const auto original = invert_scale(transformed, artifact.chain);

    std::string csv = "date,prediction_original,prediction_transformed\n";
    for (int i = 0; i < h; ++i) {
        csv += (origin + i + 1).to_string();
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", original[static_cast<std::size_t>(i)],
                      transformed[static_cast<std::size_t>(i)]);
        csv += buf;
    }
    io::write_file_atomic(out_path(prefix + ".csv"), csv);

    io::PlotSeries history{"history", {}, {}, "#1f77b4"};
    for (std::size_t i = 0; i < prep.original.size(); ++i) {
        history.x.push_back(static_cast<double>(prep.original.date(i).days_since_epoch()));
        history.y.push_back(prep.original[i]);
    }
    io::PlotSeries fc{"forecast", {}, {}, "#d62728"};
    for (int i = 0; i < h; ++i) {
        fc.x.push_back(static_cast<double>((origin + i + 1).days_since_epoch()));
        fc.y.push_back(original[static_cast<std::size_t>(i)]);
    }
    io::write_file_atomic(out_path(prefix + ".svg"),
                          io::svg_line_plot(artifact.series_name + " forecast (" +
                                                artifact.family + ")",
                                            {history, fc}));
    std::cout << "wrote " << h << " predictions to " << out_path(prefix + ".csv") << "\n";
    return 0;
}

struct EvalRow {
    std::string family;
    eval::ParamMap params;
    eval::Metrics original;
    eval::Metrics transformed;
    long parameter_count = 0;
    bool ok = false;
    std::string error;
};

EvalRow evaluate_family(const std::string& family, const eval::ParamMap& params,
                        const Prepared& prep, const core::ExogMatrix* exog,
                        std::size_t test_start) {
    EvalRow row;
    row.family = family;
    row.params = params;
    try {
        auto model = eval::make_forecaster(family, params);
        core::Series train = prep.transformed.slice(0, test_start);
        std::optional<core::ExogMatrix> train_exog;
        if (exog) train_exog = exog->slice(0, test_start);
        model->fit(train, train_exog ? &*train_exog : nullptr);

        const auto preds_t = model->one_step(prep.transformed, exog, test_start);
        std::vector<double> actual_t(prep.transformed.values().begin() +
                                         static_cast<std::ptrdiff_t>(test_start),
                                     prep.transformed.values().end());
        row.transformed = eval::compute_metrics(actual_t, preds_t, "transformed");

        const auto preds_o = invert_scale(preds_t, prep.chain);
        std::vector<double> actual_o(prep.original.values().begin() +
                                         static_cast<std::ptrdiff_t>(test_start),
                                     prep.original.values().end());
        row.original = eval::compute_metrics(actual_o, preds_o, "original");
        row.parameter_count = model->parameter_count();
        row.ok = true;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

json row_to_json(const EvalRow& row) {
    json j;
    j["model"] = display_name(row.family);
    j["family"] = row.family;
    j["params"] = row.params;
    if (row.ok) {
        j["metrics_original"] = metrics_to_json(row.original);
        j["metrics_transformed"] = metrics_to_json(row.transformed);
        j["parameter_count"] = row.parameter_count;
    } else {
        j["error"] = row.error;
    }
    return j;
}

int cmd_evaluate(const std::string& input, const std::string& target, const std::string& family,
                 const std::vector<std::string>& param_kvs, const std::string& split,
                 PreprocessOptions opt, const std::string& preset_name, const std::string& out) {
    const auto ds = core::read_dataset_file(input);
    std::string the_target = target;
    std::string split_date = split;
    eval::ParamMap params = parse_params(param_kvs);
    if (!preset_name.empty()) {
        const Preset preset = preset_for(preset_name);
        if (the_target.empty()) the_target = preset.target;
        if (split_date.empty()) split_date = preset.split_date;
        eval::ParamMap preset_params;
        if (family == "arima") preset_params = preset.arima;
        else if (family == "sarima") preset_params = preset.sarima;
        else if (family == "arimax") preset_params = preset.arimax;
        else if (family == "lstm") preset_params = preset.lstm;
        else if (family == "gbt") preset_params = preset.gbt;
        for (const auto& [k, v] : preset_params) params.emplace(k, v);
    }
    if (the_target.empty()) throw UsageError("--target is required (or use --preset)");
    if (split_date.empty()) throw UsageError("--split-date is required (or use --preset)");

    const auto prep = prepare_series(ds, the_target, opt);
    const core::Date cut_date = core::Date::parse(split_date);
    if (cut_date <= prep.transformed.start_date() || cut_date > prep.transformed.end_date()) {
        throw SplitOutOfRange("split date outside the series index");
    }
    const auto test_start = static_cast<std::size_t>(cut_date - prep.transformed.start_date());
    const auto exog = prepare_exog(ds, {"temperature", "humidity"});

    const auto row = evaluate_family(family, params, prep, &exog, test_start);
    if (!row.ok) throw Error("evaluation failed: " + row.error);

    json j = row_to_json(row);
    j["target"] = the_target;
    j["split_date"] = split_date;
    j["n_train"] = test_start;
    j["n_test"] = prep.transformed.size() - test_start;
    io::write_file_atomic(out_path(out), j.dump(2) + "\n");
    std::cout << "wrote metrics to " << out_path(out) << "\n";
    return 0;
}

int cmd_compare(const std::string& input, const std::string& target, const std::string& split,
                PreprocessOptions opt, const std::string& preset_name, std::uint64_t seed,
                const std::string& prefix) {
    const auto ds = core::read_dataset_file(input);
    std::string the_target = target;
    std::string split_date = split;
    std::optional<Preset> preset;
    if (!preset_name.empty()) {
        preset = preset_for(preset_name);
        if (the_target.empty()) the_target = preset->target;
        if (split_date.empty()) split_date = preset->split_date;
    }
    if (the_target.empty()) throw UsageError("--target is required (or use --preset)");
    if (split_date.empty()) throw UsageError("--split-date is required (or use --preset)");

    const auto prep = prepare_series(ds, the_target, opt);
    const core::Date cut_date = core::Date::parse(split_date);
    if (cut_date <= prep.transformed.start_date() || cut_date > prep.transformed.end_date()) {
        throw SplitOutOfRange("split date outside the series index");
    }
    const auto test_start = static_cast<std::size_t>(cut_date - prep.transformed.start_date());
    const auto exog = prepare_exog(ds, {"temperature", "humidity"});

    std::vector<std::string> families = {"arima", "sarima", "arimax", "ses", "lstm", "gbt"};
    std::vector<eval::ParamMap> configs;
    for (const auto& family : families) {
        eval::ParamMap params = default_params(family, seed);
        if (preset) {
            if (family == "arima") params = preset->arima;
            else if (family == "sarima") params = preset->sarima;
            else if (family == "arimax") params = preset->arimax;
            else if (family == "lstm") {
                params = preset->lstm;
                params.emplace("seed", static_cast<double>(seed));
            } else if (family == "gbt") {
                params = preset->gbt;
            }
        }
        configs.push_back(std::move(params));
    }

    // Families fit independently; collect positionally for determinism.
    auto rows = numeric::parallel_map<EvalRow>(families.size(), [&](std::size_t i) {
        return evaluate_family(families[i], configs[i], prep, &exog, test_start);
    });
    const EvalRow naive = evaluate_family("naive", {}, prep, &exog, test_start);

    std::sort(rows.begin(), rows.end(), [](const EvalRow& a, const EvalRow& b) {
        return display_name(a.family) < display_name(b.family);
    });

    json j;
    j["target"] = the_target;
    j["split_date"] = split_date;
    j["n_train"] = test_start;
    j["n_test"] = prep.transformed.size() - test_start;
    j["mode"] = "one_step";
    j["rows"] = json::array();
    for (const auto& row : rows) j["rows"].push_back(row_to_json(row));
    j["baselines"] = json::array({row_to_json(naive)});
    io::write_file_atomic(out_path(prefix + ".json"), j.dump(2) + "\n");

    std::ostringstream table;
    char line[256];
    std::snprintf(line, sizeof(line), "%-15s %14s %12s %12s %10s %10s\n", "Model", "MSE",
                  "RMSE", "MAE", "MAPE(%)", "MAPA(%)");
    table << "one-step metrics on the test span (original units)\n" << line;
    auto emit = [&](const EvalRow& row) {
        if (!row.ok) {
            std::snprintf(line, sizeof(line), "%-15s failed: %s\n",
                          display_name(row.family).c_str(), row.error.c_str());
        } else if (row.original.mape_defined) {
            std::snprintf(line, sizeof(line), "%-15s %14.4f %12.4f %12.4f %10.4f %10.4f\n",
                          display_name(row.family).c_str(), row.original.mse, row.original.rmse,
                          row.original.mae, row.original.mape, row.original.mapa);
        } else {
            std::snprintf(line, sizeof(line), "%-15s %14.4f %12.4f %12.4f %10s %10s\n",
                          display_name(row.family).c_str(), row.original.mse, row.original.rmse,
                          row.original.mae, "undef", "undef");
        }
        table << line;
    };
    for (const auto& row : rows) emit(row);
    emit(naive);
    io::write_file_atomic(out_path(prefix + ".txt"), table.str());

    std::cout << table.str();
    std::cout << "wrote " << out_path(prefix + ".json") << " and " << out_path(prefix + ".txt")
              << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"gridcast: electricity load/generation/deficit forecasting toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset CSV");
    std::uint64_t synth_seed = 42;
    std::string synth_out = "synthetic.csv";
    std::string synth_start, synth_end, synth_config;
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output CSV path");
    synth_cmd->add_option("--start", synth_start, "first date (YYYY-MM-DD)");
    synth_cmd->add_option("--end", synth_end, "last date (YYYY-MM-DD)");
    synth_cmd->add_option("--config", synth_config, "JSON file of generator overrides");

    // diagnose
    auto* diag_cmd = app.add_subcommand("diagnose", "ADF test and ACF/PACF correlogram");
    std::string diag_input, diag_target = "load", diag_spec = "constant_trend";
    std::string diag_prefix = "diagnostics";
    int diag_max_lag = -1, diag_lags = 40, diag_diff = 0;
    PreprocessOptions diag_opt;
    diag_opt.log = false;
    diag_cmd->add_option("--input", diag_input, "dataset CSV")->required();
    diag_cmd->add_option("--target", diag_target, "load|generation|deficit");
    diag_cmd->add_option("--spec", diag_spec, "ADF regression: none|constant|constant_trend");
    diag_cmd->add_option("--max-lag", diag_max_lag, "force the ADF lag order");
    diag_cmd->add_option("--lags", diag_lags, "correlogram lags");
    diag_cmd->add_option("--difference", diag_diff, "first-difference d times before testing");
    diag_cmd->add_option("--out-prefix", diag_prefix, "output prefix (.json, .svg)");
    add_preprocess_flags(diag_cmd, diag_opt);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a model and save the artifact");
    std::string fit_input, fit_target, fit_family_name = "arima", fit_preset;
    std::string fit_out = "model.json", fit_report;
    std::vector<std::string> fit_params, fit_grid;
    bool fit_auto = false;
    int fit_folds = 5;
    double fit_min_train = 0.5;
    PreprocessOptions fit_opt;
    fit_cmd->add_option("--input", fit_input, "dataset CSV")->required();
    fit_cmd->add_option("--target", fit_target, "load|generation|deficit");
    fit_cmd->add_option("--family", fit_family_name, "arima|sarima|arimax|ses|lstm|gbt");
    fit_cmd->add_option("--param", fit_params, "model parameter key=value (repeatable)");
    fit_cmd->add_flag("--auto", fit_auto, "auto order search (arima families)");
    fit_cmd->add_option("--grid", fit_grid, "grid axis name=v1,v2,... (repeatable)");
    fit_cmd->add_option("--folds", fit_folds, "cross-validation folds for --grid");
    fit_cmd->add_option("--min-train-frac", fit_min_train, "expanding-window minimum train fraction");
    fit_cmd->add_option("--preset", fit_preset, "paper-load|paper-deficit|paper-generation");
    fit_cmd->add_option("--out", fit_out, "artifact path");
    fit_cmd->add_option("--report", fit_report, "fit report JSON path");
    add_preprocess_flags(fit_cmd, fit_opt);

    // forecast
    auto* fc_cmd = app.add_subcommand("forecast", "multi-step forecast from a saved model");
    std::string fc_model, fc_input, fc_until, fc_preset, fc_prefix = "forecast";
    int fc_horizon = 0;
    fc_cmd->add_option("--model", fc_model, "model artifact JSON")->required();
    fc_cmd->add_option("--input", fc_input, "dataset CSV (history)")->required();
    fc_cmd->add_option("--horizon", fc_horizon, "steps ahead");
    fc_cmd->add_option("--until", fc_until, "forecast through this date");
    fc_cmd->add_option("--preset", fc_preset, "paper preset (horizon through 2025-12-31)");
    fc_cmd->add_option("--out-prefix", fc_prefix, "output prefix (.csv, .svg)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "one-step test metrics for one model");
    std::string eval_input, eval_target, eval_family_name = "arima", eval_split, eval_preset;
    std::string eval_out = "metrics.json";
    std::vector<std::string> eval_params;
    PreprocessOptions eval_opt;
    eval_cmd->add_option("--input", eval_input, "dataset CSV")->required();
    eval_cmd->add_option("--target", eval_target, "load|generation|deficit");
    eval_cmd->add_option("--family", eval_family_name, "model family");
    eval_cmd->add_option("--param", eval_params, "model parameter key=value (repeatable)");
    eval_cmd->add_option("--split-date", eval_split, "first test date");
    eval_cmd->add_option("--preset", eval_preset, "paper preset name");
    eval_cmd->add_option("--out", eval_out, "metrics JSON path");
    add_preprocess_flags(eval_cmd, eval_opt);

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "all six families on one test split");
    std::string cmp_input, cmp_target, cmp_split, cmp_preset, cmp_prefix = "compare";
    std::uint64_t cmp_seed = 42;
    PreprocessOptions cmp_opt;
    cmp_cmd->add_option("--input", cmp_input, "dataset CSV")->required();
    cmp_cmd->add_option("--target", cmp_target, "load|generation|deficit");
    cmp_cmd->add_option("--split-date", cmp_split, "first test date");
    cmp_cmd->add_option("--preset", cmp_preset, "paper preset name");
    cmp_cmd->add_option("--seed", cmp_seed, "seed for the LSTM fit");
    cmp_cmd->add_option("--out-prefix", cmp_prefix, "output prefix (.json, .txt)");
    add_preprocess_flags(cmp_cmd, cmp_opt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (synth_cmd->parsed()) {
            return cmd_synth(synth_seed, synth_out, synth_start, synth_end, synth_config);
        }
        if (diag_cmd->parsed()) {
            return cmd_diagnose(diag_input, diag_target, diag_spec, diag_max_lag, diag_lags,
                                diag_diff, diag_opt, diag_prefix);
        }
        if (fit_cmd->parsed()) {
            return cmd_fit(fit_input, fit_target, fit_family_name, fit_params, fit_auto,
                           fit_grid, fit_folds, fit_min_train, fit_opt, fit_preset, fit_out,
                           fit_report);
        }
        if (fc_cmd->parsed()) {
            return cmd_forecast(fc_model, fc_input, fc_horizon, fc_until, fc_preset, fc_prefix);
        }
        if (eval_cmd->parsed()) {
            return cmd_evaluate(eval_input, eval_target, eval_family_name, eval_params,
                                eval_split, eval_opt, eval_preset, eval_out);
        }
        if (cmp_cmd->parsed()) {
            return cmd_compare(cmp_input, cmp_target, cmp_split, cmp_opt, cmp_preset, cmp_seed,
                               cmp_prefix);
        }
        std::cerr << app.help();
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace gridcast::cli
