#include "gridcast/eval/forecaster.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/ml/gbt.hpp"
#include "gridcast/ml/lstm.hpp"
#include "gridcast/ml/rollout.hpp"
#include "gridcast/models/arima.hpp"
#include "gridcast/models/ses.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace gridcast::eval {

double param_or(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

namespace {

int param_int(const ParamMap& params, const std::string& key, int fallback) {
    return static_cast<int>(std::lround(param_or(params, key, fallback)));
}

void reject_unknown_keys(const ParamMap& params, std::set<std::string> known) {
    for (const auto& [key, value] : params) {
        if (!known.count(key)) {
            throw ConfigError("unknown parameter '" + key + "' for this model family");
        }
    }
}

class ArimaForecaster final : public Forecaster {
public:
    ArimaForecaster(std::string family, models::ArimaOrder order, bool use_exog)
        : family_(std::move(family)), order_(order), use_exog_(use_exog) {}

    std::string family() const override { return family_; }

    void fit(const core::Series& train, const core::ExogMatrix* exog) override {
        const core::ExogMatrix* used = (use_exog_ && exog) ? exog : nullptr;
        fit_ = models::fit_arima(train, order_, used, {});
        if (used) climatology_ = ml::build_climatology(*used);
        train_end_ = train.end_date();
    }

    std::vector<double> forecast(int horizon, const core::ExogMatrix* future_exog) override {
        require_fit();
        std::optional<core::ExogMatrix> clim_exog;
        const core::ExogMatrix* used = nullptr;
        if (!fit_->exog_coef.empty()) {
            if (future_exog) {
                used = future_exog;
            } else if (!climatology_.empty()) {
                clim_exog = climatology_rows(horizon);
                used = &*clim_exog;
            }
        }
        return models::forecast_arima(*fit_, horizon, used).values_transformed;
    }

    std::vector<double> one_step(const core::Series& full, const core::ExogMatrix* full_exog,
                                 std::size_t start) override {
        require_fit();
        const core::ExogMatrix* used = fit_->exog_coef.empty() ? nullptr : full_exog;
        return models::arima_one_step(*fit_, full, used, start);
    }

    long parameter_count() const override {
        require_fit();
        return fit_->k_params;
    }

    const models::ArimaFit& fit_result() const {
        require_fit();
        return *fit_;
    }

private:
    void require_fit() const {
        if (!fit_) throw ConfigError("forecaster used before fit()");
    }

    core::ExogMatrix climatology_rows(int horizon) const {
        std::vector<std::vector<double>> cols(climatology_.names.size());
        for (int h = 1; h <= horizon; ++h) {
            auto row = climatology_.row_for(train_end_ + h);
            for (std::size_t j = 0; j < row.size(); ++j) cols[j].push_back(row[j]);
        }
        return core::ExogMatrix(train_end_ + 1, climatology_.names, std::move(cols));
    }

    std::string family_;
    models::ArimaOrder order_;
    bool use_exog_;
    std::optional<models::ArimaFit> fit_;
    ml::Climatology climatology_;
    core::Date train_end_;
};

class SesForecaster final : public Forecaster {
public:
    explicit SesForecaster(std::optional<double> alpha) : alpha_(alpha) {}

    std::string family() const override { return "ses"; }

    void fit(const core::Series& train, const core::ExogMatrix*) override {
        auto [fit, fc] = models::ses_forecast(train, alpha_, 0, {});
        fit_ = fit;
    }

    std::vector<double> forecast(int horizon, const core::ExogMatrix*) override {
        require_fit();
        return std::vector<double>(static_cast<std::size_t>(horizon), fit_->final_level);
    }

    std::vector<double> one_step(const core::Series& full, const core::ExogMatrix*,
                                 std::size_t start) override {
        require_fit();
        return models::ses_one_step(*fit_, full, start);
    }

    long parameter_count() const override { return 1; }

    const models::SesFit& fit_result() const {
        require_fit();
        return *fit_;
    }

private:
    void require_fit() const {
        if (!fit_) throw ConfigError("forecaster used before fit()");
    }

    std::optional<double> alpha_;
    std::optional<models::SesFit> fit_;
};

class LstmForecaster final : public Forecaster {
public:
    LstmForecaster(int units, int window, ml::TrainConfig cfg, bool use_exog,
                   ml::CalendarEncoding calendar)
        : units_(units), window_(window), cfg_(cfg), use_exog_(use_exog), calendar_(calendar) {}

    std::string family() const override { return "lstm"; }

    void fit(const core::Series& train, const core::ExogMatrix* exog) override {
        const core::ExogMatrix* used = (use_exog_ && exog) ? exog : nullptr;
        auto data = ml::make_windows(train, window_, used, calendar_);
        model_ = ml::lstm_fit(data, units_, cfg_);
        if (used) model_->climatology = ml::build_climatology(*used);
        model_->origin = train.end_date();
        model_->series_name = train.name();
        model_->unit = train.unit();
        train_ = train;
    }

    std::vector<double> forecast(int horizon, const core::ExogMatrix* future_exog) override {
        require_fit();
        return ml::lstm_forecast(*model_, *train_, horizon, future_exog, true)
            .values_transformed;
    }

    std::vector<double> one_step(const core::Series& full, const core::ExogMatrix* full_exog,
                                 std::size_t start) override {
        require_fit();
        const core::ExogMatrix* used = model_->layout.exog_names.empty() ? nullptr : full_exog;
        return ml::one_step_rollout(
            model_->layout, model_->feature_scales, model_->target_scale,
            [&](const std::vector<double>& row) { return model_->predict_normalized(row); },
            full, used, start);
    }

    long parameter_count() const override {
        require_fit();
        return static_cast<long>(model_->params.parameter_count());
    }

    const ml::LstmModel& model() const {
        require_fit();
        return *model_;
    }

private:
    void require_fit() const {
        if (!model_) throw ConfigError("forecaster used before fit()");
    }

    int units_;
    int window_;
    ml::TrainConfig cfg_;
    bool use_exog_;
    ml::CalendarEncoding calendar_;
    std::optional<ml::LstmModel> model_;
    std::optional<core::Series> train_;
};

class GbtForecaster final : public Forecaster {
public:
    GbtForecaster(ml::GbtConfig cfg, int window, bool use_exog, ml::CalendarEncoding calendar)
        : cfg_(cfg), window_(window), use_exog_(use_exog), calendar_(calendar) {}

    std::string family() const override { return "gbt"; }

    void fit(const core::Series& train, const core::ExogMatrix* exog) override {
        const core::ExogMatrix* used = (use_exog_ && exog) ? exog : nullptr;
        auto data = ml::make_windows(train, window_, used, calendar_);
        model_ = ml::gbt_fit(data, cfg_);
        if (used) model_->climatology = ml::build_climatology(*used);
        model_->origin = train.end_date();
        model_->series_name = train.name();
        model_->unit = train.unit();
        train_ = train;
    }

    std::vector<double> forecast(int horizon, const core::ExogMatrix* future_exog) override {
        require_fit();
        return ml::gbt_forecast(*model_, *train_, horizon, future_exog, true)
            .values_transformed;
    }

    std::vector<double> one_step(const core::Series& full, const core::ExogMatrix* full_exog,
                                 std::size_t start) override {
        require_fit();
        const core::ExogMatrix* used = model_->layout.exog_names.empty() ? nullptr : full_exog;
        return ml::one_step_rollout(
            model_->layout, model_->feature_scales, model_->target_scale,
            [&](const std::vector<double>& row) { return model_->predict(row); }, full, used,
            start);
    }

    long parameter_count() const override {
        require_fit();
        long leaves = 0;
        for (const auto& tree : model_->trees) leaves += tree.leaf_count();
        return leaves;
    }

    const ml::GbtModel& model() const {
        require_fit();
        return *model_;
    }

private:
    void require_fit() const {
        if (!model_) throw ConfigError("forecaster used before fit()");
    }

    ml::GbtConfig cfg_;
    int window_;
    bool use_exog_;
    ml::CalendarEncoding calendar_;
    std::optional<ml::GbtModel> model_;
    std::optional<core::Series> train_;
};

class NaiveForecaster final : public Forecaster {
public:
    std::string family() const override { return "naive"; }

    void fit(const core::Series& train, const core::ExogMatrix*) override {
        last_ = train.values().back();
        fitted_ = true;
    }

    std::vector<double> forecast(int horizon, const core::ExogMatrix*) override {
        if (!fitted_) throw ConfigError("forecaster used before fit()");
        return std::vector<double>(static_cast<std::size_t>(horizon), last_);
    }

    std::vector<double> one_step(const core::Series& full, const core::ExogMatrix*,
                                 std::size_t start) override {
        if (start < 1 || start > full.size()) throw ConfigError("naive one_step: bad start");
        std::vector<double> out;
        out.reserve(full.size() - start);
        for (std::size_t t = start; t < full.size(); ++t) out.push_back(full[t - 1]);
        return out;
    }

    long parameter_count() const override { return 0; }

private:
    double last_ = 0.0;
    bool fitted_ = false;
};

models::ArimaOrder order_from_params(const ParamMap& params, bool seasonal) {
    models::ArimaOrder order;
    order.p = param_int(params, "p", 1);
    order.d = param_int(params, "d", 0);
    order.q = param_int(params, "q", 0);
    if (seasonal) {
        order.P = param_int(params, "P", 0);
        order.D = param_int(params, "D", 0);
        order.Q = param_int(params, "Q", 0);
        order.s = param_int(params, "s", 7);
    }
    order.validate();
    return order;
}

ml::CalendarEncoding calendar_from_params(const ParamMap& params,
                                          ml::CalendarEncoding fallback) {
    const int c = param_int(params, "calendar", -1);
    if (c < 0) return fallback;
    switch (c) {
        case 0: return ml::CalendarEncoding::None;
        case 1: return ml::CalendarEncoding::Cyclic;
        case 2: return ml::CalendarEncoding::OneHot;
        default: throw ConfigError("calendar must be 0 (none), 1 (cyclic) or 2 (one-hot)");
    }
}

} // namespace

std::unique_ptr<Forecaster> make_forecaster(const std::string& family, const ParamMap& params) {
    if (family == "arima") {
        reject_unknown_keys(params, {"p", "d", "q"});
        return std::make_unique<ArimaForecaster>("arima", order_from_params(params, false),
                                                 false);
    }
    if (family == "sarima") {
        reject_unknown_keys(params, {"p", "d", "q", "P", "D", "Q", "s"});
        return std::make_unique<ArimaForecaster>("sarima", order_from_params(params, true),
                                                 false);
    }
    if (family == "arimax") {
        reject_unknown_keys(params, {"p", "d", "q"});
        return std::make_unique<ArimaForecaster>("arimax", order_from_params(params, false),
                                                 true);
    }
    if (family == "ses") {
        reject_unknown_keys(params, {"alpha"});
        std::optional<double> alpha;
        if (params.count("alpha")) alpha = params.at("alpha");
        return std::make_unique<SesForecaster>(alpha);
    }
    if (family == "lstm") {
        reject_unknown_keys(params, {"units", "window", "epochs", "batch", "step_size", "seed",
                                     "exog", "calendar", "clip"});
        ml::TrainConfig cfg;
        cfg.epochs = param_int(params, "epochs", 200);
        cfg.batch_size = param_int(params, "batch", 0);
        cfg.step_size = param_or(params, "step_size", 1e-3);
        cfg.clip_norm = param_or(params, "clip", 5.0);
        cfg.seed = static_cast<std::uint64_t>(param_int(params, "seed", 0));
        return std::make_unique<LstmForecaster>(
            param_int(params, "units", 100), param_int(params, "window", 30), cfg,
            param_int(params, "exog", 1) != 0,
            calendar_from_params(params, ml::CalendarEncoding::Cyclic));
    }
    if (family == "gbt") {
        reject_unknown_keys(params,
                            {"trees", "eta", "depth", "gamma", "lambda", "window", "exog",
                             "calendar"});
        ml::GbtConfig cfg;
        cfg.n_trees = param_int(params, "trees", 200);
        cfg.learning_rate = param_or(params, "eta", 0.01);
        cfg.max_depth = param_int(params, "depth", 3);
        cfg.gamma = param_or(params, "gamma", 0.0);
        cfg.lambda = param_or(params, "lambda", 1.0);
        return std::make_unique<GbtForecaster>(
            cfg, param_int(params, "window", 30), param_int(params, "exog", 1) != 0,
            calendar_from_params(params, ml::CalendarEncoding::OneHot));
    }
    if (family == "naive") {
        reject_unknown_keys(params, {});
        return std::make_unique<NaiveForecaster>();
    }
    throw UnknownFamily("unknown model family '" + family + "'");
}

std::vector<std::string> registered_families() {
    return {"arima", "sarima", "arimax", "ses", "lstm", "gbt", "naive"};
}

} // namespace gridcast::eval
