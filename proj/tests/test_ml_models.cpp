#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridcast/core/errors.hpp"
#include "gridcast/ml/gbt.hpp"
#include "gridcast/ml/lstm.hpp"
#include "gridcast/ml/rollout.hpp"
#include "gridcast/ml/windows.hpp"
#include "support/sim.hpp"

#include <cmath>

using namespace gridcast;
using namespace testsupport;

TEST_CASE("make_windows: definition and boundary") {
    auto set = ml::make_windows(make_series({1, 2, 3, 4}), 2);
    REQUIRE(set.size() == 2);
    CHECK(set.features()[0] == std::vector<double>{1, 2});
    CHECK(set.targets()[0] == 3);
    CHECK(set.features()[1] == std::vector<double>{2, 3});
    CHECK(set.targets()[1] == 4);

    auto one = ml::make_windows(make_series({1, 2, 3, 4}), 3);
    CHECK(one.size() == 1);

    CHECK_THROWS_AS(ml::make_windows(make_series({1, 2, 3}), 3), TooShort);
}

TEST_CASE("make_windows: normalization endpoints from the observed range") {
    auto set = ml::make_windows(make_series({200, 500, 200, 2106, 200}), 3);
    // Targets are {2106, 200} -> normalized {1, 0}.
    CHECK(set.target_norm(0) == doctest::Approx(1.0));
    CHECK(set.target_norm(1) == doctest::Approx(0.0));
    for (std::size_t i = 0; i < set.size(); ++i) {
        CHECK(set.target_norm(i) >= 0.0);
        CHECK(set.target_norm(i) <= 1.0);
        for (std::size_t j = 0; j < set.n_features(); ++j) {
            CHECK(set.feature_norm(i, j) >= 0.0);
            CHECK(set.feature_norm(i, j) <= 1.0);
        }
    }
}

TEST_CASE("make_windows: lag features always precede the target") {
    auto s = make_series(sine_series(60, 12.0));
    auto set = ml::make_windows(s, 7, nullptr, ml::CalendarEncoding::Cyclic);
    for (std::size_t i = 0; i < set.size(); ++i) {
        // Sample i uses values at indices [i, i+w); its target sits at i+w.
        const auto target_date = set.target_date(i);
        const auto last_lag_date = s.date(i + 6);
        CHECK(last_lag_date < target_date);
    }
}

TEST_CASE("make_windows: exog and calendar widths") {
    std::vector<double> temp(30), hum(30);
    for (std::size_t i = 0; i < 30; ++i) {
        temp[i] = 20.0 + static_cast<double>(i % 7);
        hum[i] = 60.0 + static_cast<double>(i % 5);
    }
    core::ExogMatrix exog(core::Date(17897), {"temperature", "humidity"}, {temp, hum});
    auto s = make_series(sine_series(30, 9.0));
    auto set = ml::make_windows(s, 5, &exog, ml::CalendarEncoding::OneHot);
    CHECK(set.n_features() == 5 + 2 + 9);
    CHECK(set.layout().feature_names().size() == set.n_features());
    // The exog features sit right after the lags and match the target row.
    CHECK(set.features()[0][5] == temp[5]);
    CHECK(set.features()[0][6] == hum[5]);
}

TEST_CASE("lstm_cell_step: zero weights give half gates and zero state") {
    auto p = ml::LstmParams::zeros(3, 2);
    Eigen::VectorXd x(2), h(3), c(3);
    x << 1.0, -2.0;
    h.setZero();
    c.setZero();
    auto [h_t, c_t] = ml::lstm_cell_step(p, x, h, c);
    for (int i = 0; i < 3; ++i) {
        CHECK(c_t(i) == doctest::Approx(0.0)); // i*g = 0.5*tanh(0) = 0
        CHECK(h_t(i) == doctest::Approx(0.0));
    }
}

TEST_CASE("lstm_cell_step: saturated forget gate preserves the cell state") {
    auto p = ml::LstmParams::zeros(2, 1);
    p.b_forget.setConstant(50.0); // sigmoid saturates at 1
    Eigen::VectorXd x(1), h(2), c(2);
    x << 0.3;
    h.setZero();
    c << 1.5, -0.7;
    auto [h_t, c_t] = ml::lstm_cell_step(p, x, h, c);
    CHECK(c_t(0) == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(c_t(1) == doctest::Approx(-0.7).epsilon(1e-9));
}

TEST_CASE("lstm_cell_step: scalar hand oracle") {
    // H = m = 1, all weights 0.5, biases 0, x = 1, zero initial state.
    // Evaluating the gate equations by hand: every gate sees 0.5, so
    // f = i = o = sigmoid(0.5), candidate = tanh(0.5),
    // c1 = sigmoid(0.5) * tanh(0.5), h1 = sigmoid(0.5) * tanh(c1).
    auto p = ml::LstmParams::zeros(1, 1);
    p.w_forget.setConstant(0.5);
    p.w_input.setConstant(0.5);
    p.w_cell.setConstant(0.5);
    p.w_output.setConstant(0.5);
    Eigen::VectorXd x(1), h(1), c(1);
    x << 1.0;
    h.setZero();
    c.setZero();
    auto [h_t, c_t] = ml::lstm_cell_step(p, x, h, c);

    const long double sig = 1.0L / (1.0L + std::exp(-0.5L));
    const long double cand = std::tanh(0.5L);
    const long double c_ref = sig * cand;                 // 0.2876491366...
    const long double h_ref = sig * std::tanh(c_ref);     // 0.1742697187...
    CHECK(c_t(0) == doctest::Approx(static_cast<double>(c_ref)).epsilon(1e-12));
    CHECK(h_t(0) == doctest::Approx(static_cast<double>(h_ref)).epsilon(1e-12));
    CHECK(h_t(0) == doctest::Approx(0.17426971865610506).epsilon(1e-9));

    Eigen::VectorXd bad(2);
    CHECK_THROWS_AS(ml::lstm_cell_step(p, bad, h, c), ShapeMismatch);
}

TEST_CASE("lstm: |h_t| <= 1 elementwise") {
    numeric::Rng rng(4);
    auto p = ml::LstmParams::zeros(4, 2);
    auto randomize = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = rng.uniform(-3, 3);
    };
    randomize(p.w_forget);
    randomize(p.w_input);
    randomize(p.w_cell);
    randomize(p.w_output);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(4), c = Eigen::VectorXd::Zero(4);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd x(2);
        x << rng.uniform(-5, 5), rng.uniform(-5, 5);
        auto [h2, c2] = ml::lstm_cell_step(p, x, h, c);
        h = h2;
        c = c2;
        for (int i = 0; i < 4; ++i) CHECK(std::abs(h(i)) <= 1.0);
    }
}

TEST_CASE("lstm: BPTT gradient matches central finite differences") {
    // Tiny seeded instance: H=3, w=4, 8 samples (the decisive check).
    auto series = make_series(sine_series(12, 5.0));
    auto data = ml::make_windows(series, 4);
    REQUIRE(data.size() == 8);

    numeric::Rng rng(2024);
    auto p = ml::LstmParams::zeros(3, 1);
    auto theta = ml::pack_params(p);
    for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = rng.uniform(-0.5, 0.5);
    p = ml::unpack_params(3, 1, theta);

    auto [loss, grad] = ml::lstm_loss_and_gradient(p, data);
    CHECK(std::isfinite(loss));

    const double h = 1e-5;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp(k) += h;
        tm(k) -= h;
        const double fp = ml::lstm_loss(ml::unpack_params(3, 1, tp), data);
        const double fm = ml::lstm_loss(ml::unpack_params(3, 1, tm), data);
        const double fd = (fp - fm) / (2.0 * h);
        const double scale = std::max({std::abs(fd), std::abs(grad(k)), 1e-8});
        CHECK(std::abs(grad(k) - fd) / scale < 1e-4);
    }
}

TEST_CASE("lstm_fit: constant target learned through the bias path") {
    std::vector<double> v(40, 3.0);
    // make_windows maps a constant target to 0.5; training must drive the
    // output there.
    auto data = ml::make_windows(make_series(v), 5);
    ml::TrainConfig cfg;
    cfg.epochs = 200;
    cfg.seed = 1;
    cfg.batch_size = 4; // several Adam steps per epoch
    cfg.step_size = 5e-3;
    auto model = ml::lstm_fit(data, 4, cfg);
    CHECK(model.loss_trace.back() < 1e-4);
}

TEST_CASE("lstm_fit: divergence aborts with NonFiniteLoss") {
    auto series = make_series(sine_series(40, 9.0));
    auto data = ml::make_windows(series, 5);
    ml::TrainConfig cfg;
    cfg.epochs = 50;
    cfg.step_size = 1e160;  // one update overflows the head product
    cfg.clip_norm = 1e300;  // clipping effectively disabled
    cfg.seed = 2;
    CHECK_THROWS_AS(ml::lstm_fit(data, 4, cfg), NonFiniteLoss);
}

TEST_CASE("lstm_fit: determinism and loss trace") {
    auto series = make_series(sine_series(60, 14.0));
    auto data = ml::make_windows(series, 6);
    ml::TrainConfig cfg;
    cfg.epochs = 30;
    cfg.seed = 9;
    auto a = ml::lstm_fit(data, 5, cfg);
    auto b = ml::lstm_fit(data, 5, cfg);
    CHECK(ml::pack_params(a.params) == ml::pack_params(b.params)); // bitwise
    CHECK(a.loss_trace == b.loss_trace);
    CHECK(a.loss_trace.size() == 30);

    ml::TrainConfig other = cfg;
    other.seed = 10;
    auto c = ml::lstm_fit(data, 5, other);
    CHECK(ml::pack_params(a.params) != ml::pack_params(c.params));
}

TEST_CASE("lstm_fit: sine wave learned to tight one-step error") {
    auto full = sine_series(220, 25.0);
    std::vector<double> train_vals(full.begin(), full.end() - 20);
    auto train = make_series(train_vals);
    auto data = ml::make_windows(train, 12);
    ml::TrainConfig cfg;
    cfg.epochs = 300;
    cfg.seed = 3;
    cfg.step_size = 5e-3;
    cfg.batch_size = 16;
    auto model = ml::lstm_fit(data, 16, cfg);

    // Held-out one-step predictions over the final 20 points.
    auto series_all = make_series(full);
    auto preds = ml::one_step_rollout(
        model.layout, model.feature_scales, model.target_scale,
        [&](const std::vector<double>& row) { return model.predict_normalized(row); },
        series_all, nullptr, full.size() - 20);
    double mape = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        mape += std::abs((full[full.size() - 20 + i] - preds[i]) / full[full.size() - 20 + i]);
    }
    mape = 100.0 * mape / static_cast<double>(preds.size());
    CHECK(mape < 2.0);
}

TEST_CASE("lstm_forecast: constant series gives a flat forecast") {
    std::vector<double> v(30, 8.0);
    auto series = make_series(v);
    auto data = ml::make_windows(series, 4);
    ml::TrainConfig cfg;
    cfg.epochs = 150;
    cfg.seed = 5;
    auto model = ml::lstm_fit(data, 3, cfg);
    auto fc = ml::lstm_forecast(model, series, 6);
    REQUIRE(fc.values.size() == 6);
    for (double v2 : fc.values) CHECK(v2 == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("lstm_forecast: H=1 equals one application to the final window") {
    auto series = make_series(sine_series(80, 11.0));
    auto data = ml::make_windows(series, 7);
    ml::TrainConfig cfg;
    cfg.epochs = 50;
    cfg.seed = 13;
    auto model = ml::lstm_fit(data, 6, cfg);
    auto fc = ml::lstm_forecast(model, series, 1);

    const auto& y = series.values();
    std::vector<double> lags(y.end() - 7, y.end());
    auto raw = model.layout.build_row(lags, series.end_date() + 1, {});
    CHECK(fc.values[0] == doctest::Approx(model.predict_raw(raw)).epsilon(1e-12));
}

TEST_CASE("lstm_forecast: sine continuation correlates with the truth") {
    const double period = 24.0;
    auto full = sine_series(240, period);
    std::vector<double> train_vals(full.begin(), full.end() - 24);
    auto train = make_series(train_vals);
    auto data = ml::make_windows(train, 24);
    ml::TrainConfig cfg;
    cfg.epochs = 300;
    cfg.seed = 21;
    cfg.step_size = 5e-3;
    cfg.batch_size = 16;
    auto model = ml::lstm_fit(data, 16, cfg);
    auto fc = ml::lstm_forecast(model, train, 24);

    // Correlation with the true continuation over one full period.
    double ma = 0, mb = 0;
    for (int i = 0; i < 24; ++i) {
        ma += fc.values[static_cast<std::size_t>(i)];
        mb += full[train_vals.size() + static_cast<std::size_t>(i)];
    }
    ma /= 24;
    mb /= 24;
    double num = 0, va = 0, vb = 0;
    for (int i = 0; i < 24; ++i) {
        const double a = fc.values[static_cast<std::size_t>(i)] - ma;
        const double b = full[train_vals.size() + static_cast<std::size_t>(i)] - mb;
        num += a * b;
        va += a * a;
        vb += b * b;
    }
    CHECK(num / std::sqrt(va * vb) > 0.95);
}

TEST_CASE("gbt: stump recovers the exact leaf weights") {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (int i = 0; i < 10; ++i) {
        X.push_back({-1.0 - 0.1 * i});
        y.push_back(-1.0);
        X.push_back({1.0 + 0.1 * i});
        y.push_back(1.0);
    }
    ml::GbtConfig cfg;
    cfg.n_trees = 1;
    cfg.learning_rate = 1.0;
    cfg.max_depth = 1;
    cfg.gamma = 0.0;
    cfg.lambda = 0.0;
    auto model = ml::gbt_fit_matrix(X, y, cfg);
    REQUIRE(model.trees.size() == 1);
    CHECK(model.base == doctest::Approx(0.0));
    REQUIRE(model.trees[0].leaf_count() == 2);
    const auto& nodes = model.trees[0].nodes;
    std::vector<double> weights;
    for (const auto& n : nodes) {
        if (n.is_leaf()) weights.push_back(n.weight);
    }
    std::sort(weights.begin(), weights.end());
    CHECK(weights[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(weights[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.loss_trace.back() == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("gbt: lambda -> infinity shrinks every prediction to the base") {
    auto series = make_series(sine_series(80, 10.0));
    auto data = ml::make_windows(series, 5);
    ml::GbtConfig cfg;
    cfg.n_trees = 20;
    cfg.learning_rate = 0.5;
    cfg.max_depth = 3;
    cfg.lambda = 1e12;
    auto model = ml::gbt_fit(data, cfg);
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::vector<double> row(data.n_features());
        for (std::size_t j = 0; j < row.size(); ++j) row[j] = data.feature_norm(i, j);
        CHECK(model.predict(row) == doctest::Approx(model.base).epsilon(1e-6));
    }
}

TEST_CASE("gbt: training loss is non-increasing with gamma = 0") {
    auto series = make_series(simulate_arma({0.7}, {}, 1.0, 120, 6));
    auto data = ml::make_windows(series, 6);
    ml::GbtConfig cfg;
    cfg.n_trees = 120;
    cfg.learning_rate = 0.1;
    cfg.max_depth = 3;
    cfg.gamma = 0.0;
    cfg.lambda = 1.0;
    auto model = ml::gbt_fit(data, cfg);
    for (std::size_t t = 1; t < model.loss_trace.size(); ++t) {
        CHECK(model.loss_trace[t] <= model.loss_trace[t - 1] + 1e-12);
    }
}

TEST_CASE("gbt: prediction equals base + eta * sum of leaf outputs") {
    auto series = make_series(sine_series(60, 9.0));
    auto data = ml::make_windows(series, 4);
    ml::GbtConfig cfg;
    cfg.n_trees = 15;
    cfg.learning_rate = 0.3;
    cfg.max_depth = 2;
    auto model = ml::gbt_fit(data, cfg);
    std::vector<double> row(data.n_features());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = data.feature_norm(3, j);
    double acc = model.base;
    for (const auto& tree : model.trees) acc += cfg.learning_rate * tree.predict(row);
    CHECK(model.predict(row) == doctest::Approx(acc).epsilon(1e-14));
}

TEST_CASE("gbt: determinism") {
    auto series = make_series(simulate_arma({0.5}, {}, 1.0, 100, 11));
    auto data = ml::make_windows(series, 5);
    ml::GbtConfig cfg;
    cfg.n_trees = 30;
    cfg.learning_rate = 0.1;
    cfg.max_depth = 3;
    auto a = ml::gbt_fit(data, cfg);
    auto b = ml::gbt_fit(data, cfg);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
        for (std::size_t n = 0; n < a.trees[t].nodes.size(); ++n) {
            CHECK(a.trees[t].nodes[n].feature == b.trees[t].nodes[n].feature);
            CHECK(a.trees[t].nodes[n].threshold == b.trees[t].nodes[n].threshold);
            CHECK(a.trees[t].nodes[n].weight == b.trees[t].nodes[n].weight);
        }
    }
    CHECK(a.loss_trace == b.loss_trace);
}

TEST_CASE("gbt: depth limit respected") {
    auto series = make_series(simulate_arma({0.4}, {}, 1.0, 150, 8));
    auto data = ml::make_windows(series, 6);
    for (int depth : {1, 2, 3}) {
        ml::GbtConfig cfg;
        cfg.n_trees = 10;
        cfg.learning_rate = 0.3;
        cfg.max_depth = depth;
        auto model = ml::gbt_fit(data, cfg);
        for (const auto& tree : model.trees) CHECK(tree.depth() <= depth);
    }
}

TEST_CASE("gbt_forecast: stump model takes at most two values per step") {
    auto series = make_series(sine_series(60, 10.0));
    auto data = ml::make_windows(series, 4);
    ml::GbtConfig cfg;
    cfg.n_trees = 1;
    cfg.learning_rate = 1.0;
    cfg.max_depth = 1;
    auto model = ml::gbt_fit(data, cfg);
    // One stump: the model output space has at most 2 values, so original
    // scale predictions take at most 2 distinct values.
    auto fc = ml::gbt_forecast(model, series, 10);
    std::vector<double> uniq = fc.values;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    CHECK(uniq.size() <= 2);
}

TEST_CASE("gbt_forecast: H=1 equals one model application; sine MAPE") {
    auto full = sine_series(260, 26.0);
    std::vector<double> train_vals(full.begin(), full.end() - 26);
    auto train = make_series(train_vals);
    auto data = ml::make_windows(train, 12);
    ml::GbtConfig cfg; // Table-4 defaults: 200 trees, eta 0.01, depth 3
    auto model = ml::gbt_fit(data, cfg);

    auto fc = ml::gbt_forecast(model, train, 1);
    const auto& y = train.values();
    std::vector<double> lags(y.end() - 12, y.end());
    auto raw = model.layout.build_row(lags, train.end_date() + 1, {});
    std::vector<double> norm(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
        norm[j] = model.feature_scales[j].normalize(raw[j]);
    }
    CHECK(fc.values[0] ==
          doctest::Approx(model.target_scale.denormalize(model.predict(norm))).epsilon(1e-12));

    auto series_all = make_series(full);
    auto preds = ml::one_step_rollout(
        model.layout, model.feature_scales, model.target_scale,
        [&](const std::vector<double>& row) { return model.predict(row); }, series_all, nullptr,
        full.size() - 26);
    double mape = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        mape += std::abs((full[full.size() - 26 + i] - preds[i]) / full[full.size() - 26 + i]);
    }
    mape = 100.0 * mape / static_cast<double>(preds.size());
    CHECK(mape < 10.0);
}

TEST_CASE("gbt: hyperparameter validation") {
    std::vector<std::vector<double>> X{{1}, {2}};
    std::vector<double> y{1, 2};
    ml::GbtConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(ml::gbt_fit_matrix(X, y, cfg), BadHyperparameter);
    cfg = {};
    cfg.max_depth = 0;
    CHECK_THROWS_AS(ml::gbt_fit_matrix(X, y, cfg), BadHyperparameter);
    CHECK_THROWS_AS(ml::gbt_fit_matrix({}, {}, ml::GbtConfig{}), EmptyData);
}

TEST_CASE("rollout: missing future exog raises when no fallback exists") {
    std::vector<double> temp(40);
    for (std::size_t i = 0; i < temp.size(); ++i) temp[i] = 20.0 + (i % 9);
    core::ExogMatrix exog(core::Date(17897), {"temperature"}, {temp});
    auto series = make_series(sine_series(40, 8.0));
    auto data = ml::make_windows(series, 5, &exog, ml::CalendarEncoding::None);
    ml::GbtConfig cfg;
    cfg.n_trees = 5;
    cfg.learning_rate = 0.3;
    auto model = ml::gbt_fit(data, cfg); // no climatology attached
    CHECK_THROWS_AS(ml::gbt_forecast(model, series, 3, nullptr, true), MissingFutureExog);
    CHECK_THROWS_AS(ml::gbt_forecast(model, series, 3, nullptr, false), MissingFutureExog);

    model.climatology = ml::build_climatology(exog);
    CHECK_NOTHROW(ml::gbt_forecast(model, series, 3, nullptr, true));
    CHECK_THROWS_AS(ml::gbt_forecast(model, series, 3, nullptr, false), MissingFutureExog);
}
