#include "gridcast/io/artifact.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/ml/rollout.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridcast::io {

using nlohmann::json;

namespace {

json chain_to_json(const preprocess::TransformChain& c) {
    return json{{"log", c.log_applied}, {"d", c.d}, {"D", c.D}, {"s", c.s}, {"tail", c.tail}};
}

preprocess::TransformChain chain_from_json(const json& j) {
    preprocess::TransformChain c;
    c.log_applied = j.at("log").get<bool>();
    c.d = j.at("d").get<int>();
    c.D = j.at("D").get<int>();
    c.s = j.at("s").get<int>();
    c.tail = j.at("tail").get<std::vector<double>>();
    return c;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j.at(0).size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j.at(r).at(c).get<double>();
        }
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i);
    return v;
}

json layout_to_json(const ml::FeatureLayout& l) {
    return json{{"window", l.window},
                {"exog", l.exog_names},
                {"calendar", static_cast<int>(l.calendar)}};
}

ml::FeatureLayout layout_from_json(const json& j) {
    ml::FeatureLayout l;
    l.window = j.at("window").get<int>();
    l.exog_names = j.at("exog").get<std::vector<std::string>>();
    l.calendar = static_cast<ml::CalendarEncoding>(j.at("calendar").get<int>());
    return l;
}

json scales_to_json(const std::vector<ml::MinMaxScale>& scales) {
    json out = json::array();
    for (const auto& s : scales) out.push_back(json{{"lo", s.lo}, {"hi", s.hi}});
    return out;
}

std::vector<ml::MinMaxScale> scales_from_json(const json& j) {
    std::vector<ml::MinMaxScale> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back({e.at("lo").get<double>(), e.at("hi").get<double>()});
    return out;
}

json climatology_to_json(const ml::Climatology& c) {
    return json{{"names", c.names}, {"day_means", c.day_of_year_mean}};
}

ml::Climatology climatology_from_json(const json& j) {
    ml::Climatology c;
    c.names = j.at("names").get<std::vector<std::string>>();
    c.day_of_year_mean = j.at("day_means").get<std::vector<std::vector<double>>>();
    return c;
}

json arima_to_json(const models::ArimaFit& f) {
    json j;
    j["order"] = {{"p", f.order.p}, {"d", f.order.d}, {"q", f.order.q}, {"P", f.order.P},
                  {"D", f.order.D}, {"Q", f.order.Q}, {"s", f.order.s}};
    j["ar"] = f.ar;
    j["ma"] = f.ma;
    j["sar"] = f.sar;
    j["sma"] = f.sma;
    j["has_intercept"] = f.has_intercept;
    j["intercept"] = f.intercept;
    j["exog_names"] = f.exog_names;
    j["exog_coef"] = f.exog_coef;
    j["sigma2"] = f.sigma2;
    j["loglik"] = f.loglik;
    j["aic"] = f.aic;
    j["bic"] = f.bic;
    j["k_params"] = f.k_params;
    j["n_eff"] = f.n_eff;
    j["converged"] = f.converged;
    j["u_history"] = f.u_history;
    j["eps_history"] = f.eps_history;
    j["exog_tail"] = f.exog_tail;
    return j;
}

models::ArimaFit arima_from_json(const json& j) {
    models::ArimaFit f;
    const auto& o = j.at("order");
    f.order.p = o.at("p");
    f.order.d = o.at("d");
    f.order.q = o.at("q");
    f.order.P = o.at("P");
    f.order.D = o.at("D");
    f.order.Q = o.at("Q");
    f.order.s = o.at("s");
    f.ar = j.at("ar").get<std::vector<double>>();
    f.ma = j.at("ma").get<std::vector<double>>();
    f.sar = j.at("sar").get<std::vector<double>>();
    f.sma = j.at("sma").get<std::vector<double>>();
    f.has_intercept = j.at("has_intercept");
    f.intercept = j.at("intercept");
    f.exog_names = j.at("exog_names").get<std::vector<std::string>>();
    f.exog_coef = j.at("exog_coef").get<std::vector<double>>();
    f.sigma2 = j.at("sigma2");
    f.loglik = j.at("loglik");
    f.aic = j.at("aic");
    f.bic = j.at("bic");
    f.k_params = j.at("k_params");
    f.n_eff = j.at("n_eff");
    f.converged = j.at("converged");
    f.u_history = j.at("u_history").get<std::vector<double>>();
    f.eps_history = j.at("eps_history").get<std::vector<double>>();
    f.exog_tail = j.at("exog_tail").get<std::vector<std::vector<double>>>();
    return f;
}

json lstm_to_json(const ml::LstmModel& m) {
    json j;
    j["hidden"] = m.params.hidden;
    j["input"] = m.params.input;
    j["w_forget"] = matrix_to_json(m.params.w_forget);
    j["w_input"] = matrix_to_json(m.params.w_input);
    j["w_cell"] = matrix_to_json(m.params.w_cell);
    j["w_output"] = matrix_to_json(m.params.w_output);
    j["b_forget"] = vector_to_json(m.params.b_forget);
    j["b_input"] = vector_to_json(m.params.b_input);
    j["b_cell"] = vector_to_json(m.params.b_cell);
    j["b_output"] = vector_to_json(m.params.b_output);
    j["head_w"] = vector_to_json(m.params.head_w);
    j["head_b"] = m.params.head_b;
    j["out_w"] = m.params.out_w;
    j["out_b"] = m.params.out_b;
    j["layout"] = layout_to_json(m.layout);
    j["feature_scales"] = scales_to_json(m.feature_scales);
    j["target_scale"] = json{{"lo", m.target_scale.lo}, {"hi", m.target_scale.hi}};
    j["config"] = {{"epochs", m.config.epochs},       {"batch", m.config.batch_size},
                   {"step_size", m.config.step_size}, {"beta1", m.config.beta1},
                   {"beta2", m.config.beta2},         {"epsilon", m.config.epsilon},
                   {"clip", m.config.clip_norm},      {"seed", m.config.seed}};
    j["loss_trace"] = m.loss_trace;
    j["climatology"] = climatology_to_json(m.climatology);
    return j;
}

ml::LstmModel lstm_from_json(const json& j) {
    ml::LstmModel m;
    m.params = ml::LstmParams::zeros(j.at("hidden"), j.at("input"));
    m.params.w_forget = matrix_from_json(j.at("w_forget"));
    m.params.w_input = matrix_from_json(j.at("w_input"));
    m.params.w_cell = matrix_from_json(j.at("w_cell"));
    m.params.w_output = matrix_from_json(j.at("w_output"));
    m.params.b_forget = vector_from_json(j.at("b_forget"));
    m.params.b_input = vector_from_json(j.at("b_input"));
    m.params.b_cell = vector_from_json(j.at("b_cell"));
    m.params.b_output = vector_from_json(j.at("b_output"));
    m.params.head_w = vector_from_json(j.at("head_w"));
    m.params.head_b = j.at("head_b");
    m.params.out_w = j.at("out_w");
    m.params.out_b = j.at("out_b");
    m.layout = layout_from_json(j.at("layout"));
    m.feature_scales = scales_from_json(j.at("feature_scales"));
    m.target_scale = {j.at("target_scale").at("lo").get<double>(),
                      j.at("target_scale").at("hi").get<double>()};
    const auto& c = j.at("config");
    m.config.epochs = c.at("epochs");
    m.config.batch_size = c.at("batch");
    m.config.step_size = c.at("step_size");
    m.config.beta1 = c.at("beta1");
    m.config.beta2 = c.at("beta2");
    m.config.epsilon = c.at("epsilon");
    m.config.clip_norm = c.at("clip");
    m.config.seed = c.at("seed");
    m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
    m.climatology = climatology_from_json(j.at("climatology"));
    return m;
}

json gbt_to_json(const ml::GbtModel& m) {
    json trees = json::array();
    for (const auto& tree : m.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back(json{{"f", n.feature},
                                 {"t", n.threshold},
                                 {"l", n.left},
                                 {"r", n.right},
                                 {"w", n.weight}});
        }
        trees.push_back(std::move(nodes));
    }
    json j;
    j["config"] = {{"trees", m.config.n_trees},      {"eta", m.config.learning_rate},
                   {"depth", m.config.max_depth},    {"gamma", m.config.gamma},
                   {"lambda", m.config.lambda}};
    j["base"] = m.base;
    j["trees"] = std::move(trees);
    j["loss_trace"] = m.loss_trace;
    j["layout"] = layout_to_json(m.layout);
    j["feature_scales"] = scales_to_json(m.feature_scales);
    j["target_scale"] = json{{"lo", m.target_scale.lo}, {"hi", m.target_scale.hi}};
    j["climatology"] = climatology_to_json(m.climatology);
    return j;
}

ml::GbtModel gbt_from_json(const json& j) {
    ml::GbtModel m;
    const auto& c = j.at("config");
    m.config.n_trees = c.at("trees");
    m.config.learning_rate = c.at("eta");
    m.config.max_depth = c.at("depth");
    m.config.gamma = c.at("gamma");
    m.config.lambda = c.at("lambda");
    m.base = j.at("base");
    for (const auto& tj : j.at("trees")) {
        ml::GbtTree tree;
        for (const auto& nj : tj) {
            ml::GbtTree::Node n;
            n.feature = nj.at("f");
            n.threshold = nj.at("t");
            n.left = nj.at("l");
            n.right = nj.at("r");
            n.weight = nj.at("w");
            tree.nodes.push_back(n);
        }
        m.trees.push_back(std::move(tree));
    }
    m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
    m.layout = layout_from_json(j.at("layout"));
    m.feature_scales = scales_from_json(j.at("feature_scales"));
    m.target_scale = {j.at("target_scale").at("lo").get<double>(),
                      j.at("target_scale").at("hi").get<double>()};
    m.climatology = climatology_from_json(j.at("climatology"));
    return m;
}

json ses_to_json(const models::SesFit& f) {
    return json{{"alpha", f.alpha},
                {"alpha_estimated", f.alpha_estimated},
                {"final_level", f.final_level},
                {"sse", f.sse}};
}

models::SesFit ses_from_json(const json& j) {
    models::SesFit f;
    f.alpha = j.at("alpha");
    f.alpha_estimated = j.at("alpha_estimated");
    f.final_level = j.at("final_level");
    f.sse = j.at("sse");
    return f;
}

} // namespace

json model_to_json(const ModelArtifact& a) {
    json j;
    j["format"] = "gridcast-model";
    j["family"] = a.family;
    j["chain"] = chain_to_json(a.chain);
    j["series"] = {{"name", a.series_name}, {"unit", a.unit}, {"origin", a.origin.to_string()}};
    if (a.arima) j["arima"] = arima_to_json(*a.arima);
    if (a.ses) j["ses"] = ses_to_json(*a.ses);
    if (a.lstm) j["lstm"] = lstm_to_json(*a.lstm);
    if (a.gbt) j["gbt"] = gbt_to_json(*a.gbt);
    if (!a.exog_climatology.empty()) {
        j["exog_climatology"] = climatology_to_json(a.exog_climatology);
    }
    return j;
}

ModelArtifact model_from_json(const json& j) {
    if (j.value("format", "") != "gridcast-model") {
        throw ConfigError("not a gridcast model artifact");
    }
    ModelArtifact a;
    a.family = j.at("family");
    a.chain = chain_from_json(j.at("chain"));
    a.series_name = j.at("series").at("name");
    a.unit = j.at("series").at("unit");
    a.origin = core::Date::parse(j.at("series").at("origin").get<std::string>());
    if (j.contains("arima")) a.arima = arima_from_json(j.at("arima"));
    if (j.contains("ses")) a.ses = ses_from_json(j.at("ses"));
    if (j.contains("lstm")) a.lstm = lstm_from_json(j.at("lstm"));
    if (j.contains("gbt")) a.gbt = gbt_from_json(j.at("gbt"));
    if (j.contains("exog_climatology")) {
        a.exog_climatology = climatology_from_json(j.at("exog_climatology"));
    }
    return a;
}

std::vector<double> ModelArtifact::forecast(int horizon,
                                            const core::Series& history_transformed,
                                            const core::ExogMatrix* future_exog) const {
    if (arima) {
        models::ArimaFit fit = *arima;
        fit.chain = chain;
        fit.origin = origin;
        std::optional<core::ExogMatrix> clim_rows;
        if (!fit.exog_coef.empty() && !future_exog && !exog_climatology.empty()) {
            std::vector<std::vector<double>> cols(exog_climatology.names.size());
            for (int h = 1; h <= horizon; ++h) {
                auto row = exog_climatology.row_for(origin + h);
                for (std::size_t j = 0; j < row.size(); ++j) cols[j].push_back(row[j]);
            }
            clim_rows.emplace(origin + 1, exog_climatology.names, std::move(cols));
            future_exog = &*clim_rows;
        }
        return models::forecast_arima(fit, horizon, future_exog).values_transformed;
    }
    if (ses) {
        return std::vector<double>(static_cast<std::size_t>(horizon), ses->final_level);
    }
    if (lstm) {
        return ml::recursive_rollout(
            lstm->layout, lstm->feature_scales, lstm->target_scale,
            [&](const std::vector<double>& row) { return lstm->predict_normalized(row); },
            history_transformed, horizon, future_exog, lstm->climatology, true);
    }
    if (gbt) {
        return ml::recursive_rollout(
            gbt->layout, gbt->feature_scales, gbt->target_scale,
            [&](const std::vector<double>& row) { return gbt->predict(row); },
            history_transformed, horizon, future_exog, gbt->climatology, true);
    }
    throw ConfigError("artifact has no model payload");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp + "'");
        out << content;
        if (!out.good()) throw ConfigError("short write to '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw ConfigError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void save_model(const ModelArtifact& artifact, const std::string& path) {
    write_file_atomic(path, model_to_json(artifact).dump(2) + "\n");
}

ModelArtifact load_model(const std::string& path) {
    return model_from_json(json::parse(read_file(path)));
}

} // namespace gridcast::io
