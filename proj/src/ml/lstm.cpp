#include "gridcast/ml/lstm.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gridcast::ml {

namespace {

Eigen::ArrayXXd sigmoid(const Eigen::ArrayXXd& x) { return 1.0 / (1.0 + (-x).exp()); }

// Splits one normalized feature row into the per-step input vectors:
// step t carries the t-th lag plus the shared exog/calendar extras.
std::vector<Eigen::VectorXd> row_to_sequence(const FeatureLayout& layout,
                                             const std::vector<double>& row) {
    const std::size_t w = static_cast<std::size_t>(layout.window);
    const std::size_t extras = row.size() - w;
    std::vector<Eigen::VectorXd> seq(w, Eigen::VectorXd(1 + static_cast<Eigen::Index>(extras)));
    for (std::size_t t = 0; t < w; ++t) {
        seq[t](0) = row[t];
        for (std::size_t j = 0; j < extras; ++j) {
            seq[t](1 + static_cast<Eigen::Index>(j)) = row[w + j];
        }
    }
    return seq;
}

// Per-step input matrices (m x B) for a batch of samples.
std::vector<Eigen::MatrixXd> batch_inputs(const FeatureLayout& layout,
                                          const SupervisedSet& data,
                                          const std::vector<double>& norm_features,
                                          std::size_t first, std::size_t count) {
    const std::size_t w = static_cast<std::size_t>(layout.window);
    const std::size_t nf = data.n_features();
    const std::size_t extras = nf - w;
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(extras);
    std::vector<Eigen::MatrixXd> steps(w, Eigen::MatrixXd(m, static_cast<Eigen::Index>(count)));
    for (std::size_t b = 0; b < count; ++b) {
        const double* row = &norm_features[(first + b) * nf];
        for (std::size_t t = 0; t < w; ++t) {
            steps[t](0, static_cast<Eigen::Index>(b)) = row[t];
            for (std::size_t j = 0; j < extras; ++j) {
                steps[t](1 + static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) =
                    row[w + j];
            }
        }
    }
    return steps;
}

struct ForwardCache {
    std::vector<Eigen::MatrixXd> concat;           // (H+m) x B per step
    std::vector<Eigen::ArrayXXd> f, i, g, o, c, tc; // H x B per step
    Eigen::MatrixXd h_final;                       // H x B
    Eigen::ArrayXd z, u, yhat;                     // per sample
};

void forward_batch(const LstmParams& p, const std::vector<Eigen::MatrixXd>& inputs,
                   ForwardCache& cache) {
    const Eigen::Index H = p.hidden;
    const Eigen::Index B = inputs[0].cols();
    const std::size_t w = inputs.size();
    cache.concat.resize(w);
    cache.f.resize(w);
    cache.i.resize(w);
    cache.g.resize(w);
    cache.o.resize(w);
    cache.c.resize(w);
    cache.tc.resize(w);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(H, B);
    Eigen::ArrayXXd c = Eigen::ArrayXXd::Zero(H, B);
    for (std::size_t t = 0; t < w; ++t) {
        Eigen::MatrixXd& zcat = cache.concat[t];
        zcat.resize(H + inputs[t].rows(), B);
        zcat.topRows(H) = h;
        zcat.bottomRows(inputs[t].rows()) = inputs[t];

        cache.f[t] = sigmoid(((p.w_forget * zcat).colwise() + p.b_forget).array());
        cache.i[t] = sigmoid(((p.w_input * zcat).colwise() + p.b_input).array());
        cache.g[t] = ((p.w_cell * zcat).colwise() + p.b_cell).array().tanh();
        cache.o[t] = sigmoid(((p.w_output * zcat).colwise() + p.b_output).array());
        c = cache.f[t] * c + cache.i[t] * cache.g[t];
        cache.c[t] = c;
        cache.tc[t] = c.tanh();
        h = (cache.o[t] * cache.tc[t]).matrix();
    }
    cache.h_final = h;
    cache.z = (p.head_w.transpose() * h).array() + p.head_b;
    cache.u = cache.z.max(0.0);
    cache.yhat = p.out_w * cache.u + p.out_b;
}

struct Gradients {
    LstmParams g;
    explicit Gradients(const LstmParams& p) {
        g = LstmParams::zeros(p.hidden, p.input);
        g.out_w = 0.0;
    }
};

// Backpropagation through time for one batch; dyhat already carries the
// loss scaling. Accumulates into grad.
void backward_batch(const LstmParams& p, const std::vector<Eigen::MatrixXd>& inputs,
                    const ForwardCache& cache, const Eigen::ArrayXd& dyhat, LstmParams& grad) {
    const Eigen::Index H = p.hidden;
    const Eigen::Index B = inputs[0].cols();
    const std::size_t w = inputs.size();

    grad.out_w += (dyhat * cache.u).sum();
    grad.out_b += dyhat.sum();
    Eigen::ArrayXd dz = dyhat * p.out_w * (cache.z > 0.0).cast<double>();
    grad.head_w += cache.h_final * dz.matrix();
    grad.head_b += dz.sum();

    Eigen::MatrixXd dh = p.head_w * dz.matrix().transpose(); // H x B
    Eigen::ArrayXXd dc = Eigen::ArrayXXd::Zero(H, B);
    for (std::size_t t = w; t-- > 0;) {
        const Eigen::ArrayXXd dha = dh.array();
        const Eigen::ArrayXXd do_ = dha * cache.tc[t];
        dc += dha * cache.o[t] * (1.0 - cache.tc[t].square());

        const Eigen::ArrayXXd c_prev =
            (t == 0) ? Eigen::ArrayXXd::Zero(H, B).eval() : cache.c[t - 1];
        const Eigen::ArrayXXd dzf = dc * c_prev * cache.f[t] * (1.0 - cache.f[t]);
        const Eigen::ArrayXXd dzi = dc * cache.g[t] * cache.i[t] * (1.0 - cache.i[t]);
        const Eigen::ArrayXXd dzg = dc * cache.i[t] * (1.0 - cache.g[t].square());
        const Eigen::ArrayXXd dzo = do_ * cache.o[t] * (1.0 - cache.o[t]);

        const Eigen::MatrixXd& zcat = cache.concat[t];
        grad.w_forget += dzf.matrix() * zcat.transpose();
        grad.w_input += dzi.matrix() * zcat.transpose();
        grad.w_cell += dzg.matrix() * zcat.transpose();
        grad.w_output += dzo.matrix() * zcat.transpose();
        grad.b_forget += dzf.rowwise().sum().matrix();
        grad.b_input += dzi.rowwise().sum().matrix();
        grad.b_cell += dzg.rowwise().sum().matrix();
        grad.b_output += dzo.rowwise().sum().matrix();

        Eigen::MatrixXd dconcat = p.w_forget.transpose() * dzf.matrix() +
                                  p.w_input.transpose() * dzi.matrix() +
                                  p.w_cell.transpose() * dzg.matrix() +
                                  p.w_output.transpose() * dzo.matrix();
        dh = dconcat.topRows(H);
        dc *= cache.f[t];
    }
}

constexpr std::size_t kChunk = 256; // bounds the BPTT cache footprint

} // namespace

LstmParams LstmParams::zeros(int hidden, int input) {
    LstmParams p;
    p.hidden = hidden;
    p.input = input;
    const Eigen::Index H = hidden, m = input;
    p.w_forget = Eigen::MatrixXd::Zero(H, H + m);
    p.w_input = Eigen::MatrixXd::Zero(H, H + m);
    p.w_cell = Eigen::MatrixXd::Zero(H, H + m);
    p.w_output = Eigen::MatrixXd::Zero(H, H + m);
    p.b_forget = Eigen::VectorXd::Zero(H);
    p.b_input = Eigen::VectorXd::Zero(H);
    p.b_cell = Eigen::VectorXd::Zero(H);
    p.b_output = Eigen::VectorXd::Zero(H);
    p.head_w = Eigen::VectorXd::Zero(H);
    p.head_b = 0.0;
    p.out_w = 0.0;
    p.out_b = 0.0;
    return p;
}

std::size_t LstmParams::parameter_count() const {
    const std::size_t H = static_cast<std::size_t>(hidden);
    const std::size_t m = static_cast<std::size_t>(input);
    return 4 * H * (H + m) + 4 * H + H + 3;
}

void LstmParams::check_shapes() const {
    const Eigen::Index H = hidden, m = input;
    if (H < 1 || m < 1) throw ShapeMismatch("LSTM needs hidden >= 1 and input >= 1");
    auto bad = [&](const Eigen::MatrixXd& w) { return w.rows() != H || w.cols() != H + m; };
    if (bad(w_forget) || bad(w_input) || bad(w_cell) || bad(w_output)) {
        throw ShapeMismatch("gate matrices must be H x (H+m)");
    }
    if (b_forget.size() != H || b_input.size() != H || b_cell.size() != H ||
        b_output.size() != H || head_w.size() != H) {
        throw ShapeMismatch("bias/head vectors must have length H");
    }
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_cell_step(const LstmParams& p,
                                                           const Eigen::VectorXd& x_t,
                                                           const Eigen::VectorXd& h_prev,
                                                           const Eigen::VectorXd& c_prev) {
    p.check_shapes();
    if (x_t.size() != p.input || h_prev.size() != p.hidden || c_prev.size() != p.hidden) {
        throw ShapeMismatch("lstm_cell_step: input/state sizes inconsistent with params");
    }
    Eigen::VectorXd concat(p.hidden + p.input);
    concat << h_prev, x_t;

    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const Eigen::VectorXd f = (p.w_forget * concat + p.b_forget).unaryExpr(sig);
    const Eigen::VectorXd i = (p.w_input * concat + p.b_input).unaryExpr(sig);
    const Eigen::VectorXd g =
        (p.w_cell * concat + p.b_cell).unaryExpr([](double v) { return std::tanh(v); });
    const Eigen::VectorXd o = (p.w_output * concat + p.b_output).unaryExpr(sig);

    Eigen::VectorXd c_t = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
    Eigen::VectorXd h_t =
        o.cwiseProduct(c_t.unaryExpr([](double v) { return std::tanh(v); }));
    return {std::move(h_t), std::move(c_t)};
}

double LstmParams::predict_sequence(const std::vector<Eigen::VectorXd>& inputs) const {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
    for (const auto& x : inputs) {
        auto [h2, c2] = lstm_cell_step(*this, x, h, c);
        h = std::move(h2);
        c = std::move(c2);
    }
    const double z = head_w.dot(h) + head_b;
    return out_w * std::max(z, 0.0) + out_b;
}

Eigen::VectorXd pack_params(const LstmParams& p) {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(p.parameter_count()));
    Eigen::Index at = 0;
    auto put_mat = [&](const Eigen::MatrixXd& m) {
        theta.segment(at, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
        at += m.size();
    };
    auto put_vec = [&](const Eigen::VectorXd& v) {
        theta.segment(at, v.size()) = v;
        at += v.size();
    };
    put_mat(p.w_forget);
    put_mat(p.w_input);
    put_mat(p.w_cell);
    put_mat(p.w_output);
    put_vec(p.b_forget);
    put_vec(p.b_input);
    put_vec(p.b_cell);
    put_vec(p.b_output);
    put_vec(p.head_w);
    theta(at++) = p.head_b;
    theta(at++) = p.out_w;
    theta(at++) = p.out_b;
    return theta;
}

LstmParams unpack_params(int hidden, int input, const Eigen::VectorXd& theta) {
    LstmParams p = LstmParams::zeros(hidden, input);
    if (theta.size() != static_cast<Eigen::Index>(p.parameter_count())) {
        throw ShapeMismatch("unpack_params: wrong parameter vector length");
    }
    Eigen::Index at = 0;
    auto get_mat = [&](Eigen::MatrixXd& m) {
        Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = theta.segment(at, m.size());
        at += m.size();
    };
    auto get_vec = [&](Eigen::VectorXd& v) {
        v = theta.segment(at, v.size());
        at += v.size();
    };
    get_mat(p.w_forget);
    get_mat(p.w_input);
    get_mat(p.w_cell);
    get_mat(p.w_output);
    get_vec(p.b_forget);
    get_vec(p.b_input);
    get_vec(p.b_cell);
    get_vec(p.b_output);
    get_vec(p.head_w);
    p.head_b = theta(at++);
    p.out_w = theta(at++);
    p.out_b = theta(at++);
    return p;
}

std::pair<double, Eigen::VectorXd> lstm_loss_and_gradient(const LstmParams& p,
                                                          const SupervisedSet& data) {
    p.check_shapes();
    const std::size_t n = data.size();
    const auto norm_features = data.normalized_features();
    const auto norm_targets = data.normalized_targets();

    LstmParams grad = LstmParams::zeros(p.hidden, p.input);
    double loss = 0.0;
    ForwardCache cache;
    for (std::size_t first = 0; first < n; first += kChunk) {
        const std::size_t count = std::min(kChunk, n - first);
        auto inputs = batch_inputs(data.layout(), data, norm_features, first, count);
        forward_batch(p, inputs, cache);
        Eigen::ArrayXd dyhat(static_cast<Eigen::Index>(count));
        for (std::size_t b = 0; b < count; ++b) {
            const double err = cache.yhat(static_cast<Eigen::Index>(b)) -
                               norm_targets[first + b];
            loss += err * err;
            dyhat(static_cast<Eigen::Index>(b)) = 2.0 * err / static_cast<double>(n);
        }
        backward_batch(p, inputs, cache, dyhat, grad);
    }
    return {loss / static_cast<double>(n), pack_params(grad)};
}

double lstm_loss(const LstmParams& p, const SupervisedSet& data) {
    const std::size_t n = data.size();
    const auto norm_features = data.normalized_features();
    const auto norm_targets = data.normalized_targets();
    double loss = 0.0;
    ForwardCache cache;
    for (std::size_t first = 0; first < n; first += kChunk) {
        const std::size_t count = std::min(kChunk, n - first);
        auto inputs = batch_inputs(data.layout(), data, norm_features, first, count);
        forward_batch(p, inputs, cache);
        for (std::size_t b = 0; b < count; ++b) {
            const double err = cache.yhat(static_cast<Eigen::Index>(b)) -
                               norm_targets[first + b];
            loss += err * err;
        }
    }
    return loss / static_cast<double>(n);
}

LstmModel lstm_fit(const SupervisedSet& data, int hidden, const TrainConfig& cfg) {
    if (data.size() == 0) throw EmptyData("lstm_fit: empty supervised set");
    if (hidden < 1) throw BadHyperparameter("hidden size must be >= 1");
    if (cfg.step_size <= 0.0) throw BadHyperparameter("Adam step size must be > 0");
    if (cfg.clip_norm <= 0.0) throw BadHyperparameter("gradient clip norm must be > 0");
    if (cfg.epochs < 1) throw BadHyperparameter("epochs must be >= 1");

    const std::size_t w = static_cast<std::size_t>(data.layout().window);
    const int m = 1 + static_cast<int>(data.n_features() - w);

    // Weights uniform in [-1/sqrt(H), 1/sqrt(H)] drawn in packing order,
    // biases zero.
    LstmParams p = LstmParams::zeros(hidden, m);
    {
        numeric::Rng rng(cfg.seed);
        const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
        auto fill = [&](Eigen::MatrixXd& mat) {
            for (Eigen::Index k = 0; k < mat.size(); ++k) {
                mat.data()[k] = rng.uniform(-bound, bound);
            }
        };
        fill(p.w_forget);
        fill(p.w_input);
        fill(p.w_cell);
        fill(p.w_output);
        for (Eigen::Index k = 0; k < p.head_w.size(); ++k) {
            p.head_w(k) = rng.uniform(-bound, bound);
        }
        // Every gradient into the gates passes through the scalar output
        // unit, so it starts as the identity map; the head bias starts
        // well inside the ReLU's active region (the unit is dead, with
        // zero gradient everywhere, once its pre-activation goes negative
        // on every sample).
        p.out_w = 1.0;
        p.out_b = 0.0;
        p.head_b = 1.0;
    }

    const std::size_t n = data.size();
    const std::size_t batch = (cfg.batch_size <= 0)
                                  ? n
                                  : std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n);
    const auto norm_features = data.normalized_features();
    const auto norm_targets = data.normalized_targets();

    Eigen::VectorXd theta = pack_params(p);
    Eigen::VectorXd adam_m = Eigen::VectorXd::Zero(theta.size());
    Eigen::VectorXd adam_v = Eigen::VectorXd::Zero(theta.size());
    long step_count = 0;

    LstmModel model;
    model.loss_trace.reserve(static_cast<std::size_t>(cfg.epochs));

    ForwardCache cache;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_sse = 0.0;
        for (std::size_t first = 0; first < n; first += batch) {
            const std::size_t count = std::min(batch, n - first);
            p = unpack_params(hidden, m, theta);
            LstmParams grad = LstmParams::zeros(hidden, m);

            for (std::size_t cfirst = first; cfirst < first + count; cfirst += kChunk) {
                const std::size_t ccount = std::min(kChunk, first + count - cfirst);
                auto inputs = batch_inputs(data.layout(), data, norm_features, cfirst, ccount);
                forward_batch(p, inputs, cache);
                Eigen::ArrayXd dyhat(static_cast<Eigen::Index>(ccount));
                for (std::size_t b = 0; b < ccount; ++b) {
                    const double err = cache.yhat(static_cast<Eigen::Index>(b)) -
                                       norm_targets[cfirst + b];
                    epoch_sse += err * err;
                    dyhat(static_cast<Eigen::Index>(b)) = 2.0 * err / static_cast<double>(count);
                }
                backward_batch(p, inputs, cache, dyhat, grad);
            }

            Eigen::VectorXd g = pack_params(grad);
            const double norm = g.norm();
            if (norm > cfg.clip_norm) g *= cfg.clip_norm / norm;

            ++step_count;
            adam_m = cfg.beta1 * adam_m + (1.0 - cfg.beta1) * g;
            adam_v = cfg.beta2 * adam_v.array().matrix() +
                     (1.0 - cfg.beta2) * g.array().square().matrix();
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_count));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_count));
            theta.array() -= cfg.step_size * (adam_m.array() / bc1) /
                             ((adam_v.array() / bc2).sqrt() + cfg.epsilon);
        }
        const double epoch_loss = epoch_sse / static_cast<double>(n);
        model.loss_trace.push_back(epoch_loss);
        if (!std::isfinite(epoch_loss)) {
            std::ostringstream os;
            os << "training diverged at epoch " << epoch << "; trace tail:";
            const std::size_t from = model.loss_trace.size() > 5 ? model.loss_trace.size() - 5 : 0;
            for (std::size_t k = from; k < model.loss_trace.size(); ++k) {
                os << ' ' << model.loss_trace[k];
            }
            throw NonFiniteLoss(os.str());
        }
    }

    model.params = unpack_params(hidden, m, theta);
    model.layout = data.layout();
    model.feature_scales = data.feature_scales();
    model.target_scale = data.target_scale();
    model.config = cfg;
    return model;
}

double LstmModel::predict_normalized(const std::vector<double>& row) const {
    if (row.size() != layout.feature_count()) {
        throw ShapeMismatch("predict: feature row width mismatch");
    }
    return params.predict_sequence(row_to_sequence(layout, row));
}

double LstmModel::predict_raw(const std::vector<double>& row) const {
    if (row.size() != feature_scales.size()) {
        throw ShapeMismatch("predict: feature row width mismatch");
    }
    std::vector<double> norm(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) norm[j] = feature_scales[j].normalize(row[j]);
    return target_scale.denormalize(predict_normalized(norm));
}

} // namespace gridcast::ml
