#pragma once

#include "gridcast/core/series.hpp"
#include "gridcast/ml/windows.hpp"
#include "gridcast/models/forecast.hpp"
#include "gridcast/preprocess/transforms.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace gridcast::ml {

/**
 * Single-layer LSTM parameters. Gate matrices act on the concatenation
 * [h_{t-1}, x_t], so each has shape H x (H + m). The output head is a
 * dense H -> 1 unit with ReLU, followed by a linear scalar unit.
 */
struct LstmParams {
    int hidden = 0; // H
    int input = 0;  // m
    Eigen::MatrixXd w_forget, w_input, w_cell, w_output;
    Eigen::VectorXd b_forget, b_input, b_cell, b_output;
    Eigen::VectorXd head_w;
    double head_b = 0.0;
    double out_w = 1.0;
    double out_b = 0.0;

    static LstmParams zeros(int hidden, int input);
    std::size_t parameter_count() const;
    void check_shapes() const; // throws ShapeMismatch

    /// Scalar model output for one input sequence (w steps of m values).
    double predict_sequence(const std::vector<Eigen::VectorXd>& inputs) const;
};

/// One cell update, a literal transcription of the gate equations:
/// f, i, o = sigmoid(W [h,x] + b); g = tanh(W_c [h,x] + b_c);
/// c_t = f .* c_prev + i .* g; h_t = o .* tanh(c_t).
std::pair<Eigen::VectorXd, Eigen::VectorXd> lstm_cell_step(const LstmParams& p,
                                                           const Eigen::VectorXd& x_t,
                                                           const Eigen::VectorXd& h_prev,
                                                           const Eigen::VectorXd& c_prev);

struct TrainConfig {
    int epochs = 200;
    int batch_size = 0; // 0 = full dataset
    double step_size = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double clip_norm = 5.0;
    std::uint64_t seed = 0;
};

struct LstmModel {
    LstmParams params;
    FeatureLayout layout;
    std::vector<MinMaxScale> feature_scales;
    MinMaxScale target_scale;
    TrainConfig config;
    std::vector<double> loss_trace; // per-epoch training MSE (normalized scale)

    // Pipeline context, filled by the training wrappers.
    preprocess::TransformChain chain;
    Climatology climatology;
    core::Date origin;
    std::string series_name = "series";
    std::string unit = "MWh";

    /// Prediction from one normalized feature row (lags + extras).
    double predict_normalized(const std::vector<double>& row) const;
    /// Prediction from a raw feature row, denormalized to the model scale.
    double predict_raw(const std::vector<double>& row) const;
};

/**
 * Full-batch (or mini-batch) training with exact backpropagation through
 * time and Adam. Weights start uniform in [-1/sqrt(H), 1/sqrt(H)] from
 * the seeded stream, biases at zero; runs are bit-reproducible given
 * (seed, config, data).
 */
LstmModel lstm_fit(const SupervisedSet& data, int hidden, const TrainConfig& cfg);

/// Recursive multi-step forecast: each prediction feeds the next lag
/// window. Exogenous futures come from future_exog or, when enabled, the
/// day-of-year climatology fallback.
models::Forecast lstm_forecast(const LstmModel& m, const core::Series& s_transformed,
                               int horizon, const core::ExogMatrix* future_exog = nullptr,
                               bool climatology_fallback = true);

/// Mean squared error over the set and its gradient in packed order;
/// exposed so tests can check BPTT against finite differences.
std::pair<double, Eigen::VectorXd> lstm_loss_and_gradient(const LstmParams& p,
                                                          const SupervisedSet& data);
double lstm_loss(const LstmParams& p, const SupervisedSet& data);

Eigen::VectorXd pack_params(const LstmParams& p);
LstmParams unpack_params(int hidden, int input, const Eigen::VectorXd& theta);

} // namespace gridcast::ml
