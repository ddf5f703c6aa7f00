#include "gridcast/ml/windows.hpp"
#include "gridcast/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gridcast::ml {

MinMaxScale MinMaxScale::fit(std::span<const double> values) {
    MinMaxScale s;
    if (values.empty()) return s;
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.lo = *lo;
    s.hi = *hi;
    return s;
}

std::size_t FeatureLayout::calendar_count() const {
    switch (calendar) {
        case CalendarEncoding::None: return 0;
        case CalendarEncoding::Cyclic: return 4;
        case CalendarEncoding::OneHot: return 9;
    }
    return 0;
}

std::size_t FeatureLayout::feature_count() const {
    return static_cast<std::size_t>(window) + exog_names.size() + calendar_count();
}

std::vector<std::string> FeatureLayout::feature_names() const {
    std::vector<std::string> names;
    names.reserve(feature_count());
    for (int k = window; k >= 1; --k) names.push_back("lag_" + std::to_string(k));
    for (const auto& e : exog_names) names.push_back(e);
    switch (calendar) {
        case CalendarEncoding::None: break;
        case CalendarEncoding::Cyclic:
            names.insert(names.end(), {"dow_sin", "dow_cos", "month_sin", "month_cos"});
            break;
        case CalendarEncoding::OneHot:
            for (int d = 0; d < 7; ++d) names.push_back("dow_" + std::to_string(d));
            names.insert(names.end(), {"month_sin", "month_cos"});
            break;
    }
    return names;
}

std::vector<double> FeatureLayout::build_row(std::span<const double> lags,
                                             core::Date target_date,
                                             std::span<const double> exog_row) const {
    if (lags.size() != static_cast<std::size_t>(window)) {
        throw ShapeMismatch("lag span must have window entries");
    }
    if (exog_row.size() != exog_names.size()) {
        throw ShapeMismatch("exog row width mismatch");
    }
    std::vector<double> row;
    row.reserve(feature_count());
    row.insert(row.end(), lags.begin(), lags.end());
    row.insert(row.end(), exog_row.begin(), exog_row.end());

    constexpr double tau = 2.0 * std::numbers::pi;
    const double dow = static_cast<double>(target_date.day_of_week());
    const double month = static_cast<double>(target_date.month() - 1);
    switch (calendar) {
        case CalendarEncoding::None: break;
        case CalendarEncoding::Cyclic:
            row.push_back(std::sin(tau * dow / 7.0));
            row.push_back(std::cos(tau * dow / 7.0));
            row.push_back(std::sin(tau * month / 12.0));
            row.push_back(std::cos(tau * month / 12.0));
            break;
        case CalendarEncoding::OneHot:
            for (int d = 0; d < 7; ++d) row.push_back(d == target_date.day_of_week() ? 1.0 : 0.0);
            row.push_back(std::sin(tau * month / 12.0));
            row.push_back(std::cos(tau * month / 12.0));
            break;
    }
    return row;
}

SupervisedSet::SupervisedSet(FeatureLayout layout, std::vector<std::vector<double>> features,
                             std::vector<double> targets, std::vector<core::Date> target_dates)
    : layout_(std::move(layout)), features_(std::move(features)), targets_(std::move(targets)),
      target_dates_(std::move(target_dates)) {
    if (features_.size() != targets_.size() || features_.size() != target_dates_.size()) {
        throw ShapeMismatch("supervised set: features/targets/dates must align");
    }
    if (features_.empty()) throw EmptyData("supervised set has no samples");
    const std::size_t nf = layout_.feature_count();
    for (const auto& row : features_) {
        if (row.size() != nf) throw ShapeMismatch("supervised set: row width mismatch");
    }
    feature_scales_.resize(nf);
    std::vector<double> column(features_.size());
    for (std::size_t j = 0; j < nf; ++j) {
        for (std::size_t i = 0; i < features_.size(); ++i) column[i] = features_[i][j];
        feature_scales_[j] = MinMaxScale::fit(column);
    }
    target_scale_ = MinMaxScale::fit(targets_);
}

void SupervisedSet::set_scales(std::vector<MinMaxScale> feature_scales,
                               MinMaxScale target_scale) {
    if (feature_scales.size() != feature_scales_.size()) {
        throw ShapeMismatch("set_scales: wrong number of feature scales");
    }
    feature_scales_ = std::move(feature_scales);
    target_scale_ = target_scale;
}

std::vector<double> SupervisedSet::normalized_features() const {
    std::vector<double> out(size() * n_features());
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < n_features(); ++j) {
            out[i * n_features() + j] = feature_norm(i, j);
        }
    }
    return out;
}

std::vector<double> SupervisedSet::normalized_targets() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = target_norm(i);
    return out;
}

SupervisedSet make_windows(const core::Series& s, int window, const core::ExogMatrix* exog,
                           CalendarEncoding calendar) {
    if (window < 1) throw BadHyperparameter("window must be >= 1");
    if (s.has_missing()) throw ConstraintViolation("make_windows requires a missing-free series");
    if (s.size() <= static_cast<std::size_t>(window)) {
        throw TooShort("series of length " + std::to_string(s.size()) +
                       " yields no window of size " + std::to_string(window));
    }
    if (exog) {
        if (exog->rows() != s.size()) {
            throw ConstraintViolation("exog rows must match the series length");
        }
        if (exog->has_missing()) throw ConstraintViolation("exog must be missing-free");
    }

    FeatureLayout layout;
    layout.window = window;
    if (exog) layout.exog_names = exog->names();
    layout.calendar = calendar;

    const auto& y = s.values();
    const std::size_t w = static_cast<std::size_t>(window);
    const std::size_t n_samples = y.size() - w;
    std::vector<std::vector<double>> features;
    std::vector<double> targets;
    std::vector<core::Date> dates;
    features.reserve(n_samples);
    targets.reserve(n_samples);
    dates.reserve(n_samples);

    std::vector<double> exog_row(exog ? exog->cols() : 0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::size_t target_idx = i + w;
        const core::Date target_date = s.date(target_idx);
        // Lag features must precede the target strictly in time.
        if (s.date(target_idx - 1) >= target_date) {
            throw ConstraintViolation("window construction would leak the target");
        }
        for (std::size_t j = 0; j < exog_row.size(); ++j) {
            exog_row[j] = exog->at(target_idx, j);
        }
        features.push_back(layout.build_row(std::span(y).subspan(i, w), target_date, exog_row));
        targets.push_back(y[target_idx]);
        dates.push_back(target_date);
    }
    return SupervisedSet(std::move(layout), std::move(features), std::move(targets),
                         std::move(dates));
}

std::vector<double> Climatology::row_for(core::Date date) const {
    std::vector<double> row(names.size());
    const std::size_t doy = static_cast<std::size_t>(date.day_of_year());
    for (std::size_t j = 0; j < names.size(); ++j) row[j] = day_of_year_mean[j][doy];
    return row;
}

Climatology build_climatology(const core::ExogMatrix& exog) {
    Climatology clim;
    clim.names = exog.names();
    clim.day_of_year_mean.assign(exog.cols(), std::vector<double>(367, 0.0));
    for (std::size_t j = 0; j < exog.cols(); ++j) {
        std::vector<double> sum(367, 0.0);
        std::vector<int> count(367, 0);
        double total = 0.0;
        int total_n = 0;
        for (std::size_t r = 0; r < exog.rows(); ++r) {
            const double v = exog.at(r, j);
            if (core::is_missing(v)) continue;
            const int doy = exog.date(r).day_of_year();
            sum[static_cast<std::size_t>(doy)] += v;
            count[static_cast<std::size_t>(doy)] += 1;
            total += v;
            ++total_n;
        }
        const double overall = total_n ? total / total_n : 0.0;
        for (std::size_t doy = 1; doy < 367; ++doy) {
            clim.day_of_year_mean[j][doy] =
                count[doy] ? sum[doy] / count[doy] : overall;
        }
    }
    return clim;
}

} // namespace gridcast::ml
