#pragma once

#include "gridcast/core/dataset.hpp"
#include "gridcast/core/series.hpp"

#include <span>
#include <string>
#include <vector>

namespace gridcast::ml {

/// Calendar feature encodings appended to each sample.
enum class CalendarEncoding {
    None,
    Cyclic,  // sin/cos of day-of-week and of month (LSTM default)
    OneHot,  // 7 day-of-week indicators + month sin/cos (tree default)
};

/// Min/max scaling to [0,1]. A constant feature maps to 0.5 and
/// denormalizes back to its single value.
struct MinMaxScale {
    double lo = 0.0;
    double hi = 1.0;

    double normalize(double v) const {
        return (hi - lo) < 1e-300 ? 0.5 : (v - lo) / (hi - lo);
    }
    double denormalize(double u) const {
        return (hi - lo) < 1e-300 ? lo : lo + u * (hi - lo);
    }
    static MinMaxScale fit(std::span<const double> values);
};

/**
 * Layout of one supervised sample: the lag window (oldest to newest),
 * then the exogenous row at the target date, then calendar encodings of
 * the target date. One source of truth for training and inference.
 */
struct FeatureLayout {
    int window = 30;
    std::vector<std::string> exog_names;
    CalendarEncoding calendar = CalendarEncoding::None;

    std::size_t calendar_count() const;
    std::size_t feature_count() const;
    std::vector<std::string> feature_names() const;

    std::vector<double> build_row(std::span<const double> lags, core::Date target_date,
                                  std::span<const double> exog_row) const;
};

/**
 * Lagged supervised samples: sample i has features built from
 * y_i..y_{i+w-1} (plus exog/calendar at the target date) and target
 * y_{i+w}. Lag features always precede the target in time. Min/max
 * normalization constants are fit on exactly these samples.
 */
class SupervisedSet {
public:
    SupervisedSet(FeatureLayout layout, std::vector<std::vector<double>> features,
                  std::vector<double> targets, std::vector<core::Date> target_dates);

    std::size_t size() const { return targets_.size(); }
    std::size_t n_features() const { return layout_.feature_count(); }
    const FeatureLayout& layout() const { return layout_; }

    const std::vector<std::vector<double>>& features() const { return features_; }
    const std::vector<double>& targets() const { return targets_; }
    core::Date target_date(std::size_t i) const { return target_dates_[i]; }

    const std::vector<MinMaxScale>& feature_scales() const { return feature_scales_; }
    const MinMaxScale& target_scale() const { return target_scale_; }

    /// Replaces the fitted constants (e.g. to score test windows with the
    /// training-set normalization).
    void set_scales(std::vector<MinMaxScale> feature_scales, MinMaxScale target_scale);

    double feature_norm(std::size_t i, std::size_t j) const {
        return feature_scales_[j].normalize(features_[i][j]);
    }
    double target_norm(std::size_t i) const { return target_scale_.normalize(targets_[i]); }

    /// Normalized feature matrix, row-major sample x feature.
    std::vector<double> normalized_features() const;
    std::vector<double> normalized_targets() const;

private:
    FeatureLayout layout_;
    std::vector<std::vector<double>> features_;
    std::vector<double> targets_;
    std::vector<core::Date> target_dates_;
    std::vector<MinMaxScale> feature_scales_;
    MinMaxScale target_scale_;
};

/// Builds the supervised set for a missing-free series. exog may be null;
/// when present it must align with the series index.
SupervisedSet make_windows(const core::Series& s, int window,
                           const core::ExogMatrix* exog = nullptr,
                           CalendarEncoding calendar = CalendarEncoding::None);

/// Per-day-of-year averages of exogenous columns over a training span,
/// the fallback source for future exogenous inputs.
struct Climatology {
    std::vector<std::string> names;
    std::vector<std::vector<double>> day_of_year_mean; // [column][doy 1..366], index 0 unused

    bool empty() const { return names.empty(); }
    std::vector<double> row_for(core::Date date) const;
};

Climatology build_climatology(const core::ExogMatrix& exog);

} // namespace gridcast::ml
