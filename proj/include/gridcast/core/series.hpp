#pragma once

#include "gridcast/core/calendar.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace gridcast::core {

/// Marker for a missing observation.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/**
 * A named univariate daily time series.
 *
 * The timestamp index is uniform by construction: a start date plus one
 * value per day. Gaps in source data appear as missing values, never as
 * omitted rows. Immutable after construction.
 */
class Series {
public:
    Series(std::string name, Date start, std::vector<double> values, std::string unit);

    const std::string& name() const { return name_; }
    const std::string& unit() const { return unit_; }
    Date start_date() const { return start_; }
    Date end_date() const { return start_ + static_cast<int>(values_.size()) - 1; }
    Date date(std::size_t i) const { return start_ + static_cast<int>(i); }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }

    std::size_t missing_count() const;
    bool has_missing() const { return missing_count() > 0; }

    /// Same index and metadata, new values (must have the same length).
    Series with_values(std::vector<double> values) const;

    /// Contiguous sub-series [first, last) by index.
    Series slice(std::size_t first, std::size_t last) const;

private:
    std::string name_;
    Date start_;
    std::vector<double> values_;
    std::string unit_;
};

} // namespace gridcast::core
