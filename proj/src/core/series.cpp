#include "gridcast/core/series.hpp"
#include "gridcast/core/errors.hpp"

#include <algorithm>

namespace gridcast::core {

Series::Series(std::string name, Date start, std::vector<double> values, std::string unit)
    : name_(std::move(name)), start_(start), values_(std::move(values)), unit_(std::move(unit)) {
    if (values_.empty()) throw ConstraintViolation("series '" + name_ + "' must have length >= 1");
    if (unit_.empty()) throw ConstraintViolation("series '" + name_ + "' must have a unit");
}

std::size_t Series::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(values_.begin(), values_.end(), [](double v) { return is_missing(v); }));
}

Series Series::with_values(std::vector<double> values) const {
    if (values.size() != values_.size()) {
        throw ConstraintViolation("with_values: length mismatch for series '" + name_ + "'");
    }
    return Series(name_, start_, std::move(values), unit_);
}

Series Series::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last > values_.size()) {
        throw ConstraintViolation("slice: bad range for series '" + name_ + "'");
    }
    std::vector<double> vals(values_.begin() + static_cast<std::ptrdiff_t>(first),
                             values_.begin() + static_cast<std::ptrdiff_t>(last));
    return Series(name_, start_ + static_cast<int>(first), std::move(vals), unit_);
}

} // namespace gridcast::core
