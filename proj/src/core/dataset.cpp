#include "gridcast/core/dataset.hpp"
#include "gridcast/core/errors.hpp"

#include <algorithm>

namespace gridcast::core {

Dataset::Dataset(Date start, std::vector<double> load, std::vector<double> generation,
                 std::vector<double> deficit, std::vector<double> temperature,
                 std::vector<double> humidity)
    : start_(start), load_(std::move(load)), generation_(std::move(generation)),
      deficit_(std::move(deficit)), temperature_(std::move(temperature)),
      humidity_(std::move(humidity)) {
    const std::size_t n = load_.size();
    if (n == 0) throw ConstraintViolation("dataset must not be empty");
    if (generation_.size() != n || deficit_.size() != n || temperature_.size() != n ||
        humidity_.size() != n) {
        throw ConstraintViolation("all dataset columns must share one timestamp index");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_missing(deficit_[i]) && deficit_[i] < 0.0) {
            throw ConstraintViolation("deficit must be non-negative at " + date(i).to_string());
        }
        if (!is_missing(humidity_[i]) && (humidity_[i] < 0.0 || humidity_[i] > 100.0)) {
            throw ConstraintViolation("humidity must be within [0,100] at " + date(i).to_string());
        }
    }
}

const std::vector<double>& Dataset::column(const std::string& name) const {
    if (name == "load") return load_;
    if (name == "generation") return generation_;
    if (name == "deficit") return deficit_;
    if (name == "temperature") return temperature_;
    if (name == "humidity") return humidity_;
    throw UnknownTarget("unknown column '" + name + "'");
}

const std::array<std::string, 5>& Dataset::column_names() {
    static const std::array<std::string, 5> names = {"load", "generation", "deficit",
                                                     "temperature", "humidity"};
    return names;
}

const std::array<std::string, 3>& Dataset::target_names() {
    static const std::array<std::string, 3> names = {"load", "generation", "deficit"};
    return names;
}

ExogMatrix::ExogMatrix(Date start, std::vector<std::string> names,
                       std::vector<std::vector<double>> columns)
    : start_(start), names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.size() != columns_.size()) {
        throw ConstraintViolation("exog matrix needs one name per column");
    }
    for (const auto& col : columns_) {
        if (col.size() != rows()) {
            throw ConstraintViolation("exog matrix columns must share one index");
        }
    }
}

bool ExogMatrix::has_missing() const {
    for (const auto& col : columns_) {
        if (std::any_of(col.begin(), col.end(), [](double v) { return is_missing(v); })) {
            return true;
        }
    }
    return false;
}

ExogMatrix ExogMatrix::slice(std::size_t first, std::size_t last) const {
    if (first > last || last > rows()) throw ConstraintViolation("exog slice: bad range");
    std::vector<std::vector<double>> cols;
    cols.reserve(columns_.size());
    for (const auto& col : columns_) {
        cols.emplace_back(col.begin() + static_cast<std::ptrdiff_t>(first),
                          col.begin() + static_cast<std::ptrdiff_t>(last));
    }
    return ExogMatrix(start_ + static_cast<int>(first), names_, std::move(cols));
}

Series select_series(const Dataset& ds, const std::string& target) {
    const auto& targets = Dataset::target_names();
    if (std::find(targets.begin(), targets.end(), target) == targets.end()) {
        throw UnknownTarget("'" + target + "' is not a target column (load, generation, deficit)");
    }
    return Series(target, ds.start_date(), ds.column(target), "MWh");
}

ExogMatrix make_exog(const Dataset& ds, const std::vector<std::string>& columns) {
    std::vector<std::vector<double>> cols;
    cols.reserve(columns.size());
    for (const auto& name : columns) cols.push_back(ds.column(name));
    return ExogMatrix(ds.start_date(), columns, std::move(cols));
}

} // namespace gridcast::core
