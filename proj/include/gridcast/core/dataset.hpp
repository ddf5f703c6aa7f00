#pragma once

#include "gridcast/core/series.hpp"

#include <array>
#include <string>
#include <vector>

namespace gridcast::core {

/**
 * The multi-column daily electricity dataset: load, generation and
 * deficit in MWh, temperature in degrees C, humidity in percent, all on
 * one uniform daily index.
 */
class Dataset {
public:
    Dataset(Date start, std::vector<double> load, std::vector<double> generation,
            std::vector<double> deficit, std::vector<double> temperature,
            std::vector<double> humidity);

    std::size_t size() const { return load_.size(); }
    Date start_date() const { return start_; }
    Date date(std::size_t i) const { return start_ + static_cast<int>(i); }

    const std::vector<double>& load() const { return load_; }
    const std::vector<double>& generation() const { return generation_; }
    const std::vector<double>& deficit() const { return deficit_; }
    const std::vector<double>& temperature() const { return temperature_; }
    const std::vector<double>& humidity() const { return humidity_; }

    /// Column access by schema name; throws UnknownTarget for other names.
    const std::vector<double>& column(const std::string& name) const;

    static const std::array<std::string, 5>& column_names();
    static const std::array<std::string, 3>& target_names();

private:
    Date start_;
    std::vector<double> load_, generation_, deficit_, temperature_, humidity_;
};

/**
 * Exogenous regressor matrix aligned to a series index: one row per day,
 * named columns (temperature and humidity by default).
 */
class ExogMatrix {
public:
    ExogMatrix(Date start, std::vector<std::string> names,
               std::vector<std::vector<double>> columns);

    std::size_t rows() const { return columns_.empty() ? 0 : columns_[0].size(); }
    std::size_t cols() const { return columns_.size(); }
    Date start_date() const { return start_; }
    Date date(std::size_t r) const { return start_ + static_cast<int>(r); }

    double at(std::size_t row, std::size_t col) const { return columns_[col][row]; }
    const std::vector<double>& column(std::size_t col) const { return columns_[col]; }
    const std::vector<std::string>& names() const { return names_; }

    bool has_missing() const;

    /// Row range [first, last) as a new matrix.
    ExogMatrix slice(std::size_t first, std::size_t last) const;

private:
    Date start_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_; // column-major
};

/// Extracts a target column (load, generation or deficit) as a Series.
Series select_series(const Dataset& ds, const std::string& target);

/// Builds an exogenous matrix from named dataset columns.
ExogMatrix make_exog(const Dataset& ds, const std::vector<std::string>& columns);

} // namespace gridcast::core
