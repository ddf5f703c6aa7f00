#pragma once

#include "gridcast/core/dataset.hpp"

#include <string>
#include <string_view>

namespace gridcast::core {

/**
 * Parses the dataset CSV schema:
 *
 *   date,load,generation,deficit,temperature,humidity
 *
 * Dates are YYYY-MM-DD; missing values are empty cells or "NA". Rows may
 * arrive unordered; the result covers [min date, max date] with absent
 * days inserted as all-missing rows. Duplicate dates are rejected.
 */
Dataset parse_dataset(std::string_view csv_text);

/// Serializes back to the same schema. Values use shortest round-trip
/// formatting, so parse(write(ds)) reproduces ds exactly.
std::string write_dataset(const Dataset& ds);

/// File helpers.
Dataset read_dataset_file(const std::string& path);
void write_dataset_file(const Dataset& ds, const std::string& path);

} // namespace gridcast::core
