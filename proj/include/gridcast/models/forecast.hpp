#pragma once

#include "gridcast/core/calendar.hpp"

#include <string>
#include <vector>

namespace gridcast::models {

/**
 * Point predictions over a horizon, in original units and on the
 * transformed (post-log, pre-differencing) scale the model was fit on.
 * Dates continue the training index day by day.
 */
struct Forecast {
    core::Date origin;                       // last training date
    int horizon = 0;
    std::vector<double> values;              // original units
    std::vector<double> values_transformed;  // model scale
    std::string model;

    core::Date date(std::size_t i) const { return origin + static_cast<int>(i) + 1; }
};

} // namespace gridcast::models
