#pragma once

#include "gridcast/core/series.hpp"

#include <utility>
#include <vector>

namespace gridcast::eval {

/// Temporal split: train holds everything strictly before split_date,
/// test runs from split_date onward. Both sides must be non-empty.
std::pair<core::Series, core::Series> train_test_split(const core::Series& s,
                                                       core::Date split_date);

/// One expanding-window fold: train on [0, train_end), validate on
/// [train_end, val_end).
struct Fold {
    std::size_t train_end = 0;
    std::size_t val_end = 0;
};

struct FoldPlan {
    std::size_t n = 0;
    std::size_t min_train = 0;
    std::vector<Fold> folds;
};

/**
 * Expanding-window plan: validation blocks of size floor((n-min_train)/k)
 * (remainder folded into the last block); fold i trains on the prefix
 * [0, min_train + i*block). Validation blocks partition [min_train, n).
 */
FoldPlan expanding_folds(std::size_t n, std::size_t k, std::size_t min_train);

} // namespace gridcast::eval
