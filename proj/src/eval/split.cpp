#include "gridcast/eval/split.hpp"
#include "gridcast/core/errors.hpp"

namespace gridcast::eval {

std::pair<core::Series, core::Series> train_test_split(const core::Series& s,
                                                       core::Date split_date) {
    if (split_date <= s.start_date() || split_date > s.end_date()) {
        throw SplitOutOfRange("split date " + split_date.to_string() +
                              " must leave non-empty train and test spans");
    }
    const auto cut = static_cast<std::size_t>(split_date - s.start_date());
    return {s.slice(0, cut), s.slice(cut, s.size())};
}

FoldPlan expanding_folds(std::size_t n, std::size_t k, std::size_t min_train) {
    if (k < 1) throw BadConfig("fold count must be >= 1");
    if (n < min_train + k) {
        throw TooShort("need n >= min_train + k for " + std::to_string(k) + " folds");
    }
    FoldPlan plan;
    plan.n = n;
    plan.min_train = min_train;
    const std::size_t block = (n - min_train) / k;
    plan.folds.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Fold f;
        f.train_end = min_train + i * block;
        f.val_end = (i + 1 == k) ? n : f.train_end + block;
        plan.folds.push_back(f);
    }
    return plan;
}

} // namespace gridcast::eval
