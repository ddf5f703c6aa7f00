#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/rng.hpp"
#include "gridcast/preprocess/transforms.hpp"
#include "support/sim.hpp"

#include <cmath>

using namespace gridcast;
using testsupport::make_series;

namespace {

const double kMissing = core::missing_value();

// Independent quadratic least-squares oracle over a window, solved with
// long-double normal equations and Cramer's rule (3x3).
double quadratic_lsq_center(const std::vector<double>& y, int lo, int hi, int center) {
    long double s[5] = {0, 0, 0, 0, 0};
    long double b[3] = {0, 0, 0};
    for (int j = lo; j <= hi; ++j) {
        const long double x = j - center;
        long double px = 1.0L;
        for (int k = 0; k < 5; ++k) {
            s[k] += px;
            if (k < 3) b[k] += px * static_cast<long double>(y[static_cast<std::size_t>(j)]);
            px *= x;
        }
    }
    const long double m[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    auto det3 = [](const long double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    long double mb[3][3];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) mb[r][c] = (c == 0) ? b[r] : m[r][c];
    }
    return static_cast<double>(det3(mb) / det3(m));
}

} // namespace

TEST_CASE("interpolate_missing: interior lines, edge extension") {
    auto a = preprocess::interpolate_missing(make_series({1, kMissing, 3}));
    CHECK(a[1] == doctest::Approx(2.0));

    auto b = preprocess::interpolate_missing(make_series({kMissing, 5, kMissing}));
    CHECK(b[0] == doctest::Approx(5.0));
    CHECK(b[2] == doctest::Approx(5.0));

    // Hand-solved two-point line 0 -> 9 over 3 steps.
    auto c = preprocess::interpolate_missing(make_series({0, kMissing, kMissing, 9}));
    CHECK(c[1] == doctest::Approx(3.0));
    CHECK(c[2] == doctest::Approx(6.0));

    CHECK_THROWS_AS(preprocess::interpolate_missing(make_series({kMissing, kMissing})),
                    AllMissing);
}

TEST_CASE("interpolate_missing: idempotent and preserves observed values") {
    numeric::Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> v(50);
        for (auto& x : v) x = rng.uniform(0, 100);
        std::vector<bool> missing(v.size(), false);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (rng.uniform01() < 0.3) {
                missing[i] = true;
                v[i] = kMissing;
            }
        }
        if (std::all_of(missing.begin(), missing.end(), [](bool b) { return b; })) continue;
        auto s = make_series(v);
        auto once = preprocess::interpolate_missing(s);
        auto twice = preprocess::interpolate_missing(once);
        CHECK(once.missing_count() == 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!missing[i]) CHECK(once[i] == v[i]);
            CHECK(once[i] == twice[i]);
        }
    }
}

TEST_CASE("savgol: polynomial reproduction across window/order pairs") {
    numeric::Rng rng(3);
    for (int window : {3, 5, 7, 9, 11}) {
        for (int order = 0; order < window && order <= 5; ++order) {
            // Random polynomial of degree `order` sampled on 0..29.
            std::vector<double> coef(static_cast<std::size_t>(order) + 1);
            for (auto& c : coef) c = rng.uniform(-2, 2);
            std::vector<double> v(30);
            for (std::size_t t = 0; t < v.size(); ++t) {
                double x = static_cast<double>(t) / 10.0, acc = 0.0, px = 1.0;
                for (double c : coef) {
                    acc += c * px;
                    px *= x;
                }
                v[t] = acc;
            }
            auto sm = preprocess::savgol_smooth(make_series(v), window, order);
            for (std::size_t t = 0; t < v.size(); ++t) {
                CHECK(sm[t] == doctest::Approx(v[t]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("savgol: quadratic signal reproduced exactly") {
    std::vector<double> v(11);
    for (std::size_t t = 0; t < v.size(); ++t) v[t] = static_cast<double>(t * t);
    auto sm = preprocess::savgol_smooth(make_series(v), 5, 2);
    for (std::size_t t = 0; t < v.size(); ++t) {
        CHECK(sm[t] == doctest::Approx(v[t]).epsilon(1e-9));
    }
}

TEST_CASE("savgol: constant series unchanged") {
    auto sm = preprocess::savgol_smooth(make_series({7, 7, 7, 7, 7}), 3, 1);
    for (std::size_t t = 0; t < 5; ++t) CHECK(sm[t] == doctest::Approx(7.0));
}

TEST_CASE("savgol: spike attenuation matches the closed-form LSQ oracle") {
    std::vector<double> v = {0, 0, 10, 0, 0};
    auto sm = preprocess::savgol_smooth(make_series(v), 5, 2);
    CHECK(sm[2] < 10.0);
    const double oracle = quadratic_lsq_center(v, 0, 4, 2); // 17/35 * 10
    CHECK(sm[2] == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(sm[2] == doctest::Approx(34.0 / 7.0).epsilon(1e-12));
    // Boundary values come from the truncated asymmetric window.
    CHECK(sm[0] == doctest::Approx(quadratic_lsq_center(v, 0, 2, 0)).epsilon(1e-9));
    CHECK(sm[1] == doctest::Approx(quadratic_lsq_center(v, 0, 3, 1)).epsilon(1e-9));
}

TEST_CASE("savgol: parameter validation") {
    auto s = make_series({1, 2, 3, 4, 5});
    CHECK_THROWS_AS(preprocess::savgol_smooth(s, 7, 2), WindowTooLarge);
    CHECK_THROWS_AS(preprocess::savgol_smooth(s, 4, 2), BadOrder);
    CHECK_THROWS_AS(preprocess::savgol_smooth(s, 3, 3), BadOrder);
}

TEST_CASE("log transform: anchors and failure") {
    auto a = preprocess::log_transform(make_series({0}));
    CHECK(a[0] == doctest::Approx(0.0));
    auto b = preprocess::log_transform(make_series({std::exp(1.0) - 1.0}));
    CHECK(b[0] == doctest::Approx(1.0));
    // ln(1443), frozen from a high-precision evaluation.
    auto c = preprocess::log_transform(make_series({1442}));
    CHECK(c[0] == doctest::Approx(7.27447955877387087).epsilon(1e-12));
    CHECK_THROWS_AS(preprocess::log_transform(make_series({-1.5})), NonPositiveAfterOffset);
}

TEST_CASE("invert_log: anchors and round-trip") {
    auto a = preprocess::invert_log(make_series({0}));
    CHECK(a[0] == doctest::Approx(0.0));
    auto b = preprocess::invert_log(make_series({1}));
    CHECK(b[0] == doctest::Approx(std::exp(1.0) - 1.0));

    auto s = make_series({1442, 200, 2106});
    preprocess::TransformChain chain;
    auto logged = preprocess::log_transform(s, chain);
    auto back = preprocess::invert_log(logged, chain);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back[i] == doctest::Approx(s[i]).epsilon(1e-9));
    }

    preprocess::TransformChain no_log;
    CHECK_THROWS_AS(preprocess::invert_log(logged, no_log), NoLogStep);
}

TEST_CASE("difference: hand examples") {
    auto ramp = preprocess::difference(make_series({1, 2, 3, 4, 5}), 1, 0, 1);
    CHECK(ramp.values == std::vector<double>{1, 1, 1, 1});
    CHECK(ramp.head == std::vector<double>{1});

    auto seasonal = preprocess::difference(make_series({3, 1, 4, 1, 5}), 0, 1, 2);
    CHECK(seasonal.values == std::vector<double>{1, 0, 1});
    CHECK(seasonal.head == std::vector<double>{3, 1});

    auto identity = preprocess::difference(make_series({9, 8, 7}), 0, 0, 1);
    CHECK(identity.values == std::vector<double>{9, 8, 7});
    CHECK(identity.head.empty());

    CHECK_THROWS_AS(preprocess::difference(make_series({1, 2}), 1, 1, 2), TooShort);
}

TEST_CASE("difference length invariant") {
    std::vector<double> v(40);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i * i % 17);
    for (int d : {0, 1, 2}) {
        for (int D : {0, 1}) {
            for (int s : {2, 7}) {
                auto ds = preprocess::difference(make_series(v), d, D, s);
                CHECK(ds.values.size() == v.size() - static_cast<std::size_t>(d + D * s));
            }
        }
    }
}

TEST_CASE("invert_difference: hand examples") {
    preprocess::DifferencedSeries d1{{}, {5}, 1, 0, 1};
    CHECK(preprocess::invert_difference(d1, {1, 1}) == std::vector<double>{6, 7});

    preprocess::DifferencedSeries seas{{}, {10, 20}, 0, 1, 2};
    CHECK(preprocess::invert_difference(seas, {3, 4}) == std::vector<double>{13, 24});

    preprocess::DifferencedSeries bad{{}, {5, 6}, 1, 0, 1};
    CHECK_THROWS_AS(preprocess::invert_difference(bad, {1}), HeadMismatch);
}

TEST_CASE("difference then invert_difference is exact") {
    auto s = make_series({2, 7, 1, 8, 2, 8});
    auto ds = preprocess::difference(s, 1, 1, 2);
    auto rebuilt = preprocess::invert_difference(ds, ds.values);
    std::vector<double> expected(s.values().begin() + 3, s.values().end());
    CHECK(rebuilt == expected); // exact in integer arithmetic
}

TEST_CASE("round-trip property over random series, all orders") {
    numeric::Rng rng(91);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = static_cast<int>(rng.uniform_index(3));
        const int D = static_cast<int>(rng.uniform_index(3));
        const int s_period = std::vector<int>{2, 7, 12}[rng.uniform_index(3)];
        const std::size_t n = 40 + rng.uniform_index(40);
        if (static_cast<int>(n) <= d + D * s_period + 1) continue;
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform(-50, 50);

        auto series = make_series(v);
        auto ds = preprocess::difference(series, d, D, s_period);
        auto rebuilt = preprocess::invert_difference(ds, ds.values);
        const std::size_t consumed = static_cast<std::size_t>(d + D * s_period);
        REQUIRE(rebuilt.size() == n - consumed);
        for (std::size_t i = 0; i < rebuilt.size(); ++i) {
            CHECK(rebuilt[i] == doctest::Approx(v[consumed + i]).epsilon(1e-9));
        }

        // continuation_state integrates future diffs seamlessly.
        const std::size_t cut = consumed + (n - consumed) / 2;
        std::vector<double> past(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cut));
        auto state = preprocess::continuation_state(past, d, D, s_period);
        std::vector<double> future_diffs(ds.values.begin() +
                                             static_cast<std::ptrdiff_t>(cut - consumed),
                                         ds.values.end());
        auto cont = preprocess::invert_difference(state, future_diffs);
        for (std::size_t i = 0; i < cont.size(); ++i) {
            CHECK(cont[i] == doctest::Approx(v[cut + i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("log round-trip on random positive series") {
    numeric::Rng rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> v(30);
        for (auto& x : v) x = rng.uniform(0, 2200);
        auto s = make_series(v);
        preprocess::TransformChain chain;
        auto logged = preprocess::log_transform(s, chain);
        auto back = preprocess::invert_log(logged, chain);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-9));
        }
    }
}
