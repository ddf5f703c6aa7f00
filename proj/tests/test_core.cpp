#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridcast/core/csv.hpp"
#include "gridcast/core/dataset.hpp"
#include "gridcast/core/errors.hpp"
#include "gridcast/numeric/rng.hpp"

#include <string>

using namespace gridcast;

namespace {

const char* kSmallCsv =
    "date,load,generation,deficit,temperature,humidity\n"
    "2019-01-01,1400,1410,0,12.5,70\n"
    "2019-01-02,1410,1400,10,13,71\n"
    "2019-01-03,1405,1420,0,12,72\n";

} // namespace

TEST_CASE("date parsing and arithmetic") {
    auto d = core::Date::parse("2019-02-28");
    CHECK(d.to_string() == "2019-02-28");
    CHECK((d + 1).to_string() == "2019-03-01");
    CHECK(core::Date::parse("2020-02-29").to_string() == "2020-02-29"); // leap year
    CHECK_THROWS_AS(core::Date::parse("2019-02-30"), MalformedCsv);
    CHECK_THROWS_AS(core::Date::parse("2019/01/01"), MalformedCsv);
    CHECK_THROWS_AS(core::Date::parse("19-01-01"), MalformedCsv);
    CHECK(core::Date::parse("2019-01-07").day_of_week() == 0); // a Monday
    CHECK(core::Date::parse("2019-12-31").day_of_year() == 365);
}

TEST_CASE("parse_dataset: direct echo of a gap-free file") {
    auto ds = core::parse_dataset(kSmallCsv);
    REQUIRE(ds.size() == 3);
    CHECK(ds.load()[0] == doctest::Approx(1400));
    CHECK(ds.load()[1] == doctest::Approx(1410));
    CHECK(ds.load()[2] == doctest::Approx(1405));
    for (double v : ds.load()) CHECK_FALSE(core::is_missing(v));
}

TEST_CASE("parse_dataset: date gaps become all-missing rows") {
    const std::string csv =
        "date,load,generation,deficit,temperature,humidity\n"
        "2019-01-01,1400,1410,0,12.5,70\n"
        "2019-01-03,1405,1420,0,12,72\n";
    auto ds = core::parse_dataset(csv);
    REQUIRE(ds.size() == 3);
    CHECK(ds.date(1).to_string() == "2019-01-02");
    for (const auto& name : core::Dataset::column_names()) {
        CHECK(core::is_missing(ds.column(name)[1]));
    }
    // Order-preserving merge: observed values untouched.
    CHECK(ds.load()[0] == doctest::Approx(1400));
    CHECK(ds.load()[2] == doctest::Approx(1405));
}

TEST_CASE("parse_dataset: duplicate dates rejected") {
    const std::string csv =
        "date,load,generation,deficit,temperature,humidity\n"
        "2019-01-01,1400,1410,0,12.5,70\n"
        "2019-01-01,1401,1404,0,12.5,70\n";
    CHECK_THROWS_AS(core::parse_dataset(csv), DuplicateDate);
}

TEST_CASE("parse_dataset: malformed input") {
    CHECK_THROWS_AS(core::parse_dataset("load,date\n"), MalformedCsv);
    CHECK_THROWS_AS(core::parse_dataset(""), MalformedCsv);
    CHECK_THROWS_AS(core::parse_dataset("date,load,generation,deficit,temperature,humidity\n"),
                    MalformedCsv);
    const std::string bad_arity =
        "date,load,generation,deficit,temperature,humidity\n2019-01-01,1,2,3\n";
    CHECK_THROWS_AS(core::parse_dataset(bad_arity), MalformedCsv);
    const std::string bad_cell =
        "date,load,generation,deficit,temperature,humidity\n2019-01-01,abc,2,3,4,5\n";
    CHECK_THROWS_AS(core::parse_dataset(bad_cell), NonNumericValue);
}

TEST_CASE("parse_dataset: missing tokens and unordered rows") {
    const std::string csv =
        "date,load,generation,deficit,temperature,humidity\n"
        "2019-01-02,NA,1400,10,,71\n"
        "2019-01-01,1400,1410,0,12.5,70\n";
    auto ds = core::parse_dataset(csv);
    REQUIRE(ds.size() == 2);
    CHECK(ds.date(0).to_string() == "2019-01-01");
    CHECK(core::is_missing(ds.load()[1]));
    CHECK(core::is_missing(ds.temperature()[1]));
    CHECK(ds.generation()[1] == doctest::Approx(1400));
}

TEST_CASE("dataset invariants: deficit and humidity ranges") {
    const std::string neg_deficit =
        "date,load,generation,deficit,temperature,humidity\n2019-01-01,1,2,-3,4,5\n";
    CHECK_THROWS_AS(core::parse_dataset(neg_deficit), ConstraintViolation);
    const std::string bad_humidity =
        "date,load,generation,deficit,temperature,humidity\n2019-01-01,1,2,3,4,105\n";
    CHECK_THROWS_AS(core::parse_dataset(bad_humidity), ConstraintViolation);
}

TEST_CASE("select_series: projection and errors") {
    auto ds = core::parse_dataset(kSmallCsv);
    auto load = core::select_series(ds, "load");
    CHECK(load.unit() == "MWh");
    CHECK(load.size() == ds.size());
    CHECK(load[0] == doctest::Approx(1400));

    auto deficit = core::select_series(ds, "deficit");
    CHECK(deficit.size() == ds.size());

    CHECK_THROWS_AS(core::select_series(ds, "price"), UnknownTarget);
    CHECK_THROWS_AS(core::select_series(ds, "temperature"), UnknownTarget);
}

TEST_CASE("select_series: all-zero deficit column projects as all zeros") {
    const std::string csv =
        "date,load,generation,deficit,temperature,humidity\n"
        "2019-01-01,1400,1410,0,12.5,70\n"
        "2019-01-02,1410,1420,0,13,71\n";
    auto deficit = core::select_series(core::parse_dataset(csv), "deficit");
    for (std::size_t i = 0; i < deficit.size(); ++i) CHECK(deficit[i] == 0.0);
}

TEST_CASE("every select_series result matches the dataset index length") {
    auto ds = core::parse_dataset(kSmallCsv);
    for (const auto& name : core::Dataset::target_names()) {
        CHECK(core::select_series(ds, name).size() == ds.size());
    }
}

TEST_CASE("parse -> serialize -> parse round-trips exactly") {
    numeric::Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        std::string csv = "date,load,generation,deficit,temperature,humidity\n";
        core::Date d = core::Date::parse("2019-01-01");
        for (int i = 0; i < 40; ++i) {
            if (rng.uniform01() < 0.15) {
                d = d + 1; // leave a gap
                continue;
            }
            const double load = 1200.0 + 400.0 * rng.uniform01();
            const double gen = load + 60.0 * rng.normal();
            const double deficit = std::max(0.0, load - gen);
            char row[256];
            std::snprintf(row, sizeof(row), "%s,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                          d.to_string().c_str(), load, gen, deficit,
                          10.0 + 20.0 * rng.uniform01(), 40.0 + 50.0 * rng.uniform01());
            csv += row;
            d = d + 1;
        }
        auto ds1 = core::parse_dataset(csv);
        const std::string text1 = core::write_dataset(ds1);
        auto ds2 = core::parse_dataset(text1);
        const std::string text2 = core::write_dataset(ds2);
        CHECK(text1 == text2);
        REQUIRE(ds1.size() == ds2.size());
        for (std::size_t i = 0; i < ds1.size(); ++i) {
            for (const auto& name : core::Dataset::column_names()) {
                const double a = ds1.column(name)[i];
                const double b = ds2.column(name)[i];
                if (core::is_missing(a)) {
                    CHECK(core::is_missing(b));
                } else {
                    CHECK(a == b); // bitwise, via shortest round-trip formatting
                }
            }
        }
    }
}

TEST_CASE("exog matrix alignment and slicing") {
    auto ds = core::parse_dataset(kSmallCsv);
    auto exog = core::make_exog(ds, {"temperature", "humidity"});
    CHECK(exog.rows() == 3);
    CHECK(exog.cols() == 2);
    CHECK(exog.at(1, 0) == doctest::Approx(13));
    auto tail = exog.slice(1, 3);
    CHECK(tail.rows() == 2);
    CHECK(tail.start_date() == ds.date(1));
    CHECK(tail.at(0, 1) == doctest::Approx(71));
}
