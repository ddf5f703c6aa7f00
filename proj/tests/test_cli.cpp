#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridcast/cli/app.hpp"
#include "gridcast/core/csv.hpp"
#include "gridcast/io/artifact.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace gridcast;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gridcast_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(GRIDCAST_CLI_BINARY) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("synth twice is byte identical") {
    TempDir dir;
    const auto a = dir.file("a.csv"), b = dir.file("b.csv");
    CHECK(cli::run({"synth", "--seed", "42", "--out", a}) == 0);
    CHECK(cli::run({"synth", "--seed", "42", "--out", b}) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(cli::run({"synth", "--seed", "43", "--out", b}) == 0);
    CHECK(slurp(a) != slurp(b));
}

TEST_CASE("unknown subcommand and usage errors exit 1") {
    CHECK(run_binary("frobnicate") == 1);
    CHECK(run_binary("") == 1);
    CHECK(run_binary("diagnose") == 1);          // missing required --input
    CHECK(run_binary("synth --bogus-flag 1") == 1);
}

TEST_CASE("runtime errors exit 2") {
    CHECK(run_binary("diagnose --input /nonexistent.csv") == 2);
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "1", "--out", csv}) == 0);
    // Unknown preset is a runtime config error.
    CHECK(run_binary("compare --input " + csv + " --preset paper-price") == 2);
}

TEST_CASE("diagnose emits parseable JSON and an SVG") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "5", "--out", csv}) == 0);
    const auto prefix = dir.file("diag");
    CHECK(cli::run({"diagnose", "--input", csv, "--target", "load", "--out-prefix", prefix}) ==
          0);
    const json j = json::parse(slurp(prefix + ".json"));
    CHECK(j.at("adf").contains("p_value"));
    CHECK(j.at("adf").at("p_value").get<double>() >= 0.001);
    CHECK(j.at("acf").size() >= 2);
    CHECK(j.at("acf")[0].at("value").get<double>() == 1.0);
    CHECK(j.at("pacf").size() >= 2);
    const auto svg = slurp(prefix + ".svg");
    CHECK(svg.find("<svg") != std::string::npos);

    // The load series is non-stationary raw and stationary differenced.
    CHECK_FALSE(j.at("adf").at("stationary").get<bool>());
    const auto prefix2 = dir.file("diag2");
    CHECK(cli::run({"diagnose", "--input", csv, "--target", "load", "--difference", "1",
                    "--out-prefix", prefix2}) == 0);
    const json j2 = json::parse(slurp(prefix2 + ".json"));
    CHECK(j2.at("adf").at("stationary").get<bool>());
}

TEST_CASE("fit + forecast: artifact round-trips, forecast CSV has horizon rows") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "3", "--out", csv}) == 0);

    const auto model_path = dir.file("arima.json");
    const auto report_path = dir.file("report.json");
    CHECK(cli::run({"fit", "--input", csv, "--target", "load", "--family", "arima", "--param",
                    "p=2", "--param", "d=1", "--param", "q=1", "--out", model_path, "--report",
                    report_path}) == 0);

    // Round-trip through the loader reproduces the JSON byte for byte.
    const json saved = json::parse(slurp(model_path));
    auto loaded = io::load_model(model_path);
    CHECK(io::model_to_json(loaded) == saved);
    CHECK(loaded.family == "arima");
    CHECK(loaded.arima.has_value());
    CHECK(loaded.arima->order.p == 2);

    const json report = json::parse(slurp(report_path));
    CHECK(report.at("order") == "(2,1,1)");
    CHECK(report.contains("aic"));

    const auto prefix = dir.file("fc");
    CHECK(cli::run({"forecast", "--model", model_path, "--input", csv, "--horizon", "30",
                    "--out-prefix", prefix}) == 0);
    const auto fc_csv = slurp(prefix + ".csv");
    std::size_t rows = 0;
    for (char c : fc_csv) rows += (c == '\n') ? 1 : 0;
    CHECK(rows == 31); // header + horizon
    CHECK(fc_csv.rfind("date,prediction_original,prediction_transformed", 0) == 0);
    CHECK(slurp(prefix + ".svg").find("<svg") != std::string::npos);
}

TEST_CASE("fit with --auto and with --grid") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "11", "--out", csv,
                      "--end", "2019-12-31"}) == 0);

    const auto auto_model = dir.file("auto.json");
    const auto auto_report = dir.file("auto_report.json");
    CHECK(cli::run({"fit", "--input", csv, "--target", "load", "--family", "arima", "--auto",
                    "--param", "max_p=2", "--param", "max_q=2", "--out", auto_model, "--report",
                    auto_report}) == 0);
    const json report = json::parse(slurp(auto_report));
    CHECK(report.at("auto").contains("selected"));
    CHECK(report.at("auto").at("trace").size() == 9);

    const auto grid_model = dir.file("grid.json");
    const auto grid_report = dir.file("grid_report.json");
    CHECK(cli::run({"fit", "--input", csv, "--target", "load", "--family", "ses", "--grid",
                    "alpha=0.2,0.5,0.8", "--folds", "3", "--out", grid_model, "--report",
                    grid_report}) == 0);
    const json greport = json::parse(slurp(grid_report));
    CHECK(greport.at("grid").at("trace").size() == 3);
    CHECK(greport.at("grid").contains("best"));

    // Mixing selection modes is a usage error.
    CHECK(cli::run({"fit", "--input", csv, "--family", "arima", "--target", "load", "--auto",
                    "--grid", "p=1,2", "--out", dir.file("x.json")}) == 1);
}

TEST_CASE("evaluate: metrics JSON on both scales") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "9", "--out", csv}) == 0);
    const auto out = dir.file("metrics.json");
    CHECK(cli::run({"evaluate", "--input", csv, "--target", "load", "--family", "ses",
                    "--split-date", "2020-07-01", "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("metrics_original").at("scale") == "original");
    CHECK(j.at("metrics_transformed").at("scale") == "transformed");
    CHECK(j.at("metrics_original").at("rmse").get<double>() > 0.0);
    CHECK(j.at("n_test").get<int>() > 0);
}

TEST_CASE("GRIDCAST_OUT_DIR resolves relative outputs") {
    TempDir dir;
    ::setenv("GRIDCAST_OUT_DIR", dir.path.c_str(), 1);
    CHECK(cli::run({"synth", "--seed", "2", "--out", "rel.csv"}) == 0);
    ::unsetenv("GRIDCAST_OUT_DIR");
    CHECK(fs::exists(dir.path / "rel.csv"));
}

TEST_CASE("compare: six families in fixed alphabetical order plus a naive baseline") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "8", "--out", csv, "--end", "2019-09-30"}) == 0);
    const auto prefix = dir.file("cmp");
    CHECK(cli::run({"compare", "--input", csv, "--target", "load", "--split-date", "2019-08-01",
                    "--out-prefix", prefix}) == 0);
    const json j = json::parse(slurp(prefix + ".json"));
    REQUIRE(j.at("rows").size() == 6);
    const std::vector<std::string> expected = {"ARIMA", "Dynamic ARIMA", "LSTM",
                                               "SARIMA",  "SES",          "XGBoost"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(j.at("rows")[i].at("model") == expected[i]);
        CHECK_FALSE(j.at("rows")[i].contains("error"));
    }
    CHECK(j.at("baselines")[0].at("model") == "Naive");
    const auto table = slurp(prefix + ".txt");
    CHECK(table.find("LSTM") != std::string::npos);
    CHECK(table.find("XGBoost") != std::string::npos);
}

TEST_CASE("presets wire the published orders and split date") {
    TempDir dir;
    const auto csv = dir.file("long.csv");
    // A span covering the published train/test dates.
    REQUIRE(cli::run({"synth", "--seed", "4", "--out", csv, "--start", "2019-01-01", "--end",
                      "2023-12-30"}) == 0);
    const auto out = dir.file("m.json");
    CHECK(cli::run({"evaluate", "--input", csv, "--family", "arima", "--preset", "paper-load",
                    "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("target") == "load");
    CHECK(j.at("split_date") == "2023-05-01");
    CHECK(j.at("params").at("p") == 2.0);
    CHECK(j.at("params").at("d") == 1.0);
    CHECK(j.at("params").at("q") == 2.0);

    const auto model = dir.file("sarima.json");
    CHECK(cli::run({"fit", "--input", csv, "--family", "sarima", "--preset", "paper-deficit",
                    "--out", model}) == 0);
    auto loaded = io::load_model(model);
    REQUIRE(loaded.arima.has_value());
    CHECK(loaded.arima->order.p == 3);
    CHECK(loaded.arima->order.Q == 1);
    CHECK(loaded.arima->order.s == 12);
    CHECK(loaded.series_name == "deficit");

    // The preset horizon runs through the published multi-year span.
    const auto prefix = dir.file("far");
    CHECK(cli::run({"forecast", "--model", model, "--input", csv, "--preset", "paper-deficit",
                    "--out-prefix", prefix}) == 0);
    const auto fc_csv = slurp(prefix + ".csv");
    CHECK(fc_csv.find("2025-12-31") != std::string::npos);
    CHECK(fc_csv.find("2024-06-15") != std::string::npos);
}

TEST_CASE("forecast --until derives the horizon from the calendar") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "6", "--out", csv, "--end", "2019-12-31"}) == 0);
    const auto model = dir.file("m.json");
    REQUIRE(cli::run({"fit", "--input", csv, "--target", "load", "--family", "ses", "--out",
                      model}) == 0);
    const auto prefix = dir.file("fc");
    CHECK(cli::run({"forecast", "--model", model, "--input", csv, "--until", "2020-01-10",
                    "--out-prefix", prefix}) == 0);
    const auto fc_csv = slurp(prefix + ".csv");
    std::size_t rows = 0;
    for (char c : fc_csv) rows += (c == '\n') ? 1 : 0;
    CHECK(rows == 11); // header + 10 days into January
    CHECK(fc_csv.find("2020-01-10") != std::string::npos);
}

TEST_CASE("evaluate on deficit reports MAPE as undefined") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "12", "--out", csv}) == 0);
    const auto out = dir.file("m.json");
    CHECK(cli::run({"evaluate", "--input", csv, "--target", "deficit", "--family", "ses",
                    "--split-date", "2020-07-01", "--out", out}) == 0);
    const json j = json::parse(slurp(out));
    CHECK(j.at("metrics_original").at("mape").is_null());
    CHECK(j.at("metrics_original").contains("mape_note"));
    CHECK(j.at("metrics_original").at("rmse").get<double>() > 0.0);
}

TEST_CASE("lstm artifact: save, load, predict parity") {
    TempDir dir;
    const auto csv = dir.file("d.csv");
    REQUIRE(cli::run({"synth", "--seed", "21", "--out", csv, "--end", "2019-09-30"}) == 0);
    const auto model_path = dir.file("lstm.json");
    CHECK(cli::run({"fit", "--input", csv, "--target", "load", "--family", "lstm", "--param",
                    "units=8", "--param", "window=10", "--param", "epochs=20", "--param",
                    "batch=32", "--out", model_path}) == 0);
    auto loaded = io::load_model(model_path);
    REQUIRE(loaded.lstm.has_value());
    CHECK(loaded.lstm->params.hidden == 8);
    CHECK(io::model_to_json(loaded) == json::parse(slurp(model_path)));

    const auto prefix = dir.file("lfc");
    CHECK(cli::run({"forecast", "--model", model_path, "--input", csv, "--horizon", "14",
                    "--out-prefix", prefix}) == 0);
    const auto fc_csv = slurp(prefix + ".csv");
    std::size_t rows = 0;
    for (char c : fc_csv) rows += (c == '\n') ? 1 : 0;
    CHECK(rows == 15);
}
