#include "gridcast/core/csv.hpp"
#include "gridcast/core/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace gridcast::core {

namespace {

constexpr const char* kHeader = "date,load,generation,deficit,temperature,humidity";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(pos)));
            break;
        }
        out.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

double parse_cell(std::string_view cell, std::size_t line_no) {
    if (cell.empty() || cell == "NA") return missing_value();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw NonNumericValue("line " + std::to_string(line_no) + ": cell '" +
                              std::string(cell) + "' is not a number or missing token");
    }
    return v;
}

void append_value(std::string& out, double v) {
    if (is_missing(v)) return; // missing serializes as empty cell
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

} // namespace

Dataset parse_dataset(std::string_view csv_text) {
    struct Row {
        std::array<double, 5> v;
    };
    std::map<Date, Row> rows;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= csv_text.size()) {
        std::size_t nl = csv_text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? csv_text.substr(pos)
                                    : csv_text.substr(pos, nl - pos);
        pos = (nl == std::string_view::npos) ? csv_text.size() + 1 : nl + 1;
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        if (!header_seen) {
            if (line != kHeader) {
                throw MalformedCsv("expected header '" + std::string(kHeader) + "'");
            }
            header_seen = true;
            continue;
        }

        auto fields = split_fields(line);
        if (fields.size() != 6) {
            throw MalformedCsv("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                               std::to_string(fields.size()));
        }
        Date d = Date::parse(fields[0]);
        Row row{};
        for (std::size_t c = 0; c < 5; ++c) row.v[c] = parse_cell(fields[c + 1], line_no);
        if (!rows.emplace(d, row).second) {
            throw DuplicateDate("duplicate date " + d.to_string());
        }
    }
    if (!header_seen) throw MalformedCsv("empty input: header row required");
    if (rows.empty()) throw MalformedCsv("no data rows");

    const Date first = rows.begin()->first;
    const Date last = rows.rbegin()->first;
    const std::size_t n = static_cast<std::size_t>(last - first) + 1;

    std::vector<std::vector<double>> cols(5, std::vector<double>(n, missing_value()));
    for (const auto& [d, row] : rows) {
        const auto i = static_cast<std::size_t>(d - first);
        for (std::size_t c = 0; c < 5; ++c) cols[c][i] = row.v[c];
    }
    return Dataset(first, std::move(cols[0]), std::move(cols[1]), std::move(cols[2]),
                   std::move(cols[3]), std::move(cols[4]));
}

std::string write_dataset(const Dataset& ds) {
    std::string out = kHeader;
    out += '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out += ds.date(i).to_string();
        for (const auto& name : Dataset::column_names()) {
            out += ',';
            append_value(out, ds.column(name)[i]);
        }
        out += '\n';
    }
    return out;
}

Dataset read_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

void write_dataset_file(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write dataset file '" + path + "'");
    out << write_dataset(ds);
}

} // namespace gridcast::core
