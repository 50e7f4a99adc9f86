#include "spcorr/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace spcorr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t col = 0; col < line.size(); ++col) {
        const char c = line[col];
        if (quoted) {
            if (c == '"') {
                if (col + 1 < line.size() && line[col + 1] == '"') {
                    field += '"';
                    ++col;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            if (!field.empty())
                throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                         ", column " + std::to_string(col + 1) +
                                         ": quote inside unquoted field");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted)
        throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                 ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line, line_no);
        if (line_no == 1) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size())
                throw std::runtime_error("CSV parse error at line " + std::to_string(line_no) +
                                         ": expected " + std::to_string(table.header.size()) +
                                         " fields, got " + std::to_string(fields.size()));
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw std::runtime_error("CSV file has no header row: " + path);
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::size_t csv_column(const CsvTable& table, const std::string& name) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end())
        throw std::runtime_error("CSV is missing required column '" + name + "'");
    return static_cast<std::size_t>(it - table.header.begin());
}

PathTable read_path_table(const std::string& path) {
    const CsvTable csv = read_csv(path);
    const std::size_t c_path = csv_column(csv, "path_id");
    const std::size_t c_t = csv_column(csv, "t");
    const std::size_t c_v = csv_column(csv, "value");

    std::map<std::uint64_t, std::map<double, double>> by_path;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        try {
            const std::uint64_t pid = std::stoull(csv.rows[i][c_path]);
            const double t = std::stod(csv.rows[i][c_t]);
            const double v = std::stod(csv.rows[i][c_v]);
            by_path[pid][t] = v;
        } catch (const std::exception&) {
            throw std::runtime_error("CSV parse error at line " + std::to_string(i + 2) +
                                     ": non-numeric field");
        }
    }
    if (by_path.empty()) throw std::runtime_error("path table is empty: " + path);

    PathTable out;
    for (const auto& [t, v] : by_path.begin()->second) out.grid.push_back(t);
    for (const auto& [pid, series] : by_path) {
        if (series.size() != out.grid.size())
            throw std::runtime_error("path " + std::to_string(pid) +
                                     " has a different time grid");
        std::vector<double> row;
        row.reserve(series.size());
        for (const auto& [t, v] : series) row.push_back(v);
        out.values.push_back(std::move(row));
    }
    return out;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_time_s"] = wall_time_s;
    return j.dump(2);
}

RunManifest RunManifest::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    m.wall_time_s = j.value("wall_time_s", 0.0);
    return m;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << to_json() << "\n";
}

}  // namespace spcorr
