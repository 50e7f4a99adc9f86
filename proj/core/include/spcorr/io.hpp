#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace spcorr {

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180-style CSV with a mandatory header row. Parse errors carry the
/// line and column.
CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Column lookup; throws with the column name when missing.
std::size_t csv_column(const CsvTable& table, const std::string& name);

/// Ensemble read of a simulate output (path_id,t,value): one row of values
/// per path, columns ordered by time.
struct PathTable {
    std::vector<double> grid;
    std::vector<std::vector<double>> values;  ///< [path][time]
};
PathTable read_path_table(const std::string& path);

/// Every output file is accompanied by one of these; identical manifests
/// reproduce bit-identical outputs.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::uint64_t seed = 0;
    std::string version;
    double wall_time_s = 0.0;

    std::string to_json() const;
    static RunManifest from_json_file(const std::string& path);
    void write(const std::string& path) const;
};

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace spcorr
