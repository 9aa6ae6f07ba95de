#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace semcom {

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

/// A header row, data rows and a leading block of "# key: value" comment lines.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_meta(std::string key, std::string value);
    void add_row(std::vector<std::string> cells);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::string v) { return v; }
inline std::string cell(const char* v) { return v; }

}  // namespace semcom
