#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace edvkit {

// Minimal RFC-4180-ish CSV table: first row is the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
    int require_column(const std::string& name) const;
    const std::string& cell(std::size_t row, int col) const { return rows[row][static_cast<std::size_t>(col)]; }
    // Column as doubles; DataError on non-numeric cells.
    std::vector<double> numeric_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const CsvTable& table, const std::filesystem::path& path);
std::string csv_escape(const std::string& field);

// Scientific notation with 4 significant digits, used in all reports.
std::string format_value(double v);

}  // namespace edvkit
