#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ris {

using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// One CSV record; column order is the insertion order.
class ResultRow {
public:
    ResultRow& set(std::string column, Cell value);
    const std::vector<std::pair<std::string, Cell>>& cells() const { return cells_; }
    const Cell* find(const std::string& column) const;
    double number(const std::string& column) const;

private:
    std::vector<std::pair<std::string, Cell>> cells_;
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);
std::string format_cell(const Cell& cell);

/// Writes a header plus one line per row; every row must have the header's columns.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<ResultRow>& rows);

/// Minimal reader for files produced by write_csv (no quoting).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};
CsvTable parse_csv(const std::string& text);

}  // namespace ris
