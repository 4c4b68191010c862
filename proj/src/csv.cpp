#include "ris/csv.hpp"

#include "ris/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace ris {

ResultRow& ResultRow::set(std::string column, Cell value) {
    for (auto& [name, cell] : cells_) {
        if (name == column) {
            cell = std::move(value);
            return *this;
        }
    }
    cells_.emplace_back(std::move(column), std::move(value));
    return *this;
}

const Cell* ResultRow::find(const std::string& column) const {
    for (const auto& [name, cell] : cells_)
        if (name == column) return &cell;
    return nullptr;
}

double ResultRow::number(const std::string& column) const {
    const Cell* c = find(column);
    if (!c) throw Error(ErrorKind::Config, "row has no column '" + column + "'");
    if (const auto* d = std::get_if<double>(c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(c)) return double(*i);
    if (const auto* b = std::get_if<bool>(c)) return *b ? 1.0 : 0.0;
    throw Error(ErrorKind::Config, "column '" + column + "' is not numeric");
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& cell) {
    struct Visitor {
        std::string operator()(double d) const { return format_double(d); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, cell);
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    if (rows.empty()) return;
    const auto& first = rows.front().cells();
    for (std::size_t i = 0; i < first.size(); ++i) out << (i ? "," : "") << first[i].first;
    out << '\n';
    for (const auto& row : rows) {
        const auto& cells = row.cells();
        if (cells.size() != first.size()) throw Error(ErrorKind::Config, "CSV rows have differing columns");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].first != first[i].first) throw Error(ErrorKind::Config, "CSV column order differs");
            out << (i ? "," : "") << format_cell(cells[i].second);
        }
        out << '\n';
    }
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream ss;
    write_csv(ss, rows);
    return ss.str();
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw Error(ErrorKind::Config, "CSV has no column '" + name + "'");
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != t.header.size()) throw Error(ErrorKind::Config, "ragged CSV line");
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

}  // namespace ris
