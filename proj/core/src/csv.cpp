#include "rld/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rld/errors.hpp"

namespace rld::io {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(const std::string& token) {
    if (token.empty()) throw ValidationError("empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size())
        throw ValidationError("not a number: '" + token + "'");
    if (errno == ERANGE && (v == 0.0 || std::abs(v) == HUGE_VAL))
        throw ValidationError("numeric field out of range: '" + token + "'");
    return v;
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out += ',';
        out += row[k];
    }
    out += '\n';
}

} // namespace

std::string render_csv(const CsvTable& table) {
    if (table.header.empty()) throw ValidationError("csv: empty header");
    if (table.units.size() != table.header.size())
        throw ValidationError("csv: units row width differs from header");
    std::string out;
    append_row(out, table.header);
    append_row(out, table.units);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw ValidationError("csv: ragged data row");
        append_row(out, row);
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_text_file(path, render_csv(table));
}

CsvTable parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> lines;
    std::string field;
    std::vector<std::string> row;
    for (std::size_t k = 0; k <= text.size(); ++k) {
        const char c = k < text.size() ? text[k] : '\n';
        if (c == ',') {
            row.push_back(field);
            field.clear();
        } else if (c == '\n') {
            if (k == text.size() && field.empty() && row.empty()) break;
            row.push_back(field);
            field.clear();
            lines.push_back(std::move(row));
            row.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (lines.size() < 2)
        throw ValidationError("csv: need a header and a units row");
    CsvTable table;
    table.header = std::move(lines[0]);
    table.units = std::move(lines[1]);
    if (table.units.size() != table.header.size())
        throw ValidationError("csv: units row width differs from header");
    for (std::size_t k = 2; k < lines.size(); ++k) {
        if (lines[k].size() != table.header.size())
            throw ValidationError("csv: ragged row at line " + std::to_string(k + 1));
        table.rows.push_back(std::move(lines[k]));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    return parse_csv(read_text_file(path));
}

std::vector<double> numeric_column(const CsvTable& table, const std::string& column) {
    std::size_t col = 0;
    if (column.empty()) {
        if (table.header.size() != 1)
            throw ValidationError("csv: file has " + std::to_string(table.header.size()) +
                                  " columns; name the one to analyze");
    } else {
        std::size_t found = table.header.size();
        for (std::size_t k = 0; k < table.header.size(); ++k)
            if (table.header[k] == column) found = k;
        if (found == table.header.size())
            throw ValidationError("csv: no column named '" + column + "'");
        col = found;
    }
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) values.push_back(parse_double(row[col]));
    return values;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return std::move(buf).str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    const auto parent = path.parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent, ec);
        if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

} // namespace rld::io
