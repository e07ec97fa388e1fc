#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rld::io {

/// In-memory CSV document: one header row, one units row, then data rows.
/// All emitted files are UTF-8 with LF line endings and decimal points;
/// doubles print with enough digits to reparse bit-exactly.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::string> units;
    std::vector<std::vector<std::string>> rows;
};

/// "%.17g": enough digits to reparse bit-exactly. Shortest-roundtrip
/// trimming is deliberately not attempted; stable output beats pretty.
[[nodiscard]] std::string format_double(double value);

/// Strict counterpart of format_double. Throws ValidationError on anything
/// but a complete finite or infinite/nan numeric token.
[[nodiscard]] double parse_double(const std::string& token);

[[nodiscard]] std::string render_csv(const CsvTable& table);

/// Writes render_csv(table) to path, creating parent directories.
/// Throws IoError on any filesystem failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Parses a document produced by render_csv (or any simple unquoted CSV
/// with a header and units row). Throws IoError when the file is missing
/// and ValidationError on ragged rows.
[[nodiscard]] CsvTable parse_csv(const std::string& text);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

/// Extracts one numeric series for analysis input: single-column files use
/// that column, multi-column files require `column` to name one. Rows whose
/// token is non-numeric are rejected. Skips the units row.
[[nodiscard]] std::vector<double> numeric_column(const CsvTable& table,
                                                 const std::string& column = "");

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace rld::io
