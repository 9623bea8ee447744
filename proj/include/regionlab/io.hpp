#pragma once

// Output helpers shared by the exporters and the command line: atomic file
// writes, content hashes and the fixed float format used in CSV files.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regionlab/field.hpp"

namespace regionlab {

/// Writes bytes to a temporary sibling and renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of bytes.
std::string sha256_hex(std::string_view bytes);

/// Shortest round-trip text for a double: printf "%.17g".
std::string format_double(double v);

/// Minimal CSV builder: comma separated, LF line endings, fields quoted only
/// when they contain a comma, quote or newline.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header);
    CsvWriter& row(const std::vector<std::string>& fields);
    CsvWriter& row(const std::vector<double>& values);
    const std::string& str() const { return text_; }

private:
    std::size_t columns_;
    std::string text_;
};

/// "x,y,value" rows, y outer, x inner, ascending.
std::string field_to_csv(const FieldMap& map);
/// Binary 8-bit PGM (P5), width nx, height ny, first image row = largest y.
/// Values are min-max scaled to 0..255 and rounded; a constant field is all 0.
std::string field_to_pgm(const FieldMap& map);

}  // namespace regionlab
