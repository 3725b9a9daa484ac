#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace coconsume {

/// A cell in an emitted report table. monostate renders as NA (TSV) or null (JSON).
using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

/// Column-named rows that can be written as TSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class EmitFormat { Tsv, Json };

/// Shortest decimal form that round-trips to the same double.
std::string formatDouble(double value);

std::string formatCell(const Cell &cell);

void writeTsv(std::ostream &out, const Table &table, bool withHeader = true);
void writeJson(std::ostream &out, const Table &table);
/// Comma-separated with RFC 4180 quoting where needed.
void writeCsv(std::ostream &out, const Table &table);
void writeTable(std::ostream &out, const Table &table, EmitFormat format, bool withHeader = true);

/// Writes `table` to `path`; throws IoError when the file cannot be created.
void writeTableFile(const std::filesystem::path &path, const Table &table, EmitFormat format,
                    bool withHeader = true);

} // namespace coconsume
