#include "coconsume/table.hpp"

#include "coconsume/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

namespace coconsume {

std::string formatDouble(double value) {
    if (std::isnan(value))
        return "NA";
    if (std::isinf(value))
        return value > 0 ? "Inf" : "-Inf";
    if (value == 0.0)
        value = 0.0; // drop the sign of -0
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string formatCell(const Cell &cell) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "NA";
            else if constexpr (std::is_same_v<T, std::string>)
                return v;
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else
                return formatDouble(v);
        },
        cell);
}

void writeTsv(std::ostream &out, const Table &table, bool withHeader) {
    auto writeRow = [&out](const auto &cells, auto toText) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c)
                out << '\t';
            out << toText(cells[c]);
        }
        out << '\n';
    };
    if (withHeader)
        writeRow(table.columns, [](const std::string &s) { return s; });
    for (const auto &row : table.rows)
        writeRow(row, formatCell);
}

void writeCsv(std::ostream &out, const Table &table) {
    auto quoted = [](const std::string &text) {
        if (text.find_first_of(",\"\r\n") == std::string::npos)
            return text;
        std::string q = "\"";
        for (char c : text) {
            if (c == '"')
                q += '"';
            q += c;
        }
        return q + '"';
    };
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << quoted(table.columns[c]);
    out << '\n';
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << quoted(formatCell(row[c]));
        out << '\n';
    }
}

namespace {

nlohmann::ordered_json toJson(const Cell &cell) {
    return std::visit(
        [](const auto &v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(formatDouble(v));
            else
                return v;
        },
        cell);
}

} // namespace

void writeJson(std::ostream &out, const Table &table) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows) {
        nlohmann::ordered_json object = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c)
            object[table.columns[c]] = toJson(row[c]);
        rows.push_back(std::move(object));
    }
    out << rows.dump(2) << '\n';
}

void writeTable(std::ostream &out, const Table &table, EmitFormat format, bool withHeader) {
    if (format == EmitFormat::Json)
        writeJson(out, table);
    else
        writeTsv(out, table, withHeader);
}

void writeTableFile(const std::filesystem::path &path, const Table &table, EmitFormat format, bool withHeader) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    writeTable(out, table, format, withHeader);
    if (!out)
        throw IoError("write failed for " + path.string());
}

} // namespace coconsume
