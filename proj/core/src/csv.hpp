#pragma once

// RFC 4180 record reader shared by the listing and covariate parsers.

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace coconsume::detail {

struct CsvRecord {
    std::size_t line = 0; ///< physical line the record starts on (1-based)
    std::vector<std::string> fields;
    std::optional<std::string> error;
    bool blank = false;
};

/// Reads one record; quoted fields may span lines. `line` counts physical lines
/// consumed so far. Returns false at end of stream.
inline bool readCsvRecord(std::istream &in, std::size_t &line, CsvRecord &record, char delimiter = ',') {
    record = CsvRecord{};
    int c = in.peek();
    if (c == std::char_traits<char>::eof())
        return false;
    ++line;
    record.line = line;
    std::string field;
    bool inQuotes = false;
    bool wasQuoted = false;
    bool anyContent = false;
    while (true) {
        c = in.get();
        if (c == std::char_traits<char>::eof()) {
            if (inQuotes)
                record.error = "unterminated quoted field";
            break;
        }
        const char ch = static_cast<char>(c);
        if (inQuotes) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    inQuotes = false;
                }
            } else {
                if (ch == '\n')
                    ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '\r' && in.peek() == '\n')
            continue;
        if (ch == '\n')
            break;
        anyContent = true;
        if (ch == delimiter) {
            record.fields.push_back(std::move(field));
            field.clear();
            wasQuoted = false;
        } else if (ch == '"') {
            if (!field.empty() || wasQuoted)
                record.error = "stray quote inside field";
            inQuotes = true;
            wasQuoted = true;
        } else {
            if (wasQuoted)
                record.error = "text after closing quote";
            field.push_back(ch);
        }
    }
    record.fields.push_back(std::move(field));
    record.blank = !anyContent;
    return true;
}

} // namespace coconsume::detail
