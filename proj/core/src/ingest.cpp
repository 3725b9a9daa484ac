#include "coconsume/ingest.hpp"

#include "coconsume/error.hpp"
#include "csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <variant>
#include <cstdio>

namespace coconsume {

namespace {

bool isLeapYear(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned daysInMonth(int year, unsigned month) {
    static constexpr unsigned days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return month == 2 && isLeapYear(year) ? 29 : days[month - 1];
}

template <typename T> bool parseDigits(std::string_view text, T &value) {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool validUtf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra;
        if (c < 0x80)
            extra = 0;
        else if ((c >> 5) == 0x6 && c >= 0xC2)
            extra = 1;
        else if ((c >> 4) == 0xE)
            extra = 2;
        else if ((c >> 3) == 0x1E && c <= 0xF4)
            extra = 3;
        else
            return false;
        if (i + extra >= s.size() && extra > 0)
            return false;
        for (std::size_t k = 1; k <= extra; ++k)
            if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2)
                return false;
        i += extra + 1;
    }
    return true;
}

/// Builds a record or returns the reason it is invalid.
std::variant<ListingRecord, std::string> makeRecord(std::string_view date, std::string_view country,
                                                    std::string_view item,
                                                    std::optional<std::string> category) {
    const auto parsedDate = Date::parse(date);
    if (!parsedDate)
        return "invalid date '" + std::string(date) + "'";
    if (!CountryCode::isValid(country))
        return "invalid country code '" + std::string(country) + "'";
    if (item.empty())
        return std::string("empty item_id");
    return ListingRecord{*parsedDate, CountryCode(std::string(country)), std::string(item), std::move(category)};
}

class RejectSink {
public:
    RejectSink(ParseResult &result, bool strict) : result_(result), strict_(strict) {}

    void operator()(std::size_t line, std::string reason) {
        if (strict_)
            throw AnalysisError("line " + std::to_string(line) + ": " + reason);
        result_.rejects.push_back({line, std::move(reason)});
    }

private:
    ParseResult &result_;
    bool strict_;
};

bool isBlank(std::string_view line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void parseJsonl(std::istream &in, ParseResult &result, RejectSink &reject) {
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (isBlank(line))
            continue;
        const auto doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            reject(lineNo, "not a JSON object");
            continue;
        }
        auto field = [&doc](const char *key) -> std::optional<std::string> {
            const auto it = doc.find(key);
            if (it == doc.end() || !it->is_string())
                return std::nullopt;
            return it->get<std::string>();
        };
        const auto date = field("date");
        const auto country = field("country");
        const auto item = field("item_id");
        if (!date || !country || !item) {
            reject(lineNo, "missing or non-string date, country or item_id");
            continue;
        }
        std::optional<std::string> category;
        if (const auto it = doc.find("category"); it != doc.end() && !it->is_null()) {
            if (!it->is_string()) {
                reject(lineNo, "category is not a string");
                continue;
            }
            category = it->get<std::string>();
        }
        auto made = makeRecord(*date, *country, *item, std::move(category));
        if (auto *reason = std::get_if<std::string>(&made))
            reject(lineNo, std::move(*reason));
        else
            result.records.push_back(std::move(std::get<ListingRecord>(made)));
    }
}

using detail::CsvRecord;
using detail::readCsvRecord;

void parseCsv(std::istream &in, ParseResult &result, RejectSink &reject) {
    std::size_t line = 0;
    CsvRecord record;
    bool haveHeader = false;
    while (!haveHeader) {
        if (!readCsvRecord(in, line, record))
            return; // empty stream
        haveHeader = !record.blank;
    }
    if (record.error)
        throw IoError("malformed CSV header: " + *record.error);

    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
        std::string name = record.fields[i];
        if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0)
            name.erase(0, 3);
        columns.emplace(std::move(name), i);
    }
    for (const char *required : {"date", "country", "item_id"})
        if (!columns.contains(required))
            throw IoError(std::string("CSV header lacks required column '") + required + "'");
    const std::size_t width = record.fields.size();
    const std::size_t dateCol = columns["date"];
    const std::size_t countryCol = columns["country"];
    const std::size_t itemCol = columns["item_id"];
    const auto categoryIt = columns.find("category");

    while (readCsvRecord(in, line, record)) {
        if (record.blank)
            continue;
        if (record.error) {
            reject(record.line, *record.error);
            continue;
        }
        if (record.fields.size() != width) {
            reject(record.line, "expected " + std::to_string(width) + " fields, got " +
                                    std::to_string(record.fields.size()));
            continue;
        }
        if (!std::all_of(record.fields.begin(), record.fields.end(), [](const auto &f) { return validUtf8(f); })) {
            reject(record.line, "invalid UTF-8");
            continue;
        }
        std::optional<std::string> category;
        if (categoryIt != columns.end() && !record.fields[categoryIt->second].empty())
            category = record.fields[categoryIt->second];
        auto made = makeRecord(record.fields[dateCol], record.fields[countryCol], record.fields[itemCol],
                               std::move(category));
        if (auto *reason = std::get_if<std::string>(&made))
            reject(record.line, std::move(*reason));
        else
            result.records.push_back(std::move(std::get<ListingRecord>(made)));
    }
}

} // namespace

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        return std::nullopt;
    Date d;
    if (!parseDigits(text.substr(0, 4), d.year) || !parseDigits(text.substr(5, 2), d.month) ||
        !parseDigits(text.substr(8, 2), d.day))
        return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > daysInMonth(d.year, d.month))
        return std::nullopt;
    return d;
}

std::string Date::toString() const {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", year, month, day);
    return buffer;
}

bool CountryCode::isValid(std::string_view code) {
    return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

CountryCode::CountryCode(std::string code) : code_(std::move(code)) {
    if (!isValid(code_))
        throw AnalysisError("invalid country code '" + code_ + "'");
}

ListingFormat parseListingFormat(std::string_view name) {
    if (name == "jsonl")
        return ListingFormat::Jsonl;
    if (name == "csv")
        return ListingFormat::Csv;
    throw IoError("unknown listing format '" + std::string(name) + "' (expected jsonl or csv)");
}

ParseResult parseListings(std::istream &in, ListingFormat format, const ParseOptions &options) {
    if (!in.good() && !in.eof())
        throw IoError("listing stream is not readable");
    ParseResult result;
    RejectSink reject(result, options.strict);
    if (format == ListingFormat::Jsonl)
        parseJsonl(in, result, reject);
    else
        parseCsv(in, result, reject);
    if (in.bad())
        throw IoError("read error on listing stream");
    return result;
}

ParseResult parseListingsFile(const std::filesystem::path &path, ListingFormat format, const ParseOptions &options) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return parseListings(in, format, options);
}

void writeRejects(std::ostream &out, const std::vector<Reject> &rejects) {
    out << "line_number\treason\n";
    for (const auto &r : rejects)
        out << r.line << '\t' << r.reason << '\n';
}

BipartiteGraph::BipartiteGraph(std::vector<std::string> countries, std::vector<std::string> items,
                               std::vector<std::vector<std::size_t>> itemCountries)
    : countries_(std::move(countries)), items_(std::move(items)), itemCountries_(std::move(itemCountries)),
      countryItems_(countries_.size()) {
    if (itemCountries_.size() != items_.size())
        throw AnalysisError("incidence size does not match the item count");
    for (std::size_t k = 0; k < itemCountries_.size(); ++k) {
        auto &list = itemCountries_[k];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        for (std::size_t c : list) {
            if (c >= countries_.size())
                throw AnalysisError("incidence refers to an unknown country");
            countryItems_[c].push_back(k);
        }
    }
}

std::optional<std::size_t> BipartiteGraph::countryIndex(std::string_view code) const {
    const auto it = std::lower_bound(countries_.begin(), countries_.end(), code);
    if (it == countries_.end() || *it != code)
        return std::nullopt;
    return static_cast<std::size_t>(it - countries_.begin());
}

std::size_t BipartiteGraph::requireCountry(std::string_view code) const {
    if (auto idx = countryIndex(code))
        return *idx;
    throw AnalysisError("unknown country '" + std::string(code) + "'");
}

bool BipartiteGraph::contains(std::size_t country, std::size_t item) const {
    const auto &list = itemCountries_[item];
    return std::binary_search(list.begin(), list.end(), country);
}

std::size_t BipartiteGraph::incidenceCount() const {
    std::size_t total = 0;
    for (const auto &list : itemCountries_)
        total += list.size();
    return total;
}

bool BipartiteGraph::operator==(const BipartiteGraph &other) const {
    return countries_ == other.countries_ && items_ == other.items_ && itemCountries_ == other.itemCountries_;
}

BipartiteGraph buildBipartite(const std::vector<ListingRecord> &records, const BipartiteOptions &options) {
    std::set<std::string> countrySet;
    std::map<std::string, std::set<std::string>> listedBy;
    for (const auto &r : records) {
        if (options.categoryFilter && r.category != options.categoryFilter)
            continue;
        countrySet.insert(r.country.str());
        listedBy[r.itemId].insert(r.country.str());
    }
    if (countrySet.empty())
        throw EmptyGraphError("no listing records survive the category filter");

    std::vector<std::string> countries(countrySet.begin(), countrySet.end());
    auto indexOf = [&countries](const std::string &code) {
        return static_cast<std::size_t>(std::lower_bound(countries.begin(), countries.end(), code) -
                                        countries.begin());
    };

    std::vector<std::string> items;
    std::vector<std::vector<std::size_t>> incidence;
    for (const auto &[item, listing] : listedBy) {
        if (listing.size() < options.minCountriesPerItem)
            continue;
        items.push_back(item);
        auto &list = incidence.emplace_back();
        for (const auto &code : listing)
            list.push_back(indexOf(code));
    }
    if (items.empty())
        throw EmptyGraphError("no item is listed by at least " + std::to_string(options.minCountriesPerItem) +
                              " countries");
    return BipartiteGraph(std::move(countries), std::move(items), std::move(incidence));
}

} // namespace coconsume
