#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coconsume {

/// Calendar day parsed from an ISO 8601 "YYYY-MM-DD" string.
struct Date {
    int year = 0;
    unsigned month = 0;
    unsigned day = 0;

    /// Returns nullopt unless `text` is exactly YYYY-MM-DD and names a real day.
    static std::optional<Date> parse(std::string_view text);
    std::string toString() const;

    auto operator<=>(const Date &) const = default;
};

/// ISO 3166-1 alpha-3 country code. Codes are taken verbatim: "usa" is rejected,
/// not upper-cased.
class CountryCode {
public:
    static bool isValid(std::string_view code);
    /// Throws AnalysisError for anything that is not [A-Z]{3}.
    explicit CountryCode(std::string code);

    const std::string &str() const { return code_; }

    auto operator<=>(const CountryCode &) const = default;

private:
    std::string code_;
};

/// One (date, country, item) observation from a daily popularity list.
struct ListingRecord {
    Date date;
    CountryCode country;
    std::string itemId;
    std::optional<std::string> category;

    bool operator==(const ListingRecord &) const = default;
};

enum class ListingFormat { Jsonl, Csv };

/// Parses "jsonl" or "csv"; throws IoError otherwise.
ListingFormat parseListingFormat(std::string_view name);

struct Reject {
    std::size_t line = 0;
    std::string reason;
};

struct ParseResult {
    std::vector<ListingRecord> records;
    std::vector<Reject> rejects;
};

struct ParseOptions {
    /// Turn the first malformed line into a fatal AnalysisError.
    bool strict = false;
};

/// Streams records out of `in` in input order. Malformed lines are collected as
/// rejects with their 1-based line number. A stream that cannot be read throws
/// IoError.
ParseResult parseListings(std::istream &in, ListingFormat format, const ParseOptions &options = {});

ParseResult parseListingsFile(const std::filesystem::path &path, ListingFormat format,
                              const ParseOptions &options = {});

/// TSV of (line_number, reason), with a header row.
void writeRejects(std::ostream &out, const std::vector<Reject> &rejects);

/**
 * Countries x items incidence. Countries and items are kept in lexical order and
 * the incidence is binary: repeated listings of an item by a country on different
 * days collapse to one pair.
 */
class BipartiteGraph {
public:
    BipartiteGraph() = default;
    BipartiteGraph(std::vector<std::string> countries, std::vector<std::string> items,
                   std::vector<std::vector<std::size_t>> itemCountries);

    const std::vector<std::string> &countries() const { return countries_; }
    const std::vector<std::string> &items() const { return items_; }

    std::size_t countryCount() const { return countries_.size(); }
    std::size_t itemCount() const { return items_.size(); }

    /// n_k: the number of countries that list item k.
    std::size_t outDegree(std::size_t item) const { return itemCountries_[item].size(); }

    /// Sorted country indices listing `item`.
    const std::vector<std::size_t> &countriesOf(std::size_t item) const { return itemCountries_[item]; }
    /// Sorted item indices listed by `country`.
    const std::vector<std::size_t> &itemsOf(std::size_t country) const { return countryItems_[country]; }

    std::optional<std::size_t> countryIndex(std::string_view code) const;
    /// Throws AnalysisError when `code` is not a node of the graph.
    std::size_t requireCountry(std::string_view code) const;

    bool contains(std::size_t country, std::size_t item) const;
    /// Number of distinct (country, item) pairs.
    std::size_t incidenceCount() const;

    bool operator==(const BipartiteGraph &other) const;

private:
    std::vector<std::string> countries_;
    std::vector<std::string> items_;
    std::vector<std::vector<std::size_t>> itemCountries_;
    std::vector<std::vector<std::size_t>> countryItems_;
};

struct BipartiteOptions {
    /// When set, only records whose category equals this label are kept.
    std::optional<std::string> categoryFilter;
    /// Items listed by fewer countries are dropped.
    std::size_t minCountriesPerItem = 1;
};

/// Assembles the deduplicated incidence. Throws EmptyGraphError when no record
/// survives the category filter or no item survives the out-degree filter.
BipartiteGraph buildBipartite(const std::vector<ListingRecord> &records, const BipartiteOptions &options = {});

} // namespace coconsume
