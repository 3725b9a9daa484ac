#include "coconsume/synthgen.hpp"

#include "coconsume/error.hpp"
#include "coconsume/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace coconsume {

namespace {

Date addDays(Date d, std::size_t days) {
    for (std::size_t i = 0; i < days; ++i) {
        const auto next = Date::parse(Date{d.year, d.month, d.day + 1}.toString());
        if (next) {
            d = *next;
        } else if (d.month < 12) {
            d = Date{d.year, d.month + 1, 1};
        } else {
            d = Date{d.year + 1, 1, 1};
        }
    }
    return d;
}

/// Draws pool ranks either uniformly or with weight r^-s.
class PoolSampler {
public:
    PoolSampler(std::size_t size, double exponent) : size_(size) {
        if (exponent > 0.0) {
            cumulative_.resize(size);
            double total = 0.0;
            for (std::size_t r = 0; r < size; ++r) {
                total += std::pow(static_cast<double>(r + 1), -exponent);
                cumulative_[r] = total;
            }
            for (auto &c : cumulative_)
                c /= total;
        }
    }

    std::size_t draw(Rng &rng) const {
        if (cumulative_.empty())
            return static_cast<std::size_t>(rng.below(size_));
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        return std::min(static_cast<std::size_t>(it - cumulative_.begin()), size_ - 1);
    }

private:
    std::size_t size_;
    std::vector<double> cumulative_;
};

std::string poolItem(std::size_t block, std::size_t rank) {
    return "b" + std::to_string(block) + "-" + std::to_string(rank);
}

std::vector<std::string> splitOn(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep))
        parts.push_back(part);
    return parts;
}

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

double toDouble(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument(value);
        return v;
    } catch (const std::exception &) {
        throw AnalysisError("config key '" + key + "' expects a number, got '" + value + "'");
    }
}

std::size_t toCount(const std::string &key, const std::string &value) {
    const double v = toDouble(key, value);
    if (v < 0 || v != std::floor(v))
        throw AnalysisError("config key '" + key + "' expects a non-negative integer, got '" + value + "'");
    return static_cast<std::size_t>(v);
}

} // namespace

void PlantedConfig::validate() const {
    if (blocks.empty())
        throw AnalysisError("planted config needs at least one block");
    for (const auto &b : blocks)
        if (b.countries < 1)
            throw AnalysisError("block '" + b.id + "' has no countries");
    if (itemsPerCountry < 1)
        throw AnalysisError("items_per_country must be at least 1");
    if (poolSize != 0 && poolSize < itemsPerCountry)
        throw AnalysisError("pool_size must be at least items_per_country");
    for (double share : {intraBlockShare, interBlockShare})
        if (!(share >= 0.0 && share <= 1.0))
            throw AnalysisError("block shares must lie in [0, 1]");
    if (intraBlockShare + interBlockShare > 1.0 + 1e-12)
        throw AnalysisError("intra_block_share + inter_block_share must not exceed 1");
    if (interBlockShare > 0.0 && blocks.size() < 2)
        throw AnalysisError("inter-block mixing needs at least two blocks");
    for (const auto &bridge : bridges) {
        if (bridge.blockWeights.size() != blocks.size())
            throw AnalysisError("each bridge needs one weight per block");
        double total = 0.0;
        for (double w : bridge.blockWeights) {
            if (!(w >= 0.0))
                throw AnalysisError("bridge weights must be non-negative");
            total += w;
        }
        if (!(total > 0.0))
            throw AnalysisError("bridge weights must not all be zero");
    }
    if (!(popularityExponent >= 0.0))
        throw AnalysisError("popularity_exponent must be non-negative");
    if (days < 1)
        throw AnalysisError("days must be at least 1");
    const std::size_t total = std::accumulate(blocks.begin(), blocks.end(), bridges.size(),
                                              [](std::size_t acc, const PlantedBlock &b) { return acc + b.countries; });
    if (total > 26 * 26 * 26)
        throw AnalysisError("too many countries for three-letter codes");
}

PlantedConfig PlantedConfig::parse(std::istream &in) {
    PlantedConfig cfg;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw AnalysisError("config line " + std::to_string(lineNo) + " is not key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "blocks") {
            cfg.blocks.clear();
            for (const auto &part : splitOn(value, ','))
                cfg.blocks.push_back({"B" + std::to_string(cfg.blocks.size()), toCount(key, trim(part))});
        } else if (key == "items_per_country") {
            cfg.itemsPerCountry = toCount(key, value);
        } else if (key == "pool_size") {
            cfg.poolSize = toCount(key, value);
        } else if (key == "intra_block_share") {
            cfg.intraBlockShare = toDouble(key, value);
        } else if (key == "inter_block_share") {
            cfg.interBlockShare = toDouble(key, value);
        } else if (key == "bridges") {
            cfg.bridges.clear();
            for (const auto &bridge : splitOn(value, ';')) {
                if (trim(bridge).empty())
                    continue;
                BridgeCountry b;
                for (const auto &w : splitOn(bridge, ':'))
                    b.blockWeights.push_back(toDouble(key, trim(w)));
                cfg.bridges.push_back(std::move(b));
            }
        } else if (key == "popularity_exponent") {
            cfg.popularityExponent = toDouble(key, value);
        } else if (key == "days") {
            cfg.days = toCount(key, value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(toCount(key, value));
        } else {
            throw AnalysisError("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

PlantedConfig PlantedConfig::parseFile(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    return parse(in);
}

std::string syntheticCountryCode(std::size_t index) {
    std::string code(3, 'A');
    for (int pos = 2; pos >= 0; --pos) {
        code[static_cast<std::size_t>(pos)] = static_cast<char>('A' + index % 26);
        index /= 26;
    }
    return code;
}

SyntheticDataset generate(const PlantedConfig &config) {
    config.validate();
    const std::size_t pool = config.poolSize ? config.poolSize : 3 * config.itemsPerCountry;
    const PoolSampler sampler(pool, config.popularityExponent);
    Rng rng(config.seed);
    const Date start{2016, 1, 1};

    SyntheticDataset data;
    std::vector<std::pair<std::string, std::vector<std::string>>> lists;
    std::size_t next = 0;

    auto fillList = [&](const std::string &code, auto pickBlock) {
        std::vector<std::string> items;
        std::set<std::string> taken;
        std::size_t local = 0;
        while (items.size() < config.itemsPerCountry) {
            std::string item;
            for (int attempt = 0; attempt < 1000 && item.empty(); ++attempt) {
                const auto block = pickBlock();
                if (!block) {
                    item = code + "-local-" + std::to_string(local++);
                    break;
                }
                auto candidate = poolItem(*block, sampler.draw(rng));
                if (!taken.contains(candidate))
                    item = std::move(candidate);
            }
            if (item.empty())
                item = code + "-local-" + std::to_string(local++);
            taken.insert(item);
            items.push_back(std::move(item));
        }
        lists.emplace_back(code, std::move(items));
    };

    const std::size_t blockCount = config.blocks.size();
    for (std::size_t b = 0; b < blockCount; ++b) {
        for (std::size_t c = 0; c < config.blocks[b].countries; ++c) {
            const auto code = syntheticCountryCode(next++);
            fillList(code, [&]() -> std::optional<std::size_t> {
                const double u = rng.uniform();
                if (u < config.interBlockShare) {
                    auto other = static_cast<std::size_t>(rng.below(blockCount - 1));
                    return other >= b ? other + 1 : other;
                }
                if (u < config.interBlockShare + config.intraBlockShare)
                    return b;
                return std::nullopt;
            });
            data.truth.push_back({code, config.blocks[b].id, config.interBlockShare});
        }
    }
    for (const auto &bridge : config.bridges) {
        const auto code = syntheticCountryCode(next++);
        const double total = std::accumulate(bridge.blockWeights.begin(), bridge.blockWeights.end(), 0.0);
        fillList(code, [&]() -> std::optional<std::size_t> {
            double u = rng.uniform() * total;
            for (std::size_t b = 0; b < blockCount; ++b) {
                if (u < bridge.blockWeights[b])
                    return b;
                u -= bridge.blockWeights[b];
            }
            return blockCount - 1;
        });
        const double top = *std::max_element(bridge.blockWeights.begin(), bridge.blockWeights.end());
        data.truth.push_back({code, "bridge", 1.0 - top / total});
    }

    for (std::size_t d = 0; d < config.days; ++d) {
        const Date date = addDays(start, d);
        for (const auto &[code, items] : lists)
            for (const auto &item : items)
                data.records.push_back({date, CountryCode(code), item, std::nullopt});
    }
    return data;
}

void writeListingsJsonl(std::ostream &out, const std::vector<ListingRecord> &records) {
    for (const auto &r : records) {
        nlohmann::ordered_json line;
        line["date"] = r.date.toString();
        line["country"] = r.country.str();
        line["item_id"] = r.itemId;
        if (r.category)
            line["category"] = *r.category;
        out << line.dump() << '\n';
    }
}

Table groundTruthTable(const std::vector<GroundTruthRow> &truth) {
    Table table{{"country", "block", "mixing"}, {}};
    for (const auto &row : truth)
        table.rows.push_back({row.country, row.block, row.mixing});
    return table;
}

PlantedCovariates plantedCultureSignal(const std::vector<std::string> &countries, const ModelSpec &spec,
                                       double cultureLoading, double noiseSd, std::uint64_t seed) {
    Rng rng(seed, 0x5EED);
    PlantedCovariates out{CovariateTable(countries), {}};
    std::vector<std::string> columns = spec.columnsFor(ModelKind::Full);
    std::vector<std::vector<double>> values(columns.size(), std::vector<double>(countries.size()));
    for (std::size_t r = 0; r < countries.size(); ++r)
        for (auto &col : values)
            col[r] = rng.normal();
    for (std::size_t c = 0; c < columns.size(); ++c)
        out.table.setColumn(columns[c], values[c]);
    for (std::size_t r = 0; r < countries.size(); ++r) {
        double y = noiseSd * rng.normal();
        for (const auto &name : spec.cultural)
            y += cultureLoading * out.table.column(name)[r];
        out.outcome[countries[r]] = y;
    }
    return out;
}

} // namespace coconsume
