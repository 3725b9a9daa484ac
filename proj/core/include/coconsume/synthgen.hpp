#pragma once

#include "coconsume/inference.hpp"
#include "coconsume/ingest.hpp"
#include "coconsume/table.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace coconsume {

struct PlantedBlock {
    std::string id;
    std::size_t countries = 1;
};

/// A country outside the blocks. Every list slot comes from a block pool, with
/// the block chosen by weight; bridges have no country-local items.
struct BridgeCountry {
    std::vector<double> blockWeights; ///< one non-negative weight per block
};

/**
 * Planted cultural-block listing model. Each block owns an item pool. For every
 * list slot a block country draws from another block's pool with probability
 * interBlockShare, from its own pool with probability intraBlockShare, and
 * otherwise lists a country-local item that nobody else lists.
 */
struct PlantedConfig {
    std::vector<PlantedBlock> blocks;
    std::size_t itemsPerCountry = 20;
    /// Items per block pool; 0 means 3 * itemsPerCountry.
    std::size_t poolSize = 0;
    double intraBlockShare = 1.0;
    double interBlockShare = 0.0;
    std::vector<BridgeCountry> bridges;
    /// 0 draws pool items uniformly; s > 0 draws rank r with weight r^-s.
    double popularityExponent = 0.0;
    /// Each country's list is repeated on this many consecutive days.
    std::size_t days = 1;
    std::uint64_t seed = 1;

    /// Throws AnalysisError on an invalid configuration.
    void validate() const;

    /// key = value lines; '#' starts a comment. Keys: blocks (comma-separated
    /// sizes), items_per_country, pool_size, intra_block_share, inter_block_share,
    /// bridges (';'-separated, each a ':'-separated weight list),
    /// popularity_exponent, days, seed.
    static PlantedConfig parse(std::istream &in);
    static PlantedConfig parseFile(const std::filesystem::path &path);
};

struct GroundTruthRow {
    std::string country;
    std::string block; ///< block id, or "bridge"
    double mixing = 0.0; ///< inter-block share, or 1 - the largest bridge weight share
};

struct SyntheticDataset {
    std::vector<ListingRecord> records;
    std::vector<GroundTruthRow> truth;
};

/// Deterministic for a fixed configuration. Country codes run AAA, AAB, ... in
/// block order, bridges last.
SyntheticDataset generate(const PlantedConfig &config);

/// Synthetic country code for position `index` (AAA = 0).
std::string syntheticCountryCode(std::size_t index);

void writeListingsJsonl(std::ostream &out, const std::vector<ListingRecord> &records);
/// Columns country, block, mixing.
Table groundTruthTable(const std::vector<GroundTruthRow> &truth);

struct PlantedCovariates {
    CovariateTable table;              ///< the default model columns
    std::map<std::string, double> outcome;
};

/**
 * Covariates for `countries` with standard-normal columns for every cultural and
 * non-cultural predictor of `spec`, plus an outcome that loads only on the
 * cultural columns: outcome = sum(cultureLoading * cultural) + noise.
 */
PlantedCovariates plantedCultureSignal(const std::vector<std::string> &countries, const ModelSpec &spec,
                                       double cultureLoading, double noiseSd, std::uint64_t seed);

} // namespace coconsume
