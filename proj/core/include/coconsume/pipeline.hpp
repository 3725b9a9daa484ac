#pragma once

#include "coconsume/backbone.hpp"
#include "coconsume/centrality.hpp"
#include "coconsume/inference.hpp"
#include "coconsume/ingest.hpp"
#include "coconsume/netstats.hpp"
#include "coconsume/openness.hpp"
#include "coconsume/projection.hpp"
#include "coconsume/table.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string_view>
#include <optional>
#include <string>
#include <vector>

namespace coconsume {

/// Everything a pipeline run (or any single stage) depends on.
struct PipelineConfig {
    std::vector<std::filesystem::path> inputs;
    ListingFormat format = ListingFormat::Jsonl;
    bool strict = false;
    std::optional<std::string> category;
    std::size_t minCountriesPerItem = 1;

    double alpha = Alpha::kDefault;
    std::vector<double> alphaGrid;
    bool componentRestrict = false;
    /// Analyse the unfiltered projection instead of the backbone.
    bool onProjection = false;

    double significance = 0.05;
    BackboneMethod backboneMethod = BackboneMethod::Analytic;
    std::size_t mcSamples = 100000;

    AplScope aplScope = AplScope::AllComponents;

    std::optional<std::filesystem::path> covariates;
    std::vector<std::string> outcomes{"betweenness", "closeness", "openness"};
    std::vector<ModelKind> models{ModelKind::Full, ModelKind::NonCulture, ModelKind::Culture};
    std::vector<std::string> extraControls;

    std::uint64_t seed = 0;
    std::filesystem::path outDir = "out";
    EmitFormat emit = EmitFormat::Tsv;

    /// Throws IoError for missing inputs and AnalysisError for out-of-range values.
    void validate() const;
};

/// Derived seeds for every random consumer; all flow from PipelineConfig::seed.
struct StageSeeds {
    std::uint64_t backbone;
    std::uint64_t communities;

    static StageSeeds from(std::uint64_t root);
};

/// Parsed and filtered inputs shared by the stages.
struct IngestOutcome {
    ParseResult parsed;
    BipartiteGraph bipartite;
};

IngestOutcome ingestStage(const PipelineConfig &config);
BackboneGraph backboneStage(const PipelineConfig &config, const WeightedCountryGraph &projection);
/// The graph the centralities and statistics are computed on.
WeightedCountryGraph analysisGraph(const PipelineConfig &config, const WeightedCountryGraph &projection,
                                   const BackboneGraph &backbone);
std::vector<CentralityScores> centralityStage(const PipelineConfig &config, const WeightedCountryGraph &graph);
std::string categoryLabel(const PipelineConfig &config);

/// Scores by country for "betweenness", "closeness" or "openness".
std::map<std::string, double> outcomeScores(std::string_view outcome, const CentralityScores &centrality,
                                            const std::vector<OpennessScore> &openness);

/**
 * Runs every stage and writes projection, backbone, centrality, openness,
 * netstats, rejects, optional regression tables and manifest.json into
 * config.outDir. On any error the files written so far are removed and the
 * exception is rethrown.
 */
std::vector<std::filesystem::path> runPipeline(const PipelineConfig &config);

/// Extension used for table files: "tsv" or "json".
std::string tableExtension(EmitFormat format);

} // namespace coconsume
