#include "coconsume/pipeline.hpp"

#include "coconsume/error.hpp"
#include "coconsume/random.hpp"
#include "coconsume/version.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace coconsume {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
    if (inputs.empty())
        throw IoError("no input listings given");
    for (const auto &p : inputs)
        if (!fs::is_regular_file(p))
            throw IoError("input not found: " + p.string());
    if (covariates && !fs::is_regular_file(*covariates))
        throw IoError("covariate file not found: " + covariates->string());
    Alpha{alpha};
    for (double a : alphaGrid)
        Alpha{a};
    if (!(significance > 0.0 && significance < 1.0))
        throw AnalysisError("significance must lie in (0, 1)");
    if (backboneMethod == BackboneMethod::MonteCarlo && mcSamples < 1000)
        throw AnalysisError("Monte-Carlo backbone needs at least 1000 samples");
    if (minCountriesPerItem < 1)
        throw AnalysisError("min-countries-per-item must be at least 1");
    for (const auto &o : outcomes)
        if (o != "betweenness" && o != "closeness" && o != "openness")
            throw IoError("unknown outcome '" + o + "' (expected betweenness, closeness or openness)");
}

StageSeeds StageSeeds::from(std::uint64_t root) {
    return {mixSeed(root ^ 0x6261636b626f6e65ULL), mixSeed(root ^ 0x636f6d6d756e6974ULL)};
}

std::string tableExtension(EmitFormat format) { return format == EmitFormat::Json ? "json" : "tsv"; }

std::string categoryLabel(const PipelineConfig &config) { return config.category.value_or("Combined"); }

IngestOutcome ingestStage(const PipelineConfig &config) {
    IngestOutcome outcome;
    const ParseOptions options{config.strict};
    for (const auto &path : config.inputs) {
        auto parsed = parseListingsFile(path, config.format, options);
        for (auto &r : parsed.rejects) {
            if (config.inputs.size() > 1)
                r.reason = path.filename().string() + ": " + r.reason;
            outcome.parsed.rejects.push_back(std::move(r));
        }
        outcome.parsed.records.insert(outcome.parsed.records.end(), std::make_move_iterator(parsed.records.begin()),
                                      std::make_move_iterator(parsed.records.end()));
    }
    outcome.bipartite = buildBipartite(outcome.parsed.records, {config.category, config.minCountriesPerItem});
    return outcome;
}

BackboneGraph backboneStage(const PipelineConfig &config, const WeightedCountryGraph &projection) {
    BackboneOptions options;
    options.significance = config.significance;
    options.test.method = config.backboneMethod;
    options.test.samples = config.mcSamples;
    options.test.seed = StageSeeds::from(config.seed).backbone;
    return extractBackbone(projection, options);
}

WeightedCountryGraph analysisGraph(const PipelineConfig &config, const WeightedCountryGraph &projection,
                                   const BackboneGraph &backbone) {
    return config.onProjection ? projection : backbone.retainedGraph();
}

std::vector<CentralityScores> centralityStage(const PipelineConfig &config, const WeightedCountryGraph &graph) {
    const ClosenessOptions options{config.componentRestrict};
    std::vector<CentralityScores> runs;
    runs.push_back(computeCentrality(graph, Alpha(config.alpha), options));
    for (double a : config.alphaGrid)
        runs.push_back(computeCentrality(graph, Alpha(a), options));
    return runs;
}

std::map<std::string, double> outcomeScores(std::string_view outcome, const CentralityScores &centrality,
                                            const std::vector<OpennessScore> &openness) {
    std::map<std::string, double> scores;
    if (outcome == "openness") {
        for (const auto &s : openness)
            scores[s.country] = s.score;
        return scores;
    }
    const bool between = outcome == "betweenness";
    if (!between && outcome != "closeness")
        throw IoError("unknown outcome '" + std::string(outcome) + "'");
    for (std::size_t i = 0; i < centrality.nodes.size(); ++i)
        scores[centrality.nodes[i]] = between ? centrality.betweenness[i] : centrality.closeness[i];
    return scores;
}

namespace {

/// Files written by a run; removed again unless the run commits.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        createdDir_ = !fs::exists(dir_);
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    OutputSet(const OutputSet &) = delete;
    OutputSet &operator=(const OutputSet &) = delete;

    ~OutputSet() {
        if (committed_)
            return;
        std::error_code ec;
        for (const auto &p : written_)
            fs::remove(p, ec);
        if (createdDir_ && fs::is_empty(dir_, ec))
            fs::remove(dir_, ec);
    }

    fs::path claim(const std::string &name) {
        written_.push_back(dir_ / name);
        return written_.back();
    }

    void writeText(const std::string &name, const std::string &content) {
        const auto path = claim(name);
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << content))
            throw IoError("cannot write " + path.string());
    }

    void writeTable(const std::string &stem, const Table &table, EmitFormat format, bool header = true) {
        writeTableFile(claim(stem + "." + tableExtension(format)), table, format, header);
    }

    std::vector<fs::path> commit() {
        committed_ = true;
        return written_;
    }

    const std::vector<fs::path> &written() const { return written_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
    bool createdDir_ = false;
    bool committed_ = false;
};

std::string fileHash(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(buffer.str())));
    return hex;
}

} // namespace

std::vector<fs::path> runPipeline(const PipelineConfig &config) {
    config.validate();
    OutputSet out(config.outDir);

    const auto ingest = ingestStage(config);
    {
        std::ostringstream rejects;
        writeRejects(rejects, ingest.parsed.rejects);
        out.writeText("rejects.tsv", rejects.str());
    }

    const auto projection = project(ingest.bipartite);
    if (config.emit == EmitFormat::Json) {
        std::ostringstream json;
        writeProjectionJson(json, projection);
        out.writeText("projection.json", json.str());
    } else {
        out.writeTable("projection", edgeListTable(projection), EmitFormat::Tsv, false);
    }

    const auto backbone = backboneStage(config, projection);
    out.writeTable("backbone", backboneTable(backbone), config.emit);

    const auto graph = analysisGraph(config, projection, backbone);
    const auto runs = centralityStage(config, graph);
    out.writeTable("centrality", centralityTable(std::span(runs).first(1)), config.emit);
    if (!config.alphaGrid.empty())
        out.writeTable("centrality_alpha_grid", centralityTable(std::span(runs).subspan(1)), config.emit);

    const auto openness = opennessScores(ingest.bipartite);
    out.writeTable("openness", opennessTable(openness), config.emit);

    const SummaryOptions summaryOptions{config.aplScope, StageSeeds::from(config.seed).communities};
    out.writeTable("netstats", netstatsTable({{categoryLabel(config), summarize(graph, summaryOptions)}}),
                   config.emit);

    if (config.covariates) {
        const auto covariates = CovariateTable::readFile(*config.covariates);
        ModelSpec spec;
        spec.extraControls = config.extraControls;
        spec.models = config.models;
        for (const auto &outcome : config.outcomes) {
            const auto models = runStandardModels(covariates, outcome, outcomeScores(outcome, runs.front(), openness), spec);
            out.writeTable("regression_" + outcome, regressionTable(models), config.emit);
            out.writeText("regression_" + outcome + ".txt", formatRegressionText(models));
        }
    }

    nlohmann::ordered_json manifest;
    manifest["tool"] = "coconsume";
    manifest["version"] = kVersion;
    auto inputs = nlohmann::ordered_json::array();
    for (const auto &p : config.inputs)
        inputs.push_back({{"path", p.generic_string()}, {"fnv1a64", fileHash(p)}});
    manifest["inputs"] = inputs;
    manifest["format"] = config.format == ListingFormat::Csv ? "csv" : "jsonl";
    manifest["strict"] = config.strict;
    manifest["category"] = config.category ? nlohmann::ordered_json(*config.category) : nlohmann::ordered_json();
    manifest["min_countries_per_item"] = config.minCountriesPerItem;
    manifest["alpha"] = config.alpha;
    manifest["alpha_grid"] = config.alphaGrid;
    manifest["component_restrict"] = config.componentRestrict;
    manifest["on_projection"] = config.onProjection;
    manifest["significance"] = config.significance;
    manifest["backbone_method"] = std::string(toString(config.backboneMethod));
    manifest["mc_samples"] = config.mcSamples;
    manifest["apl_scope"] = config.aplScope == AplScope::GiantComponent ? "giant" : "components";
    manifest["seed"] = config.seed;
    const auto seeds = StageSeeds::from(config.seed);
    manifest["derived_seeds"] = {{"backbone", seeds.backbone}, {"communities", seeds.communities}};
    if (config.covariates) {
        manifest["covariates"] = {{"path", config.covariates->generic_string()},
                                  {"fnv1a64", fileHash(*config.covariates)}};
        manifest["outcomes"] = config.outcomes;
        auto models = nlohmann::ordered_json::array();
        for (auto m : config.models)
            models.push_back(std::string(toString(m)));
        manifest["models"] = models;
        manifest["extra_controls"] = config.extraControls;
    }
    manifest["emit"] = tableExtension(config.emit);
    manifest["counts"] = {{"records", ingest.parsed.records.size()},
                          {"rejects", ingest.parsed.rejects.size()},
                          {"countries", ingest.bipartite.countryCount()},
                          {"items", ingest.bipartite.itemCount()},
                          {"projection_edges", projection.edgeCount()},
                          {"backbone_edges", backbone.retainedCount()}};
    manifest["graph_fingerprint"] = graph.fingerprint();
    auto outputs = nlohmann::ordered_json::array();
    for (const auto &p : out.written())
        outputs.push_back(p.filename().string());
    outputs.push_back("manifest.json");
    manifest["outputs"] = outputs;
    out.writeText("manifest.json", manifest.dump(2) + "\n");

    return out.commit();
}

} // namespace coconsume
