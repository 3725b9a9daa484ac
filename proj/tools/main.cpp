// coconsume: co-consumption network analysis from popularity listings.
//
// Every subcommand is a thin wrapper over one library stage. Stage commands
// recompute their upstream stages from the listings with the same flags, so any
// stage can be re-run in isolation from the parameters in a pipeline manifest.

#include "coconsume/error.hpp"
#include "coconsume/pipeline.hpp"
#include "coconsume/synthgen.hpp"
#include "coconsume/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace coconsume;

namespace {

constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

struct Flags {
    PipelineConfig config;
    std::string format = "jsonl";
    std::string backboneMethod = "analytic";
    std::string emit = "tsv";
    std::string aplScope = "components";
    std::vector<std::string> models{"full", "nonculture", "culture"};
    std::string category;
    std::string covariates;
    std::string outDir;
    std::vector<std::string> netstatsCategories;

    /// Resolves the string-valued flags into `config`.
    void finish() {
        config.format = parseListingFormat(format);
        config.backboneMethod = parseBackboneMethod(backboneMethod);
        config.aplScope = parseAplScope(aplScope);
        if (emit == "tsv")
            config.emit = EmitFormat::Tsv;
        else if (emit == "json")
            config.emit = EmitFormat::Json;
        else
            throw IoError("--emit expects tsv or json");
        config.models.clear();
        for (const auto &m : models)
            config.models.push_back(parseModelKind(m));
        if (!category.empty())
            config.category = category;
        if (!covariates.empty())
            config.covariates = covariates;
        if (!outDir.empty())
            config.outDir = outDir;
    }
};

void addInputFlags(CLI::App &cmd, Flags &f) {
    cmd.add_option("--input", f.config.inputs, "Listing file(s)")->required();
    cmd.add_option("--format", f.format, "Listing format: jsonl or csv")->capture_default_str();
    cmd.add_flag("--strict", f.config.strict, "Treat any malformed line as fatal");
    cmd.add_option("--category", f.category, "Keep only listings with this category");
    cmd.add_option("--min-countries-per-item", f.config.minCountriesPerItem,
                   "Drop items listed by fewer countries")
        ->capture_default_str();
}

void addBackboneFlags(CLI::App &cmd, Flags &f) {
    cmd.add_option("--significance", f.config.significance, "Backbone significance level")->capture_default_str();
    cmd.add_option("--backbone-method", f.backboneMethod, "analytic or montecarlo")->capture_default_str();
    cmd.add_option("--mc-samples", f.config.mcSamples, "Monte-Carlo null draws per edge endpoint")
        ->capture_default_str();
    cmd.add_option("--seed", f.config.seed, "Root seed for every random stage")->capture_default_str();
    cmd.add_flag("--on-projection", f.config.onProjection, "Analyse the unfiltered projection");
}

void addCentralityFlags(CLI::App &cmd, Flags &f) {
    cmd.add_option("--alpha", f.config.alpha, "Tie-strength exponent")->capture_default_str();
    cmd.add_option("--alpha-grid", f.config.alphaGrid, "Additional alpha values to sweep")->delimiter(',');
    cmd.add_flag("--component-restrict", f.config.componentRestrict,
                 "Compute closeness within each connected component");
}

void addOutputFlags(CLI::App &cmd, Flags &f) {
    cmd.add_option("--out-dir", f.outDir, "Write into this directory instead of stdout");
    cmd.add_option("--emit", f.emit, "tsv or json")->capture_default_str();
}

void addRegressionFlags(CLI::App &cmd, Flags &f, bool required) {
    auto *cov = cmd.add_option("--covariates", f.covariates, "Covariate CSV keyed by country");
    if (required)
        cov->required();
    cmd.add_option("--outcome", f.config.outcomes, "betweenness, closeness and/or openness")->delimiter(',');
    cmd.add_option("--model", f.models, "full, nonculture and/or culture")->delimiter(',');
    cmd.add_option("--extra-controls", f.config.extraControls, "Columns appended to every model")->delimiter(',');
}

/// Emits `table` to stdout, or to <out-dir>/<stem>.<ext> when --out-dir is set.
void emitTable(const Flags &f, const std::string &stem, const Table &table, bool header = true) {
    if (f.outDir.empty()) {
        writeTable(std::cout, table, f.config.emit, header);
        return;
    }
    fs::create_directories(f.config.outDir);
    writeTableFile(f.config.outDir / (stem + "." + tableExtension(f.config.emit)), table, f.config.emit, header);
}

void emitText(const Flags &f, const std::string &name, const std::string &text) {
    if (f.outDir.empty()) {
        std::cout << text;
        return;
    }
    fs::create_directories(f.config.outDir);
    std::ofstream out(f.config.outDir / name, std::ios::binary);
    if (!out || !(out << text))
        throw IoError("cannot write " + (f.config.outDir / name).string());
}

int cmdIngestCheck(Flags &f) {
    f.finish();
    f.config.validate();
    const auto outcome = ingestStage(f.config);
    std::cerr << outcome.parsed.records.size() << " records, " << outcome.parsed.rejects.size() << " rejects, "
              << outcome.bipartite.countryCount() << " countries, " << outcome.bipartite.itemCount() << " items\n";
    std::ostringstream rejects;
    writeRejects(rejects, outcome.parsed.rejects);
    emitText(f, "rejects.tsv", rejects.str());
    return 0;
}

int cmdProject(Flags &f) {
    f.finish();
    f.config.validate();
    const auto projection = project(ingestStage(f.config).bipartite);
    if (f.config.emit == EmitFormat::Json) {
        std::ostringstream json;
        writeProjectionJson(json, projection);
        emitText(f, "projection.json", json.str());
    } else {
        emitTable(f, "projection", edgeListTable(projection), false);
    }
    return 0;
}

int cmdBackbone(Flags &f) {
    f.finish();
    f.config.validate();
    const auto projection = project(ingestStage(f.config).bipartite);
    emitTable(f, "backbone", backboneTable(backboneStage(f.config, projection)));
    return 0;
}

int cmdCentrality(Flags &f) {
    f.finish();
    f.config.validate();
    const auto projection = project(ingestStage(f.config).bipartite);
    const auto graph = analysisGraph(f.config, projection, backboneStage(f.config, projection));
    const auto runs = centralityStage(f.config, graph);
    emitTable(f, "centrality", centralityTable(runs));
    return 0;
}

int cmdOpenness(Flags &f) {
    f.finish();
    f.config.validate();
    emitTable(f, "openness", opennessTable(opennessScores(ingestStage(f.config).bipartite)));
    return 0;
}

int cmdNetstats(Flags &f) {
    f.finish();
    f.config.validate();
    std::vector<std::optional<std::string>> categories;
    if (f.netstatsCategories.empty())
        categories.push_back(f.config.category);
    for (const auto &c : f.netstatsCategories)
        categories.emplace_back(c == "Combined" ? std::nullopt : std::optional<std::string>(c));

    std::vector<CategorySummary> rows;
    for (const auto &category : categories) {
        PipelineConfig config = f.config;
        config.category = category;
        const auto projection = project(ingestStage(config).bipartite);
        const auto graph = analysisGraph(config, projection, backboneStage(config, projection));
        rows.push_back({categoryLabel(config),
                        summarize(graph, {config.aplScope, StageSeeds::from(config.seed).communities})});
    }
    emitTable(f, "netstats", netstatsTable(rows));
    return 0;
}

int cmdRegress(Flags &f) {
    f.finish();
    f.config.validate();
    const auto ingest = ingestStage(f.config);
    const auto projection = project(ingest.bipartite);
    const auto graph = analysisGraph(f.config, projection, backboneStage(f.config, projection));
    const auto centrality = computeCentrality(graph, Alpha(f.config.alpha), {f.config.componentRestrict});
    const auto openness = opennessScores(ingest.bipartite);
    const auto covariates = CovariateTable::readFile(*f.config.covariates);
    ModelSpec spec;
    spec.extraControls = f.config.extraControls;
    spec.models = f.config.models;
    for (const auto &outcome : f.config.outcomes) {
        const auto models = runStandardModels(covariates, outcome, outcomeScores(outcome, centrality, openness), spec);
        emitTable(f, "regression_" + outcome, regressionTable(models));
        if (f.outDir.empty())
            std::cerr << formatRegressionText(models);
        else
            emitText(f, "regression_" + outcome + ".txt", formatRegressionText(models));
    }
    return 0;
}

int cmdEigenvector(const std::string &edges, const std::string &outDir, EigenvectorOptions options) {
    std::ifstream in(edges);
    if (!in)
        throw IoError("cannot open " + edges);
    const auto graph = readEdgeList(in);
    const auto scores = eigenvectorCentrality(graph, options);
    Table table{{"node", "eigenvector"}, {}};
    for (std::size_t i = 0; i < graph.nodeCount(); ++i)
        table.rows.push_back({graph.nodes()[i], scores[i]});
    if (outDir.empty()) {
        writeTsv(std::cout, table);
    } else {
        fs::create_directories(outDir);
        writeTableFile(fs::path(outDir) / "eigenvector.tsv", table, EmitFormat::Tsv);
    }
    return 0;
}

struct SynthFlags {
    std::string config;
    std::vector<std::size_t> blocks{10, 10};
    std::size_t itemsPerCountry = 20;
    std::size_t poolSize = 0;
    double intra = 1.0;
    double inter = 0.0;
    std::vector<std::string> bridges;
    double popularityExponent = 0.0;
    std::size_t days = 1;
    std::uint64_t seed = 1;
    std::string outDir = "synthetic";
};

int cmdSynth(const SynthFlags &s) {
    PlantedConfig cfg;
    if (!s.config.empty()) {
        cfg = PlantedConfig::parseFile(s.config);
    } else {
        for (auto n : s.blocks)
            cfg.blocks.push_back({"B" + std::to_string(cfg.blocks.size()), n});
        cfg.itemsPerCountry = s.itemsPerCountry;
        cfg.poolSize = s.poolSize;
        cfg.intraBlockShare = s.intra;
        cfg.interBlockShare = s.inter;
        for (const auto &bridge : s.bridges) {
            BridgeCountry b;
            std::istringstream parts(bridge);
            std::string w;
            while (std::getline(parts, w, ':'))
                b.blockWeights.push_back(std::stod(w));
            cfg.bridges.push_back(std::move(b));
        }
        cfg.popularityExponent = s.popularityExponent;
        cfg.days = s.days;
        cfg.seed = s.seed;
    }
    const auto data = generate(cfg);
    fs::create_directories(s.outDir);
    std::ofstream listings(fs::path(s.outDir) / "listings.jsonl", std::ios::binary);
    std::ofstream truth(fs::path(s.outDir) / "ground_truth.csv", std::ios::binary);
    if (!listings || !truth)
        throw IoError("cannot write into " + s.outDir);
    writeListingsJsonl(listings, data.records);
    writeCsv(truth, groundTruthTable(data.truth));
    std::cerr << data.records.size() << " records for " << data.truth.size() << " countries written to "
              << s.outDir << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Co-consumption network analysis: projection, backbone, centrality, openness and regression"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Flags flags;
    auto *ingestCheck = app.add_subcommand("ingest-check", "Parse listings and report rejected lines");
    addInputFlags(*ingestCheck, flags);
    addOutputFlags(*ingestCheck, flags);

    auto *projectCmd = app.add_subcommand("project", "Weighted country projection edge list");
    addInputFlags(*projectCmd, flags);
    addOutputFlags(*projectCmd, flags);

    auto *backboneCmd = app.add_subcommand("backbone", "Backbone significance per projection edge");
    addInputFlags(*backboneCmd, flags);
    addBackboneFlags(*backboneCmd, flags);
    addOutputFlags(*backboneCmd, flags);

    auto *centralityCmd = app.add_subcommand("centrality", "Closeness and betweenness on the analysis graph");
    addInputFlags(*centralityCmd, flags);
    addBackboneFlags(*centralityCmd, flags);
    addCentralityFlags(*centralityCmd, flags);
    addOutputFlags(*centralityCmd, flags);

    auto *opennessCmd = app.add_subcommand("openness", "Composite openness per country");
    addInputFlags(*opennessCmd, flags);
    addOutputFlags(*opennessCmd, flags);

    auto *netstatsCmd = app.add_subcommand("netstats", "Descriptive statistics of the analysis graph");
    addInputFlags(*netstatsCmd, flags);
    addBackboneFlags(*netstatsCmd, flags);
    addOutputFlags(*netstatsCmd, flags);
    netstatsCmd->add_option("--categories", flags.netstatsCategories,
                            "One row per category (\"Combined\" for all listings)")
        ->delimiter(',');
    netstatsCmd->add_option("--apl-scope", flags.aplScope, "components or giant")->capture_default_str();

    auto *regressCmd = app.add_subcommand("regress", "Full, non-culture and culture OLS models");
    addInputFlags(*regressCmd, flags);
    addBackboneFlags(*regressCmd, flags);
    addCentralityFlags(*regressCmd, flags);
    addRegressionFlags(*regressCmd, flags, true);
    addOutputFlags(*regressCmd, flags);

    auto *pipelineCmd = app.add_subcommand("pipeline", "Run every stage and write all tables plus a manifest");
    addInputFlags(*pipelineCmd, flags);
    addBackboneFlags(*pipelineCmd, flags);
    addCentralityFlags(*pipelineCmd, flags);
    addRegressionFlags(*pipelineCmd, flags, false);
    pipelineCmd->add_option("--out-dir", flags.outDir, "Output directory")->required();
    pipelineCmd->add_option("--emit", flags.emit, "tsv or json")->capture_default_str();
    pipelineCmd->add_option("--apl-scope", flags.aplScope, "components or giant")->capture_default_str();

    std::string edges;
    std::string eigenOut;
    EigenvectorOptions eigen;
    auto *eigenCmd = app.add_subcommand("eigenvector", "Eigenvector centrality of an i/j/weight edge list");
    eigenCmd->add_option("--edges", edges, "Edge list TSV")->required();
    eigenCmd->add_option("--tol", eigen.tolerance, "Convergence tolerance")->capture_default_str();
    eigenCmd->add_option("--max-iter", eigen.maxIterations, "Iteration limit")->capture_default_str();
    eigenCmd->add_option("--out-dir", eigenOut, "Write eigenvector.tsv here instead of stdout");

    SynthFlags synth;
    auto *synthCmd = app.add_subcommand("synth", "Generate planted-block synthetic listings");
    synthCmd->add_option("--config", synth.config, "key = value config file (overrides the flags below)");
    synthCmd->add_option("--blocks", synth.blocks, "Countries per block")->delimiter(',');
    synthCmd->add_option("--items-per-country", synth.itemsPerCountry)->capture_default_str();
    synthCmd->add_option("--pool-size", synth.poolSize, "Items per block pool (0: 3x items)")->capture_default_str();
    synthCmd->add_option("--intra-block-share", synth.intra)->capture_default_str();
    synthCmd->add_option("--inter-block-share", synth.inter)->capture_default_str();
    synthCmd->add_option("--bridge", synth.bridges, "Bridge country block weights, e.g. 0.5:0.5");
    synthCmd->add_option("--popularity-exponent", synth.popularityExponent)->capture_default_str();
    synthCmd->add_option("--days", synth.days)->capture_default_str();
    synthCmd->add_option("--seed", synth.seed)->capture_default_str();
    synthCmd->add_option("--out-dir", synth.outDir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (ingestCheck->parsed())
            return cmdIngestCheck(flags);
        if (projectCmd->parsed())
            return cmdProject(flags);
        if (backboneCmd->parsed())
            return cmdBackbone(flags);
        if (centralityCmd->parsed())
            return cmdCentrality(flags);
        if (opennessCmd->parsed())
            return cmdOpenness(flags);
        if (netstatsCmd->parsed())
            return cmdNetstats(flags);
        if (regressCmd->parsed())
            return cmdRegress(flags);
        if (pipelineCmd->parsed()) {
            flags.finish();
            const auto written = runPipeline(flags.config);
            std::cerr << "wrote " << written.size() << " files to " << flags.config.outDir.string() << "\n";
            return 0;
        }
        if (eigenCmd->parsed())
            return cmdEigenvector(edges, eigenOut, eigen);
        if (synthCmd->parsed())
            return cmdSynth(synth);
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalysis;
    }
    return kExitUsage;
}
