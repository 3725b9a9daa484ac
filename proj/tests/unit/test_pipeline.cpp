#include "coconsume/error.hpp"
#include "coconsume/pipeline.hpp"
#include "coconsume/synthgen.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using namespace coconsume;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkedExample = COCONSUME_TEST_DATA "/worked_example_listings.jsonl";

class PipelineTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                ("coconsume_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }

    fs::path root_;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t fileCount(const fs::path &dir) {
    if (!fs::exists(dir))
        return 0;
    return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

PipelineConfig workedExampleConfig(const fs::path &out) {
    PipelineConfig cfg;
    cfg.inputs = {kWorkedExample};
    cfg.componentRestrict = true;
    cfg.outDir = out;
    return cfg;
}

int runCli(const std::string &args) {
    const std::string cmd = std::string(COCONSUME_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_F(PipelineTest, WorkedExampleOutputs) {
    runPipeline(workedExampleConfig(root_ / "out"));
    for (const char *name : {"projection.tsv", "backbone.tsv", "centrality.tsv", "openness.tsv", "netstats.tsv",
                             "rejects.tsv", "manifest.json"})
        EXPECT_TRUE(fs::exists(root_ / "out" / name)) << name;
    EXPECT_NE(slurp(root_ / "out" / "projection.tsv").find("DEU\tUSA\t1.75\n"), std::string::npos);
    EXPECT_NE(slurp(root_ / "out" / "manifest.json").find("\"seed\""), std::string::npos);
}

TEST_F(PipelineTest, ByteIdenticalReruns) {
    auto a = workedExampleConfig(root_ / "a");
    a.alphaGrid = {0.0, 1.0};
    a.backboneMethod = BackboneMethod::MonteCarlo;
    a.mcSamples = 2000;
    a.seed = 77;
    auto b = a;
    b.outDir = root_ / "b";
    runPipeline(a);
    runPipeline(b);
    ASSERT_EQ(fileCount(root_ / "a"), fileCount(root_ / "b"));
    for (const auto &entry : fs::directory_iterator(root_ / "a"))
        EXPECT_EQ(slurp(entry.path()), slurp(root_ / "b" / entry.path().filename()))
            << entry.path().filename();
}

TEST_F(PipelineTest, JsonEmit) {
    auto cfg = workedExampleConfig(root_ / "out");
    cfg.emit = EmitFormat::Json;
    runPipeline(cfg);
    EXPECT_TRUE(fs::exists(root_ / "out" / "centrality.json"));
    EXPECT_NE(slurp(root_ / "out" / "projection.json").find("\"7/4\""), std::string::npos);
}

TEST_F(PipelineTest, CategoryFilter) {
    auto cfg = workedExampleConfig(root_ / "out");
    cfg.category = "Music";
    cfg.onProjection = true;
    runPipeline(cfg);
    const auto projection = slurp(root_ / "out" / "projection.tsv");
    // Only v1 (USA, DEU) and v3 remain for DEU-USA: 1 + 1/4.
    EXPECT_NE(projection.find("DEU\tUSA\t1.25\n"), std::string::npos);
    // DEU-FRA loses the News item v2 and keeps 1/4 from v3.
    EXPECT_NE(projection.find("DEU\tFRA\t0.25\n"), std::string::npos);
}

TEST_F(PipelineTest, FailureRemovesPartialOutputs) {
    auto cfg = workedExampleConfig(root_ / "out");
    cfg.componentRestrict = false; // the worked-example backbone is edgeless, so closeness fails
    EXPECT_THROW(runPipeline(cfg), NotConnectedError);
    EXPECT_EQ(fileCount(root_ / "out"), 0u);
}

TEST_F(PipelineTest, MissingInput) {
    auto cfg = workedExampleConfig(root_ / "out");
    cfg.inputs = {root_ / "missing.jsonl"};
    EXPECT_THROW(runPipeline(cfg), IoError);
    EXPECT_EQ(fileCount(root_ / "out"), 0u);
}

TEST_F(PipelineTest, RegressionOnSyntheticCovariates) {
    PlantedConfig pc;
    pc.blocks = {{"B0", 15}, {"B1", 15}};
    pc.itemsPerCountry = 30;
    pc.intraBlockShare = 0.7;
    pc.interBlockShare = 0.1;
    const auto data = generate(pc);
    {
        std::ofstream out(root_ / "listings.jsonl");
        writeListingsJsonl(out, data.records);
    }
    std::vector<std::string> countries;
    for (const auto &row : data.truth)
        countries.push_back(row.country);
    const auto planted = plantedCultureSignal(countries, {}, 1.0, 0.5, 3);
    {
        std::ofstream out(root_ / "covariates.csv");
        Table t{{"country"}, {}};
        for (const auto &c : planted.table.columnNames())
            t.columns.push_back(c);
        for (std::size_t i = 0; i < planted.table.rowCount(); ++i) {
            std::vector<Cell> row{planted.table.keys()[i]};
            for (const auto &c : planted.table.columnNames())
                row.emplace_back(planted.table.column(c)[i]);
            t.rows.push_back(std::move(row));
        }
        writeCsv(out, t);
    }
    PipelineConfig cfg;
    cfg.inputs = {root_ / "listings.jsonl"};
    cfg.onProjection = true;
    cfg.covariates = root_ / "covariates.csv";
    cfg.outDir = root_ / "out";
    runPipeline(cfg);
    for (const char *o : {"betweenness", "closeness", "openness"}) {
        EXPECT_TRUE(fs::exists(root_ / "out" / ("regression_" + std::string(o) + ".tsv")));
        EXPECT_TRUE(fs::exists(root_ / "out" / ("regression_" + std::string(o) + ".txt")));
    }
}

TEST_F(PipelineTest, CliExitCodes) {
    const std::string example = kWorkedExample.string();
    const auto out = (root_ / "cli").string();
    EXPECT_EQ(runCli("pipeline --input " + example + " --component-restrict --out-dir " + out), 0);
    EXPECT_EQ(runCli("project --input " + example), 0);
    EXPECT_EQ(runCli("pipeline --input /nonexistent.jsonl --out-dir " + (root_ / "none").string()), 2);
    EXPECT_FALSE(fs::exists(root_ / "none") && fileCount(root_ / "none") > 0);
    EXPECT_EQ(runCli("pipeline --input " + example + " --out-dir " + (root_ / "bad").string()), 1);
    EXPECT_EQ(runCli("pipeline --input " + example + " --alpha -1 --out-dir " + (root_ / "neg").string()), 1);
    EXPECT_EQ(runCli("no-such-command"), 2);
    EXPECT_EQ(runCli("backbone --input " + example + " --significance 0.05"), 0);
}
