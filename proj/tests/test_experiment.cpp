#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support/oracles.hpp"
#include "tfssa/experiment.hpp"

using namespace tfssa;
using nlohmann::json;
namespace fsys = std::filesystem;

namespace {

const std::string kData = TFSSA_DATA_DIR;
const std::string kCli = TFSSA_CLI_PATH;
const std::string kConfigs = TFSSA_CONFIG_DIR;

json small_benchmark(std::size_t runs = 3)
{
    return {{"mode", "benchmark"},
            {"runs", runs},
            {"master_seed", 5},
            {"budget", {{"max_iterations", 20}}},
            {"problems", json::array({{{"function", "sphere"}, {"dim", 4}}, {{"function", "rastrigin"}, {"dim", 4}}})},
            {"methods", json::array({{{"name", "SSA"}, {"variant", "ssa"}, {"n_sparrows", 10}},
                                     {{"name", "TFSSA"}, {"variant", "tfssa"}, {"n_sparrows", 10}}})},
            {"output_dir", "out"}};
}

exp::ExperimentConfig parse_ok(const json& j, const fsys::path& base)
{
    auto r = exp::parse_config(j, base);
    EXPECT_TRUE(r.ok()) << (r.violations.empty() ? "" : r.violations.front());
    return *r.config;
}

exp::RunOptions quiet(std::size_t jobs = 1)
{
    exp::RunOptions o;
    o.jobs = jobs;
    o.log = nullptr;
    return o;
}

int cli(const std::string& args)
{
    const int rc = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::size_t count_files(const fsys::path& dir, const std::string& ext)
{
    std::size_t n = 0;
    for (const auto& e : fsys::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext) ++n;
    return n;
}

bool contains(const std::vector<std::string>& v, const std::string& needle)
{
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Config, ShippedConfigsValidate)
{
    for (const char* name : {"benchmark_small.json", "cec_style.json", "feature_selection.json"}) {
        const auto v = exp::validate_config(fsys::path(kConfigs) / name);
        EXPECT_TRUE(v.empty()) << name << ": " << (v.empty() ? "" : v.front());
    }
}

TEST(Config, RunsZeroViolation)
{
    json j = small_benchmark();
    j["runs"] = 0;
    const auto r = exp::parse_config(j, ".");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(contains(r.violations, "runs >= 1"));
}

TEST(Config, FitnessWeightsViolation)
{
    json j = small_benchmark();
    j["mode"] = "feature_selection";
    j["problems"] = json::array({{{"name", "wine"}, {"path", kData + "/wine.csv"}, {"label_column", "class"}}});
    j["feature_selection"] = {{"lambda", 0.9}, {"mu", 0.2}};
    const auto r = exp::parse_config(j, ".");
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(contains(r.violations, "lambda + mu = 1"));
}

TEST(Config, CollectsEveryViolation)
{
    json j = small_benchmark();
    j["runs"] = 0;
    j["bogus"] = 1;
    j["methods"][0]["st"] = 0.1;
    j["problems"][0]["function"] = "nope";
    const auto r = exp::parse_config(j, ".");
    EXPECT_GE(r.violations.size(), 4u);
    EXPECT_TRUE(contains(r.violations, "bogus"));
    EXPECT_TRUE(contains(r.violations, "st must lie"));
    EXPECT_TRUE(contains(r.violations, "nope"));
}

TEST(Config, DryRunChecksDatasetHeaders)
{
    json j = small_benchmark();
    j["mode"] = "feature_selection";
    j["problems"] = json::array({{{"name", "wine"}, {"path", kData + "/wine.csv"}, {"label_column", "kind"}},
                                 {{"name", "gone"}, {"path", kData + "/missing.csv"}}});
    const auto r = exp::parse_config(j, ".");
    EXPECT_TRUE(contains(r.violations, "kind"));
    EXPECT_TRUE(contains(r.violations, "missing.csv"));
}

TEST(Config, BaselineChallengerDefaults)
{
    oracle::TempDir dir("defaults");
    const auto cfg = parse_ok(small_benchmark(), dir.path());
    EXPECT_EQ(cfg.baseline, "SSA");
    EXPECT_EQ(cfg.challenger, "TFSSA");
    EXPECT_EQ(cfg.output_dir, dir.path() / "out");
}

TEST(Config, EvaluationsPerDimScalesBudget)
{
    json j = small_benchmark();
    j["budget"] = {{"evaluations_per_dim", 1000}};
    const auto cfg = parse_ok(j, ".");
    const auto opt = cfg.optimizer_for(cfg.methods[0], 4);
    ASSERT_TRUE(opt.budget.max_evaluations);
    EXPECT_EQ(*opt.budget.max_evaluations, 4000u);
}

TEST(Experiment, BenchmarkCardinality)
{
    oracle::TempDir dir("bench");
    const auto cfg = parse_ok(small_benchmark(), dir.path());
    const auto sum = exp::run_experiment(cfg, quiet());
    EXPECT_EQ(sum.cells, 12u);
    EXPECT_TRUE(sum.failures.empty());
    const fsys::path out = dir / "out";
    std::size_t run_files = 0;
    for (const auto& e : fsys::recursive_directory_iterator(out / "runs"))
        if (e.path().filename().string().starts_with("run_") && e.path().extension() == ".json") ++run_files;
    EXPECT_EQ(run_files, 12u);
    std::size_t top_csv = 0;
    for (const auto& e : fsys::directory_iterator(out))
        if (e.path().extension() == ".csv") ++top_csv;
    EXPECT_EQ(top_csv, 1u);
    EXPECT_EQ(count_files(out / "convergence", ".csv"), 12u + 4u);  // per-run curves plus one mean per cell
    ASSERT_TRUE(fsys::exists(out / "summary.csv"));

    std::istringstream csv(oracle::read_text(out / "summary.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "problem,method,runs,failed,best,worst,mean,std,verdict,p_value");
    std::size_t lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    EXPECT_EQ(lines, 4u);
    EXPECT_TRUE(sum.tally);
    EXPECT_EQ(sum.tally->total(), 2u);
    EXPECT_NE(sum.tally_line.find("TFSSA vs SSA"), std::string::npos);

    const json rec = json::parse(oracle::read_text(out / "runs" / "TFSSA" / "sphere_D4" / "run_2.json"));
    EXPECT_EQ(rec.at("status"), "ok");
    EXPECT_EQ(rec.at("history").size(), 20u);
    EXPECT_EQ(rec.at("seed").get<std::uint64_t>(), cell_seed(5, "TFSSA", "sphere_D4", 2));
}

TEST(Experiment, SummaryByteIdenticalAcrossRunsAndJobs)
{
    oracle::TempDir a("det_a"), b("det_b");
    const auto ca = parse_ok(small_benchmark(), a.path());
    const auto cb = parse_ok(small_benchmark(), b.path());
    exp::run_experiment(ca, quiet(1));
    exp::run_experiment(cb, quiet(4));
    for (const char* f : {"summary.csv", "summary.json", "report.md"})
        EXPECT_EQ(oracle::read_text(a / "out" / f), oracle::read_text(b / "out" / f)) << f;
    EXPECT_EQ(oracle::read_text(a / "out" / "runs" / "SSA" / "rastrigin_D4" / "run_1.json"),
              oracle::read_text(b / "out" / "runs" / "SSA" / "rastrigin_D4" / "run_1.json"));
}

TEST(Experiment, AddingAMethodKeepsOtherSeeds)
{
    oracle::TempDir a("seed_a"), b("seed_b");
    json j = small_benchmark(2);
    exp::run_experiment(parse_ok(j, a.path()), quiet());
    j["methods"].push_back({{"name", "TFSSA-nolevy"}, {"variant", "tfssa"}, {"n_sparrows", 10},
                            {"strategies", {{"levy_flight", false}}}});
    j["challenger"] = "TFSSA";
    exp::run_experiment(parse_ok(j, b.path()), quiet());
    EXPECT_EQ(oracle::read_text(a / "out" / "runs" / "TFSSA" / "sphere_D4" / "run_1.json"),
              oracle::read_text(b / "out" / "runs" / "TFSSA" / "sphere_D4" / "run_1.json"));
}

TEST(Experiment, FeatureSelectionOnWine)
{
    oracle::TempDir dir("fs");
    json j = {{"mode", "feature_selection"},
              {"runs", 3},
              {"master_seed", 1},
              {"budget", {{"max_iterations", 10}}},
              {"problems", json::array({{{"name", "wine"}, {"path", kData + "/wine.csv"}, {"label_column", "class"}}})},
              {"methods", json::array({{{"name", "SSA"}, {"variant", "ssa"}}, {{"name", "TFSSA"}, {"variant", "tfssa"}}})},
              {"output_dir", "out"}};
    const auto cfg = parse_ok(j, dir.path());
    EXPECT_EQ(cfg.methods[1].optimizer.n_sparrows, 7u);
    const auto sum = exp::run_experiment(cfg, quiet(2));
    EXPECT_TRUE(sum.failures.empty());
    std::istringstream csv(oracle::read_text(dir / "out" / "summary.csv"));
    std::string header, row;
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_NE(header.find("accuracy_mean"), std::string::npos);
    EXPECT_NE(header.find("features_mean"), std::string::npos);
    EXPECT_TRUE(row.starts_with("wine,SSA,3,0,"));

    const json r0 = json::parse(oracle::read_text(dir / "out" / "runs" / "SSA" / "wine" / "run_0.json"));
    const json r1 = json::parse(oracle::read_text(dir / "out" / "runs" / "TFSSA" / "wine" / "run_0.json"));
    EXPECT_EQ(r0.at("fold_seed"), r1.at("fold_seed"));
    EXPECT_EQ(r0.at("n_features"), 13);
    EXPECT_EQ(r0.at("mask").get<std::string>().size(), 13u);
    EXPECT_TRUE(fsys::exists(dir / "out" / "datasets" / "wine.json"));
}

TEST(Experiment, FailedRunsIsolated)
{
    oracle::TempDir dir("fail");
    // Valid header, ragged body: passes the dry run, fails on load.
    oracle::write_text(dir / "broken.csv", "a,b,class\n1,2,0\n3,1\n");
    json j = {{"mode", "feature_selection"},
              {"runs", 3},
              {"master_seed", 1},
              {"budget", {{"max_iterations", 5}}},
              {"problems", json::array({{{"name", "wine"}, {"path", kData + "/wine.csv"}, {"label_column", "class"}},
                                        {{"name", "broken"}, {"path", "broken.csv"}, {"label_column", "class"}}})},
              {"methods", json::array({{{"name", "SSA"}, {"variant", "ssa"}}, {{"name", "TFSSA"}, {"variant", "tfssa"}}})},
              {"output_dir", "out"}};
    const auto cfg = parse_ok(j, dir.path());
    const auto sum = exp::run_experiment(cfg, quiet(3));
    EXPECT_EQ(sum.failed, 6u);
    const json ok = json::parse(oracle::read_text(dir / "out" / "runs" / "TFSSA" / "wine" / "run_2.json"));
    EXPECT_EQ(ok.at("status"), "ok");
    const json bad = json::parse(oracle::read_text(dir / "out" / "runs" / "TFSSA" / "broken" / "run_0.json"));
    EXPECT_EQ(bad.at("status"), "failed");
    EXPECT_NE(bad.at("error").get<std::string>().find("line 3"), std::string::npos);
    const std::string csv = oracle::read_text(dir / "out" / "summary.csv");
    EXPECT_NE(csv.find("broken,SSA,0,3"), std::string::npos);
    EXPECT_NE(csv.find("wine,TFSSA,3,0"), std::string::npos);
}

TEST(Report, FormatsFromExistingResults)
{
    oracle::TempDir dir("report");
    const auto cfg = parse_ok(small_benchmark(), dir.path());
    exp::RunOptions o = quiet();
    exp::run_experiment(cfg, o);
    const fsys::path out = dir / "out";
    fsys::remove(out / "summary.csv");
    fsys::remove(out / "report.md");

    const auto md = exp::emit_report(out, {"markdown"});
    EXPECT_TRUE(md.errors.empty());
    ASSERT_EQ(md.written.size(), 1u);
    const std::string text = oracle::read_text(out / "report.md");
    EXPECT_NE(text.find("| sphere_D4 |"), std::string::npos);
    EXPECT_NE(text.find("+/-/="), std::string::npos);
    EXPECT_FALSE(fsys::exists(out / "summary.csv"));

    exp::emit_report(out, {"json"});
    const json sj = json::parse(oracle::read_text(out / "summary.json"));
    const auto& c = sj.at("comparison").at(0);
    EXPECT_TRUE(c.contains("p_exact"));
    EXPECT_TRUE(c.contains("p_normal"));

    exp::emit_report(out, {"csv"});
    EXPECT_TRUE(fsys::exists(out / "summary.csv"));
}

TEST(Report, MissingDirectoryIsAnError)
{
    const auto rep = exp::emit_report("/nonexistent/tfssa", {"csv"});
    EXPECT_FALSE(rep.errors.empty());
}

TEST(Cli, ExitCodes)
{
    oracle::TempDir dir("cli");
    json good = small_benchmark(2);
    oracle::write_text(dir / "good.json", good.dump());
    json bad = good;
    bad["runs"] = 0;
    oracle::write_text(dir / "bad.json", bad.dump());
    oracle::write_text(dir / "junk.json", "{ not json");

    EXPECT_EQ(cli("validate " + (dir / "good.json").string()), 0);
    EXPECT_EQ(cli("validate " + (dir / "bad.json").string()), 1);
    EXPECT_EQ(cli("validate " + (dir / "junk.json").string()), 1);
    EXPECT_EQ(cli("run " + (dir / "bad.json").string()), 1);
    EXPECT_EQ(cli("frobnicate"), 1);
    EXPECT_EQ(cli("run " + (dir / "good.json").string() + " --jobs 2 --out " + (dir / "res").string()), 0);
    EXPECT_TRUE(fsys::exists(dir / "res" / "summary.csv"));
    EXPECT_EQ(cli("report " + (dir / "res").string() + " --format csv"), 0);
    EXPECT_EQ(cli("report " + (dir / "res").string() + " --format xml"), 1);
    EXPECT_EQ(cli("report " + (dir / "nowhere").string()), 2);
}

TEST(Cli, RuntimeFailureExitCode)
{
    oracle::TempDir dir("cli_fail");
    oracle::write_text(dir / "broken.csv", "a,b,class\n1,2,0\n3,1\n");
    json j = {{"mode", "feature_selection"},
              {"runs", 1},
              {"budget", {{"max_iterations", 3}}},
              {"problems", json::array({{{"name", "broken"}, {"path", "broken.csv"}, {"label_column", "class"}}})},
              {"methods", json::array({{{"name", "TFSSA"}, {"variant", "tfssa"}}})},
              {"output_dir", "out"}};
    oracle::write_text(dir / "c.json", j.dump());
    EXPECT_EQ(cli("run " + (dir / "c.json").string()), 2);
}

TEST(Cli, OutputDirectoryFromEnvironment)
{
    oracle::TempDir dir("cli_env");
    oracle::write_text(dir / "c.json", small_benchmark(1).dump());
    const std::string target = (dir / "from_env").string();
    const int rc = std::system(("TFSSA_OUTPUT_DIR=" + target + " " + kCli + " run " + (dir / "c.json").string() +
                                " >/dev/null 2>&1")
                                   .c_str());
    EXPECT_EQ(WEXITSTATUS(rc), 0);
    EXPECT_TRUE(fsys::exists(fsys::path(target) / "summary.csv"));
}
