// tfssa: run, validate and report sparrow-search experiment campaigns.
//
//   tfssa run <config.json> [--jobs N] [--out DIR]
//   tfssa validate <config.json>
//   tfssa report <results_dir> --format {csv,json,markdown}
//
// Exit status: 0 success, 1 invalid configuration or arguments, 2 runtime failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tfssa/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

int cmd_validate(const std::string& path)
{
    const auto violations = tfssa::exp::validate_config(path);
    if (violations.empty()) {
        std::cout << path << ": ok\n";
        return kOk;
    }
    std::cerr << path << ": " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) std::cerr << "  - " << v << "\n";
    return kInvalid;
}

int cmd_run(const std::string& path, std::size_t jobs, const std::string& out)
{
    const auto parsed = tfssa::exp::load_config(path);
    if (!parsed.ok()) {
        std::cerr << path << ": " << parsed.violations.size() << " violation(s)\n";
        for (const auto& v : parsed.violations) std::cerr << "  - " << v << "\n";
        return kInvalid;
    }
    tfssa::exp::RunOptions opt;
    opt.jobs = jobs;
    if (!out.empty()) opt.output_dir = out;
    const auto sum = tfssa::exp::run_experiment(*parsed.config, opt);
    std::cout << "results: " << sum.output_dir.string() << "\n";
    if (!sum.tally_line.empty()) std::cout << sum.tally_line << "\n";
    if (!sum.failures.empty()) {
        std::cerr << sum.failed << " of " << sum.cells << " run(s) failed\n";
        for (const auto& f : sum.failures) std::cerr << "  - " << f << "\n";
        return kRuntime;
    }
    return kOk;
}

int cmd_report(const std::string& dir, const std::string& format)
{
    const auto rep = tfssa::exp::emit_report(dir, {format});
    for (const auto& f : rep.written) std::cout << "wrote " << f.string() << "\n";
    const std::string tally = tfssa::exp::tally_line(rep);
    if (!tally.empty()) std::cout << tally << "\n";
    if (!rep.errors.empty()) {
        for (const auto& e : rep.errors) std::cerr << "  - " << e << "\n";
        return kRuntime;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparrow-search experiment runner"};
    app.require_subcommand(1);

    std::string config, out, results, format = "markdown";
    std::size_t jobs = 1;

    auto* run = app.add_subcommand("run", "Execute every (method, problem, run) cell of a campaign");
    run->add_option("config", config, "Experiment configuration (JSON)")->required();
    run->add_option("--jobs,-j", jobs, "Concurrent run cells")->check(CLI::PositiveNumber);
    run->add_option("--out,-o", out, "Output directory (overrides TFSSA_OUTPUT_DIR and the config)");

    auto* validate = app.add_subcommand("validate", "Check a configuration and dry-run dataset headers");
    validate->add_option("config", config, "Experiment configuration (JSON)")->required();

    auto* report = app.add_subcommand("report", "Render tables from a results directory");
    report->add_option("results_dir", results, "Directory written by 'run'")->required();
    report->add_option("--format,-f", format, "Output format")->check(CLI::IsMember({"csv", "json", "markdown"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInvalid;
    }

    try {
        if (*run) return cmd_run(config, jobs, out);
        if (*validate) return cmd_validate(config);
        if (*report) return cmd_report(results, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kInvalid;
}
