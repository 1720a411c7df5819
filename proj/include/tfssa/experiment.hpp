/**
 * @file experiment.hpp
 *
 * Batch campaigns: JSON configuration, validation, seeded execution of every
 * (method, problem, run) cell, and report rendering from the run files on disk.
 *
 * Results layout:
 *   experiment.json                      resolved configuration
 *   metadata.json                        timestamps (the only non-deterministic file)
 *   runs/<method>/<problem>/run_<k>.json one record per cell
 *   convergence/<method>/<problem>/run_<k>.csv
 *   datasets/<problem>.json              preprocessing log
 *   summary.csv, summary.json, report.md
 */
#ifndef TFSSA_EXPERIMENT_HPP
#define TFSSA_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "tfssa/benchfn.hpp"
#include "tfssa/dataio.hpp"
#include "tfssa/evalstats.hpp"
#include "tfssa/featsel.hpp"
#include "tfssa/optimizer.hpp"

namespace tfssa::exp {

namespace fsys = std::filesystem;
using nlohmann::json;

enum class Mode { benchmark, feature_selection };

inline std::string to_string(Mode m) { return m == Mode::benchmark ? "benchmark" : "feature_selection"; }

struct FunctionProblem {
    std::string id;
    std::string family;
    std::size_t dim = 10;
    std::uint64_t seed = 0;
    std::optional<double> f_star;
};

struct DatasetProblem {
    std::string id;
    fsys::path path;
    std::string format = "csv";  ///< "csv" or "covid"
    data::CsvSchema schema;
    bool normalize = true;
};

struct MethodSpec {
    std::string name;
    OptimizerConfig optimizer;
};

struct ExperimentConfig {
    Mode mode = Mode::benchmark;
    std::size_t runs = 1;
    std::uint64_t master_seed = 0;
    std::size_t max_iterations = 100;
    std::optional<std::size_t> max_evaluations;
    std::optional<std::size_t> evaluations_per_dim;
    std::vector<FunctionProblem> functions;
    std::vector<DatasetProblem> datasets;
    std::vector<MethodSpec> methods;
    fs::FsConfig fs;
    std::string baseline;
    std::string challenger;
    fsys::path output_dir = "results";
    std::vector<std::string> report_formats{"csv", "json", "markdown"};
    json resolved;  ///< normalized form written to experiment.json

    std::vector<std::string> problem_ids() const
    {
        std::vector<std::string> ids;
        if (mode == Mode::benchmark)
            for (const auto& p : functions) ids.push_back(p.id);
        else
            for (const auto& p : datasets) ids.push_back(p.id);
        return ids;
    }

    /// Optimizer settings of `method` for a problem of dimension `dim`.
    OptimizerConfig optimizer_for(const MethodSpec& method, std::size_t dim) const
    {
        OptimizerConfig cfg = method.optimizer;
        cfg.budget.max_iterations = max_iterations;
        cfg.budget.max_evaluations = max_evaluations;
        if (evaluations_per_dim) cfg.budget.max_evaluations = *evaluations_per_dim * dim;
        return cfg;
    }
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> violations;
    bool ok() const noexcept { return config.has_value() && violations.empty(); }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool safe_name(const std::string& s)
{
    if (s.empty() || s == "." || s == "..") return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c == '.'; });
}

/// Typed field access that records a violation instead of throwing.
class Reader {
public:
    explicit Reader(std::vector<std::string>& out) : out_(out) {}

    void fail(const std::string& path, const std::string& msg) { out_.push_back(path + ": " + msg); }

    template <class T>
    std::optional<T> get(const json& obj, const std::string& key, const std::string& path)
    {
        if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        const std::string where = path.empty() ? key : path + "." + key;
        if constexpr (std::is_same_v<T, bool>) {
            if (v.is_boolean()) return v.get<bool>();
            fail(where, "expected a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (v.is_string()) return v.get<std::string>();
            fail(where, "expected a string");
        } else if constexpr (std::is_same_v<T, double>) {
            if (v.is_number()) return v.get<double>();
            fail(where, "expected a number");
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
            if (v.is_number_integer()) return v.get<std::int64_t>();
            fail(where, "expected an integer");
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            if (v.is_number_unsigned()) return v.get<std::uint64_t>();
            if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
            fail(where, "expected a non-negative integer");
        }
        return std::nullopt;
    }

    /// Non-negative count; negative values are reported against `min_desc`.
    std::optional<std::size_t> count(const json& obj, const std::string& key, const std::string& path)
    {
        if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
        const json& v = obj.at(key);
        const std::string where = path.empty() ? key : path + "." + key;
        if (!v.is_number_integer()) {
            fail(where, "expected an integer");
            return std::nullopt;
        }
        const auto i = v.get<std::int64_t>();
        if (i < 0) {
            fail(where, "must be >= 0");
            return std::nullopt;
        }
        return static_cast<std::size_t>(i);
    }

private:
    std::vector<std::string>& out_;
};

inline void parse_strategies(Reader& rd, const json& j, const std::string& path, Strategies& s)
{
    if (!j.is_object()) {
        rd.fail(path, "expected an object");
        return;
    }
    static const std::set<std::string> known{"tent_init", "adaptive_weight", "adaptive_patrollers", "levy_flight", "best_mutation"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) rd.fail(path + "." + k, "unknown strategy");
    if (auto v = rd.get<bool>(j, "tent_init", path)) s.tent_init = *v;
    if (auto v = rd.get<bool>(j, "adaptive_weight", path)) s.adaptive_weight = *v;
    if (auto v = rd.get<bool>(j, "adaptive_patrollers", path)) s.adaptive_patrollers = *v;
    if (auto v = rd.get<bool>(j, "levy_flight", path)) s.levy_flight = *v;
    if (auto v = rd.get<bool>(j, "best_mutation", path)) s.best_mutation = *v;
}

inline std::optional<MethodSpec> parse_method(Reader& rd, const json& j, const std::string& path, Mode mode)
{
    if (!j.is_object()) {
        rd.fail(path, "expected an object");
        return std::nullopt;
    }
    MethodSpec m;
    const auto name = rd.get<std::string>(j, "name", path);
    if (!name) {
        if (!j.contains("name")) rd.fail(path + ".name", "required");
        return std::nullopt;
    }
    m.name = *name;
    if (!safe_name(m.name)) rd.fail(path + ".name", "must use only letters, digits, '_', '-' or '.'");
    Variant variant = Variant::tfssa;
    if (auto v = rd.get<std::string>(j, "variant", path)) {
        try {
            variant = parse_variant(*v);
        } catch (const std::exception&) {
            rd.fail(path + ".variant", "must be \"ssa\" or \"tfssa\"");
        }
    }
    m.optimizer = mode == Mode::feature_selection ? fs::FsConfig::default_optimizer() : OptimizerConfig{};
    m.optimizer.variant = variant;
    if (auto v = rd.count(j, "n_sparrows", path)) m.optimizer.n_sparrows = *v;
    if (auto v = rd.get<double>(j, "pd_ratio", path)) m.optimizer.pd_ratio = *v;
    if (auto v = rd.get<double>(j, "sd_max_ratio", path)) m.optimizer.sd_max_ratio = *v;
    if (auto v = rd.get<double>(j, "sd_min_ratio", path)) m.optimizer.sd_min_ratio = *v;
    if (auto v = rd.get<double>(j, "st", path)) m.optimizer.st = *v;
    if (auto v = rd.get<double>(j, "w0", path)) m.optimizer.w0 = *v;
    if (auto v = rd.get<double>(j, "c", path)) m.optimizer.c = *v;
    if (auto v = rd.get<double>(j, "tent_a", path)) m.optimizer.tent.a = *v;
    if (auto v = rd.get<double>(j, "levy_alpha", path)) m.optimizer.levy.alpha = *v;
    if (j.contains("strategies")) {
        Strategies s = Strategies::of(variant);
        parse_strategies(rd, j.at("strategies"), path + ".strategies", s);
        m.optimizer.strategy_override = s;
    }
    return m;
}

inline json strategies_json(const Strategies& s)
{
    return {{"tent_init", s.tent_init},
            {"adaptive_weight", s.adaptive_weight},
            {"adaptive_patrollers", s.adaptive_patrollers},
            {"levy_flight", s.levy_flight},
            {"best_mutation", s.best_mutation}};
}

inline json method_json(const MethodSpec& m)
{
    const auto& o = m.optimizer;
    return {{"name", m.name},
            {"variant", tfssa::to_string(o.variant)},
            {"n_sparrows", o.n_sparrows},
            {"pd_ratio", o.pd_ratio},
            {"sd_max_ratio", o.sd_max_ratio},
            {"sd_min_ratio", o.sd_min_ratio},
            {"st", o.st},
            {"w0", o.w0},
            {"c", o.c},
            {"tent_a", o.tent.a},
            {"levy_alpha", o.levy.alpha},
            {"strategies", strategies_json(o.strategies())}};
}

inline std::optional<FunctionProblem> parse_function(Reader& rd, const json& j, const std::string& path,
                                                     std::uint64_t master_seed)
{
    if (!j.is_object()) {
        rd.fail(path, "expected an object");
        return std::nullopt;
    }
    FunctionProblem p;
    const auto fam = rd.get<std::string>(j, "function", path);
    if (!fam) {
        if (!j.contains("function")) rd.fail(path + ".function", "required");
        return std::nullopt;
    }
    try {
        p.family = std::string(bench::to_string(bench::parse_family(*fam)));
    } catch (const std::exception& e) {
        rd.fail(path + ".function", e.what());
        return std::nullopt;
    }
    if (auto v = rd.count(j, "dim", path)) p.dim = *v;
    if (p.dim < 2) rd.fail(path + ".dim", "must be >= 2");
    p.id = rd.get<std::string>(j, "name", path).value_or(p.family + "_D" + std::to_string(p.dim));
    if (!safe_name(p.id)) rd.fail(path + ".name", "must use only letters, digits, '_', '-' or '.'");
    p.seed = rd.get<std::uint64_t>(j, "seed", path).value_or(derive_seed(master_seed, "function:" + p.id));
    p.f_star = rd.get<double>(j, "f_star", path);
    return p;
}

inline std::optional<DatasetProblem> parse_dataset(Reader& rd, const json& j, const std::string& path, const fsys::path& base)
{
    if (!j.is_object()) {
        rd.fail(path, "expected an object");
        return std::nullopt;
    }
    DatasetProblem p;
    const auto file = rd.get<std::string>(j, "path", path);
    if (!file) {
        if (!j.contains("path")) rd.fail(path + ".path", "required");
        return std::nullopt;
    }
    p.path = fsys::path(*file).is_absolute() ? fsys::path(*file) : base / *file;
    p.id = rd.get<std::string>(j, "name", path).value_or(fsys::path(*file).stem().string());
    if (!safe_name(p.id)) rd.fail(path + ".name", "must use only letters, digits, '_', '-' or '.'");
    if (auto v = rd.get<std::string>(j, "format", path)) {
        if (*v != "csv" && *v != "covid") rd.fail(path + ".format", "must be \"csv\" or \"covid\"");
        p.format = *v;
    }
    if (j.contains("label_column")) {
        const json& lc = j.at("label_column");
        if (lc.is_string()) p.schema.label_column = lc.get<std::string>();
        else if (lc.is_number_integer()) p.schema.label_column = static_cast<long>(lc.get<std::int64_t>());
        else rd.fail(path + ".label_column", "expected a column name or index");
    }
    if (auto v = rd.get<std::string>(j, "delimiter", path)) {
        if (v->size() != 1) rd.fail(path + ".delimiter", "must be a single character");
        else p.schema.delimiter = (*v)[0];
    }
    if (auto v = rd.get<bool>(j, "normalize", path)) p.normalize = *v;
    if (j.contains("drop_columns")) {
        const json& dc = j.at("drop_columns");
        if (!dc.is_array()) rd.fail(path + ".drop_columns", "expected an array of column names");
        else
            for (const auto& c : dc) {
                if (c.is_string()) p.schema.drop_columns.push_back(c.get<std::string>());
                else rd.fail(path + ".drop_columns", "expected an array of column names");
            }
    }
    if (j.contains("missing_markers")) {
        const json& mm = j.at("missing_markers");
        if (!mm.is_array()) rd.fail(path + ".missing_markers", "expected an array of strings");
        else {
            p.schema.missing_markers.clear();
            for (const auto& c : mm)
                if (c.is_string()) p.schema.missing_markers.push_back(c.get<std::string>());
        }
    }
    return p;
}

inline json dataset_json(const DatasetProblem& p)
{
    json j{{"name", p.id}, {"path", p.path.string()}, {"format", p.format}, {"normalize", p.normalize},
           {"delimiter", std::string(1, p.schema.delimiter)}, {"drop_columns", p.schema.drop_columns},
           {"missing_markers", p.schema.missing_markers}};
    std::visit([&](const auto& v) { j["label_column"] = v; }, p.schema.label_column);
    return j;
}

/// Checks that the dataset header can be read and the label column resolves.
inline void dry_run_dataset(Reader& rd, const DatasetProblem& p, const std::string& path)
{
    std::error_code ec;
    if (!fsys::is_regular_file(p.path, ec)) {
        rd.fail(path + ".path", "file not found: " + p.path.string());
        return;
    }
    try {
        const auto header = data::read_header(p.path.string(), p.schema.delimiter);
        if (p.format == "csv") {
            (void)data::detail::resolve_column(header, p.schema.label_column);
            for (const auto& c : p.schema.drop_columns)
                if (std::find(header.begin(), header.end(), c) == header.end())
                    rd.fail(path + ".drop_columns", "unknown column '" + c + "'");
        }
    } catch (const std::exception& e) {
        rd.fail(path, e.what());
    }
}

}  // namespace detail

/// Builds a configuration from a parsed JSON document. Relative dataset and
/// output paths resolve against `base_dir`. All violations are collected.
inline ConfigResult parse_config(const json& j, const fsys::path& base_dir, bool dry_run = true)
{
    ConfigResult res;
    auto& v = res.violations;
    detail::Reader rd(v);
    if (!j.is_object()) {
        v.emplace_back("config: expected a JSON object");
        return res;
    }
    static const std::set<std::string> known{"mode", "runs", "master_seed", "budget", "problems", "methods",
                                             "feature_selection", "baseline", "challenger", "output_dir",
                                             "report_formats", "description"};
    for (const auto& [k, val] : j.items())
        if (!known.count(k)) rd.fail(k, "unknown field");

    ExperimentConfig cfg;
    if (auto m = rd.get<std::string>(j, "mode", "")) {
        if (*m == "benchmark") cfg.mode = Mode::benchmark;
        else if (*m == "feature_selection") cfg.mode = Mode::feature_selection;
        else rd.fail("mode", "must be \"benchmark\" or \"feature_selection\"");
    } else if (!j.contains("mode")) {
        rd.fail("mode", "required");
    }
    if (j.contains("runs")) {
        if (auto r = rd.count(j, "runs", "")) cfg.runs = *r;
        if (cfg.runs < 1) v.emplace_back("runs: runs >= 1 required");
    } else {
        v.emplace_back("runs: required (runs >= 1)");
    }
    cfg.master_seed = rd.get<std::uint64_t>(j, "master_seed", "").value_or(0);

    if (j.contains("budget")) {
        const json& b = j.at("budget");
        if (!b.is_object()) rd.fail("budget", "expected an object");
        if (auto x = rd.count(b, "max_iterations", "budget")) cfg.max_iterations = *x;
        cfg.max_evaluations = rd.count(b, "max_evaluations", "budget");
        cfg.evaluations_per_dim = rd.count(b, "evaluations_per_dim", "budget");
        if (cfg.max_iterations < 1) v.emplace_back("budget.max_iterations: must be >= 1");
        if (cfg.max_evaluations && cfg.evaluations_per_dim)
            v.emplace_back("budget: give max_evaluations or evaluations_per_dim, not both");
    }

    if (j.contains("feature_selection")) {
        const json& f = j.at("feature_selection");
        const std::string p = "feature_selection";
        if (!f.is_object()) rd.fail(p, "expected an object");
        if (auto x = rd.get<double>(f, "lambda", p)) cfg.fs.lambda = *x;
        if (auto x = rd.get<double>(f, "mu", p)) cfg.fs.mu = *x;
        if (auto x = rd.count(f, "k_neighbors", p)) cfg.fs.k_neighbors = *x;
        if (auto x = rd.count(f, "k_folds", p)) cfg.fs.k_folds = *x;
        if (auto x = rd.get<double>(f, "threshold", p)) cfg.fs.threshold = *x;
        cfg.fs.fold_seed = rd.get<std::uint64_t>(f, "fold_seed", p);
    }
    if (cfg.mode == Mode::feature_selection) {
        fs::FsConfig probe = cfg.fs;
        probe.optimizer = fs::FsConfig::default_optimizer();
        for (const auto& s : probe.violations()) v.push_back("feature_selection: " + s);
    }

    if (!j.contains("problems") || !j.at("problems").is_array() || j.at("problems").empty()) {
        v.emplace_back("problems: at least one problem is required");
    } else {
        const json& probs = j.at("problems");
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const std::string path = "problems[" + std::to_string(i) + "]";
            if (cfg.mode == Mode::benchmark) {
                if (auto p = detail::parse_function(rd, probs[i], path, cfg.master_seed)) cfg.functions.push_back(*p);
            } else if (auto p = detail::parse_dataset(rd, probs[i], path, base_dir)) {
                if (dry_run) detail::dry_run_dataset(rd, *p, path);
                cfg.datasets.push_back(*p);
            }
        }
    }
    {
        std::set<std::string> seen;
        for (const auto& id : cfg.problem_ids())
            if (!seen.insert(id).second) v.push_back("problems: duplicate problem name '" + id + "'");
    }

    if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty()) {
        v.emplace_back("methods: at least one method is required");
    } else {
        const json& ms = j.at("methods");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string path = "methods[" + std::to_string(i) + "]";
            auto m = detail::parse_method(rd, ms[i], path, cfg.mode);
            if (!m) continue;
            if (!seen.insert(m->name).second) v.push_back(path + ".name: duplicate method name '" + m->name + "'");
            cfg.methods.push_back(*m);
        }
    }

    // Optimizer invariants for every (method, problem dimension) pairing.
    {
        std::set<std::string> reported;
        std::vector<std::size_t> dims;
        if (cfg.mode == Mode::benchmark)
            for (const auto& p : cfg.functions) dims.push_back(p.dim);
        else if (!cfg.evaluations_per_dim)
            dims.push_back(1);
        for (std::size_t i = 0; i < cfg.methods.size(); ++i)
            for (std::size_t d : dims)
                for (const auto& s : cfg.optimizer_for(cfg.methods[i], d).violations()) {
                    const std::string msg = "methods[" + std::to_string(i) + "] (" + cfg.methods[i].name + "): " + s;
                    if (reported.insert(msg).second) v.push_back(msg);
                }
    }

    auto has_method = [&](const std::string& n) {
        return std::any_of(cfg.methods.begin(), cfg.methods.end(), [&](const MethodSpec& m) { return m.name == n; });
    };
    if (auto b = rd.get<std::string>(j, "baseline", "")) {
        cfg.baseline = *b;
        if (!has_method(*b)) rd.fail("baseline", "no method named '" + *b + "'");
    } else if (cfg.methods.size() >= 2) {
        cfg.baseline = cfg.methods.front().name;
    }
    if (auto c = rd.get<std::string>(j, "challenger", "")) {
        cfg.challenger = *c;
        if (!has_method(*c)) rd.fail("challenger", "no method named '" + *c + "'");
    } else if (cfg.methods.size() >= 2) {
        cfg.challenger = cfg.methods.back().name;
    }
    if (!cfg.baseline.empty() && cfg.baseline == cfg.challenger) v.emplace_back("challenger: must differ from baseline");

    if (auto o = rd.get<std::string>(j, "output_dir", "")) cfg.output_dir = *o;
    if (cfg.output_dir.is_relative()) cfg.output_dir = base_dir / cfg.output_dir;
    if (j.contains("report_formats")) {
        const json& rf = j.at("report_formats");
        cfg.report_formats.clear();
        if (!rf.is_array()) rd.fail("report_formats", "expected an array");
        else
            for (const auto& f : rf) {
                const std::string s = f.is_string() ? f.get<std::string>() : "";
                if (s != "csv" && s != "json" && s != "markdown") rd.fail("report_formats", "unknown format '" + f.dump() + "'");
                else cfg.report_formats.push_back(s);
            }
    }

    json resolved{{"mode", to_string(cfg.mode)},
                  {"runs", cfg.runs},
                  {"master_seed", cfg.master_seed},
                  {"budget", {{"max_iterations", cfg.max_iterations}}},
                  {"baseline", cfg.baseline},
                  {"challenger", cfg.challenger},
                  {"report_formats", cfg.report_formats}};
    if (cfg.max_evaluations) resolved["budget"]["max_evaluations"] = *cfg.max_evaluations;
    if (cfg.evaluations_per_dim) resolved["budget"]["evaluations_per_dim"] = *cfg.evaluations_per_dim;
    resolved["methods"] = json::array();
    for (const auto& m : cfg.methods) resolved["methods"].push_back(detail::method_json(m));
    resolved["problems"] = json::array();
    for (const auto& p : cfg.functions) {
        json pj{{"name", p.id}, {"function", p.family}, {"dim", p.dim}, {"seed", p.seed}};
        if (p.f_star) pj["f_star"] = *p.f_star;
        resolved["problems"].push_back(pj);
    }
    for (const auto& p : cfg.datasets) resolved["problems"].push_back(detail::dataset_json(p));
    if (cfg.mode == Mode::feature_selection) {
        resolved["feature_selection"] = {{"lambda", cfg.fs.lambda},
                                         {"mu", cfg.fs.mu},
                                         {"k_neighbors", cfg.fs.k_neighbors},
                                         {"k_folds", cfg.fs.k_folds},
                                         {"threshold", cfg.fs.threshold}};
        if (cfg.fs.fold_seed) resolved["feature_selection"]["fold_seed"] = *cfg.fs.fold_seed;
    }
    cfg.resolved = std::move(resolved);
    res.config = std::move(cfg);
    return res;
}

/// Reads and parses a configuration file.
inline ConfigResult load_config(const fsys::path& path, bool dry_run = true)
{
    ConfigResult res;
    std::ifstream in(path);
    if (!in) {
        res.violations.push_back("config: cannot open '" + path.string() + "'");
        return res;
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        res.violations.push_back(std::string("config: invalid JSON: ") + e.what());
        return res;
    }
    const fsys::path base = fsys::absolute(path).parent_path();
    return parse_config(j, base, dry_run);
}

/// All violations of the configuration at `path`; empty means valid.
inline std::vector<std::string> validate_config(const fsys::path& path) { return load_config(path, true).violations; }

// ---------------------------------------------------------------------------
// File helpers

namespace detail {

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const fsys::path& path, const std::string& content)
{
    fsys::create_directories(path.parent_path());
    fsys::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fsys::rename(tmp, path);
}

inline std::string num(double x) { return fmt::format("{}", x); }

inline std::string fixed(double x, int digits = 4) { return fmt::format("{:.{}g}", x, digits); }

inline std::string utc_now()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline fsys::path run_file(const fsys::path& root, const std::string& method, const std::string& problem, std::size_t k)
{
    return root / "runs" / method / problem / ("run_" + std::to_string(k) + ".json");
}

inline fsys::path convergence_file(const fsys::path& root, const std::string& method, const std::string& problem, std::size_t k)
{
    return root / "convergence" / method / problem / ("run_" + std::to_string(k) + ".csv");
}

inline std::string convergence_csv(const RunRecord& rec)
{
    std::string out = "iteration,evaluations,best_fitness\n";
    for (std::size_t t = 0; t < rec.history.size(); ++t)
        out += fmt::format("{},{},{}\n", t, rec.history_evals[t], num(rec.history[t]));
    return out;
}

inline json record_json(const RunRecord& rec)
{
    return {{"best_fitness", rec.best_fitness}, {"best_position", rec.best_position}, {"iterations", rec.iterations},
            {"evals_used", rec.evals_used},     {"history", rec.history},             {"history_evals", rec.history_evals}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Execution

struct RunOptions {
    std::size_t jobs = 1;
    std::optional<fsys::path> output_dir;  ///< overrides config and environment
    std::ostream* log = &std::cerr;
};

struct RunSummary {
    fsys::path output_dir;
    std::size_t cells = 0;
    std::size_t failed = 0;
    std::vector<std::string> failures;
    std::optional<stats::Tally> tally;
    std::string tally_line;
};

/// Output directory after applying the --out > TFSSA_OUTPUT_DIR > config precedence.
inline fsys::path resolve_output_dir(const ExperimentConfig& cfg, const std::optional<fsys::path>& cli_out)
{
    if (cli_out) return *cli_out;
    if (const char* env = std::getenv("TFSSA_OUTPUT_DIR"); env && *env) return fsys::path(env);
    return cfg.output_dir;
}

/// Loads one dataset problem the way the runner does.
inline data::Dataset load_dataset(const DatasetProblem& p)
{
    data::Dataset ds = p.format == "covid" ? data::covid_preprocess(p.path.string(), p.schema)
                                           : data::load_csv(p.path.string(), p.schema);
    if (p.normalize) ds = data::normalize_minmax(std::move(ds));
    return ds;
}

namespace detail {

struct Cell {
    std::size_t method = 0;
    std::size_t problem = 0;
    std::size_t run = 0;
};

inline json run_benchmark_cell(const ExperimentConfig& cfg, const MethodSpec& method, const FunctionProblem& p,
                               std::uint64_t seed, std::string& convergence)
{
    auto fn = bench::make_function(p.family, p.dim, p.seed);
    if (p.f_star) {
        bench::FunctionSpec spec = fn.spec();
        spec.f_star = *p.f_star;
        fn = bench::BenchmarkFunction(std::move(spec));
    }
    const RunRecord rec = run(fn, cfg.optimizer_for(method, p.dim), seed);
    convergence = convergence_csv(rec);
    json j = record_json(rec);
    j["f_star"] = fn.f_star();
    j["error"] = rec.best_fitness - fn.f_star();
    return j;
}

inline json run_fs_cell(const ExperimentConfig& cfg, const MethodSpec& method, const DatasetProblem& p,
                        const data::Dataset& ds, std::size_t run_index, std::uint64_t seed, std::string& convergence)
{
    fs::FsConfig fsc = cfg.fs;
    fsc.optimizer = cfg.optimizer_for(method, ds.cols());
    // Folds depend on problem and run only, so methods are compared on equal splits.
    fsc.fold_seed = cfg.fs.fold_seed.value_or(cell_seed(cfg.master_seed, "folds", p.id, run_index));
    const fs::FsResult r = fs::run_feature_selection(ds, fsc, seed);
    convergence = convergence_csv(r.record);
    json j = record_json(r.record);
    j["best_fitness"] = r.fitness;
    j["accuracy"] = r.accuracy;
    j["correct"] = r.correct;
    j["total"] = r.total;
    j["n_selected"] = r.n_selected;
    j["n_features"] = ds.cols();
    j["mask"] = r.mask.key();
    j["selected_features"] = r.selected_names;
    j["fold_seed"] = r.fold_seed;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reporting

struct LoadedResults {
    json experiment;
    std::vector<std::string> methods;
    std::vector<std::string> problems;
    std::vector<stats::RunBatch> batches;  ///< method-major, successful runs only
    std::map<std::pair<std::string, std::string>, std::size_t> failed_runs;
    std::map<std::pair<std::string, std::string>, std::vector<std::vector<double>>> histories;
    std::vector<std::string> errors;  ///< missing or corrupt files
};

/// Reads every run file named by experiment.json.
inline LoadedResults load_results(const fsys::path& dir)
{
    LoadedResults out;
    {
        std::ifstream in(dir / "experiment.json");
        if (!in) {
            out.errors.push_back("missing " + (dir / "experiment.json").string());
            return out;
        }
        try {
            out.experiment = json::parse(in);
        } catch (const std::exception& e) {
            out.errors.push_back("corrupt " + (dir / "experiment.json").string() + ": " + e.what());
            return out;
        }
    }
    try {
        for (const auto& m : out.experiment.at("methods")) out.methods.push_back(m.at("name").get<std::string>());
        for (const auto& p : out.experiment.at("problems")) out.problems.push_back(p.at("name").get<std::string>());
    } catch (const std::exception& e) {
        out.errors.push_back("corrupt " + (dir / "experiment.json").string() + ": " + e.what());
        return out;
    }
    const std::size_t runs = out.experiment.value("runs", std::size_t{0});
    for (const auto& m : out.methods)
        for (const auto& p : out.problems) {
            stats::RunBatch b;
            b.method = m;
            b.problem = p;
            auto& hist = out.histories[{m, p}];
            for (std::size_t k = 0; k < runs; ++k) {
                const fsys::path f = detail::run_file(dir, m, p, k);
                std::ifstream in(f);
                if (!in) {
                    out.errors.push_back("missing " + f.string());
                    continue;
                }
                try {
                    const json r = json::parse(in);
                    if (r.at("status").get<std::string>() != "ok") {
                        ++out.failed_runs[{m, p}];
                        continue;
                    }
                    b.fitness.push_back(r.at("best_fitness").get<double>());
                    if (r.contains("accuracy")) {
                        b.accuracy.push_back(r.at("accuracy").get<double>());
                        b.selected.push_back(r.at("n_selected").get<std::size_t>());
                        b.n_features = r.at("n_features").get<std::size_t>();
                    }
                    hist.push_back(r.at("history").get<std::vector<double>>());
                } catch (const std::exception& e) {
                    out.errors.push_back("corrupt " + f.string() + ": " + e.what());
                }
            }
            out.batches.push_back(std::move(b));
        }
    return out;
}

struct ReportResult {
    std::vector<fsys::path> written;
    std::vector<std::string> errors;
    std::optional<stats::ComparisonTable> comparison;
};

namespace detail {

inline std::optional<double> mean_of(const std::vector<double>& v)
{
    if (v.empty()) return std::nullopt;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline std::optional<double> std_of(const std::vector<double>& v)
{
    if (v.size() < 2) return std::nullopt;
    return stats::sample_std(v);
}

inline std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : ""; }

inline json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

inline std::vector<double> as_doubles(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

inline std::string method_label(stats::PMethod m) { return m == stats::PMethod::exact ? "exact" : "normal"; }

/// Element-wise mean of the per-run histories, truncated to the shortest run.
inline std::vector<double> mean_curve(const std::vector<std::vector<double>>& hs)
{
    if (hs.empty()) return {};
    std::size_t len = hs.front().size();
    for (const auto& h : hs) len = std::min(len, h.size());
    std::vector<double> out(len, 0.0);
    for (const auto& h : hs)
        for (std::size_t t = 0; t < len; ++t) out[t] += h[t];
    for (auto& x : out) x /= static_cast<double>(hs.size());
    return out;
}

}  // namespace detail

/// Renders summary tables from the run files under `results_dir`.
inline ReportResult emit_report(const fsys::path& results_dir, const std::vector<std::string>& formats)
{
    ReportResult rep;
    LoadedResults res = load_results(results_dir);
    rep.errors = res.errors;
    if (res.methods.empty()) return rep;
    const bool fs_mode = res.experiment.value("mode", "") == "feature_selection";
    const std::string baseline = res.experiment.value("baseline", "");
    const std::string challenger = res.experiment.value("challenger", "");

    std::map<std::string, char> verdicts;
    std::map<std::string, const stats::ComparisonRow*> comp_rows;
    if (!baseline.empty() && !challenger.empty()) {
        std::vector<stats::RunBatch> usable;
        bool complete = true;
        for (const auto& b : res.batches) {
            if (b.method != baseline && b.method != challenger) continue;
            if (b.fitness.empty()) complete = false;
            usable.push_back(b);
        }
        if (complete) {
            try {
                rep.comparison = stats::build_comparison_table(usable, baseline, challenger);
                for (const auto& row : rep.comparison->rows) {
                    verdicts[row.problem] = row.verdict;
                    comp_rows[row.problem] = &row;
                }
            } catch (const std::exception& e) {
                rep.errors.push_back(std::string("comparison skipped: ") + e.what());
            }
        } else {
            rep.errors.emplace_back("comparison skipped: a baseline or challenger batch has no successful runs");
        }
    }

    auto has = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

    struct Row {
        const stats::RunBatch* batch;
        std::size_t failed;
        std::optional<stats::Summary> fit;
    };
    std::vector<Row> rows;
    for (const auto& b : res.batches) {
        Row r{&b, 0, std::nullopt};
        if (auto it = res.failed_runs.find({b.method, b.problem}); it != res.failed_runs.end()) r.failed = it->second;
        if (!b.fitness.empty()) r.fit = stats::summarize(b.fitness, false);
        rows.push_back(r);
    }
    // Problem-major ordering for the tables.
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
        auto pa = std::find(res.problems.begin(), res.problems.end(), a.batch->problem) - res.problems.begin();
        auto pb = std::find(res.problems.begin(), res.problems.end(), b.batch->problem) - res.problems.begin();
        return pa < pb;
    });

    auto verdict_for = [&](const stats::RunBatch& b) -> std::string {
        if (b.method != challenger) return "";
        auto it = verdicts.find(b.problem);
        return it == verdicts.end() ? "" : std::string(1, it->second);
    };
    auto p_for = [&](const stats::RunBatch& b) -> std::string {
        if (b.method != challenger) return "";
        auto it = comp_rows.find(b.problem);
        return it == comp_rows.end() || !it->second->test ? "" : detail::num(it->second->test->p_value);
    };

    if (has("csv")) {
        std::string csv = "problem,method,runs,failed,best,worst,mean,std";
        if (fs_mode) csv += ",accuracy_mean,accuracy_std,features_mean,features_ratio";
        csv += ",verdict,p_value\n";
        for (const auto& r : rows) {
            const auto& b = *r.batch;
            csv += fmt::format("{},{},{},{}", b.problem, b.method, b.fitness.size(), r.failed);
            if (r.fit) csv += fmt::format(",{},{},{},{}", detail::num(r.fit->best), detail::num(r.fit->worst),
                                          detail::num(r.fit->mean), detail::opt_num(r.fit->std));
            else csv += ",,,,";
            if (fs_mode) {
                std::string fm, fr;
                if (!b.selected.empty() && b.n_features > 0) {
                    const auto sz = stats::avg_selection_size(b.selected, b.n_features);
                    fm = detail::num(sz.avg_count);
                    fr = detail::num(sz.avg_ratio);
                }
                csv += fmt::format(",{},{},{},{}", detail::opt_num(detail::mean_of(b.accuracy)),
                                   detail::opt_num(detail::std_of(b.accuracy)), fm, fr);
            }
            csv += fmt::format(",{},{}\n", verdict_for(b), p_for(b));
        }
        detail::write_file_atomic(results_dir / "summary.csv", csv);
        rep.written.push_back(results_dir / "summary.csv");

        for (const auto& [key, hs] : res.histories) {
            const auto curve = detail::mean_curve(hs);
            if (curve.empty()) continue;
            std::string out = "iteration,mean_best_fitness\n";
            for (std::size_t t = 0; t < curve.size(); ++t) out += fmt::format("{},{}\n", t, detail::num(curve[t]));
            const fsys::path f = results_dir / "convergence" / key.first / key.second / "mean.csv";
            detail::write_file_atomic(f, out);
        }
    }

    if (has("json")) {
        json j{{"mode", fs_mode ? "feature_selection" : "benchmark"}, {"baseline", baseline}, {"challenger", challenger}};
        j["rows"] = json::array();
        for (const auto& r : rows) {
            const auto& b = *r.batch;
            json row{{"problem", b.problem}, {"method", b.method}, {"runs", b.fitness.size()}, {"failed", r.failed}};
            if (r.fit)
                row["fitness"] = {{"best", r.fit->best}, {"worst", r.fit->worst}, {"mean", r.fit->mean},
                                  {"std", detail::opt_json(r.fit->std)}};
            if (fs_mode && !b.accuracy.empty()) {
                const auto sz = stats::avg_selection_size(b.selected, b.n_features);
                row["accuracy"] = {{"mean", detail::opt_json(detail::mean_of(b.accuracy))},
                                   {"std", detail::opt_json(detail::std_of(b.accuracy))}};
                row["features"] = {{"mean", sz.avg_count},
                                   {"ratio", sz.avg_ratio},
                                   {"std", detail::opt_json(detail::std_of(detail::as_doubles(b.selected)))},
                                   {"total", b.n_features}};
            }
            j["rows"].push_back(row);
        }
        if (rep.comparison) {
            j["comparison"] = json::array();
            for (const auto& row : rep.comparison->rows) {
                json c{{"problem", row.problem}, {"verdict", std::string(1, row.verdict)}};
                if (row.test) {
                    const auto& t = *row.test;
                    c["statistic"] = t.statistic;
                    c["p_value"] = t.p_value;
                    c["p_method"] = detail::method_label(t.method);
                    c["p_exact"] = detail::opt_json(t.p_exact);
                    c["p_normal"] = t.p_normal;
                    c["one_sided"] = {{"exact_less", detail::opt_json(t.p_exact_less)},
                                      {"exact_greater", detail::opt_json(t.p_exact_greater)},
                                      {"normal_less", t.p_normal_less},
                                      {"normal_greater", t.p_normal_greater}};
                }
                j["comparison"].push_back(c);
            }
            const auto& t = rep.comparison->tally;
            j["tally"] = {{"wins", t.wins}, {"losses", t.losses}, {"ties", t.ties}, {"summary", t.str()}};
        }
        if (!rep.errors.empty()) j["errors"] = rep.errors;
        detail::write_file_atomic(results_dir / "summary.json", j.dump(2) + "\n");
        rep.written.push_back(results_dir / "summary.json");
    }

    if (has("markdown")) {
        auto find_batch = [&](const std::string& m, const std::string& p) -> const Row* {
            for (const auto& r : rows)
                if (r.batch->method == m && r.batch->problem == p) return &r;
            return nullptr;
        };
        auto header = [&](std::string first) {
            std::string h = "| " + first + " |", sep = "|---|";
            for (const auto& m : res.methods) {
                h += " " + m + " |";
                sep += "---|";
            }
            return h + "\n" + sep + "\n";
        };
        std::string md = fmt::format("# Results: {}\n\n", fs_mode ? "feature selection" : "benchmark");
        md += fmt::format("Runs per cell: {}. Master seed: {}.\n\n", res.experiment.value("runs", 0),
                          res.experiment.value("master_seed", std::uint64_t{0}));

        md += "## Fitness: mean (std)\n\n" + header("Problem");
        for (const auto& p : res.problems) {
            md += "| " + p + " |";
            for (const auto& m : res.methods) {
                const Row* r = find_batch(m, p);
                std::string cell = "n/a";
                if (r && r->fit) {
                    cell = detail::fixed(r->fit->mean, 6) + " (" + (r->fit->std ? detail::fixed(*r->fit->std, 3) : "-") + ")";
                    if (m == challenger && verdicts.count(p)) cell += " " + std::string(1, verdicts[p]);
                }
                md += " " + cell + " |";
            }
            md += "\n";
        }
        if (rep.comparison) {
            md += "| +/-/= |";
            for (const auto& m : res.methods) md += " " + (m == challenger ? rep.comparison->tally.str() : std::string("")) + " |";
            md += "\n";
        }

        md += "\n## Fitness: best / worst\n\n" + header("Problem");
        for (const auto& p : res.problems) {
            md += "| " + p + " |";
            for (const auto& m : res.methods) {
                const Row* r = find_batch(m, p);
                md += " " + (r && r->fit ? detail::fixed(r->fit->best, 6) + " / " + detail::fixed(r->fit->worst, 6) : "n/a") + " |";
            }
            md += "\n";
        }

        if (fs_mode) {
            md += "\n## Classification accuracy: mean (std)\n\n" + header("Dataset");
            for (const auto& p : res.problems) {
                md += "| " + p + " |";
                for (const auto& m : res.methods) {
                    const Row* r = find_batch(m, p);
                    std::string cell = "n/a";
                    if (r && !r->batch->accuracy.empty()) {
                        const auto sd = detail::std_of(r->batch->accuracy);
                        cell = detail::fixed(*detail::mean_of(r->batch->accuracy), 4) + " (" +
                               (sd ? detail::fixed(*sd, 3) : "-") + ")";
                    }
                    md += " " + cell + " |";
                }
                md += "\n";
            }
            md += "\n## Selected features: mean (ratio)\n\n" + header("Dataset");
            for (const auto& p : res.problems) {
                md += "| " + p + " |";
                for (const auto& m : res.methods) {
                    const Row* r = find_batch(m, p);
                    std::string cell = "n/a";
                    if (r && !r->batch->selected.empty()) {
                        const auto sz = stats::avg_selection_size(r->batch->selected, r->batch->n_features);
                        cell = detail::fixed(sz.avg_count, 4) + " (" + detail::fixed(sz.avg_ratio, 3) + ")";
                    }
                    md += " " + cell + " |";
                }
                md += "\n";
            }
        }

        if (rep.comparison) {
            md += fmt::format("\n## Wilcoxon rank-sum: {} vs {}\n\n", challenger, baseline);
            md += "| Problem | rank sum | p (two-sided) | method | p exact | p normal | verdict |\n";
            md += "|---|---|---|---|---|---|---|\n";
            for (const auto& row : rep.comparison->rows) {
                if (!row.test) {
                    md += fmt::format("| {} | - | - | - | - | - | {} |\n", row.problem, row.verdict);
                    continue;
                }
                const auto& t = *row.test;
                md += fmt::format("| {} | {} | {} | {} | {} | {} | {} |\n", row.problem, detail::fixed(t.statistic, 6),
                                  detail::fixed(t.p_value, 4), detail::method_label(t.method),
                                  t.p_exact ? detail::fixed(*t.p_exact, 4) : "-", detail::fixed(t.p_normal, 4), row.verdict);
            }
            md += fmt::format("\nTally (+/-/=): {}\n", rep.comparison->tally.str());
        }
        md += "\nConvergence curves: `convergence/<method>/<problem>/`.\n";
        if (!rep.errors.empty()) {
            md += "\n## Problems\n\n";
            for (const auto& e : rep.errors) md += "- " + e + "\n";
        }
        detail::write_file_atomic(results_dir / "report.md", md);
        rep.written.push_back(results_dir / "report.md");
    }
    return rep;
}

/// "<challenger> vs <baseline>: +/-/= w/l/t" for the console.
inline std::string tally_line(const ReportResult& rep)
{
    if (!rep.comparison) return "";
    return fmt::format("{} vs {}: +/-/= {}", rep.comparison->challenger, rep.comparison->baseline,
                       rep.comparison->tally.str());
}

/**
 * Executes every (method, problem, run) cell and writes the results tree.
 * A failing cell is recorded with its cause and never stops its siblings.
 */
inline RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {})
{
    RunSummary sum;
    sum.output_dir = resolve_output_dir(cfg, opt.output_dir);
    const fsys::path root = sum.output_dir;
    fsys::create_directories(root);
    const std::string started = detail::utc_now();
    detail::write_file_atomic(root / "experiment.json", cfg.resolved.dump(2) + "\n");

    const auto pids = cfg.problem_ids();
    std::vector<std::shared_ptr<const data::Dataset>> datasets(pids.size());
    std::vector<std::string> load_errors(pids.size());
    if (cfg.mode == Mode::feature_selection) {
        for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
            try {
                auto ds = std::make_shared<data::Dataset>(load_dataset(cfg.datasets[i]));
                json log{{"name", cfg.datasets[i].id},
                         {"source", cfg.datasets[i].path.string()},
                         {"rows", ds->rows()},
                         {"features", ds->feature_names},
                         {"classes", ds->class_names},
                         {"transforms", ds->transform_log}};
                detail::write_file_atomic(root / "datasets" / (cfg.datasets[i].id + ".json"), log.dump(2) + "\n");
                datasets[i] = std::move(ds);
            } catch (const std::exception& e) {
                load_errors[i] = std::string("dataset load failed: ") + e.what();
            }
        }
    }

    std::vector<detail::Cell> cells;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
        for (std::size_t p = 0; p < pids.size(); ++p)
            for (std::size_t k = 0; k < cfg.runs; ++k) cells.push_back({m, p, k});
    sum.cells = cells.size();

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(cells.size());
    std::size_t done = 0;

    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& c = cells[i];
            const MethodSpec& method = cfg.methods[c.method];
            const std::string& pid = pids[c.problem];
            const std::uint64_t seed = cell_seed(cfg.master_seed, method.name, pid, c.run);
            json rec{{"method", method.name}, {"problem", pid}, {"run", c.run}, {"seed", seed}};
            std::string convergence;
            try {
                json body;
                if (cfg.mode == Mode::benchmark) {
                    body = detail::run_benchmark_cell(cfg, method, cfg.functions[c.problem], seed, convergence);
                } else {
                    if (!datasets[c.problem]) throw std::runtime_error(load_errors[c.problem]);
                    body = detail::run_fs_cell(cfg, method, cfg.datasets[c.problem], *datasets[c.problem], c.run, seed,
                                               convergence);
                }
                rec["status"] = "ok";
                rec.update(body);
            } catch (const std::exception& e) {
                rec["status"] = "failed";
                rec["error"] = e.what();
                failures[i] = method.name + "/" + pid + "/run_" + std::to_string(c.run) + ": " + e.what();
            }
            try {
                detail::write_file_atomic(detail::run_file(root, method.name, pid, c.run), rec.dump(1) + "\n");
                if (!convergence.empty())
                    detail::write_file_atomic(detail::convergence_file(root, method.name, pid, c.run), convergence);
            } catch (const std::exception& e) {
                if (failures[i].empty())
                    failures[i] = method.name + "/" + pid + "/run_" + std::to_string(c.run) + ": " + e.what();
            }
            std::lock_guard lock(mu);
            ++done;
            if (opt.log) {
                *opt.log << fmt::format("[{}/{}] {} {} run {}: {}\n", done, cells.size(), method.name, pid, c.run,
                                        failures[i].empty() ? fmt::format("{}", rec.value("best_fitness", 0.0)) : "FAILED");
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(opt.jobs, cells.size()));
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }
    for (auto& f : failures)
        if (!f.empty()) sum.failures.push_back(f);
    sum.failed = sum.failures.size();

    const ReportResult rep = emit_report(root, cfg.report_formats);
    if (rep.comparison) sum.tally = rep.comparison->tally;
    sum.tally_line = tally_line(rep);
    for (const auto& e : rep.errors) sum.failures.push_back("report: " + e);
    json meta{{"started_at", started}, {"finished_at", detail::utc_now()}, {"jobs", opt.jobs}, {"cells", sum.cells},
              {"failed", sum.failed}};
    detail::write_file_atomic(root / "metadata.json", meta.dump(2) + "\n");
    return sum;
}

}  // namespace tfssa::exp

#endif  // TFSSA_EXPERIMENT_HPP
