/**
 * @file dataio.hpp
 *
 * Tabular classification data: CSV ingestion with imputation and categorical
 * encoding, min-max scaling, the COVID-19 line-list preprocessing pipeline and
 * stratified fold assignment.
 */
#ifndef TFSSA_DATAIO_HPP
#define TFSSA_DATAIO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "tfssa/stochastic.hpp"

namespace tfssa::data {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Dataset {
    FeatureMatrix features;  ///< n x D
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::string source;
    nlohmann::json transform_log = nlohmann::json::array();

    std::size_t rows() const noexcept { return labels.size(); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(features.cols()); }
    std::size_t n_classes() const noexcept { return class_names.size(); }

    /// Throws if the invariants (finite values, labels in range, n >= 2) fail.
    void check() const
    {
        if (rows() < 2) throw std::runtime_error("dataset '" + source + "' needs at least 2 rows");
        if (static_cast<std::size_t>(features.rows()) != rows()) throw std::runtime_error("dataset: feature/label row mismatch");
        if (feature_names.size() != cols()) throw std::runtime_error("dataset: feature name count mismatch");
        if (!features.allFinite()) throw std::runtime_error("dataset '" + source + "' contains NaN/Inf");
        for (int l : labels)
            if (l < 0 || static_cast<std::size_t>(l) >= n_classes())
                throw std::runtime_error("dataset '" + source + "': label out of range");
    }
};

struct CsvSchema {
    /// Column index (negative counts from the end) or header name.
    std::variant<long, std::string> label_column = -1L;
    char delimiter = ',';
    bool has_header = true;
    std::vector<std::string> missing_markers{"", "?", "NA", "NaN", "nan", "null"};
    /// Columns dropped before encoding (by header name).
    std::vector<std::string> drop_columns;
};

/// Error raised while reading tabular input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline std::optional<double> parse_number(std::string_view s)
{
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

/// RFC-4180 records: quoted fields may contain delimiters, doubled quotes and newlines.
struct CsvTable {
    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> lines;  ///< starting line of each record
};

inline CsvTable read_csv_records(std::istream& in, char delim)
{
    CsvTable table;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (content.size() >= 3 && static_cast<unsigned char>(content[0]) == 0xEF &&
        static_cast<unsigned char>(content[1]) == 0xBB && static_cast<unsigned char>(content[2]) == 0xBF)
        content.erase(0, 3);
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t record_line = 1;
    auto end_record = [&]() {
        record.push_back(std::move(field));
        field.clear();
        const bool blank = record.size() == 1 && trim(record[0]).empty();
        if (!blank) {
            table.records.push_back(std::move(record));
            table.lines.push_back(record_line);
        }
        record.clear();
        field_started = false;
    };
    for (std::size_t i = 0; i < content.size(); ++i) {
        const char ch = content[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == delim) {
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else if (ch == '\n') {
            end_record();
            ++line;
            record_line = line;
        } else if (ch == '\r') {
            // swallowed; CRLF line endings
        } else {
            field.push_back(ch);
            field_started = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", record_line);
    if (!field.empty() || !record.empty()) end_record();
    return table;
}

/// Sorted distinct values; numeric-looking sets sort numerically.
inline std::vector<std::string> ordered_categories(const std::vector<std::string>& values)
{
    std::set<std::string> uniq(values.begin(), values.end());
    std::vector<std::string> cats(uniq.begin(), uniq.end());
    const bool numeric = std::all_of(cats.begin(), cats.end(), [](const std::string& s) { return parse_number(s).has_value(); });
    if (numeric)
        std::stable_sort(cats.begin(), cats.end(), [](const std::string& a, const std::string& b) {
            return *parse_number(a) < *parse_number(b);
        });
    return cats;
}

inline double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Encodes one column. Numeric if every present cell parses; otherwise
/// label-encoded by sorted category. Missing cells get median / mode.
inline std::vector<double> encode_column(const std::vector<std::optional<std::string>>& cells, const std::string& name,
                                         nlohmann::json& log)
{
    std::vector<std::string> present;
    for (const auto& c : cells)
        if (c) present.push_back(*c);
    if (present.empty()) throw std::runtime_error("column '" + name + "' has no values (all missing)");
    const std::size_t n_missing = cells.size() - present.size();
    std::vector<double> out(cells.size());
    const bool numeric = std::all_of(present.begin(), present.end(), [](const std::string& s) { return parse_number(s).has_value(); });
    if (numeric) {
        std::vector<double> vals;
        vals.reserve(present.size());
        for (const auto& s : present) vals.push_back(*parse_number(s));
        const double fill = n_missing ? median(vals) : 0.0;
        for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cells[i] ? *parse_number(*cells[i]) : fill;
        if (n_missing)
            log.push_back({{"op", "impute_median"}, {"column", name}, {"count", n_missing}, {"value", fill}});
        return out;
    }
    const auto cats = ordered_categories(present);
    std::map<std::string, double> code;
    for (std::size_t k = 0; k < cats.size(); ++k) code[cats[k]] = static_cast<double>(k);
    double fill = 0.0;
    if (n_missing) {
        std::map<std::string, std::size_t> freq;
        for (const auto& s : present) ++freq[s];
        std::size_t best = 0;
        for (const auto& cat : cats)
            if (freq[cat] > best) {
                best = freq[cat];
                fill = code[cat];
            }
        log.push_back({{"op", "impute_mode"}, {"column", name}, {"count", n_missing},
                       {"value", cats[static_cast<std::size_t>(fill)]}});
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cells[i] ? code[*cells[i]] : fill;
    log.push_back({{"op", "label_encode"}, {"column", name}, {"categories", cats}});
    return out;
}

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
};

inline RawTable read_table(const std::string& path, char delim, bool has_header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    CsvTable t = read_csv_records(in, delim);
    RawTable raw;
    if (t.records.empty()) throw std::runtime_error("'" + path + "' is empty");
    std::size_t first = 0;
    if (has_header) {
        for (auto& h : t.records[0]) raw.header.push_back(trim(h));
        first = 1;
    } else {
        for (std::size_t j = 0; j < t.records[0].size(); ++j) raw.header.push_back("col" + std::to_string(j));
    }
    const std::size_t width = raw.header.size();
    for (std::size_t r = first; r < t.records.size(); ++r) {
        if (t.records[r].size() != width)
            throw ParseError("expected " + std::to_string(width) + " fields, found " + std::to_string(t.records[r].size()),
                             t.lines[r]);
        raw.rows.push_back(std::move(t.records[r]));
        raw.lines.push_back(t.lines[r]);
    }
    return raw;
}

inline std::size_t resolve_column(const std::vector<std::string>& header, const std::variant<long, std::string>& col)
{
    if (const auto* idx = std::get_if<long>(&col)) {
        const long w = static_cast<long>(header.size());
        const long k = *idx < 0 ? w + *idx : *idx;
        if (k < 0 || k >= w) throw std::invalid_argument("label column index " + std::to_string(*idx) + " out of range");
        return static_cast<std::size_t>(k);
    }
    const auto& name = std::get<std::string>(col);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("label column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
}

inline bool is_missing(const std::string& cell, const std::vector<std::string>& markers)
{
    const std::string t = trim(cell);
    return std::find(markers.begin(), markers.end(), t) != markers.end();
}

/// Label ids from raw strings. Missing labels are a hard error.
inline std::pair<std::vector<int>, std::vector<std::string>> encode_labels(const std::vector<std::string>& raw,
                                                                          const std::vector<std::size_t>& lines,
                                                                          const std::vector<std::string>& markers)
{
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (is_missing(raw[i], markers)) throw ParseError("missing class label", lines[i]);
    std::vector<std::string> trimmed;
    trimmed.reserve(raw.size());
    for (const auto& s : raw) trimmed.push_back(trim(s));
    auto cats = ordered_categories(trimmed);
    std::map<std::string, int> code;
    for (std::size_t k = 0; k < cats.size(); ++k) code[cats[k]] = static_cast<int>(k);
    std::vector<int> labels;
    labels.reserve(raw.size());
    for (const auto& s : trimmed) labels.push_back(code[s]);
    return {labels, cats};
}

}  // namespace detail

/// Reads just the header line (used to validate configs without loading data).
inline std::vector<std::string> read_header(const std::string& path, char delim = ',')
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::istringstream ls(line);
    auto t = detail::read_csv_records(ls, delim);
    if (t.records.empty()) throw std::runtime_error("'" + path + "' has no header");
    std::vector<std::string> out;
    for (auto& h : t.records[0]) out.push_back(detail::trim(h));
    return out;
}

inline Dataset load_csv(const std::string& path, const CsvSchema& schema = {})
{
    const detail::RawTable raw = detail::read_table(path, schema.delimiter, schema.has_header);
    const std::size_t label_col = detail::resolve_column(raw.header, schema.label_column);
    Dataset ds;
    ds.source = path;
    std::vector<std::size_t> feature_cols;
    for (std::size_t j = 0; j < raw.header.size(); ++j) {
        if (j == label_col) continue;
        if (std::find(schema.drop_columns.begin(), schema.drop_columns.end(), raw.header[j]) != schema.drop_columns.end()) {
            ds.transform_log.push_back({{"op", "drop_column"}, {"column", raw.header[j]}});
            continue;
        }
        feature_cols.push_back(j);
    }
    const std::size_t n = raw.rows.size();
    ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(feature_cols.size()));
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        const std::size_t j = feature_cols[k];
        std::vector<std::optional<std::string>> cells(n);
        for (std::size_t i = 0; i < n; ++i)
            if (!detail::is_missing(raw.rows[i][j], schema.missing_markers)) cells[i] = detail::trim(raw.rows[i][j]);
        const auto col = detail::encode_column(cells, raw.header[j], ds.transform_log);
        for (std::size_t i = 0; i < n; ++i) ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
        ds.feature_names.push_back(raw.header[j]);
    }
    std::vector<std::string> raw_labels(n);
    for (std::size_t i = 0; i < n; ++i) raw_labels[i] = raw.rows[i][label_col];
    std::tie(ds.labels, ds.class_names) = detail::encode_labels(raw_labels, raw.lines, schema.missing_markers);
    ds.transform_log.push_back({{"op", "load_csv"}, {"path", path}, {"rows", n}, {"features", feature_cols.size()},
                                {"label_column", raw.header[label_col]}, {"classes", ds.class_names}});
    ds.check();
    return ds;
}

/// Maps every column affinely onto [0,1]; constant columns become 0.
inline Dataset normalize_minmax(Dataset ds)
{
    std::vector<std::string> constant;
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
        const double lo = ds.features.col(j).minCoeff();
        const double hi = ds.features.col(j).maxCoeff();
        if (hi > lo) {
            ds.features.col(j) = (ds.features.col(j).array() - lo) / (hi - lo);
        } else {
            ds.features.col(j).setZero();
            constant.push_back(ds.feature_names[static_cast<std::size_t>(j)]);
        }
    }
    nlohmann::json entry = {{"op", "normalize_minmax"}};
    if (!constant.empty()) entry["constant_columns"] = constant;
    ds.transform_log.push_back(std::move(entry));
    return ds;
}

// ---------------------------------------------------------------------------
// COVID-19 line list
// ---------------------------------------------------------------------------

/// Canonical attributes, in output order.
inline const std::vector<std::string>& covid_feature_names()
{
    static const std::vector<std::string> names{
        "id",        "location",  "country",   "gender",    "age",       "sym_on",    "hosp_vis",  "vis_wuhan",
        "from_wuhan", "symptom_1", "symptom_2", "symptom_3", "symptom_4", "symptom_5", "symptom_6"};
    return names;
}

namespace detail {

/// Header key normalization: lower case, alphanumerics only.
inline std::string header_key(std::string_view s)
{
    std::string out;
    for (unsigned char c : s)
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    return out;
}

inline const std::map<std::string, std::vector<std::string>>& covid_aliases()
{
    static const std::map<std::string, std::vector<std::string>> aliases{
        {"id", {"id", "code", "codeid", "patientid"}},
        {"location", {"location"}},
        {"country", {"country", "nationality"}},
        {"gender", {"gender", "sex"}},
        {"age", {"age"}},
        {"sym_on", {"symon", "symptomonset", "onset"}},
        {"hosp_vis", {"hospvis", "hospvisitdate", "hospitalvisit"}},
        {"vis_wuhan", {"viswuhan", "visitingwuhan", "visitedwuhan"}},
        {"from_wuhan", {"fromwuhan"}},
        {"symptom_1", {"symptom1"}},
        {"symptom_2", {"symptom2"}},
        {"symptom_3", {"symptom3"}},
        {"symptom_4", {"symptom4"}},
        {"symptom_5", {"symptom5"}},
        {"symptom_6", {"symptom6"}},
        {"target", {"result", "label", "status", "class", "target", "outcome"}},
    };
    return aliases;
}

/// Days since 1970-01-01 of a proleptic Gregorian date.
constexpr long days_from_civil(long y, unsigned m, unsigned d) noexcept
{
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

/// Accepts YYYY-MM-DD, M/D/YYYY and M/D/YY. Plain numbers pass through as day counts.
inline std::optional<double> parse_date(std::string_view s)
{
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    if (auto v = parse_number(t)) return v;
    int a = 0, b = 0, c = 0;
    char s1 = 0, s2 = 0;
    std::istringstream is(t);
    if (!(is >> a >> s1 >> b >> s2 >> c)) return std::nullopt;
    long y;
    unsigned m, d;
    if (s1 == '-' && s2 == '-') {
        y = a;
        m = static_cast<unsigned>(b);
        d = static_cast<unsigned>(c);
    } else if (s1 == '/' && s2 == '/') {
        m = static_cast<unsigned>(a);
        d = static_cast<unsigned>(b);
        y = c < 100 ? 2000 + c : c;
    } else {
        return std::nullopt;
    }
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return static_cast<double>(days_from_civil(y, m, d));
}

inline std::optional<double> parse_flag(std::string_view s)
{
    const std::string t = lower(trim(s));
    if (t == "1" || t == "yes" || t == "y" || t == "true") return 1.0;
    if (t == "0" || t == "no" || t == "n" || t == "false") return 0.0;
    return std::nullopt;
}

inline std::optional<int> parse_target(std::string_view s)
{
    const std::string t = lower(trim(s));
    if (t == "normal" || t == "0" || t == "0.0") return 0;
    if (t == "patient" || t == "1" || t == "1.0") return 1;
    return std::nullopt;
}

}  // namespace detail

/**
 * Builds the 15-attribute COVID-19 dataset. Rows whose target is "normal" or
 * "patient" (or 0/1) are extracted as the supervised subset; other rows are
 * dropped and counted in the transform log. Dates become day offsets from the
 * earliest date in either date column, categorical fields are label-encoded
 * and the two Wuhan flags become 0/1. A single free-text "symptom" column is
 * split on commas into symptom_1..symptom_6 when the numbered columns are absent.
 */
inline Dataset covid_preprocess(const std::string& path, const CsvSchema& schema = {})
{
    detail::RawTable raw = detail::read_table(path, schema.delimiter, true);
    std::map<std::string, std::size_t> by_key;
    for (std::size_t j = 0; j < raw.header.size(); ++j) by_key.emplace(detail::header_key(raw.header[j]), j);
    auto find = [&](const std::string& canonical) -> std::optional<std::size_t> {
        for (const auto& alias : detail::covid_aliases().at(canonical)) {
            auto it = by_key.find(alias);
            if (it != by_key.end()) return it->second;
        }
        return std::nullopt;
    };

    Dataset ds;
    ds.source = path;
    const auto target_col = find("target");
    if (!target_col) throw std::runtime_error("COVID-19 input '" + path + "' is missing required column 'result' (target)");

    std::map<std::string, std::size_t> cols;
    bool split_symptoms = false;
    std::optional<std::size_t> free_symptom;
    for (const auto& name : covid_feature_names()) {
        if (auto c = find(name)) {
            cols[name] = *c;
        } else if (name.starts_with("symptom_")) {
            auto it = by_key.find("symptom");
            if (it == by_key.end()) throw std::runtime_error("COVID-19 input '" + path + "' is missing required column '" + name + "'");
            split_symptoms = true;
            free_symptom = it->second;
        } else {
            throw std::runtime_error("COVID-19 input '" + path + "' is missing required column '" + name + "'");
        }
    }
    if (split_symptoms) ds.transform_log.push_back({{"op", "split_symptoms"}, {"column", raw.header[*free_symptom]}});

    // Supervised subset.
    std::vector<std::size_t> keep;
    std::vector<int> labels;
    for (std::size_t i = 0; i < raw.rows.size(); ++i)
        if (auto y = detail::parse_target(raw.rows[i][*target_col])) {
            keep.push_back(i);
            labels.push_back(*y);
        }
    ds.transform_log.push_back({{"op", "extract_labeled_rows"},
                                {"note", "rows labelled normal/patient form the supervised subset"},
                                {"kept", keep.size()},
                                {"dropped", raw.rows.size() - keep.size()}});
    const std::size_t n = keep.size();
    if (n < 2) throw std::runtime_error("COVID-19 input '" + path + "' has fewer than 2 labelled rows");

    auto cell = [&](std::size_t r, const std::string& name) -> std::string {
        if (name.starts_with("symptom_") && split_symptoms) {
            const std::size_t k = static_cast<std::size_t>(name.back() - '1');
            std::vector<std::string> parts;
            std::stringstream ss(raw.rows[r][*free_symptom]);
            std::string part;
            while (std::getline(ss, part, ',')) {
                part = detail::trim(part);
                if (!part.empty()) parts.push_back(part);
            }
            return k < parts.size() ? parts[k] : std::string{};
        }
        return raw.rows[r][cols.at(name)];
    };

    const auto& names = covid_feature_names();
    ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(names.size()));

    // Date columns share one epoch.
    std::map<std::string, std::vector<std::optional<double>>> dates;
    double epoch = std::numeric_limits<double>::infinity();
    for (const std::string name : {"sym_on", "hosp_vis"}) {
        auto& v = dates[name];
        for (std::size_t r : keep) {
            const std::string c = cell(r, name);
            std::optional<double> d = detail::is_missing(c, schema.missing_markers) ? std::nullopt : detail::parse_date(c);
            if (!d && !detail::is_missing(c, schema.missing_markers))
                throw ParseError("unparseable date '" + c + "' in column " + name, raw.lines[r]);
            if (d) epoch = std::min(epoch, *d);
            v.push_back(d);
        }
    }
    if (!std::isfinite(epoch)) epoch = 0.0;

    for (std::size_t k = 0; k < names.size(); ++k) {
        const std::string& name = names[k];
        std::vector<double> col(n);
        if (name == "sym_on" || name == "hosp_vis") {
            std::vector<double> present;
            for (const auto& d : dates[name])
                if (d) present.push_back(*d - epoch);
            if (present.empty()) throw std::runtime_error("column '" + name + "' has no values (all missing)");
            const double fill = detail::median(present);
            std::size_t missing = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (dates[name][i]) {
                    col[i] = *dates[name][i] - epoch;
                } else {
                    col[i] = fill;
                    ++missing;
                }
            }
            ds.transform_log.push_back({{"op", "date_to_day_offset"}, {"column", name}, {"epoch_days", epoch}});
            if (missing) ds.transform_log.push_back({{"op", "impute_median"}, {"column", name}, {"count", missing}, {"value", fill}});
        } else if (name == "vis_wuhan" || name == "from_wuhan") {
            std::vector<std::optional<std::string>> cells(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::string c = cell(keep[i], name);
                if (detail::is_missing(c, schema.missing_markers)) continue;
                const auto f = detail::parse_flag(c);
                if (!f) throw ParseError("expected a 0/1 flag in column " + name + ", got '" + c + "'", raw.lines[keep[i]]);
                cells[i] = *f > 0.5 ? "1" : "0";
            }
            col = detail::encode_column(cells, name, ds.transform_log);
        } else {
            std::vector<std::optional<std::string>> cells(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::string c = cell(keep[i], name);
                if (!detail::is_missing(c, schema.missing_markers)) cells[i] = detail::trim(c);
            }
            // Empty symptom slots mean "no further symptom", not missing data.
            if (name.starts_with("symptom_"))
                for (auto& c : cells)
                    if (!c) c = "none";
            col = detail::encode_column(cells, name, ds.transform_log);
        }
        for (std::size_t i = 0; i < n; ++i) ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
    }
    ds.feature_names = names;
    ds.labels = std::move(labels);
    ds.class_names = {"normal", "patient"};
    ds.transform_log.push_back({{"op", "covid_preprocess"}, {"path", path}, {"rows", n}, {"features", names.size()}});
    ds.check();
    return ds;
}

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

struct FoldAssignment {
    std::vector<std::size_t> fold;  ///< fold id per row, in [0,k)
    std::size_t k = 0;
    std::vector<std::string> warnings;
};

/**
 * Stratified k-fold assignment. Rows of each class are shuffled and dealt
 * round-robin; the dealing position carries over between classes so fold
 * sizes stay balanced overall as well as per class.
 */
inline FoldAssignment stratified_folds(const std::vector<int>& labels, std::size_t k, std::uint64_t seed)
{
    if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");
    FoldAssignment out;
    out.k = k;
    out.fold.assign(labels.size(), 0);
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    SeededRng rng(derive_seed(seed, "stratified_folds"));
    std::size_t next = 0;
    for (auto& [cls, rows] : by_class) {
        for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.index(i)]);
        if (rows.size() < k)
            out.warnings.push_back("class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                                   " rows, fewer than k=" + std::to_string(k));
        for (std::size_t r : rows) {
            out.fold[r] = next;
            next = (next + 1) % k;
        }
    }
    return out;
}

inline FoldAssignment stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed)
{
    return stratified_folds(ds.labels, k, seed);
}

}  // namespace tfssa::data

#endif  // TFSSA_DATAIO_HPP
