/**
 * @file evalstats.hpp
 *
 * Run-batch statistics: best/worst/mean/std summaries, classification and
 * selection-size averages, the Wilcoxon rank-sum test and +/-/= comparison
 * tables.
 */
#ifndef TFSSA_EVALSTATS_HPP
#define TFSSA_EVALSTATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tfssa/featsel.hpp"

namespace tfssa::stats {

struct Summary {
    double best = 0.0;
    double worst = 0.0;
    double mean = 0.0;
    std::optional<double> std;  ///< sample deviation, absent for a single run
    std::size_t count = 0;
};

/// Sample standard deviation (M - 1 denominator).
inline double sample_std(std::span<const double> v)
{
    if (v.size() < 2) throw std::invalid_argument("sample_std: at least two values are required");
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/**
 * Best (min), worst (max), mean and standard deviation. With `require_std`
 * a single-value batch is an error; otherwise its std is left empty.
 */
inline Summary summarize(std::span<const double> v, bool require_std = true)
{
    if (v.empty()) throw std::invalid_argument("summarize: empty batch");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("summarize: non-finite value");
    Summary s;
    s.count = v.size();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.best = *lo;
    s.worst = *hi;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    // Rounding can push a constant batch's mean off its value.
    s.mean = std::clamp(s.mean, s.best, s.worst);
    if (v.size() >= 2) {
        s.std = s.best == s.worst ? 0.0 : sample_std(v);
    } else if (require_std) {
        throw std::invalid_argument("summarize: standard deviation needs at least two runs");
    }
    return s;
}

/// Mean over runs of matches / n_points.
inline double classification_avg_accuracy(std::span<const std::size_t> match_counts, std::size_t n_points, std::size_t m_runs)
{
    if (m_runs == 0 || n_points == 0) throw std::invalid_argument("classification_avg_accuracy: empty run set");
    if (match_counts.size() != m_runs)
        throw std::invalid_argument("classification_avg_accuracy: expected one match count per run");
    double acc = 0.0;
    for (std::size_t c : match_counts) {
        if (c > n_points) throw std::invalid_argument("classification_avg_accuracy: matches exceed point count");
        acc += static_cast<double>(c) / static_cast<double>(n_points);
    }
    return acc / static_cast<double>(m_runs);
}

struct SelectionSize {
    double avg_count = 0.0;
    double avg_ratio = 0.0;
};

inline SelectionSize avg_selection_size(std::span<const std::size_t> counts, std::size_t d)
{
    if (counts.empty() || d == 0) throw std::invalid_argument("avg_selection_size: no masks");
    double total = 0.0;
    for (std::size_t c : counts) {
        if (c > d) throw std::invalid_argument("avg_selection_size: count exceeds dimension");
        total += static_cast<double>(c);
    }
    SelectionSize s;
    s.avg_count = total / static_cast<double>(counts.size());
    s.avg_ratio = s.avg_count / static_cast<double>(d);
    return s;
}

inline SelectionSize avg_selection_size(std::span<const fs::FeatureMask> masks, std::size_t d)
{
    std::vector<std::size_t> counts;
    counts.reserve(masks.size());
    for (const auto& m : masks) {
        if (m.size() != d) throw std::invalid_argument("avg_selection_size: mask length differs from D");
        counts.push_back(m.selected_count());
    }
    return avg_selection_size(counts, d);
}

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum

enum class PMethod { exact, normal };

struct WilcoxonOutcome {
    double statistic = 0.0;  ///< rank sum of the first sample
    double p_value = 1.0;    ///< two-sided, from `method`
    PMethod method = PMethod::exact;
    std::optional<double> p_exact;  ///< permutation p, when the counts fit
    double p_normal = 1.0;
    std::optional<double> p_exact_less;  ///< P(W <= w)
    std::optional<double> p_exact_greater;
    double p_normal_less = 1.0;
    double p_normal_greater = 1.0;
    char verdict = '=';
};

inline constexpr double kAlpha = 0.05;
inline constexpr std::size_t kExactThreshold = 16;
inline constexpr std::size_t kExactMaxTotal = 64;

/// Midranks (1-based) of the pooled sample.
inline std::vector<double> midranks(std::span<const double> pooled)
{
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace detail {

/// Tail counts of the permutation distribution of the first sample's rank sum.
/// Ranks are doubled so midranks stay integral.
struct ExactCounts {
    std::uint64_t le = 0;
    std::uint64_t ge = 0;
    std::uint64_t total = 0;
};

inline ExactCounts exact_counts(std::span<const double> ranks, std::size_t n, double statistic)
{
    std::vector<std::size_t> doubled(ranks.size());
    std::size_t max_sum = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        doubled[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
        max_sum += doubled[i];
    }
    // dp[j][s]: subsets of size j with doubled rank sum s.
    std::vector<std::vector<std::uint64_t>> dp(n + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
    dp[0][0] = 1;
    for (std::size_t i = 0; i < doubled.size(); ++i) {
        const std::size_t r = doubled[i];
        for (std::size_t j = std::min(n, i + 1); j >= 1; --j)
            for (std::size_t s = max_sum; s >= r; --s) {
                dp[j][s] += dp[j - 1][s - r];
                if (s == r) break;
            }
    }
    const auto w2 = static_cast<std::size_t>(std::llround(2.0 * statistic));
    ExactCounts c;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        c.total += dp[n][s];
        if (s <= w2) c.le += dp[n][s];
        if (s >= w2) c.ge += dp[n][s];
    }
    return c;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace detail

/**
 * Two-sided rank-sum test of `a` (challenger) against `b` (baseline) with
 * midranks for ties. The reported p uses the exact permutation distribution
 * when |a| + |b| <= 16 and the tie-corrected, continuity-corrected normal
 * approximation otherwise; both are always filled in where computable.
 * Verdict '+' means `a` is significantly lower (better) at alpha = 0.05.
 */
inline WilcoxonOutcome wilcoxon_ranksum(std::span<const double> a, std::span<const double> b)
{
    if (a.size() < 3 || b.size() < 3) throw std::invalid_argument("wilcoxon_ranksum: both samples need at least 3 values");
    const std::size_t n = a.size(), m = b.size(), total = n + m;
    std::vector<double> pooled;
    pooled.reserve(total);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    for (double x : pooled)
        if (!std::isfinite(x)) throw std::invalid_argument("wilcoxon_ranksum: non-finite value");

    WilcoxonOutcome out;
    out.method = total <= kExactThreshold ? PMethod::exact : PMethod::normal;
    const bool all_equal = std::all_of(pooled.begin(), pooled.end(), [&](double x) { return x == pooled[0]; });
    const auto ranks = midranks(pooled);
    out.statistic = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
    if (all_equal) {
        out.p_exact = out.p_exact_less = out.p_exact_greater = 1.0;
        return out;
    }

    if (total <= kExactMaxTotal) {
        const auto c = detail::exact_counts(ranks, n, out.statistic);
        const double tot = static_cast<double>(c.total);
        out.p_exact_less = static_cast<double>(c.le) / tot;
        out.p_exact_greater = static_cast<double>(c.ge) / tot;
        out.p_exact = std::min(1.0, 2.0 * std::min(*out.p_exact_less, *out.p_exact_greater));
    }

    const double nn = static_cast<double>(n), mm = static_cast<double>(m), tt = static_cast<double>(total);
    double tie_sum = 0.0;
    {
        std::vector<double> sorted(pooled);
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_sum += t * t * t - t;
            i = j;
        }
    }
    const double mu = nn * (tt + 1.0) / 2.0;
    const double var = nn * mm / 12.0 * ((tt + 1.0) - tie_sum / (tt * (tt - 1.0)));
    const double sd = std::sqrt(var);
    const double diff = out.statistic - mu;
    const double z = std::max(0.0, std::abs(diff) - 0.5) / sd;
    out.p_normal = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    out.p_normal_less = detail::normal_cdf((diff + 0.5) / sd);
    out.p_normal_greater = 1.0 - detail::normal_cdf((diff - 0.5) / sd);

    out.p_value = out.method == PMethod::exact && out.p_exact ? *out.p_exact : out.p_normal;
    if (out.p_value < kAlpha) {
        const double ma = std::accumulate(a.begin(), a.end(), 0.0) / nn;
        const double mb = std::accumulate(b.begin(), b.end(), 0.0) / mm;
        if (ma < mb) out.verdict = '+';
        else if (ma > mb) out.verdict = '-';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Batches and comparison tables

struct RunBatch {
    std::string method;
    std::string problem;
    std::vector<double> fitness;  ///< final best fitness per run
    std::vector<double> accuracy;  ///< per run, feature selection only
    std::vector<std::size_t> selected;  ///< per-run selected-feature counts
    std::size_t n_features = 0;

    void check() const
    {
        if (fitness.empty()) throw std::invalid_argument("RunBatch " + method + "/" + problem + ": no runs");
        for (double x : fitness)
            if (!std::isfinite(x)) throw std::invalid_argument("RunBatch " + method + "/" + problem + ": non-finite fitness");
        if (!accuracy.empty() && accuracy.size() != fitness.size())
            throw std::invalid_argument("RunBatch " + method + "/" + problem + ": accuracy count differs from run count");
        if (!selected.empty() && selected.size() != fitness.size())
            throw std::invalid_argument("RunBatch " + method + "/" + problem + ": selection count differs from run count");
    }
};

struct ComparisonRow {
    std::string problem;
    Summary baseline;
    Summary challenger;
    std::optional<WilcoxonOutcome> test;  ///< absent when either side has fewer than 3 runs
    char verdict = '=';
};

struct Tally {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;
    std::size_t total() const noexcept { return wins + losses + ties; }
    /// "+/-/=" counts, e.g. "6/1/3".
    std::string str() const { return std::to_string(wins) + "/" + std::to_string(losses) + "/" + std::to_string(ties); }
};

struct ComparisonTable {
    std::string baseline;
    std::string challenger;
    std::vector<ComparisonRow> rows;
    Tally tally;
};

/// Per-problem challenger-vs-baseline rows. Problems follow the baseline's order.
inline ComparisonTable build_comparison_table(std::span<const RunBatch> batches, const std::string& baseline,
                                              const std::string& challenger)
{
    std::vector<const RunBatch*> base, chal;
    for (const auto& b : batches) {
        b.check();
        if (b.method == baseline) base.push_back(&b);
        else if (b.method == challenger) chal.push_back(&b);
    }
    if (base.empty()) throw std::invalid_argument("build_comparison_table: no batches for baseline '" + baseline + "'");
    if (chal.empty()) throw std::invalid_argument("build_comparison_table: no batches for challenger '" + challenger + "'");
    if (base.size() != chal.size())
        throw std::invalid_argument("build_comparison_table: baseline and challenger cover different problem sets");

    ComparisonTable table;
    table.baseline = baseline;
    table.challenger = challenger;
    for (const RunBatch* bb : base) {
        const auto it = std::find_if(chal.begin(), chal.end(), [&](const RunBatch* c) { return c->problem == bb->problem; });
        if (it == chal.end())
            throw std::invalid_argument("build_comparison_table: problem '" + bb->problem + "' missing for challenger");
        ComparisonRow row;
        row.problem = bb->problem;
        row.baseline = summarize(bb->fitness, false);
        row.challenger = summarize((*it)->fitness, false);
        if (bb->fitness.size() >= 3 && (*it)->fitness.size() >= 3) {
            row.test = wilcoxon_ranksum((*it)->fitness, bb->fitness);
            row.verdict = row.test->verdict;
        }
        switch (row.verdict) {
        case '+': ++table.tally.wins; break;
        case '-': ++table.tally.losses; break;
        default: ++table.tally.ties; break;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tfssa::stats

#endif  // TFSSA_EVALSTATS_HPP
