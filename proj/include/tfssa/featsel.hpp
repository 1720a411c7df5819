/**
 * @file featsel.hpp
 *
 * Wrapper feature selection. Continuous sparrow positions in [-1,1]^D are
 * decoded to feature masks; a mask is scored by the stratified k-fold error of
 * a K-NN classifier on the selected columns, blended with the selected-feature
 * ratio: fitness = lambda * error + mu * |S| / |T|.
 */
#ifndef TFSSA_FEATSEL_HPP
#define TFSSA_FEATSEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tfssa/dataio.hpp"
#include "tfssa/optimizer.hpp"

namespace tfssa::fs {

using data::Dataset;
using data::FoldAssignment;

class FeatureMask {
public:
    FeatureMask() = default;
    explicit FeatureMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits))
    {
        for (auto& b : bits_) b = b ? 1 : 0;
        count_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
    }

    static FeatureMask all(std::size_t d) { return FeatureMask(std::vector<std::uint8_t>(d, 1)); }

    /// Mask from the low `d` bits of an integer (bit j selects feature j).
    static FeatureMask from_bits(std::uint64_t word, std::size_t d)
    {
        std::vector<std::uint8_t> b(d);
        for (std::size_t j = 0; j < d; ++j) b[j] = static_cast<std::uint8_t>((word >> j) & 1U);
        return FeatureMask(std::move(b));
    }

    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t selected_count() const noexcept { return count_; }
    bool operator[](std::size_t j) const { return bits_[j] != 0; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    std::vector<std::size_t> selected() const
    {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < bits_.size(); ++j)
            if (bits_[j]) idx.push_back(j);
        return idx;
    }

    std::string key() const
    {
        std::string s(bits_.size(), '0');
        for (std::size_t j = 0; j < bits_.size(); ++j)
            if (bits_[j]) s[j] = '1';
        return s;
    }

    bool operator==(const FeatureMask&) const = default;

private:
    std::vector<std::uint8_t> bits_;
    std::size_t count_ = 0;
};

struct FsConfig {
    double lambda = 0.99;
    double mu = 0.01;
    std::size_t k_neighbors = 5;
    std::size_t k_folds = 10;
    double threshold = 0.5;
    /// Fold seed shared by every run when set; otherwise derived from the run seed.
    std::optional<std::uint64_t> fold_seed;
    OptimizerConfig optimizer = default_optimizer();

    /// 7 sparrows, 100 iterations.
    static OptimizerConfig default_optimizer()
    {
        OptimizerConfig cfg;
        cfg.n_sparrows = 7;
        cfg.budget.max_iterations = 100;
        return cfg;
    }

    std::vector<std::string> violations() const
    {
        std::vector<std::string> out;
        if (!(lambda >= 0.0 && lambda <= 1.0)) out.emplace_back("lambda must lie in [0,1]");
        if (std::abs(lambda + mu - 1.0) > 1e-9) out.emplace_back("fitness weights must satisfy lambda + mu = 1");
        if (k_neighbors < 1 || k_neighbors % 2 == 0) out.emplace_back("k_neighbors must be odd and >= 1");
        if (k_folds < 2) out.emplace_back("k_folds must be >= 2");
        if (!(threshold > 0.0 && threshold < 1.0)) out.emplace_back("threshold must lie in (0,1)");
        for (auto& v : optimizer.violations()) out.push_back("optimizer: " + v);
        return out;
    }

    void validate() const
    {
        const auto v = violations();
        if (v.empty()) return;
        std::string msg = "invalid feature-selection config:";
        for (const auto& s : v) msg += " " + s + ";";
        throw std::invalid_argument(msg);
    }
};

/// Bit j is set iff (p_j + 1)/2 > threshold. An empty result is repaired by
/// setting the coordinate with the largest mapped value.
inline FeatureMask binarize(std::span<const double> position, double threshold = 0.5)
{
    if (position.empty()) throw std::invalid_argument("binarize: empty position");
    std::vector<std::uint8_t> bits(position.size());
    std::size_t argmax = 0;
    bool any = false;
    for (std::size_t j = 0; j < position.size(); ++j) {
        const double mapped = (position[j] + 1.0) / 2.0;
        bits[j] = mapped > threshold ? 1 : 0;
        any = any || bits[j];
        if (mapped > (position[argmax] + 1.0) / 2.0) argmax = j;
    }
    if (!any) bits[argmax] = 1;
    return FeatureMask(std::move(bits));
}

/**
 * Majority label of the k nearest rows (Euclidean over `columns`). Distance
 * ties go to the lower row index; vote ties drop the farthest neighbour and
 * re-vote, ending at k = 1.
 */
inline int knn_classify(const data::FeatureMatrix& train, std::span<const int> train_labels,
                        std::span<const std::size_t> train_rows, std::span<const double> query,
                        std::span<const std::size_t> columns, std::size_t k)
{
    const std::size_t m = train_rows.size();
    if (m == 0) throw std::invalid_argument("knn_classify: empty training set");
    if (k == 0) throw std::invalid_argument("knn_classify: k must be >= 1");
    k = std::min(k, m);
    std::vector<std::pair<double, std::size_t>> dist(m);
    for (std::size_t r = 0; r < m; ++r) {
        const auto row = static_cast<Eigen::Index>(train_rows[r]);
        double s = 0.0;
        for (std::size_t c : columns) {
            const double diff = train(row, static_cast<Eigen::Index>(c)) - query[c];
            s += diff * diff;
        }
        dist[r] = {s, train_rows[r]};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::map<int, std::size_t> votes;
    for (std::size_t kk = k; kk >= 1; --kk) {
        votes.clear();
        for (std::size_t r = 0; r < kk; ++r) ++votes[train_labels[dist[r].second]];
        std::size_t top = 0, n_top = 0;
        int winner = 0;
        for (const auto& [label, count] : votes) {
            if (count > top) {
                top = count;
                n_top = 1;
                winner = label;
            } else if (count == top) {
                ++n_top;
            }
        }
        if (n_top == 1) return winner;
    }
    return train_labels[dist[0].second];
}

/// Convenience overload: all rows of `train` are candidates, all columns used.
inline int knn_classify(const data::FeatureMatrix& train, std::span<const int> train_labels, std::span<const double> query,
                        std::size_t k)
{
    std::vector<std::size_t> rows(static_cast<std::size_t>(train.rows()));
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<std::size_t> cols(static_cast<std::size_t>(train.cols()));
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return knn_classify(train, train_labels, rows, query, cols, k);
}

/// Misclassification counts of one cross-validation pass.
struct CvOutcome {
    std::size_t errors = 0;
    std::size_t total = 0;
    double error_rate() const noexcept { return total ? static_cast<double>(errors) / static_cast<double>(total) : 0.0; }
};

/// Stratified k-fold K-NN error restricted to the mask's columns.
inline CvOutcome cv_outcome(const Dataset& ds, const FeatureMask& mask, const FoldAssignment& folds, std::size_t k)
{
    if (mask.size() != ds.cols()) throw std::invalid_argument("cv_error: mask length does not match feature count");
    if (folds.fold.size() != ds.rows()) throw std::invalid_argument("cv_error: fold assignment does not match row count");
    CvOutcome out;
    out.total = ds.rows();
    if (ds.n_classes() < 2) return out;
    const auto columns = mask.selected();
    std::vector<std::vector<std::size_t>> members(folds.k);
    for (std::size_t i = 0; i < ds.rows(); ++i) members[folds.fold[i]].push_back(i);
    std::vector<std::size_t> train;
    train.reserve(ds.rows());
    for (std::size_t f = 0; f < folds.k; ++f) {
        if (members[f].empty()) continue;
        train.clear();
        for (std::size_t i = 0; i < ds.rows(); ++i)
            if (folds.fold[i] != f) train.push_back(i);
        if (train.empty()) continue;
        for (std::size_t i : members[f]) {
            const auto row = ds.features.row(static_cast<Eigen::Index>(i));
            const std::span<const double> query(row.data(), static_cast<std::size_t>(row.size()));
            if (knn_classify(ds.features, ds.labels, train, query, columns, k) != ds.labels[i]) ++out.errors;
        }
    }
    return out;
}

inline double cv_error(const Dataset& ds, const FeatureMask& mask, const FoldAssignment& folds, std::size_t k)
{
    return cv_outcome(ds, mask, folds, k).error_rate();
}

/// lambda * error + mu * selected / total
inline double blend_fitness(double error, std::size_t selected, std::size_t total, double lambda, double mu)
{
    return lambda * error + mu * static_cast<double>(selected) / static_cast<double>(total);
}

/**
 * The feature-selection objective over [-1,1]^D with a fixed fold assignment.
 * CV errors are cached by mask, so positions that decode to the same subset
 * cost one classifier pass. Safe for concurrent evaluation.
 */
class FsObjective {
public:
    FsObjective(const Dataset& ds, const FsConfig& cfg, FoldAssignment folds)
        : ds_(ds), cfg_(cfg), folds_(std::move(folds)), lower_(ds.cols(), -1.0), upper_(ds.cols(), 1.0)
    {
        if (ds.cols() == 0) throw std::invalid_argument("feature selection needs at least one feature");
    }

    std::size_t dim() const noexcept { return ds_.cols(); }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    const FoldAssignment& folds() const noexcept { return folds_; }
    const FsConfig& config() const noexcept { return cfg_; }
    const Dataset& dataset() const noexcept { return ds_; }

    double error(const FeatureMask& mask) const
    {
        const std::string key = mask.key();
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        const double e = cv_error(ds_, mask, folds_, cfg_.k_neighbors);
        std::lock_guard lock(mutex_);
        cache_.emplace(key, e);
        return e;
    }

    double mask_fitness(const FeatureMask& mask) const
    {
        return blend_fitness(error(mask), mask.selected_count(), mask.size(), cfg_.lambda, cfg_.mu);
    }

    double operator()(std::span<const double> position) const { return mask_fitness(binarize(position, cfg_.threshold)); }

    std::size_t cache_size() const
    {
        std::lock_guard lock(mutex_);
        return cache_.size();
    }

private:
    const Dataset& ds_;
    FsConfig cfg_;
    FoldAssignment folds_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, double> cache_;
};

/// fitness of a single position: lambda * cv_error(binarize(position)) + mu |S|/|T|
inline double fs_fitness(std::span<const double> position, const Dataset& ds, const FsConfig& cfg, const FoldAssignment& folds)
{
    const FeatureMask mask = binarize(position, cfg.threshold);
    return blend_fitness(cv_error(ds, mask, folds, cfg.k_neighbors), mask.selected_count(), mask.size(), cfg.lambda, cfg.mu);
}

struct FsResult {
    FeatureMask mask;
    double accuracy = 0.0;  ///< cross-validated accuracy of the final mask
    double fitness = 0.0;
    std::size_t n_selected = 0;
    std::vector<std::string> selected_names;
    std::size_t correct = 0;  ///< matches behind `accuracy`
    std::size_t total = 0;
    std::uint64_t fold_seed = 0;
    RunRecord record;
    std::vector<std::string> warnings;
};

inline std::uint64_t fold_seed_for(const FsConfig& cfg, std::uint64_t run_seed)
{
    return cfg.fold_seed.value_or(derive_seed(run_seed, "folds"));
}

/// One seeded feature-selection run.
inline FsResult run_feature_selection(const Dataset& ds, const FsConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    ds.check();
    const std::uint64_t fseed = fold_seed_for(cfg, seed);
    FoldAssignment folds = data::stratified_folds(ds, cfg.k_folds, fseed);
    FsResult res;
    res.warnings = folds.warnings;
    if (ds.n_classes() < 2) res.warnings.emplace_back("dataset has a single class; cross-validation error is trivially 0");
    const FsObjective objective(ds, cfg, std::move(folds));
    SeededRng rng(derive_seed(seed, "optimizer"));
    res.record = run(objective, cfg.optimizer, rng);
    res.record.seed = seed;
    res.mask = binarize(res.record.best_position, cfg.threshold);
    const CvOutcome cv = cv_outcome(ds, res.mask, objective.folds(), cfg.k_neighbors);
    res.total = cv.total;
    res.correct = cv.total - cv.errors;
    res.accuracy = 1.0 - cv.error_rate();
    res.fitness = objective.mask_fitness(res.mask);
    res.n_selected = res.mask.selected_count();
    res.fold_seed = fseed;
    for (std::size_t j : res.mask.selected()) res.selected_names.push_back(ds.feature_names[j]);
    return res;
}

}  // namespace tfssa::fs

#endif  // TFSSA_FEATSEL_HPP
