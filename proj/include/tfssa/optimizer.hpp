/**
 * @file optimizer.hpp
 *
 * Sparrow search over a box-bounded objective: the classical producer /
 * scrounger / patroller loop and the tent-Levy variant that adds chaotic
 * initialization, an adaptive producer weight, a shrinking patrol and two
 * mutation steps on top of it. Both variants share one loop body; the variant
 * only selects which strategies are switched on.
 */
#ifndef TFSSA_OPTIMIZER_HPP
#define TFSSA_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "tfssa/objective.hpp"
#include "tfssa/stochastic.hpp"

namespace tfssa {

using Position = Eigen::RowVectorXd;
using PositionMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Variant { ssa, tfssa };

inline std::string_view to_string(Variant v) noexcept { return v == Variant::ssa ? "ssa" : "tfssa"; }

inline Variant parse_variant(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ssa") return Variant::ssa;
    if (lower == "tfssa") return Variant::tfssa;
    throw std::invalid_argument("unknown optimizer variant '" + std::string(name) + "' (expected ssa or tfssa)");
}

/// Individually switchable parts of the tent-Levy variant.
struct Strategies {
    bool tent_init = false;            ///< chaotic population initialization
    bool adaptive_weight = false;      ///< w = w0 c^t in the producer rule
    bool adaptive_patrollers = false;  ///< patroller count shrinks from PN_max to PN_min
    bool levy_flight = false;          ///< Levy roulette mutation of every sparrow
    bool best_mutation = false;        ///< tent-chaos mutation of the global best

    static Strategies of(Variant v) noexcept
    {
        if (v == Variant::ssa) return {};
        return {true, true, true, true, true};
    }

    bool operator==(const Strategies&) const = default;
};

/// Either an iteration budget or an evaluation budget (the latter wins when set).
struct Budget {
    std::size_t max_iterations = 100;
    std::optional<std::size_t> max_evaluations;
};

struct OptimizerConfig {
    std::size_t n_sparrows = 30;
    Budget budget;
    double pd_ratio = 0.2;      ///< producer fraction
    double sd_max_ratio = 0.2;  ///< patroller fraction at t = 0
    double sd_min_ratio = 0.1;  ///< patroller fraction at t = t_max
    double st = 0.8;            ///< safety threshold
    TentParams tent{};
    LevyParams levy{};
    double w0 = 1.0;
    double c = 0.9;
    Variant variant = Variant::tfssa;
    std::optional<Strategies> strategy_override;

    /// Smallest constant in the patroller denominator.
    static constexpr double epsilon = 1e-50;

    static OptimizerConfig ssa()
    {
        OptimizerConfig cfg;
        cfg.variant = Variant::ssa;
        return cfg;
    }

    static OptimizerConfig tfssa() { return OptimizerConfig{}; }

    Strategies strategies() const noexcept { return strategy_override.value_or(Strategies::of(variant)); }

    std::size_t producer_count() const noexcept
    {
        const auto pd = static_cast<std::size_t>(std::lround(pd_ratio * static_cast<double>(n_sparrows)));
        return std::clamp<std::size_t>(pd, 1, n_sparrows);
    }
    std::size_t patrollers_max() const noexcept
    {
        return static_cast<std::size_t>(std::lround(sd_max_ratio * static_cast<double>(n_sparrows)));
    }
    std::size_t patrollers_min() const noexcept
    {
        return static_cast<std::size_t>(std::lround(sd_min_ratio * static_cast<double>(n_sparrows)));
    }

    /// Upper bound on fitness evaluations spent by one iteration.
    std::size_t evaluations_per_iteration() const noexcept
    {
        const Strategies s = strategies();
        return n_sparrows + patrollers_max() + (s.levy_flight ? n_sparrows : 0) + (s.best_mutation ? 1 : 0);
    }

    std::vector<std::string> violations() const
    {
        std::vector<std::string> out;
        if (n_sparrows < 2) out.emplace_back("n_sparrows must be >= 2");
        if (!(pd_ratio > 0.0 && pd_ratio < 1.0)) out.emplace_back("pd_ratio must lie in (0,1)");
        if (!(sd_min_ratio >= 0.0 && sd_min_ratio <= sd_max_ratio && sd_max_ratio <= 0.2))
            out.emplace_back("patroller ratios must satisfy 0 <= sd_min_ratio <= sd_max_ratio <= 0.2");
        if (!(st >= 0.5 && st <= 1.0)) out.emplace_back("st must lie in [0.5,1]");
        if (!(tent.a > 0.0 && tent.a < 1.0)) out.emplace_back("tent.a must lie in (0,1)");
        if (!levy.valid()) out.emplace_back("levy.alpha must lie in (0,2]");
        if (!(w0 > 0.0)) out.emplace_back("w0 must be > 0");
        // c = 1 switches the adaptive weight off, which the ablations rely on.
        if (!(c > 0.0 && c <= 1.0)) out.emplace_back("c must lie in (0,1]");
        if (budget.max_evaluations) {
            if (*budget.max_evaluations < n_sparrows + evaluations_per_iteration())
                out.emplace_back("max_evaluations must cover initialization plus one iteration (" +
                                 std::to_string(n_sparrows + evaluations_per_iteration()) + ")");
        } else if (budget.max_iterations < 1) {
            out.emplace_back("budget must be >= 1 iteration");
        }
        return out;
    }

    void validate() const
    {
        const auto v = violations();
        if (v.empty()) return;
        std::string msg = "invalid optimizer config:";
        for (const auto& s : v) msg += " " + s + ";";
        throw std::invalid_argument(msg);
    }

    /// Iteration count T_max used by every schedule.
    /// PN_max - round((PN_max - PN_min) t / t_max)
    std::size_t patrollers_at(std::size_t t, std::size_t t_max) const noexcept
    {
        const std::size_t pn_max = patrollers_max();
        const std::size_t pn_min = std::min(patrollers_min(), pn_max);
        const double frac = t_max == 0 ? 1.0 : std::min(1.0, static_cast<double>(t) / static_cast<double>(t_max));
        const auto drop = static_cast<std::size_t>(std::lround(static_cast<double>(pn_max - pn_min) * frac));
        return pn_max - drop;
    }

    /// Evaluations spent by iteration t of t_max, counting the best mutation as always firing.
    std::size_t iteration_cost(std::size_t t, std::size_t t_max) const noexcept
    {
        const Strategies s = strategies();
        const std::size_t pn = s.adaptive_patrollers ? patrollers_at(t, t_max) : patrollers_max();
        return n_sparrows + pn + (s.levy_flight ? n_sparrows : 0) + (s.best_mutation ? 1 : 0);
    }

    /// Iteration count T. With an evaluation budget E it is the largest T whose
    /// scheduled cost, initialization included, fits in E.
    std::size_t iteration_budget() const
    {
        if (!budget.max_evaluations) return budget.max_iterations;
        const std::size_t e = *budget.max_evaluations;
        auto cost = [&](std::size_t big_t) {
            std::size_t total = n_sparrows;
            for (std::size_t t = 0; t < big_t && total <= e; ++t) total += iteration_cost(t, big_t);
            return total;
        };
        std::size_t lo = 1, hi = std::max<std::size_t>(1, e / std::max<std::size_t>(1, n_sparrows));
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo + 1) / 2;
            if (cost(mid) <= e) lo = mid;
            else hi = mid - 1;
        }
        return lo;
    }
};

/// Population state: one row per sparrow.
struct Flock {
    PositionMatrix positions;
    Eigen::VectorXd fitness;
    std::size_t best_index = 0;
    std::size_t worst_index = 0;
    std::size_t eval_count = 0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(positions.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(positions.cols()); }

    double best_fitness() const { return fitness[static_cast<Eigen::Index>(best_index)]; }
    double worst_fitness() const { return fitness[static_cast<Eigen::Index>(worst_index)]; }
    Position best() const { return positions.row(static_cast<Eigen::Index>(best_index)); }
    Position worst() const { return positions.row(static_cast<Eigen::Index>(worst_index)); }

    /// Recomputes best/worst; ties resolve to the lowest index.
    void refresh_extremes()
    {
        best_index = worst_index = 0;
        for (Eigen::Index i = 1; i < fitness.size(); ++i) {
            if (fitness[i] < fitness[static_cast<Eigen::Index>(best_index)]) best_index = static_cast<std::size_t>(i);
            if (fitness[i] > fitness[static_cast<Eigen::Index>(worst_index)]) worst_index = static_cast<std::size_t>(i);
        }
    }

    /// Sparrow indices by ascending fitness, stable on the original index.
    std::vector<std::size_t> ranking() const
    {
        std::vector<std::size_t> order(size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
            return fitness[static_cast<Eigen::Index>(a)] < fitness[static_cast<Eigen::Index>(b)];
        });
        return order;
    }

    bool within(std::span<const double> lower, std::span<const double> upper) const
    {
        for (Eigen::Index i = 0; i < positions.rows(); ++i)
            for (Eigen::Index j = 0; j < positions.cols(); ++j) {
                const double v = positions(i, j);
                if (!(v >= lower[static_cast<std::size_t>(j)] && v <= upper[static_cast<std::size_t>(j)])) return false;
            }
        return true;
    }
};

struct RunRecord {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::vector<double> history;             ///< global best after each iteration
    std::vector<std::size_t> history_evals;  ///< evaluations spent when each entry was recorded
    std::size_t evals_used = 0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;

    bool operator==(const RunRecord&) const = default;
};

/// w = w0 c^t
inline double adaptive_weight(std::size_t t, const OptimizerConfig& cfg)
{
    return cfg.w0 * std::pow(cfg.c, static_cast<double>(t));
}

/// PN_max - round((PN_max - PN_min) t / t_max)
inline std::size_t patroller_count(std::size_t t, std::size_t t_max, const OptimizerConfig& cfg)
{
    return cfg.patrollers_at(t, t_max);
}

/// Position rules of the three roles and the two mutations. Randomness is
/// passed in, which keeps every rule a pure function.
namespace rules {

/// Producer of rank `rank` (1-based). Without alarm it contracts by
/// exp(-rank / (w lambda t_max)); with alarm it takes a common Gaussian step q.
inline Position producer_move(const Position& x, std::size_t rank, double w, double lambda, std::size_t t_max,
                              bool alarm, double q)
{
    if (alarm) return (x.array() + q).matrix();
    const double factor = std::exp(-static_cast<double>(rank) / (w * lambda * static_cast<double>(t_max)));
    return x * factor;
}

/// Scroungers ranked in the worse half are starving.
inline bool is_starving(std::size_t rank, std::size_t n) noexcept
{
    return static_cast<double>(rank) > static_cast<double>(n) / 2.0;
}

/// Scrounger of rank `rank`. `noise` holds per-coordinate N(0,1) draws when
/// starving and per-coordinate +-1 signs otherwise.
inline Position scrounger_move(const Position& x, std::size_t rank, std::size_t n, const Position& x_producer,
                               const Position& x_worst, const Position& noise)
{
    if (is_starving(rank, n)) {
        const double denom = static_cast<double>(rank) * static_cast<double>(rank);
        return (noise.array() * ((x_worst - x).array() / denom).exp()).matrix();
    }
    return (x_producer.array() + (x - x_producer).array().abs() * noise.array()).matrix();
}

/// Patroller. Edge sparrows (f_i > f_g) jump around the best with per-coordinate
/// N(0,1) factors `beta`; the best sparrow drifts relative to the worst with scalar k.
inline Position patroller_move(const Position& x, double f_i, double f_g, double f_w, const Position& x_best,
                               const Position& x_worst, const Position& beta, double k)
{
    if (f_i > f_g) return (x_best.array() + beta.array() * (x - x_best).array().abs()).matrix();
    return x + k * (x - x_worst) / ((f_i - f_w) + OptimizerConfig::epsilon);
}

/// x + L (x - x_best), coordinate-wise Levy steps.
inline Position levy_follow(const Position& x, const Position& x_best, const Position& steps)
{
    return (x.array() + steps.array() * (x - x_best).array()).matrix();
}

/// x_best (1 + L), coordinate-wise Levy steps.
inline Position levy_best(const Position& x_best, const Position& steps)
{
    return (x_best.array() * (1.0 + steps.array())).matrix();
}

/// x_best (1 + tent(u)), with u the coordinate rescaled from its bounds to [0,1].
inline Position tent_best(const Position& x_best, std::span<const double> lower, std::span<const double> upper,
                          const TentParams& tent, double psi)
{
    Position out(x_best.size());
    for (Eigen::Index j = 0; j < x_best.size(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double range = upper[jj] - lower[jj];
        const double u = range > 0.0 ? std::clamp((x_best[j] - lower[jj]) / range, 0.0, 1.0) : 0.0;
        out[j] = x_best[j] * (1.0 + tent_next(u, tent, psi));
    }
    return out;
}

/// Hard clamp into the box. Non-finite coordinates fall back to `previous`.
inline void clamp_to_bounds(Position& x, const Position& previous, std::span<const double> lower,
                            std::span<const double> upper)
{
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (std::isnan(x[j])) x[j] = previous[j];
        x[j] = std::clamp(x[j], lower[jj], upper[jj]);
    }
}

}  // namespace rules

/**
 * One optimization run. Phases operate on the stored flock and accept a
 * candidate only when it strictly improves the sparrow it replaces, so the
 * best fitness never increases.
 */
template <ObjectiveLike Obj>
class SparrowSearch {
public:
    SparrowSearch(const Obj& objective, OptimizerConfig cfg, SeededRng& rng)
        : obj_(objective), cfg_(std::move(cfg)), rng_(rng), strat_(cfg_.strategies())
    {
        cfg_.validate();
        if (obj_.dim() == 0) throw std::invalid_argument("SparrowSearch: objective has zero dimensions");
        cfg_.tent.psi_scale = static_cast<double>(cfg_.n_sparrows);
        t_max_ = cfg_.iteration_budget();
        lower_.assign(obj_.lower().begin(), obj_.lower().end());
        upper_.assign(obj_.upper().begin(), obj_.upper().end());
    }

    const OptimizerConfig& config() const noexcept { return cfg_; }
    std::size_t t_max() const noexcept { return t_max_; }
    double psi() const noexcept { return psi_; }
    const Flock& flock() const noexcept { return flock_; }

    /// Replaces the flock (fitness is re-evaluated). Intended for tests.
    void set_positions(const PositionMatrix& positions)
    {
        flock_.positions = positions;
        flock_.fitness.resize(positions.rows());
        for (Eigen::Index i = 0; i < positions.rows(); ++i) flock_.fitness[i] = evaluate(flock_.positions.row(i));
        flock_.refresh_extremes();
    }

    /// Chaotic (tent) or uniform initialization inside the box.
    void initialize()
    {
        const std::size_t n = cfg_.n_sparrows;
        const std::size_t d = obj_.dim();
        flock_ = Flock{};
        flock_.positions.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        if (strat_.tent_init || strat_.best_mutation) psi_ = draw_psi(cfg_.tent, rng_);
        if (strat_.tent_init) {
            // Random start avoids the map's fixed and short periodic points.
            double x0 = rng_.uniform();
            while (x0 == 0.0) x0 = rng_.uniform();
            const auto seq = tent_sequence(x0, cfg_.tent, psi_, n * d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    flock_.positions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        lower_[j] + seq[i * d + j] * (upper_[j] - lower_[j]);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    flock_.positions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        lower_[j] + rng_.uniform() * (upper_[j] - lower_[j]);
        }
        flock_.fitness.resize(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < flock_.positions.rows(); ++i) flock_.fitness[i] = evaluate(flock_.positions.row(i));
        flock_.refresh_extremes();
    }

    /// Producers: the `producer_count()` best-ranked sparrows, sharing one warning value r2.
    void producer_phase(std::size_t t, const std::vector<std::size_t>& order, double r2)
    {
        const double w = strat_.adaptive_weight ? adaptive_weight(t, cfg_) : 1.0;
        const bool alarm = r2 >= cfg_.st;
        const std::size_t pd = cfg_.producer_count();
        for (std::size_t k = 0; k < pd; ++k) {
            const std::size_t i = order[k];
            const Position x = row(i);
            Position cand;
            if (alarm) {
                cand = rules::producer_move(x, k + 1, w, 1.0, t_max_, true, rng_.normal());
            } else {
                cand = rules::producer_move(x, k + 1, w, rng_.uniform_open_closed(), t_max_, false, 0.0);
            }
            try_replace(i, std::move(cand), x);
        }
    }

    /// Scroungers: every sparrow ranked below the producers.
    void scrounger_phase(const std::vector<std::size_t>& order)
    {
        const std::size_t n = cfg_.n_sparrows;
        const std::size_t pd = cfg_.producer_count();
        std::size_t lead = order[0];
        for (std::size_t k = 1; k < pd; ++k)
            if (fit(order[k]) < fit(lead)) lead = order[k];
        const Position x_producer = row(lead);
        flock_.refresh_extremes();
        const Position x_worst = flock_.worst();
        const auto d = static_cast<Eigen::Index>(obj_.dim());
        Position noise(d);
        for (std::size_t k = pd; k < n; ++k) {
            const std::size_t i = order[k];
            const std::size_t rank = k + 1;
            const bool starving = rules::is_starving(rank, n);
            for (Eigen::Index j = 0; j < d; ++j) noise[j] = starving ? rng_.normal() : rng_.sign();
            const Position x = row(i);
            try_replace(i, rules::scrounger_move(x, rank, n, x_producer, x_worst, noise), x);
        }
        flock_.refresh_extremes();
    }

    /// Patrollers: `count` sparrows drawn without replacement.
    void patroller_phase(std::size_t count)
    {
        const std::size_t n = cfg_.n_sparrows;
        count = std::min(count, n);
        flock_.refresh_extremes();
        const double f_g = flock_.best_fitness();
        const double f_w = flock_.worst_fitness();
        const Position x_best = flock_.best();
        const Position x_worst = flock_.worst();
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        const auto d = static_cast<Eigen::Index>(obj_.dim());
        for (std::size_t k = 0; k < count; ++k) {
            std::swap(pool[k], pool[k + rng_.index(n - k)]);
            const std::size_t i = pool[k];
            const Position x = row(i);
            const double f_i = fit(i);
            Position beta = Position::Zero(d);
            double kstep = 0.0;
            if (f_i > f_g) {
                for (Eigen::Index j = 0; j < d; ++j) beta[j] = rng_.normal();
            } else {
                kstep = rng_.uniform(-1.0, 1.0);
            }
            try_replace(i, rules::patroller_move(x, f_i, f_g, f_w, x_best, x_worst, beta, kstep), x);
        }
        flock_.refresh_extremes();
    }

    /// Levy roulette: with probability 1 - sigma a sparrow jumps relative to the
    /// best, otherwise the best itself is perturbed multiplicatively.
    void levy_phase(std::size_t t)
    {
        const double sigma = inertia_sigma(static_cast<double>(t), static_cast<double>(t_max_));
        const auto d = static_cast<Eigen::Index>(obj_.dim());
        Position steps(d);
        for (std::size_t m = 0; m < cfg_.n_sparrows; ++m) {
            const bool follow = rng_.uniform() > sigma;
            steps.setConstant(levy_sample(cfg_.levy, rng_));
            const Position x_best = flock_.best();
            if (follow) {
                const Position x = row(m);
                try_replace(m, rules::levy_follow(x, x_best, steps), x);
            } else {
                try_replace(flock_.best_index, rules::levy_best(x_best, steps), x_best);
            }
            flock_.refresh_extremes();
        }
    }

    /// Tent-chaos mutation of the global best with probability r.
    void best_mutation_phase(std::size_t t)
    {
        const double r = mutation_radius_r(static_cast<double>(t), static_cast<double>(t_max_));
        if (!(rng_.uniform() < r)) return;
        const Position x_best = flock_.best();
        try_replace(flock_.best_index, rules::tent_best(x_best, lower_, upper_, cfg_.tent, psi_), x_best);
        flock_.refresh_extremes();
    }

    /// One full iteration t in [0, t_max).
    void iterate(std::size_t t)
    {
        const std::vector<std::size_t> order = flock_.ranking();
        const double r2 = rng_.uniform();
        producer_phase(t, order, r2);
        scrounger_phase(order);
        const std::size_t pn = strat_.adaptive_patrollers ? patroller_count(t, t_max_, cfg_) : cfg_.patrollers_max();
        patroller_phase(pn);
        if (strat_.levy_flight) levy_phase(t);
        if (strat_.best_mutation) best_mutation_phase(t);
        flock_.refresh_extremes();
    }

    RunRecord run()
    {
        initialize();
        RunRecord rec;
        rec.seed = rng_.seed();
        rec.history.reserve(t_max_);
        rec.history_evals.reserve(t_max_);
        for (std::size_t t = 0; t < t_max_; ++t) {
            if (cfg_.budget.max_evaluations &&
                flock_.eval_count + cfg_.iteration_cost(t, t_max_) > *cfg_.budget.max_evaluations)
                break;
            iterate(t);
            rec.history.push_back(flock_.best_fitness());
            rec.history_evals.push_back(flock_.eval_count);
        }
        const Position best = flock_.best();
        rec.best_position.assign(best.data(), best.data() + best.size());
        rec.best_fitness = flock_.best_fitness();
        rec.evals_used = flock_.eval_count;
        rec.iterations = rec.history.size();
        return rec;
    }

private:
    Position row(std::size_t i) const { return flock_.positions.row(static_cast<Eigen::Index>(i)); }
    double fit(std::size_t i) const { return flock_.fitness[static_cast<Eigen::Index>(i)]; }

    double evaluate(const Position& x)
    {
        double f;
        try {
            f = static_cast<double>(obj_(std::span<const double>(x.data(), static_cast<std::size_t>(x.size()))));
        } catch (const std::exception& e) {
            throw std::runtime_error("objective evaluation failed after " + std::to_string(flock_.eval_count) +
                                     " evaluations: " + e.what());
        }
        ++flock_.eval_count;
        if (std::isnan(f))
            throw std::runtime_error("objective returned NaN after " + std::to_string(flock_.eval_count) + " evaluations");
        return f;
    }

    /// Clamps and evaluates `cand`; keeps it only if strictly better than sparrow i.
    bool try_replace(std::size_t i, Position cand, const Position& previous)
    {
        rules::clamp_to_bounds(cand, previous, lower_, upper_);
        const double f = evaluate(cand);
        if (!(f < fit(i))) return false;
        flock_.positions.row(static_cast<Eigen::Index>(i)) = cand;
        flock_.fitness[static_cast<Eigen::Index>(i)] = f;
        return true;
    }

    const Obj& obj_;
    OptimizerConfig cfg_;
    SeededRng& rng_;
    Strategies strat_;
    std::size_t t_max_ = 0;
    double psi_ = 0.0;
    std::vector<double> lower_;
    std::vector<double> upper_;
    Flock flock_;
};

template <ObjectiveLike Obj>
Flock init_population(const Obj& obj, const OptimizerConfig& cfg, SeededRng& rng)
{
    SparrowSearch<Obj> search(obj, cfg, rng);
    search.initialize();
    return search.flock();
}

template <ObjectiveLike Obj>
RunRecord run(const Obj& obj, const OptimizerConfig& cfg, SeededRng& rng)
{
    SparrowSearch<Obj> search(obj, cfg, rng);
    return search.run();
}

/// Convenience overload owning its generator.
template <ObjectiveLike Obj>
RunRecord run(const Obj& obj, const OptimizerConfig& cfg, std::uint64_t seed)
{
    SeededRng rng(seed);
    return run(obj, cfg, rng);
}

}  // namespace tfssa

#endif  // TFSSA_OPTIMIZER_HPP
