/**
 * @file objective.hpp
 *
 * Box-bounded minimization problems as consumed by the sparrow search.
 */
#ifndef TFSSA_OBJECTIVE_HPP
#define TFSSA_OBJECTIVE_HPP

#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tfssa {

/// Anything with a dimension, per-dimension bounds and a pure fitness (lower is better).
template <class T>
concept ObjectiveLike = requires(const T& obj, std::span<const double> x) {
    { obj.dim() } -> std::convertible_to<std::size_t>;
    { obj.lower() } -> std::convertible_to<std::span<const double>>;
    { obj.upper() } -> std::convertible_to<std::span<const double>>;
    { obj(x) } -> std::convertible_to<double>;
};

/// Type-erased objective.
class Objective {
public:
    using Fn = std::function<double(std::span<const double>)>;

    Objective(std::vector<double> lower, std::vector<double> upper, Fn fn)
        : lower_(std::move(lower)), upper_(std::move(upper)), fn_(std::move(fn))
    {
        if (lower_.size() != upper_.size() || lower_.empty())
            throw std::invalid_argument("Objective: bounds must be non-empty and of equal length");
        for (std::size_t j = 0; j < lower_.size(); ++j)
            if (!(lower_[j] <= upper_[j]))
                throw std::invalid_argument("Objective: lower bound exceeds upper bound in dimension " + std::to_string(j));
        if (!fn_) throw std::invalid_argument("Objective: empty evaluation function");
    }

    /// Same bounds [lo, hi] in every dimension.
    static Objective uniform_box(std::size_t dim, double lo, double hi, Fn fn)
    {
        return Objective(std::vector<double>(dim, lo), std::vector<double>(dim, hi), std::move(fn));
    }

    std::size_t dim() const noexcept { return lower_.size(); }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    double operator()(std::span<const double> x) const { return fn_(x); }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    Fn fn_;
};

}  // namespace tfssa

#endif  // TFSSA_OBJECTIVE_HPP
