/**
 * @file benchfn.hpp
 *
 * Shifted and rotated continuous test functions over [-100,100]^D.
 *
 * Each function is base(z* + s R (x - o)) - base(z*) + f_star, where o is a
 * seeded shift, R a seeded orthogonal matrix, s a family-specific scale that
 * maps the search box onto the base function's customary domain and z* the
 * base optimum. Subtracting base(z*) makes evaluate(o) == f_star exactly.
 */
#ifndef TFSSA_BENCHFN_HPP
#define TFSSA_BENCHFN_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tfssa/stochastic.hpp"

namespace tfssa::bench {

enum class Family {
    bent_cigar,
    schwefel,
    lunacek_bi_rastrigin,
    rosenbrock_griewank,
    rastrigin,
    griewank,
    ackley,
    sphere,
    rosenbrock,
};

inline constexpr std::array<std::pair<Family, std::string_view>, 9> family_names{{
    {Family::bent_cigar, "bent_cigar"},
    {Family::schwefel, "schwefel"},
    {Family::lunacek_bi_rastrigin, "lunacek_bi_rastrigin"},
    {Family::rosenbrock_griewank, "rosenbrock_griewank"},
    {Family::rastrigin, "rastrigin"},
    {Family::griewank, "griewank"},
    {Family::ackley, "ackley"},
    {Family::sphere, "sphere"},
    {Family::rosenbrock, "rosenbrock"},
}};

inline std::string_view to_string(Family f)
{
    for (const auto& [fam, name] : family_names)
        if (fam == f) return name;
    return "unknown";
}

inline Family parse_family(std::string_view name)
{
    for (const auto& [fam, n] : family_names)
        if (n == name) return fam;
    throw std::invalid_argument("unknown benchmark family '" + std::string(name) + "'");
}

/// Optimum offsets of the CEC 2020 families; the plain families sit at 0.
inline double default_f_star(Family f)
{
    switch (f) {
    case Family::bent_cigar: return 100.0;
    case Family::schwefel: return 1100.0;
    case Family::lunacek_bi_rastrigin: return 700.0;
    case Family::rosenbrock_griewank: return 1900.0;
    default: return 0.0;
    }
}

/// Multiplier applied to x - o before rotation.
inline double input_scale(Family f)
{
    switch (f) {
    case Family::schwefel: return 5.0;
    case Family::lunacek_bi_rastrigin:
    case Family::rastrigin: return 5.12 / 100.0;
    case Family::griewank: return 6.0;
    case Family::ackley: return 32.768 / 100.0;
    case Family::rosenbrock: return 2.048 / 100.0;
    case Family::rosenbrock_griewank: return 5.0 / 100.0;
    default: return 1.0;
    }
}

namespace detail {
inline constexpr double schwefel_opt = 420.9687462275036;
inline constexpr double lunacek_mu0 = 2.5;

inline double griewank_1d(double v) { return v * v / 4000.0 - std::cos(v) + 1.0; }
}  // namespace detail

/// Base optimum z* of a family (the point where base_eval is globally minimal).
inline std::vector<double> base_optimum(Family f, std::size_t dim)
{
    switch (f) {
    case Family::rosenbrock:
    case Family::rosenbrock_griewank: return std::vector<double>(dim, 1.0);
    case Family::schwefel: return std::vector<double>(dim, detail::schwefel_opt);
    case Family::lunacek_bi_rastrigin: return std::vector<double>(dim, detail::lunacek_mu0);
    default: return std::vector<double>(dim, 0.0);
    }
}

/// Standard closed form of the named base function.
inline double base_eval(Family f, std::span<const double> z)
{
    const std::size_t n = z.size();
    const double dn = static_cast<double>(n);
    double acc = 0.0;
    switch (f) {
    case Family::sphere:
        for (double v : z) acc += v * v;
        return acc;
    case Family::bent_cigar:
        for (std::size_t i = 1; i < n; ++i) acc += z[i] * z[i];
        return z[0] * z[0] + 1e6 * acc;
    case Family::rastrigin:
        for (double v : z) acc += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
        return acc;
    case Family::griewank: {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += z[i] * z[i];
            prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
        }
        return acc / 4000.0 - prod + 1.0;
    }
    case Family::ackley: {
        double sq = 0.0, cs = 0.0;
        for (double v : z) {
            sq += v * v;
            cs += std::cos(2.0 * std::numbers::pi * v);
        }
        return -20.0 * std::exp(-0.2 * std::sqrt(sq / dn)) - std::exp(cs / dn) + 20.0 + std::numbers::e;
    }
    case Family::rosenbrock:
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double a = z[i] * z[i] - z[i + 1];
            const double b = z[i] - 1.0;
            acc += 100.0 * a * a + b * b;
        }
        return acc;
    case Family::rosenbrock_griewank:
        // Griewank of the 2-D Rosenbrock term over consecutive (wrapped) pairs.
        for (std::size_t i = 0; i < n; ++i) {
            const double x1 = z[i];
            const double x2 = z[(i + 1) % n];
            const double a = x1 * x1 - x2;
            const double b = x1 - 1.0;
            acc += detail::griewank_1d(100.0 * a * a + b * b);
        }
        return acc;
    case Family::schwefel:
        // Modified Schwefel with the quadratic penalty outside [-500,500].
        for (double zi : z) {
            if (zi > 500.0) {
                const double m = 500.0 - std::fmod(zi, 500.0);
                acc -= m * std::sin(std::sqrt(std::abs(m)));
                const double p = (zi - 500.0) / 100.0;
                acc += p * p / dn;
            } else if (zi < -500.0) {
                const double m = -500.0 + std::fmod(std::abs(zi), 500.0);
                acc -= m * std::sin(std::sqrt(std::abs(500.0 - std::fmod(std::abs(zi), 500.0))));
                const double p = (zi + 500.0) / 100.0;
                acc += p * p / dn;
            } else {
                acc -= zi * std::sin(std::sqrt(std::abs(zi)));
            }
        }
        return acc + 418.9828872724338 * dn;
    case Family::lunacek_bi_rastrigin: {
        const double d = 1.0;
        const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dn + 20.0) - 8.2);
        const double mu1 = -std::sqrt((detail::lunacek_mu0 * detail::lunacek_mu0 - d) / s);
        double s0 = 0.0, s1 = 0.0, cs = 0.0;
        for (double v : z) {
            s0 += (v - detail::lunacek_mu0) * (v - detail::lunacek_mu0);
            s1 += (v - mu1) * (v - mu1);
            cs += std::cos(2.0 * std::numbers::pi * (v - detail::lunacek_mu0));
        }
        return std::min(s0, d * dn + s * s1) + 10.0 * (dn - cs);
    }
    }
    throw std::logic_error("base_eval: unhandled family");
}

/// Identity of a generated function; everything else is derived from the seed.
struct FunctionSpec {
    Family family = Family::sphere;
    std::size_t dim = 10;
    std::uint64_t seed = 0;
    Eigen::VectorXd shift;
    Eigen::MatrixXd rotation;
    double f_star = 0.0;

    std::string id() const
    {
        return std::string(to_string(family)) + "_D" + std::to_string(dim) + "_s" + std::to_string(seed);
    }
};

/// Seeded orthogonal matrix: QR of a Gaussian matrix with the signs of R's
/// diagonal folded back into Q.
inline Eigen::MatrixXd random_rotation(std::size_t dim, SeededRng& rng)
{
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

/// Largest |R^T R - I| entry.
inline double orthogonality_error(const Eigen::MatrixXd& r)
{
    return (r.transpose() * r - Eigen::MatrixXd::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
}

/// A composed test function satisfying ObjectiveLike.
class BenchmarkFunction {
public:
    static constexpr double bound = 100.0;
    static constexpr double shift_range = 80.0;

    BenchmarkFunction(FunctionSpec spec) : spec_(std::move(spec))
    {
        if (spec_.dim < 2) throw std::invalid_argument("benchmark functions need dim >= 2");
        if (spec_.shift.size() != static_cast<Eigen::Index>(spec_.dim) ||
            spec_.rotation.rows() != static_cast<Eigen::Index>(spec_.dim) ||
            spec_.rotation.cols() != static_cast<Eigen::Index>(spec_.dim))
            throw std::invalid_argument("benchmark spec: shift/rotation size mismatch");
        if (orthogonality_error(spec_.rotation) > 1e-9) throw std::invalid_argument("benchmark spec: rotation is not orthogonal");
        if (spec_.shift.cwiseAbs().maxCoeff() > bound) throw std::invalid_argument("benchmark spec: shift outside search range");
        lower_.assign(spec_.dim, -bound);
        upper_.assign(spec_.dim, bound);
        z_star_ = base_optimum(spec_.family, spec_.dim);
        base_at_opt_ = base_eval(spec_.family, z_star_);
        scale_ = input_scale(spec_.family);
    }

    const FunctionSpec& spec() const noexcept { return spec_; }
    std::size_t dim() const noexcept { return spec_.dim; }
    std::span<const double> lower() const noexcept { return lower_; }
    std::span<const double> upper() const noexcept { return upper_; }
    double f_star() const noexcept { return spec_.f_star; }

    double operator()(std::span<const double> x) const
    {
        if (x.size() != spec_.dim) throw std::invalid_argument("benchmark function: wrong input dimension");
        const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
        const Eigen::VectorXd y = spec_.rotation * (xv - spec_.shift);
        std::vector<double> z(spec_.dim);
        for (std::size_t j = 0; j < spec_.dim; ++j) z[j] = z_star_[j] + scale_ * y[static_cast<Eigen::Index>(j)];
        return (base_eval(spec_.family, z) - base_at_opt_) + spec_.f_star;
    }

private:
    FunctionSpec spec_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> z_star_;
    double base_at_opt_ = 0.0;
    double scale_ = 1.0;
};

/// Builds the seeded function of a family. Identical (family, dim, seed) triples
/// give identical functions.
inline BenchmarkFunction make_function(Family family, std::size_t dim, std::uint64_t seed)
{
    if (dim < 2) throw std::invalid_argument("make_function: dim must be >= 2");
    SeededRng rng(derive_seed(seed, to_string(family)));
    FunctionSpec spec;
    spec.family = family;
    spec.dim = dim;
    spec.seed = seed;
    spec.shift.resize(static_cast<Eigen::Index>(dim));
    for (Eigen::Index j = 0; j < spec.shift.size(); ++j)
        spec.shift[j] = rng.uniform(-BenchmarkFunction::shift_range, BenchmarkFunction::shift_range);
    spec.rotation = random_rotation(dim, rng);
    spec.f_star = default_f_star(family);
    return BenchmarkFunction(std::move(spec));
}

inline BenchmarkFunction make_function(std::string_view family, std::size_t dim, std::uint64_t seed)
{
    return make_function(parse_family(family), dim, seed);
}

}  // namespace tfssa::bench

#endif  // TFSSA_BENCHFN_HPP
