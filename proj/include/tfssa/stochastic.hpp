/**
 * @file stochastic.hpp
 *
 * Seeded random primitives shared by the optimizers: a portable RNG wrapper,
 * the psi-perturbed tent chaotic map, Mantegna's Levy-stable step sampler and
 * the two iteration-dependent schedules (inertia weight and mutation radius).
 */
#ifndef TFSSA_STOCHASTIC_HPP
#define TFSSA_STOCHASTIC_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tfssa {

/// SplitMix64 finalizer. Used to seed generators and to derive child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// FNV-1a over a string, folded into a seed chain.
constexpr std::uint64_t hash_string(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) noexcept
{
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Child seed of `parent` for an integer stream index.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept
{
    return splitmix64(splitmix64(parent) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Child seed of `parent` for a named stream.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) noexcept
{
    return derive_seed(parent, hash_string(tag));
}

/// Per-run seed for one (method, problem, run) cell. Independent of the other
/// cells in a campaign, so adding a method never shifts existing seeds.
constexpr std::uint64_t cell_seed(std::uint64_t master, std::string_view method,
                                  std::string_view problem, std::uint64_t run) noexcept
{
    return derive_seed(derive_seed(derive_seed(master, method), problem), run);
}

/**
 * Deterministic random stream. The engine is std::mt19937_64, whose output
 * sequence is fixed by the standard; the uniform/normal transforms are written
 * out here because the std distributions are implementation-defined.
 */
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by the Marsaglia polar method.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n)
    {
        if (n == 0) throw std::invalid_argument("SeededRng::index: empty range");
        // Lemire-style rejection keeps the draw unbiased.
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

    /// +1 or -1 with equal probability.
    double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

    /// Fresh generator for a named sub-stream of this generator's seed.
    SeededRng split(std::string_view tag) const { return SeededRng(derive_seed(seed_, tag)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Tent chaos
// ---------------------------------------------------------------------------

struct TentParams {
    double a = 0.7;          ///< breakpoint of the two linear branches
    double psi_scale = 1.0;  ///< population size N; psi = U(0,1) / N

    bool valid() const noexcept { return a > 0.0 && a < 1.0 && psi_scale >= 1.0; }
};

/// Draws the scalar perturbation psi = U(0,1)/N once per initialization.
inline double draw_psi(const TentParams& params, SeededRng& rng)
{
    return rng.uniform() / params.psi_scale;
}

/**
 * One step of the psi-perturbed tent map, wrapped into [0,1) by mod 1:
 * x/a + psi on [0,a], (1-x)/(1-a) + psi on (a,1].
 */
inline double tent_next(double x, const TentParams& params, double psi)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("tent_next: x must lie in [0,1], got " + std::to_string(x));
    if (!(psi >= 0.0 && psi < 1.0)) throw std::domain_error("tent_next: psi must lie in [0,1)");
    double y = (x <= params.a) ? x / params.a : (1.0 - x) / (1.0 - params.a);
    y += psi;
    y -= std::floor(y);
    return (y >= 1.0) ? 0.0 : y;
}

/// n successive iterates starting after x0: out[0] = tent_next(x0), ...
inline std::vector<double> tent_sequence(double x0, const TentParams& params, double psi, std::size_t n)
{
    if (n == 0) throw std::invalid_argument("tent_sequence: n must be >= 1");
    std::vector<double> out;
    out.reserve(n);
    double x = x0;
    for (std::size_t i = 0; i < n; ++i) {
        x = tent_next(x, params, psi);
        out.push_back(x);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Levy flights
// ---------------------------------------------------------------------------

struct LevyParams {
    double alpha = 1.5;  ///< stability index

    bool valid() const noexcept { return alpha > 0.0 && alpha <= 2.0; }
};

/// Scale of the numerator normal in Mantegna's construction.
inline double mantegna_sigma(double alpha)
{
    const double num = std::tgamma(1.0 + alpha) * std::sin(std::numbers::pi * alpha / 2.0);
    const double den = std::tgamma((1.0 + alpha) / 2.0) * alpha * std::pow(2.0, (alpha - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / alpha);
}

/**
 * One Levy-stable step, u / |v|^(1/alpha) with u ~ N(0, sigma_u^2), v ~ N(0,1).
 * At alpha = 2 Mantegna's sigma_u collapses (sin(pi) = 0); the stable law is
 * Gaussian there, so a standard normal draw is returned instead.
 */
inline double levy_sample(const LevyParams& params, SeededRng& rng)
{
    if (!params.valid()) throw std::invalid_argument("levy_sample: alpha must lie in (0,2]");
    if (params.alpha == 2.0) return rng.normal();
    const double sigma_u = mantegna_sigma(params.alpha);
    const double u = sigma_u * rng.normal();
    double v = rng.normal();
    while (v == 0.0) v = rng.normal();
    return u / std::pow(std::abs(v), 1.0 / params.alpha);
}

// ---------------------------------------------------------------------------
// Iteration schedules
// ---------------------------------------------------------------------------

/// Inertia weight 1 - t/t_max, the roulette threshold of the Levy step.
inline double inertia_sigma(double t, double t_max)
{
    if (t_max < 1.0) throw std::invalid_argument("inertia_sigma: t_max must be >= 1");
    return 1.0 - t / t_max;
}

/// Probability of mutating the global best by tent chaos: tanh(2 (1 - t/t_max)).
inline double mutation_radius_r(double t, double t_max)
{
    if (t_max < 1.0) throw std::invalid_argument("mutation_radius_r: t_max must be >= 1");
    return std::tanh(2.0 * (1.0 - t / t_max));
}

}  // namespace tfssa

#endif  // TFSSA_STOCHASTIC_HPP
