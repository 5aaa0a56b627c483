#ifndef VNRF_SAMPLER_RENEWAL_SAMPLER_HPP
#define VNRF_SAMPLER_RENEWAL_SAMPLER_HPP

// Exact stationary sampler for the alternating renewal process.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vnrf/core/lattice.hpp"
#include "vnrf/core/random.hpp"
#include "vnrf/models/renewal.hpp"

namespace vnrf
{

namespace detail
{
/// P[G = j] = (1-ρ) ρ^{j-1}, j >= 1.
inline long geometric(Rng& rng, double rho)
{
    const double u = 1.0 - uniform01(rng); // (0, 1]
    return 1 + static_cast<long>(std::floor(std::log(u) / std::log(rho)));
}
} // namespace detail

/// Interval length T: mixture of geometrics with weights c_k ρ_k / (1-ρ_k).
inline long draw_interval(const RenewalParams& p, Rng& rng)
{
    const double w1 = p.c1 * p.rho1 / (1 - p.rho1);
    const double rho = uniform01(rng) < w1 ? p.rho1 : p.rho2;
    return detail::geometric(rng, rho);
}

/// Length-biased interval, P[J = j] ∝ j P[T = j].
inline long draw_covering_interval(const RenewalParams& p, Rng& rng)
{
    const double w1 = p.c1 * p.rho1 / ((1 - p.rho1) * (1 - p.rho1));
    const double w2 = p.c2 * p.rho2 / ((1 - p.rho2) * (1 - p.rho2));
    const double rho = uniform01(rng) * (w1 + w2) < w1 ? p.rho1 : p.rho2;
    return detail::geometric(rng, rho) + detail::geometric(rng, rho) - 1;
}

/// Stationary sample of length n with a free boundary.
inline Configuration renewal_exact_sample(const RenewalParams& p, std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream = 0)
{
    p.validate();
    if (n < 2) throw std::invalid_argument("renewal sample needs n >= 2");
    Rng rng = make_rng(seed, stream);
    const long covering = draw_covering_interval(p, rng);
    const long phase = static_cast<long>(uniform_index(rng, static_cast<std::uint64_t>(covering)));
    Symbol sym = static_cast<Symbol>(uniform_index(rng, 2));
    std::vector<Symbol> out(n);
    std::size_t pos = 0;
    long run = covering - phase;
    while (pos < n) {
        for (long k = 0; k < run && pos < n; ++k) out[pos++] = sym;
        sym = static_cast<Symbol>(1 - sym);
        run = draw_interval(p, rng);
    }
    return Configuration(Window({static_cast<int>(n)}), Alphabet(2), Boundary::free(), std::move(out));
}

} // namespace vnrf

#endif
