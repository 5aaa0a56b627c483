#ifndef VNRF_MODELS_COMPOSE_HPP
#define VNRF_MODELS_COMPOSE_HPP

/** @file
 * Region specifications ρ_Λ built from one-point specifications.
 *
 * Λ is exhausted one site at a time: with Λ1 the first site of the order and
 * Λ2 the rest,
 *   ρ_Λ(ω) = ρ_Λ1(ω) / Σ_{ω̄ on Λ1} ρ_Λ1(ω̄ ω_{Λ1^c}) / ρ_Λ2(ω̄ ω_{Λ1^c}).
 */

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "vnrf/models/model.hpp"

namespace vnrf
{

struct ComposedSpec
{
    /// Region sites, ascending; configuration index uses the first site as the most significant digit.
    std::vector<Site> region;
    int alphabet_size = 2;
    std::vector<double> probs;
    /// sp_Λ(ω): union of single-site supports over all values on Λ, minus Λ.
    std::vector<Site> support;

    std::vector<Symbol> values(std::size_t index) const
    {
        std::vector<Symbol> v(region.size());
        for (std::size_t k = region.size(); k-- > 0;) {
            v[k] = static_cast<Symbol>(index % alphabet_size);
            index /= alphabet_size;
        }
        return v;
    }
};

namespace detail
{
template <typename M>
double rho_site(const M& m, const Configuration& w, Site s)
{
    const double g = m.gamma0(ConfigView(w, s))[w[s]];
    if (!(g > 0)) throw std::domain_error("positivity violated");
    return g;
}

template <typename M>
double rho_region(const M& m, Configuration& w, std::span<const Site> order)
{
    const Site s1 = order.front();
    if (order.size() == 1) return rho_site(m, w, s1);
    const auto rest = order.subspan(1);
    const double num = rho_site(m, w, s1);
    const Symbol keep = w[s1];
    double den = 0;
    for (int a = 0; a < w.alphabet().size(); ++a) {
        w.assign(s1, static_cast<Symbol>(a));
        den += rho_site(m, w, s1) / rho_region(m, w, rest);
    }
    w.assign(s1, keep);
    return num / den;
}
} // namespace detail

/// ρ_Λ(ω_Λ | ω_{Λ^c}) evaluated at the current values of `w`, exhausting Λ in `order`.
inline double rho_region(const AnyModel& m, Configuration& w, std::span<const Site> order)
{
    if (order.empty()) throw std::invalid_argument("compose: empty region");
    return visit_model(m, [&](const auto& x) { return detail::rho_region(x, w, order); });
}

/// Full table of ρ_Λ over A^Λ given the outside of ω. `order` defaults to ascending sites.
inline ComposedSpec compose_specification(const AnyModel& m, const Configuration& omega, std::vector<Site> region,
                                          std::vector<Site> order = {})
{
    if (region.empty()) throw std::invalid_argument("compose: empty region");
    std::sort(region.begin(), region.end());
    if (std::adjacent_find(region.begin(), region.end()) != region.end())
        throw std::invalid_argument("compose: duplicate sites");
    if (order.empty()) order = region;
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != region) throw std::invalid_argument("compose: order must be a permutation of the region");
    }
    ComposedSpec out;
    out.region = region;
    out.alphabet_size = omega.alphabet().size();
    std::size_t states = 1;
    for (std::size_t k = 0; k < region.size(); ++k) {
        states *= static_cast<std::size_t>(out.alphabet_size);
        if (states > (std::size_t{1} << 20)) throw std::invalid_argument("compose: region too large");
    }
    Configuration w = omega;
    std::vector<Site> support;
    out.probs.resize(states);
    for (std::size_t idx = 0; idx < states; ++idx) {
        const auto vals = out.values(idx);
        for (std::size_t k = 0; k < region.size(); ++k) w.assign(region[k], vals[k]);
        out.probs[idx] = rho_region(m, w, order);
        for (Site s : region) {
            const Coord c = w.window().coord(s);
            for (const auto& off : model_context(m, ConfigView(w, s)).sites)
                if (auto r = w.resolve(c + off)) support.push_back(*r);
        }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (Site s : support)
        if (!std::binary_search(region.begin(), region.end(), s)) out.support.push_back(s);
    return out;
}

} // namespace vnrf

#endif
