#ifndef VNRF_ORACLE_IDENTITIES_HPP
#define VNRF_ORACLE_IDENTITIES_HPP

// Randomized checks of structural identities; failures carry a witness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnrf/estimator/estimator.hpp"
#include "vnrf/models/compose.hpp"
#include "vnrf/oracle/loglik_forms.hpp"
#include "vnrf/sampler/heat_bath.hpp"

namespace vnrf
{

struct IdentityResult
{
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double tolerance = 0;
    double max_deviation = 0;
    std::string witness;

    bool passed() const noexcept { return failures == 0; }
};

inline std::string render(const Configuration& c)
{
    std::ostringstream os;
    const std::size_t row = static_cast<std::size_t>(c.window().extent(c.dim() - 1));
    for (std::size_t s = 0; s < c.size(); ++s) {
        os << int(c[s]);
        if ((s + 1) % row == 0 && s + 1 < c.size()) os << '/';
    }
    return os.str();
}

inline std::string render(const std::vector<Coord>& v)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << '(' << v[k][0] << ',' << v[k][1] << ')';
    os << '}';
    return os.str();
}

inline PolygonParams default_polygon_params(int L, double beta)
{
    PolygonParams p;
    p.beta = beta;
    p.L = L;
    p.J.assign(static_cast<std::size_t>((2 * L + 1) * (2 * L + 1)) + 1, 1.0);
    return p;
}

/// Closed-form context versus the union of interaction regions, on heat-bath
/// samples of a side x side torus read at the center with a free boundary.
inline IdentityResult check_polygon_context_identity(const PolygonParams& params, std::size_t trials,
                                                     std::uint64_t seed, int side = 9, int sweeps = 20)
{
    IdentityResult r{"closed-form context = union of interaction regions", trials, 0, 0, 0, {}};
    const PolygonModel model(params);
    const AnyModel any = model;
    const Window w({side, side});
    SamplerConfig cfg;
    cfg.sweeps = sweeps;
    cfg.seed = seed;
    const Coord center{side / 2, side / 2, 0};
    for (std::size_t t = 0; t < trials; ++t) {
        const Configuration c = sample_field(any, w, cfg, Boundary::free(), t);
        const ConfigView v(c, center);
        const auto lhs = model.closed_form_context(v);
        const auto rhs = model.support_union_context(v);
        if (lhs.sites != rhs.sites) {
            if (r.failures++ == 0) {
                auto a = lhs.sites, b = rhs.sites;
                std::sort(a.begin(), a.end());
                std::sort(b.begin(), b.end());
                std::vector<Coord> only_a, only_b;
                std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
                std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
                r.witness = "omega=" + render(c) + " |closed_form|=" + std::to_string(a.size()) +
                            " |union|=" + std::to_string(b.size()) + " only_closed_form=" + render(only_a) +
                            " only_union=" + render(only_b);
            }
        }
    }
    return r;
}

/// Children-sum statistic against the site-sum and pseudo-likelihood forms.
inline IdentityResult check_loglik_forms(std::size_t samples, std::size_t n, int l, std::uint64_t seed,
                                         std::size_t sites_per_sample = 10)
{
    IdentityResult r{"log-likelihood forms agree", 0, 0, 1e-10, 0, {}};
    const AnyModel model = RenewalModel(RenewalParams{});
    for (std::size_t s = 0; s < samples; ++s) {
        SamplerConfig cfg;
        cfg.seed = seed;
        const Configuration c = sample_field(model, Window({static_cast<int>(n)}), cfg, Boundary::free(), s);
        const SecurityRegion region = security_region(c.window(), l, false);
        const RadiusLadder ladder(c, region, l, 1);
        Rng rng = make_rng(seed ^ 0x5eed, s);
        for (std::size_t k = 0; k < sites_per_sample; ++k) {
            const std::size_t pos = uniform_index(rng, region.size());
            const Site i = region.sites[pos];
            const double f1 = ladder.stat(pos, l);
            const double f3 = oracle::loglik_site_sum(c, region.sites, i, l);
            const double f4 = oracle::loglik_mpl_difference(c, region.sites, i, l);
            ++r.trials;
            const double dev = std::max(std::abs(f1 - f3), std::abs(f1 - f4)) / std::max({1.0, std::abs(f1)});
            r.max_deviation = std::max(r.max_deviation, dev);
            if (!oracle::close_rel(f1, f3) || !oracle::close_rel(f1, f4)) {
                if (r.failures++ == 0) {
                    std::ostringstream os;
                    os << "sample=" << s << " site=" << i << " forms=" << f1 << "," << f3 << "," << f4;
                    r.witness = os.str();
                }
            }
        }
    }
    return r;
}

/// Ratio consistency of composed region specifications for Λ ⊂ Δ.
inline IdentityResult check_consistency(const AnyModel& model, const Configuration& omega,
                                        const std::vector<Site>& delta, std::size_t trials, std::uint64_t seed)
{
    IdentityResult r{"region specifications are consistent", 0, 0, 1e-10, 0, {}};
    Rng rng = make_rng(seed, 0xC0);
    const int A = omega.alphabet().size();
    const std::size_t m = delta.size();
    for (std::size_t t = 0; t < trials; ++t) {
        Configuration sigma = omega;
        for (Site s = 0; s < sigma.size(); ++s) sigma.assign(s, static_cast<Symbol>(uniform_index(rng, A)));
        for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
            std::vector<Site> lambda;
            for (std::size_t k = 0; k < m; ++k)
                if (mask >> k & 1) lambda.push_back(delta[k]);
            Configuration x = sigma, y = sigma;
            for (Site s : lambda) {
                x.assign(s, static_cast<Symbol>(uniform_index(rng, A)));
                y.assign(s, static_cast<Symbol>(uniform_index(rng, A)));
            }
            const double lhs = rho_region(model, x, delta) / rho_region(model, y, delta);
            const double rhs = rho_region(model, x, lambda) / rho_region(model, y, lambda);
            ++r.trials;
            const double dev = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
            r.max_deviation = std::max(r.max_deviation, dev);
            if (dev > r.tolerance && r.failures++ == 0) r.witness = "sigma=" + render(sigma);
        }
    }
    return r;
}

/// ρ_Λ is unchanged when every site outside sp_Λ ∪ Λ is resampled.
inline IdentityResult check_region_support(const AnyModel& model, const Configuration& omega,
                                           const std::vector<Site>& lambda, std::size_t trials, std::uint64_t seed)
{
    IdentityResult r{"region support is sufficient", 0, 0, 0, 0, {}};
    const ComposedSpec base = compose_specification(model, omega, lambda);
    std::vector<char> keep(omega.size(), 0);
    for (Site s : base.support) keep[s] = 1;
    for (Site s : base.region) keep[s] = 1;
    Rng rng = make_rng(seed, 0x5B);
    for (std::size_t t = 0; t < trials; ++t) {
        Configuration x = omega;
        for (Site s = 0; s < x.size(); ++s)
            if (!keep[s]) x.assign(s, static_cast<Symbol>(uniform_index(rng, x.alphabet().size())));
        ComposedSpec other;
        try {
            other = compose_specification(model, x, lambda);
        } catch (const std::out_of_range&) {
            continue; // resampling pushed a context outside the window
        }
        ++r.trials;
        double dev = 0;
        for (std::size_t k = 0; k < base.probs.size(); ++k) dev = std::max(dev, std::abs(base.probs[k] - other.probs[k]));
        r.max_deviation = std::max(r.max_deviation, dev);
        if (dev > r.tolerance && r.failures++ == 0) r.witness = "resampled=" + render(x);
    }
    return r;
}

inline nlohmann::json to_json(const IdentityResult& r)
{
    return {{"name", r.name},           {"trials", r.trials},     {"failures", r.failures},
            {"tolerance", r.tolerance}, {"max_deviation", r.max_deviation}, {"passed", r.passed()},
            {"witness", r.witness}};
}

/// The default battery used by the CLI.
inline std::vector<IdentityResult> identity_checks(std::uint64_t seed, std::size_t oho_trials = 100,
                                                   std::size_t loglik_samples = 50)
{
    std::vector<IdentityResult> out;
    out.push_back(check_polygon_context_identity(default_polygon_params(2, 0.05), oho_trials, seed));
    out.push_back(check_loglik_forms(loglik_samples, 500, 2, seed));

    const AnyModel ising = IsingModel(0.3);
    Configuration ring(Window({12}), Alphabet(2), Boundary::periodic());
    out.push_back(check_consistency(ising, ring, {3, 4, 5}, 20, seed));
    out.back().name += " (markov1 ring)";

    out.push_back(check_region_support(ising, ring, {4, 5}, 50, seed));
    out.back().name += " (markov1 ring)";

    // Renewal: a fixed line with short runs so that contexts stay inside.
    std::vector<Symbol> line;
    for (int k = 0; k < 40; ++k) line.push_back(static_cast<Symbol>((k / 2 + k / 5) % 2));
    const Configuration seg(Window({40}), Alphabet(2), Boundary::free(), line);
    out.push_back(check_region_support(RenewalModel(RenewalParams{}), seg, {19, 20}, 50, seed));
    out.back().name += " (renewal line)";
    return out;
}

} // namespace vnrf

#endif
