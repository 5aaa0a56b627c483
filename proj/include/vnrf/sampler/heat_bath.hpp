#ifndef VNRF_SAMPLER_HEAT_BATH_HPP
#define VNRF_SAMPLER_HEAT_BATH_HPP

/** @file
 * Single-site heat-bath dynamics: each update redraws one site from the
 * model's one-point specification given its current neighbors.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/core/lattice.hpp"
#include "vnrf/core/random.hpp"
#include "vnrf/models/model.hpp"
#include "vnrf/sampler/renewal_sampler.hpp"

namespace vnrf
{

enum class Schedule { raster, random_site };

inline Schedule parse_schedule(const std::string& s)
{
    if (s == "raster") return Schedule::raster;
    if (s == "random-site") return Schedule::random_site;
    throw std::invalid_argument("unknown schedule '" + s + "' (expected raster or random-site)");
}

inline std::string to_string(Schedule s)
{
    return s == Schedule::raster ? "raster" : "random-site";
}

struct SamplerConfig
{
    int sweeps = 1000;
    int thinning = 1;
    std::uint64_t seed = 0;
    Schedule schedule = Schedule::raster;

    void validate() const
    {
        if (sweeps < 0) throw std::invalid_argument("sweeps must be >= 0");
        if (thinning < 1) throw std::invalid_argument("thinning must be >= 1");
    }
};

template <typename M>
void heat_bath_update(const M& m, Configuration& c, Site s, Rng& rng)
{
    c.assign(s, m.gamma0(ConfigView(c, s)).sample(rng));
}

template <typename M>
void heat_bath_sweep(const M& m, Configuration& c, Rng& rng, Schedule schedule)
{
    const std::size_t n = c.size();
    if (schedule == Schedule::raster) {
        for (Site s = 0; s < n; ++s) heat_bath_update(m, c, s, rng);
    } else {
        for (std::size_t k = 0; k < n; ++k) heat_bath_update(m, c, uniform_index(rng, n), rng);
    }
}

inline void heat_bath_sweep(const AnyModel& m, Configuration& c, Rng& rng, Schedule schedule)
{
    visit_model(m, [&](const auto& x) { heat_bath_sweep(x, c, rng, schedule); });
}

/// A running chain; owns its configuration and generator.
class HeatBathChain
{
public:
    HeatBathChain(AnyModel model, Configuration start, std::uint64_t seed, std::uint64_t stream = 0)
        : model_(std::move(model)), config_(std::move(start)), rng_(make_rng(seed, stream))
    {
        if (config_.alphabet() != model_alphabet(model_))
            throw std::invalid_argument("chain: configuration alphabet does not match the model");
        if (config_.dim() != model_dim(model_))
            throw std::invalid_argument("chain: configuration dimension does not match the model");
    }

    void sweep(Schedule s = Schedule::raster) { heat_bath_sweep(model_, config_, rng_, s); }

    void update(Site s)
    {
        visit_model(model_, [&](const auto& x) { heat_bath_update(x, config_, s, rng_); });
    }

    /// One update at a uniformly drawn site; returns the site.
    Site update_random()
    {
        const Site s = uniform_index(rng_, config_.size());
        update(s);
        return s;
    }

    const Configuration& config() const noexcept { return config_; }
    Rng& rng() noexcept { return rng_; }

private:
    AnyModel model_;
    Configuration config_;
    Rng rng_;
};

/// Uniformly random start on a window.
inline Configuration random_configuration(const Window& w, Alphabet a, Boundary b, Rng& rng)
{
    Configuration c(w, a, b);
    for (Site s = 0; s < c.size(); ++s) c.assign(s, static_cast<Symbol>(uniform_index(rng, a.size())));
    return c;
}

/// Draws a field on `window`. Lattice models run heat-bath on the torus for
/// `sweeps` sweeps and the result is relabeled with `boundary`; the renewal
/// model uses its exact stationary construction.
inline Configuration sample_field(const AnyModel& m, const Window& window, const SamplerConfig& cfg,
                                  Boundary boundary = Boundary::periodic(), std::uint64_t stream = 0)
{
    cfg.validate();
    if (window.dim() != model_dim(m)) throw std::invalid_argument("window dimension does not match the model");
    if (boundary.kind == BoundaryKind::fixed) throw std::invalid_argument("sampling supports free or periodic output");
    if (const auto* r = std::get_if<RenewalModel>(&m)) {
        Configuration c = renewal_exact_sample(r->params(), window.size(), cfg.seed, stream);
        c.set_boundary(boundary);
        return c;
    }
    Rng rng = make_rng(cfg.seed, stream);
    Configuration c = random_configuration(window, model_alphabet(m), Boundary::periodic(), rng);
    if (const auto range = model_range(m); range && *range > 0 && window.min_extent() <= 2 * *range)
        throw std::invalid_argument("window extent must exceed twice the model range");
    for (int k = 0; k < cfg.sweeps; ++k) heat_bath_sweep(m, c, rng, cfg.schedule);
    c.set_boundary(boundary);
    return c;
}

/// Autocorrelation of the mean magnetization along a chain, at lags 0..max_lag
/// measured in units of `thinning` sweeps.
inline std::vector<double> magnetization_autocorrelation(const AnyModel& m, const Window& window,
                                                         const SamplerConfig& cfg, int samples, int max_lag)
{
    if (samples < 2 || max_lag < 0 || max_lag >= samples)
        throw std::invalid_argument("autocorrelation: need samples >= 2 and 0 <= max_lag < samples");
    Configuration start = sample_field(m, window, cfg);
    HeatBathChain chain(m, start, cfg.seed, 1);
    std::vector<double> series;
    series.reserve(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        for (int t = 0; t < cfg.thinning; ++t) chain.sweep(cfg.schedule);
        double mean = 0;
        for (Symbol v : chain.config().symbols()) mean += v;
        series.push_back(mean / static_cast<double>(chain.config().size()));
    }
    double mu = 0;
    for (double x : series) mu += x;
    mu /= samples;
    double var = 0;
    for (double x : series) var += (x - mu) * (x - mu);
    std::vector<double> acf;
    for (int lag = 0; lag <= max_lag; ++lag) {
        double c = 0;
        for (int t = 0; t + lag < samples; ++t) c += (series[t] - mu) * (series[t + lag] - mu);
        acf.push_back(var > 0 ? c / var : 0.0);
    }
    return acf;
}

} // namespace vnrf

#endif
