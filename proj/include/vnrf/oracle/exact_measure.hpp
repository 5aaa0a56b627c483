#ifndef VNRF_ORACLE_EXACT_MEASURE_HPP
#define VNRF_ORACLE_EXACT_MEASURE_HPP

/** @file
 * Exact laws on tiny windows by full enumeration.
 *
 * Energy models use exp(-β H) on a periodic torus (i.i.d. as a product law).
 * The renewal process has no torus law; it uses the stationary law of a
 * segment of the line, computed from the process construction.
 */

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "vnrf/core/pattern.hpp"
#include "vnrf/models/model.hpp"

namespace vnrf
{

struct ExactMeasure
{
    Window window;
    Alphabet alphabet;
    Boundary boundary;
    /// One entry per configuration; site 0 is the most significant digit.
    std::vector<double> probs;

    std::size_t states() const noexcept { return probs.size(); }

    Configuration configuration(std::size_t index) const
    {
        const std::size_t A = static_cast<std::size_t>(alphabet.size());
        std::vector<Symbol> v(window.size());
        for (std::size_t s = window.size(); s-- > 0;) {
            v[s] = static_cast<Symbol>(index % A);
            index /= A;
        }
        return Configuration(window, alphabet, boundary, std::move(v));
    }

    /// Marginal law of the symbols at `sites`, first site most significant.
    std::vector<double> marginal(const std::vector<Site>& sites) const
    {
        const std::size_t A = static_cast<std::size_t>(alphabet.size());
        std::size_t m = 1;
        for (std::size_t k = 0; k < sites.size(); ++k) m *= A;
        std::vector<double> out(m, 0.0);
        std::vector<std::size_t> weight(window.size(), 1);
        for (std::size_t s = window.size() - 1; s-- > 0;) weight[s] = weight[s + 1] * A;
        for (std::size_t x = 0; x < probs.size(); ++x) {
            std::size_t idx = 0;
            for (Site s : sites) idx = idx * A + (x / weight[s]) % A;
            out[idx] += probs[x];
        }
        return out;
    }
};

inline constexpr std::size_t kMaxExactStates = std::size_t{1} << 20;

/// Stationary probability of a binary string under the renewal process.
inline double renewal_string_probability(const RenewalParams& p, const std::vector<Symbol>& x)
{
    if (x.empty()) return 1.0;
    std::vector<int> runs{1};
    for (std::size_t k = 1; k < x.size(); ++k) {
        if (x[k] == x[k - 1]) ++runs.back();
        else runs.push_back(1);
    }
    const double mu = p.mean();
    if (runs.size() == 1) {
        const int n = runs[0];
        const double tail = p.c1 * std::pow(p.rho1, n) / ((1 - p.rho1) * (1 - p.rho1)) +
                            p.c2 * std::pow(p.rho2, n) / ((1 - p.rho2) * (1 - p.rho2));
        return 0.5 * tail / mu;
    }
    double prob = 0.5 * p.tail(runs.front()) / mu;
    for (std::size_t k = 1; k + 1 < runs.size(); ++k) prob *= p.mass(runs[k]);
    return prob * p.tail(runs.back());
}

inline ExactMeasure exact_measure(const AnyModel& m, const Window& w)
{
    const int A = model_alphabet(m).size();
    std::size_t states = 1;
    for (std::size_t s = 0; s < w.size(); ++s) {
        states *= static_cast<std::size_t>(A);
        if (states > kMaxExactStates) throw std::invalid_argument("state space too large");
    }
    if (w.dim() != model_dim(m)) throw std::invalid_argument("window dimension does not match the model");

    ExactMeasure out{w, Alphabet(A), Boundary::periodic(), std::vector<double>(states)};
    if (const auto* r = std::get_if<RenewalModel>(&m)) {
        out.boundary = Boundary::free();
        for (std::size_t x = 0; x < states; ++x) {
            auto c = out.configuration(x);
            out.probs[x] = renewal_string_probability(r->params(), {c.symbols().begin(), c.symbols().end()});
        }
        return out;
    }
    if (const auto range = model_range(m); range && *range > 0 && w.min_extent() <= 2 * *range)
        throw std::invalid_argument("torus extent must exceed twice the model range");

    std::vector<Site> all(w.size());
    for (Site s = 0; s < w.size(); ++s) all[s] = s;
    std::vector<double> logw(states);
    double mx = -INFINITY;
    for (std::size_t x = 0; x < states; ++x) {
        const auto c = out.configuration(x);
        logw[x] = visit_model(m, [&](const auto& mod) -> double {
            if constexpr (requires { mod.region_energy(c, all); })
                return -mod.beta() * mod.region_energy(c, all);
            else
                throw std::invalid_argument("model has no energy");
        });
        mx = std::max(mx, logw[x]);
    }
    double z = 0;
    for (std::size_t x = 0; x < states; ++x) z += (out.probs[x] = std::exp(logw[x] - mx));
    for (auto& p : out.probs) p /= z;
    return out;
}

struct ExactPatternProbs
{
    int radius = 1;
    int alphabet_size = 2;
    /// Pattern values (canonical order) -> p(η) and p((η, a)).
    std::map<std::vector<Symbol>, std::vector<double>> joint;

    double p_eta(const std::vector<Symbol>& eta) const
    {
        auto it = joint.find(eta);
        if (it == joint.end()) return 0.0;
        double s = 0;
        for (double v : it->second) s += v;
        return s;
    }
    double p_joint(const std::vector<Symbol>& eta, int a) const
    {
        auto it = joint.find(eta);
        return it == joint.end() ? 0.0 : it->second[a];
    }
    double conditional(const std::vector<Symbol>& eta, int a) const
    {
        const double pe = p_eta(eta);
        return pe > 0 ? p_joint(eta, a) / pe : 0.0;
    }
};

/// p(η) and p(a | η) at the window's center site.
inline ExactPatternProbs exact_pattern_probs(const ExactMeasure& mu, int radius)
{
    if (radius < 1 || 2 * radius + 1 > mu.window.min_extent())
        throw std::invalid_argument("pattern radius too large for the window");
    Coord center{};
    for (int a = 0; a < mu.window.dim(); ++a) center[a] = mu.window.extent(a) / 2;
    const Site c = mu.window.site(center);
    ExactPatternProbs out{radius, mu.alphabet.size(), {}};
    for (std::size_t x = 0; x < mu.states(); ++x) {
        const auto conf = mu.configuration(x);
        const auto p = extract_pattern(conf, c, radius);
        auto& row = out.joint[p.values];
        if (row.empty()) row.assign(static_cast<std::size_t>(out.alphabet_size), 0.0);
        row[conf[c]] += mu.probs[x];
    }
    return out;
}

} // namespace vnrf

#endif
