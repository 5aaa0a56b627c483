#ifndef VNRF_ORACLE_DOBRUSHIN_HPP
#define VNRF_ORACLE_DOBRUSHIN_HPP

/** @file
 * Dobrushin sensitivities r(0,j) = sup ½ Σ_a |γ_0(a|ω) - γ_0(a|ω')| over
 * pairs differing only at j. Exhaustive when the punctured range ball has at
 * most 2^24 configurations; otherwise a sampled lower bound.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "vnrf/core/pattern.hpp"
#include "vnrf/core/random.hpp"
#include "vnrf/models/model.hpp"

namespace vnrf
{

struct DobrushinReport
{
    int range = 0;
    std::vector<Coord> offsets;   ///< j with 0 < |j| <= range, canonical order
    std::vector<double> r0j;      ///< r(0, j) per offset
    double r = 0;                 ///< Σ_j r(0, j)
    std::vector<double> beta;     ///< β(ℓ) = Σ_{|k| > ℓ} r(0, k), ℓ = 0..range
    bool exhaustive = true;
    bool lower_bound_only = false;
    std::optional<double> r_upper; ///< analytic upper bound when sampled
    std::size_t configurations = 0;

    bool unique_regime() const noexcept { return r < 1.0; }
};

namespace detail
{
inline void finish_report(DobrushinReport& rep, int dim)
{
    rep.r = 0;
    for (double v : rep.r0j) rep.r += v;
    rep.beta.assign(static_cast<std::size_t>(rep.range) + 1, 0.0);
    for (int l = 0; l <= rep.range; ++l)
        for (std::size_t k = 0; k < rep.offsets.size(); ++k)
            if (max_norm(rep.offsets[k], dim) > l) rep.beta[l] += rep.r0j[k];
}

template <typename M>
DobrushinReport dobrushin_impl(const M& m, std::size_t max_states, std::size_t samples, std::uint64_t seed)
{
    DobrushinReport rep;
    const int dim = m.dim();
    const int A = m.alphabet().size();
    const auto range = m.range();
    if (!range) throw std::invalid_argument("dobrushin: model range is unbounded");
    rep.range = *range;
    if (rep.range == 0) {
        finish_report(rep, dim);
        return rep;
    }
    rep.offsets = ball_offsets(dim, rep.range);
    const std::size_t n = rep.offsets.size();
    rep.r0j.assign(n, 0.0);

    PatchView patch(dim, rep.range, A);
    std::vector<std::size_t> cell(n);
    for (std::size_t k = 0; k < n; ++k) cell[k] = patch.index_of(rep.offsets[k]);

    double states_d = std::pow(static_cast<double>(A), static_cast<double>(n));
    if (states_d <= static_cast<double>(max_states)) {
        const std::size_t states = static_cast<std::size_t>(states_d);
        rep.configurations = states;
        // Table of γ_0(a | x) for a < A-1; the last symbol is implied.
        const std::size_t w = static_cast<std::size_t>(A - 1);
        std::vector<double> table(states * w);
        std::vector<std::size_t> place(n, 1);
        for (std::size_t k = n - 1; k-- > 0;) place[k] = place[k + 1] * static_cast<std::size_t>(A);
        for (std::size_t x = 0; x < states; ++x) {
            std::size_t y = x;
            for (std::size_t k = n; k-- > 0;) {
                patch.cell(cell[k]) = static_cast<Symbol>(y % A);
                y /= A;
            }
            const Distribution g = m.gamma0(patch);
            for (std::size_t a = 0; a < w; ++a) table[x * w + a] = g[static_cast<int>(a)];
        }
        auto tv = [&](std::size_t x, std::size_t y) {
            double s = 0, lx = 1, ly = 1;
            for (std::size_t a = 0; a < w; ++a) {
                s += std::abs(table[x * w + a] - table[y * w + a]);
                lx -= table[x * w + a];
                ly -= table[y * w + a];
            }
            return 0.5 * (s + std::abs(lx - ly));
        };
        for (std::size_t k = 0; k < n; ++k) {
            double best = 0;
            for (std::size_t x = 0; x < states; ++x) {
                const std::size_t digit = (x / place[k]) % A;
                for (std::size_t b = digit + 1; b < static_cast<std::size_t>(A); ++b)
                    best = std::max(best, tv(x, x + (b - digit) * place[k]));
            }
            rep.r0j[k] = best;
        }
        finish_report(rep, dim);
        return rep;
    }

    rep.exhaustive = false;
    rep.lower_bound_only = true;
    rep.configurations = samples;
    Rng rng = make_rng(seed, 0x444f42);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = 0; k < n; ++k) patch.cell(cell[k]) = static_cast<Symbol>(uniform_index(rng, A));
        const Distribution g = m.gamma0(patch);
        for (std::size_t k = 0; k < n; ++k) {
            const Symbol keep = patch.cell(cell[k]);
            for (int b = 0; b < A; ++b) {
                if (b == keep) continue;
                patch.cell(cell[k]) = static_cast<Symbol>(b);
                rep.r0j[k] = std::max(rep.r0j[k], total_variation(g, m.gamma0(patch)));
            }
            patch.cell(cell[k]) = keep;
        }
    }
    finish_report(rep, dim);
    if constexpr (std::is_same_v<M, PolygonModel>) {
        // |H_0(a) - H_0(b)| <= 2 |V_0(L)| max|J| and γ is logistic in β times that gap.
        const double nb = static_cast<double>((2 * m.params().L + 1) * (2 * m.params().L + 1));
        const double per = std::min(1.0, std::tanh(m.beta() * nb * m.params().j_max()));
        rep.r_upper = per * static_cast<double>(n);
    }
    return rep;
}
} // namespace detail

inline DobrushinReport dobrushin(const AnyModel& m, std::size_t max_states = std::size_t{1} << 24,
                                 std::size_t samples = 200000, std::uint64_t seed = 0)
{
    return visit_model(m, [&](const auto& x) { return detail::dobrushin_impl(x, max_states, samples, seed); });
}

} // namespace vnrf

#endif
