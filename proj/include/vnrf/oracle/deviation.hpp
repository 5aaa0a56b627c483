#ifndef VNRF_ORACLE_DEVIATION_HPP
#define VNRF_ORACLE_DEVIATION_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vnrf/estimator/count_table.hpp"
#include "vnrf/oracle/exact_measure.hpp"

namespace vnrf
{

/// Δ_n(η) = Σ_a [N(η,a)/|Λ̄| log p̂(a|η) - p(η,a) log p(a|η)], with 0 log 0 = 0.
inline double delta_n(const CountTable& table, const ExactPatternProbs& exact, const std::vector<Symbol>& eta)
{
    if (table.radius() != exact.radius) throw std::invalid_argument("delta_n: radius mismatch");
    if (exact.p_eta(eta) <= 0) throw std::invalid_argument("delta_n: pattern has zero exact probability");
    const Pattern p{table.dim(), table.radius(), eta};
    const double region = static_cast<double>(table.region_size());
    double d = 0;
    for (int a = 0; a < table.alphabet_size(); ++a) {
        const auto n = table.count(p, a);
        if (n > 0) d += static_cast<double>(n) / region * std::log(table.empirical_conditional(p, a));
        const double pj = exact.p_joint(eta, a);
        if (pj > 0) d -= pj * std::log(exact.conditional(eta, a));
    }
    return d;
}

/// Shape of the concentration bound for N(η)/|Λ̄| with the unknown constant set to 1.
inline double concentration_bound_shape(std::size_t region, double t, int radius, int dim)
{
    return std::exp(1.0 / std::numbers::e) *
           std::exp(-static_cast<double>(region) * t * t /
                    (std::pow(2.0 * radius, 2.0 * dim - 1.0) * std::numbers::e));
}

/// Shape of the bound on |p̂(a|η) - p(a|η)| > t with the unknown constant set to 1.
inline double conditional_bound_shape(std::size_t region, double t, double alpha0)
{
    return 2.0 * std::exp(1.0 / std::numbers::e) *
           std::exp(-static_cast<double>(region) * t * t * alpha0 / (4.0 * std::numbers::e));
}

/// Shape of the bound on |Δ_n(η)| > t with the unknown constant set to 1.
inline double delta_bound_shape(std::size_t region, double t, double alpha0, int alphabet_size)
{
    const double A = alphabet_size;
    const double la = std::log(alpha0);
    return 3.0 * A * std::exp(1.0 / std::numbers::e) *
           std::exp(-static_cast<double>(region) * std::min(t, t * t) * alpha0 * alpha0 /
                    (8.0 * A * A * std::max(la * la, 1.0) * std::numbers::e));
}

/// α_0 = min over radii 1..L, symbols and patterns of {p(a|η), p(η)}; unobserved patterns count as 0.
inline double alpha0(const ExactMeasure& mu, int L)
{
    double m = 1.0;
    for (int l = 1; l <= L; ++l) {
        const auto probs = exact_pattern_probs(mu, l);
        const std::size_t all = [&] {
            std::size_t n = 1;
            for (std::size_t k = 0; k < punctured_ball_size(mu.window.dim(), l); ++k) n *= mu.alphabet.size();
            return n;
        }();
        if (probs.joint.size() < all) return 0.0;
        for (const auto& [eta, row] : probs.joint) {
            m = std::min(m, probs.p_eta(eta));
            for (int a = 0; a < probs.alphabet_size; ++a) m = std::min(m, probs.conditional(eta, a));
        }
    }
    return m;
}

} // namespace vnrf

#endif
