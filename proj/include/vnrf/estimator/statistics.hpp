#ifndef VNRF_ESTIMATOR_STATISTICS_HPP
#define VNRF_ESTIMATOR_STATISTICS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "vnrf/core/pattern.hpp"

namespace vnrf
{

struct KlResult
{
    double value = 0;
    /// Set when p(a) > 0 while q(a) = 0; value is then +inf.
    bool infinite = false;
};

/// D(p || q) = Σ p(a) log(p(a)/q(a)) with 0 log(0/q) = 0.
inline KlResult kl_divergence(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) throw std::invalid_argument("kl: length mismatch");
    KlResult r;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] <= 0) continue;
        if (q[a] <= 0) return {std::numeric_limits<double>::infinity(), true};
        r.value += p[a] * std::log(p[a] / q[a]);
    }
    // Round-off can push identical laws slightly below 0.
    if (r.value < 0) r.value = 0;
    return r;
}

/// κ(δ) = 5^d (3/2)^{1/2} δ.
inline double kappa_of_delta(double delta, int dim)
{
    return std::pow(5.0, dim) * std::sqrt(1.5) * delta;
}

/// Lower bound on δ: 2^d log|A| · 3e / (4 q_min).
inline double delta_threshold(int dim, int alphabet_size, double q_min)
{
    if (!(q_min > 0)) throw std::invalid_argument("q_min must be positive");
    return std::pow(2.0, dim) * std::log(static_cast<double>(alphabet_size)) * 3.0 * std::numbers::e / (4.0 * q_min);
}

/// δ chosen 1% above the threshold.
inline double auto_delta(int dim, int alphabet_size, double q_min)
{
    return 1.01 * delta_threshold(dim, alphabet_size, q_min);
}

/// c(δ) = (2/3)(2 q_min δ / e) - 2^d log|A|.
inline double c_of_delta(double delta, int dim, int alphabet_size, double q_min)
{
    return (2.0 / 3.0) * (2.0 * q_min * delta / std::numbers::e) -
           std::pow(2.0, dim) * std::log(static_cast<double>(alphabet_size));
}

struct PenaltyConfig
{
    double delta = 0;
    double kappa = 0;
    int alphabet_size = 2;
    int dim = 1;
    std::optional<double> q_min_hint;

    static PenaltyConfig from_delta(double delta, int dim, int alphabet_size, std::optional<double> q_min = {})
    {
        if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
        return {delta, kappa_of_delta(delta, dim), alphabet_size, dim, q_min};
    }

    static PenaltyConfig from_kappa(double kappa, int dim, int alphabet_size, std::optional<double> q_min = {})
    {
        if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
        return {kappa / kappa_of_delta(1.0, dim), kappa, alphabet_size, dim, q_min};
    }

    /// Empty when δ satisfies the lower bound or no q_min is known.
    std::optional<std::string> warning() const
    {
        if (!q_min_hint) return std::nullopt;
        const double t = delta_threshold(dim, alphabet_size, *q_min_hint);
        if (delta > t) return std::nullopt;
        return "delta " + std::to_string(delta) + " does not exceed the consistency threshold " + std::to_string(t);
    }
};

struct PenaltyValue
{
    double value = 0;
    double log_value = 0;
    /// Set when the value overflows a double; value is then +inf.
    bool saturated = false;
};

/// pen(ℓ, n) = κ |A| |A|^{|∂V_0(ℓ)|} log |Λ_n|, evaluated in log space.
inline PenaltyValue penalty(int radius, std::size_t window_size, const PenaltyConfig& cfg)
{
    if (radius < 1) throw std::invalid_argument("penalty radius must be >= 1");
    if (window_size < 2) throw std::invalid_argument("penalty needs |window| >= 2");
    const double la = std::log(static_cast<double>(cfg.alphabet_size));
    const double shell = static_cast<double>(shell_size(cfg.dim, radius));
    PenaltyValue p;
    p.log_value = std::log(cfg.kappa) + la * (1.0 + shell) + std::log(std::log(static_cast<double>(window_size)));
    if (p.log_value > std::log(std::numeric_limits<double>::max())) {
        p.saturated = true;
        p.value = std::numeric_limits<double>::infinity();
    } else {
        p.value = std::exp(p.log_value);
    }
    return p;
}

struct MaxRadius
{
    int value = 1;
    /// Set when the formula gave 0 and was raised to 1.
    bool clamped = false;
};

/// R_n = floor((log |Λ̄_n|)^{1/(2d)}), at least 1.
inline MaxRadius max_radius(std::size_t region_size, int dim)
{
    if (region_size < 2) throw std::invalid_argument("max_radius needs |region| >= 2");
    const double r = std::pow(std::log(static_cast<double>(region_size)), 1.0 / (2.0 * dim));
    const int v = static_cast<int>(std::floor(r + 1e-12));
    return v >= 1 ? MaxRadius{v, false} : MaxRadius{1, true};
}

} // namespace vnrf

#endif
