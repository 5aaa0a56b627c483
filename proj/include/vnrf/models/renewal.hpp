#ifndef VNRF_MODELS_RENEWAL_HPP
#define VNRF_MODELS_RENEWAL_HPP

/** @file
 * Alternating renewal process on Z seen as a variable-neighborhood field.
 *
 * Interval lengths T >= 1 have mass P[T=j] = c1 ρ1^j + c2 ρ2^j. The one-point
 * specification at 0 depends on the two neighbor symbols and on the distances
 * k, l to the first sign change beyond them.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "vnrf/models/distribution.hpp"

namespace vnrf
{

struct RenewalParams
{
    double rho1 = 0.5;
    double rho2 = 0.25;
    double c1 = 0.5;
    double c2 = 1.5;

    /// m(j) = c1 ρ1^j + c2 ρ2^j.
    double mass(int j) const noexcept { return c1 * std::pow(rho1, j) + c2 * std::pow(rho2, j); }
    /// Σ_{j>=1} m(j).
    double total_mass() const noexcept { return c1 * rho1 / (1 - rho1) + c2 * rho2 / (1 - rho2); }
    /// E[T].
    double mean() const noexcept
    {
        return c1 * rho1 / ((1 - rho1) * (1 - rho1)) + c2 * rho2 / ((1 - rho2) * (1 - rho2));
    }
    /// P[T >= r] = Σ_k c_k ρ_k^r / (1 - ρ_k).
    double tail(int r) const noexcept
    {
        return c1 * std::pow(rho1, r) / (1 - rho1) + c2 * std::pow(rho2, r) / (1 - rho2);
    }

    void validate() const
    {
        if (!(0 < rho2 && rho2 < rho1 && rho1 < 1)) throw std::invalid_argument("renewal: need 0 < rho2 < rho1 < 1");
        if (!(c1 >= 0 && c2 >= 0)) throw std::invalid_argument("renewal: c1, c2 must be >= 0");
        if (std::abs(total_mass() - 1.0) > 1e-12)
            throw std::invalid_argument("renewal: c1 rho1/(1-rho1) + c2 rho2/(1-rho2) must equal 1, got " +
                                        std::to_string(total_mass()));
    }
};

/// Scan result around a site: run distances and the two neighbor symbols.
struct RenewalScan
{
    int k = 0;
    int l = 0;
    Symbol left = 0;
    Symbol right = 0;
};

/// First sign changes beyond the neighbors of the view center.
template <typename View>
RenewalScan renewal_boundary_scan(const View& v)
{
    if (v.dim() != 1) throw std::invalid_argument("renewal: dimension must be 1");
    const int limit = v.reach();
    auto at = [&](int x) {
        if (!v.available(Coord{x, 0, 0})) throw std::out_of_range("context exceeds window");
        return v(Coord{x, 0, 0});
    };
    RenewalScan s;
    s.left = at(-1);
    s.right = at(1);
    int k = 2;
    while (at(-k) == s.left) {
        if (++k > limit) throw std::out_of_range("context exceeds window");
    }
    int l = 2;
    while (at(l) == s.right) {
        if (++l > limit) throw std::out_of_range("context exceeds window");
    }
    s.k = k;
    s.l = l;
    return s;
}

/// γ(1 | both neighbors 1, run distances k, l).
inline double renewal_final1(const RenewalParams& p, int k, int l)
{
    if (k < 2 || l < 2) throw std::invalid_argument("invalid run distance");
    const double joined = p.mass(l + k - 1);
    const double s = p.c1 / (1 - p.rho1) * p.rho1 + p.c2 / (1 - p.rho2) * p.rho2;
    const double split = p.mass(k - 1) * p.mass(l - 1) * p.mass(1) / (s * s);
    return joined / (joined + split);
}

/// γ(1 | left neighbor 1, right neighbor 0, run distances k, l).
inline double renewal_final2(const RenewalParams& p, int k, int l)
{
    if (k < 2 || l < 2) throw std::invalid_argument("invalid run distance");
    const double one = p.mass(k) * p.mass(l - 1);
    const double zero = p.mass(k - 1) * p.mass(l);
    return one / (one + zero);
}

/// γ(1 | scan). The two cases with left neighbor 0 follow by complementing symbols.
inline double renewal_gamma1(const RenewalParams& p, int k, int l, Symbol left, Symbol right)
{
    if (left > 1 || right > 1) throw std::invalid_argument("renewal: symbols must be 0 or 1");
    if (left == 1 && right == 1) return renewal_final1(p, k, l);
    if (left == 1 && right == 0) return renewal_final2(p, k, l);
    if (left == 0 && right == 0) return 1.0 - renewal_final1(p, k, l);
    return 1.0 - renewal_final2(p, k, l);
}

class RenewalModel
{
public:
    static constexpr int kQminScan = 256;

    explicit RenewalModel(RenewalParams p = {}) : p_(p)
    {
        p_.validate();
        q_min_ = 1.0;
        for (int k = 2; k <= kQminScan; ++k)
            for (int l = 2; l <= kQminScan; ++l) {
                const double f1 = renewal_final1(p_, k, l), f2 = renewal_final2(p_, k, l);
                q_min_ = std::min({q_min_, f1, 1 - f1, f2, 1 - f2});
            }
    }

    static constexpr const char* name() { return "renewal"; }
    const RenewalParams& params() const noexcept { return p_; }
    int dim() const noexcept { return 1; }
    Alphabet alphabet() const { return Alphabet(2); }
    /// Contexts are a.s. finite but unbounded.
    std::optional<int> range() const noexcept { return std::nullopt; }
    /// Minimum over k, l <= kQminScan; a numerical estimate, not a proven bound.
    double q_min() const noexcept { return q_min_; }
    bool q_min_is_estimate() const noexcept { return true; }

    template <typename View>
    Distribution gamma0(const View& v) const
    {
        const RenewalScan s = renewal_boundary_scan(v);
        return Distribution::bernoulli(renewal_gamma1(p_, s.k, s.l, s.left, s.right));
    }

    /// sp_0 = [-k, l] \ {0}.
    template <typename View>
    RegionResult context(const View& v) const
    {
        const RenewalScan s = renewal_boundary_scan(v);
        RegionResult r;
        for (int x = -s.k; x <= s.l; ++x)
            if (x != 0) r.sites.push_back(Coord{x, 0, 0});
        return r;
    }

private:
    RenewalParams p_;
    double q_min_ = 0;
};

} // namespace vnrf

#endif
