#ifndef VNRF_ORACLE_LOGLIK_FORMS_HPP
#define VNRF_ORACLE_LOGLIK_FORMS_HPP

/** @file
 * Brute-force evaluations of log L(i, ℓ) that share no code with the count
 * tables: patterns are ordered maps of raw symbol vectors and the sums run
 * over region sites directly.
 */

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "vnrf/core/lattice.hpp"

namespace vnrf::oracle
{

using Raw = std::vector<Symbol>;

/// Symbols on the punctured ball of radius ℓ around s, row-major offsets.
inline Raw raw_pattern(const Configuration& c, Site s, int l)
{
    const Coord x = c.window().coord(s);
    Raw out;
    const int d = c.dim();
    const int lo1 = d >= 2 ? -l : 0, hi1 = d >= 2 ? l : 0;
    for (int a = -l; a <= l; ++a)
        for (int b = lo1; b <= hi1; ++b) {
            if (a == 0 && b == 0) continue;
            Coord o{};
            if (d == 1) o = {a, 0, 0};
            else o = {a, b, 0};
            auto v = c.lookup(x + o);
            if (!v) throw std::out_of_range("pattern exceeds window");
            out.push_back(*v);
        }
    return out;
}

class BruteCounts
{
public:
    BruteCounts(const Configuration& c, const std::vector<Site>& region, int l) : A_(c.alphabet().size())
    {
        if (c.dim() > 2) throw std::invalid_argument("brute counts support d <= 2");
        for (Site s : region) {
            auto& row = n_[raw_pattern(c, s, l)];
            if (row.empty()) row.assign(static_cast<std::size_t>(A_) + 1, 0.0);
            row[0] += 1;
            row[1 + c[s]] += 1;
        }
    }
    double n(const Raw& eta) const
    {
        auto it = n_.find(eta);
        return it == n_.end() ? 0.0 : it->second[0];
    }
    double n(const Raw& eta, int a) const
    {
        auto it = n_.find(eta);
        return it == n_.end() ? 0.0 : it->second[1 + a];
    }
    double phat(const Raw& eta, int a) const
    {
        const double t = n(eta);
        return t > 0 ? n(eta, a) / t : 0.0;
    }
    /// log MPL = Σ_a N(η,a) log p̂(a|η).
    double log_mpl(const Raw& eta) const
    {
        double s = 0;
        for (int a = 0; a < A_; ++a)
            if (n(eta, a) > 0) s += n(eta, a) * std::log(phat(eta, a));
        return s;
    }
    int alphabet_size() const noexcept { return A_; }

private:
    int A_;
    std::map<Raw, std::vector<double>> n_;
};

/// Site-sum form: Σ_{j: X_j^{ℓ-1} = σ_i^{ℓ-1}} 1/N(X_j^ℓ) Σ_a N(X_j^ℓ, a) log[p̂(a|X_j^ℓ) / p̂(a|X_j^{ℓ-1})].
inline double loglik_site_sum(const Configuration& c, const std::vector<Site>& region, Site i, int l)
{
    const BruteCounts fine(c, region, l), coarse(c, region, l - 1);
    const Raw eta = raw_pattern(c, i, l - 1);
    double s = 0;
    for (Site j : region) {
        if (raw_pattern(c, j, l - 1) != eta) continue;
        const Raw x = raw_pattern(c, j, l);
        double inner = 0;
        for (int a = 0; a < fine.alphabet_size(); ++a) {
            const double nja = fine.n(x, a);
            if (nja > 0) inner += nja * std::log(fine.phat(x, a) / coarse.phat(eta, a));
        }
        s += inner / fine.n(x);
    }
    return s;
}

/// Pseudo-likelihood difference form: Σ_j 1/N(X_j^ℓ) log MPL(j, ℓ) - log MPL(i, ℓ-1).
inline double loglik_mpl_difference(const Configuration& c, const std::vector<Site>& region, Site i, int l)
{
    const BruteCounts fine(c, region, l), coarse(c, region, l - 1);
    const Raw eta = raw_pattern(c, i, l - 1);
    double s = 0;
    for (Site j : region) {
        if (raw_pattern(c, j, l - 1) != eta) continue;
        const Raw x = raw_pattern(c, j, l);
        s += fine.log_mpl(x) / fine.n(x);
    }
    return s - coarse.log_mpl(eta);
}

inline bool close_rel(double a, double b, double tol = 1e-10)
{
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace vnrf::oracle

#endif
