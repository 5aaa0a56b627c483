#ifndef VNRF_ESTIMATOR_ESTIMATOR_HPP
#define VNRF_ESTIMATOR_ESTIMATOR_HPP

/** @file
 * Penalized pseudo-likelihood estimate of the per-site context radius.
 *
 * For each candidate radius k in 2..R_n the statistic log L(i, k) depends
 * only on the radius-(k-1) pattern around i, so it is computed once per
 * pattern from the refinement tree of count tables and shared by all sites.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/estimator/count_table.hpp"
#include "vnrf/estimator/statistics.hpp"
#include "vnrf/models/distribution.hpp"

namespace vnrf
{

/// Σ_v N(η v) D(p̂(·|η v) || p̂(·|η)), scanning the fine table for extensions of η.
inline KlResult log_likelihood_stat(const CountTable& fine, const CountTable& coarse, const Pattern& eta)
{
    if (fine.radius() != coarse.radius() + 1 || eta.radius != coarse.radius())
        throw std::invalid_argument("log-likelihood: radii must be (l, l-1, l-1)");
    const int A = fine.alphabet_size();
    std::vector<double> q(A), p(A);
    const auto ci = coarse.find(coarse.codec().encode(eta));
    if (!ci) return {};
    for (int a = 0; a < A; ++a) q[a] = coarse.conditional(*ci, a);
    const KeyCodec codec = fine.codec();
    KlResult total;
    for (std::uint32_t k = 0; k < fine.pattern_count(); ++k) {
        if (restrict_pattern(codec.decode(fine.keys()[k]), coarse.radius()) != eta) continue;
        for (int a = 0; a < A; ++a) p[a] = fine.conditional(k, a);
        const KlResult d = kl_divergence(p, q);
        if (d.infinite) return d;
        total.value += static_cast<double>(fine.total(k)) * d.value;
    }
    return total;
}

/// Count tables for radii 1..R over one region, with per-site pattern indices
/// and the parent map between consecutive radii.
class RadiusLadder
{
public:
    RadiusLadder(const Configuration& c, SecurityRegion region, int max_r, unsigned threads = 0)
        : region_(std::move(region)), max_r_(max_r)
    {
        if (max_r < 1) throw std::invalid_argument("ladder needs R >= 1");
        tables_.resize(max_r + 1);
        site_index_.resize(max_r + 1);
        for (int l = 1; l <= max_r; ++l) tables_[l] = CountTable::build(c, region_, l, &site_index_[l], threads);
        stats_.resize(max_r + 1);
        infinite_.resize(max_r + 1);
        for (int l = 2; l <= max_r; ++l) build_stats(l);
    }

    int max_radius() const noexcept { return max_r_; }
    const SecurityRegion& region() const noexcept { return region_; }
    const CountTable& table(int l) const { return tables_.at(l); }
    std::uint32_t pattern_of(std::size_t pos, int l) const { return site_index_.at(l)[pos]; }

    /// log L(i, k) for the site at region position `pos`, 2 <= k <= R.
    double stat(std::size_t pos, int k) const { return stats_.at(k)[site_index_[k - 1][pos]]; }
    bool stat_infinite(std::size_t pos, int k) const { return infinite_.at(k)[site_index_[k - 1][pos]] != 0; }

    /// log L for a radius-(k-1) pattern index.
    double stat_of_parent(std::uint32_t parent, int k) const { return stats_.at(k)[parent]; }

private:
    void build_stats(int l)
    {
        const CountTable& fine = tables_[l];
        const CountTable& coarse = tables_[l - 1];
        std::vector<std::uint32_t> parent(fine.pattern_count(), 0);
        const auto& fi = site_index_[l];
        const auto& ci = site_index_[l - 1];
        for (std::size_t pos = 0; pos < fi.size(); ++pos) parent[fi[pos]] = ci[pos];

        const int A = fine.alphabet_size();
        std::vector<double> p(A), q(A);
        stats_[l].assign(coarse.pattern_count(), 0.0);
        infinite_[l].assign(coarse.pattern_count(), 0);
        for (std::uint32_t k = 0; k < fine.pattern_count(); ++k) {
            const std::uint32_t par = parent[k];
            for (int a = 0; a < A; ++a) {
                p[a] = fine.conditional(k, a);
                q[a] = coarse.conditional(par, a);
            }
            const KlResult d = kl_divergence(p, q);
            // A fine count never exceeds its coarse count, so this cannot happen.
            if (d.infinite) throw std::logic_error("infinite KL term between nested tables of one sample");
            stats_[l][par] += static_cast<double>(fine.total(k)) * d.value;
        }
    }

    SecurityRegion region_;
    int max_r_;
    std::vector<CountTable> tables_;
    std::vector<std::vector<std::uint32_t>> site_index_;
    std::vector<std::vector<double>> stats_;
    std::vector<std::vector<char>> infinite_;
};

/// l̂ = min{ℓ in 1..R-1 : log L(k) <= pen(k) for all k > ℓ}, else R. Statistics are indexed k-2.
inline int select_radius(const std::vector<double>& logL, const std::vector<double>& pen)
{
    if (logL.size() != pen.size()) throw std::invalid_argument("select_radius: length mismatch");
    const int R = static_cast<int>(logL.size()) + 1;
    for (int k = R; k >= 2; --k)
        if (logL[k - 2] > pen[k - 2]) return k;
    return 1;
}

struct RadiusEstimate
{
    Site site = 0;
    int l_hat = 1;
    int R_n = 1;
    std::vector<double> logL; ///< log L(i, k), k = 2..R_n
    std::vector<double> pen;  ///< pen(k, n), k = 2..R_n
    Pattern c_hat;
    Distribution gamma_hat;
    bool radius_range_trivial = false;
};

struct EstimatorOptions
{
    PenaltyConfig penalty;
    std::optional<int> max_radius;
    std::optional<int> margin;
    unsigned threads = 0;
};

/// Batch estimation over the security region.
class Estimation
{
public:
    Estimation(const Configuration& c, const EstimatorOptions& opt) : config_(&c)
    {
        const bool periodic = c.boundary().kind == BoundaryKind::periodic;
        base_margin_ = opt.margin ? *opt.margin : security_margin(c.size(), c.dim());
        if (base_margin_ < 1) throw std::invalid_argument("margin must be >= 1");
        const SecurityRegion base = security_region(c.window(), base_margin_, periodic);
        base_region_size_ = base.size();
        if (base_region_size_ < 2) throw std::runtime_error("window too small for margin");
        const MaxRadius mr = max_radius(base_region_size_, c.dim());
        R_clamped_ = mr.clamped;
        R_ = opt.max_radius ? *opt.max_radius : mr.value;
        if (R_ < 1) throw std::invalid_argument("max radius must be >= 1");
        overridden_ = opt.max_radius && *opt.max_radius != mr.value;
        margin_ = std::max(base_margin_, R_);
        SecurityRegion region = margin_ == base_margin_ ? base : security_region(c.window(), margin_, periodic);
        excluded_ = base_region_size_ - region.size();
        for (int k = 2; k <= R_; ++k) {
            const PenaltyValue p = penalty(k, c.size(), opt.penalty);
            pen_.push_back(p.value);
            pen_saturated_ = pen_saturated_ || p.saturated;
        }
        ladder_.emplace(c, std::move(region), R_, opt.threads);
        const std::size_t n = ladder_->region().size();
        l_hat_.resize(n);
        std::vector<double> logL(pen_.size());
        for (std::size_t pos = 0; pos < n; ++pos) {
            for (int k = 2; k <= R_; ++k) logL[k - 2] = ladder_->stat(pos, k);
            l_hat_[pos] = select_radius(logL, pen_);
        }
    }

    int R_n() const noexcept { return R_; }
    bool radius_range_trivial() const noexcept { return R_ < 2; }
    bool radius_clamped() const noexcept { return R_clamped_; }
    /// Set when --max-radius replaced the formula value.
    bool outside_theorem_regime() const noexcept { return overridden_; }
    int margin() const noexcept { return margin_; }
    int base_margin() const noexcept { return base_margin_; }
    std::size_t base_region_size() const noexcept { return base_region_size_; }
    /// Sites of the base region dropped because their margin is below R_n.
    std::size_t excluded_sites() const noexcept { return excluded_; }
    bool penalty_saturated() const noexcept { return pen_saturated_; }
    const std::vector<double>& penalties() const noexcept { return pen_; }
    const RadiusLadder& ladder() const noexcept { return *ladder_; }
    const std::vector<Site>& sites() const noexcept { return ladder_->region().sites; }
    const std::vector<int>& l_hat() const noexcept { return l_hat_; }

    /// Full estimate for the site at region position `pos`.
    RadiusEstimate at(std::size_t pos) const
    {
        RadiusEstimate e;
        e.site = sites().at(pos);
        e.R_n = R_;
        e.l_hat = l_hat_[pos];
        e.radius_range_trivial = R_ < 2;
        e.pen = pen_;
        for (int k = 2; k <= R_; ++k) e.logL.push_back(ladder_->stat(pos, k));
        e.c_hat = extract_pattern(*config_, e.site, e.l_hat);
        const CountTable& t = ladder_->table(e.l_hat);
        const std::uint32_t idx = ladder_->pattern_of(pos, e.l_hat);
        e.gamma_hat = Distribution(t.alphabet_size());
        for (int a = 0; a < t.alphabet_size(); ++a) e.gamma_hat[a] = t.conditional(idx, a);
        return e;
    }

    /// Region position of a site, if it was estimated.
    std::optional<std::size_t> position(Site s) const
    {
        const auto& v = sites();
        auto it = std::lower_bound(v.begin(), v.end(), s);
        if (it == v.end() || *it != s) return std::nullopt;
        return static_cast<std::size_t>(it - v.begin());
    }

private:
    const Configuration* config_;
    int base_margin_ = 0;
    int margin_ = 0;
    std::size_t base_region_size_ = 0;
    std::size_t excluded_ = 0;
    int R_ = 1;
    bool R_clamped_ = false;
    bool overridden_ = false;
    bool pen_saturated_ = false;
    std::vector<double> pen_;
    std::optional<RadiusLadder> ladder_;
    std::vector<int> l_hat_;
};

inline Estimation estimate_all(const Configuration& c, const EstimatorOptions& opt)
{
    return Estimation(c, opt);
}

/// Single-site estimate; builds its own tables.
inline RadiusEstimate estimate_radius(const Configuration& c, Site i, const EstimatorOptions& opt)
{
    Estimation e(c, opt);
    const auto pos = e.position(i);
    if (!pos) throw std::out_of_range("site outside the estimation region");
    return e.at(*pos);
}

} // namespace vnrf

#endif
