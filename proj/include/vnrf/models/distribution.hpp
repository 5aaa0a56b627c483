#ifndef VNRF_MODELS_DISTRIBUTION_HPP
#define VNRF_MODELS_DISTRIBUTION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "vnrf/core/lattice.hpp"
#include "vnrf/core/random.hpp"

namespace vnrf
{

/// Probability vector over a small alphabet.
class Distribution
{
public:
    Distribution() = default;
    explicit Distribution(int size) : size_(size)
    {
        if (size < 1 || size > Alphabet::kMaxSize) throw std::invalid_argument("distribution size out of range");
    }
    Distribution(std::initializer_list<double> p) : Distribution(static_cast<int>(p.size()))
    {
        std::copy(p.begin(), p.end(), p_.begin());
    }

    int size() const noexcept { return size_; }
    double operator[](int a) const noexcept { return p_[a]; }
    double& operator[](int a) noexcept { return p_[a]; }
    const double* begin() const noexcept { return p_.data(); }
    const double* end() const noexcept { return p_.data() + size_; }

    double sum() const noexcept
    {
        double s = 0;
        for (int a = 0; a < size_; ++a) s += p_[a];
        return s;
    }

    double min() const noexcept { return *std::min_element(begin(), end()); }

    std::vector<double> to_vector() const { return {begin(), end()}; }

    /// Normalized softmax of log-weights.
    static Distribution from_log_weights(const double* logw, int size)
    {
        Distribution d(size);
        const double m = *std::max_element(logw, logw + size);
        double z = 0;
        for (int a = 0; a < size; ++a) z += (d.p_[a] = std::exp(logw[a] - m));
        for (int a = 0; a < size; ++a) d.p_[a] /= z;
        return d;
    }

    static Distribution bernoulli(double p1)
    {
        Distribution d(2);
        d.p_[0] = 1.0 - p1;
        d.p_[1] = p1;
        return d;
    }

    Symbol sample(Rng& rng) const
    {
        const double u = uniform01(rng);
        double acc = 0;
        for (int a = 0; a < size_ - 1; ++a) {
            acc += p_[a];
            if (u < acc) return static_cast<Symbol>(a);
        }
        return static_cast<Symbol>(size_ - 1);
    }

    friend bool operator==(const Distribution& l, const Distribution& r) noexcept
    {
        return l.size_ == r.size_ && std::equal(l.begin(), l.end(), r.begin());
    }

private:
    int size_ = 0;
    std::array<double, Alphabet::kMaxSize> p_{};
};

inline double total_variation(const Distribution& p, const Distribution& q)
{
    double s = 0;
    for (int a = 0; a < p.size(); ++a) s += std::abs(p[a] - q[a]);
    return 0.5 * s;
}

/// Context of a site: neighbor offsets relative to the site, canonical order.
struct RegionResult
{
    std::vector<Coord> sites;
    bool truncated = false;

    /// Smallest ℓ with sites ⊂ V(ℓ); an empty context reports radius 1.
    int radius(int dim) const noexcept
    {
        int r = 0;
        for (const auto& c : sites) r = std::max(r, max_norm(c, dim));
        return std::max(r, 1);
    }
};

inline void sort_canonical(std::vector<Coord>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace vnrf

#endif
