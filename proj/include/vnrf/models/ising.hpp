#ifndef VNRF_MODELS_ISING_HPP
#define VNRF_MODELS_ISING_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vnrf/models/distribution.hpp"

namespace vnrf
{

/// Nearest-neighbor Ising field on Z (a binary Markov chain) or Z^2.
/// Symbol a maps to spin s = 2a - 1; H = -J Σ_<ij> s_i s_j - h Σ s_i.
class IsingModel
{
public:
    IsingModel(double beta, double coupling = 1.0, double field = 0.0, int dim = 1)
        : beta_(beta), coupling_(coupling), field_(field), dim_(dim)
    {
        if (dim != 1 && dim != 2) throw std::invalid_argument("markov1: dim must be 1 or 2");
        if (!std::isfinite(beta) || beta < 0) throw std::invalid_argument("markov1: beta must be finite and >= 0");
        if (!std::isfinite(coupling) || !std::isfinite(field))
            throw std::invalid_argument("markov1: J and h must be finite");
        for (int a = 0; a < dim_; ++a) {
            Coord e{};
            e[a] = 1;
            neighbors_.push_back(e);
            e[a] = -1;
            neighbors_.push_back(e);
        }
        sort_canonical(neighbors_);
    }

    static constexpr const char* name() { return "markov1"; }
    int dim() const noexcept { return dim_; }
    Alphabet alphabet() const { return Alphabet(2); }
    std::optional<int> range() const noexcept { return 1; }
    double beta() const noexcept { return beta_; }
    double coupling() const noexcept { return coupling_; }
    double field() const noexcept { return field_; }
    bool q_min_is_estimate() const noexcept { return false; }

    double q_min() const noexcept
    {
        return 1.0 / (1.0 + std::exp(2.0 * beta_ * (2.0 * dim_ * std::abs(coupling_) + std::abs(field_))));
    }

    static int spin(Symbol a) noexcept { return 2 * int(a) - 1; }

    template <typename View>
    Distribution gamma0(const View& v) const
    {
        double local = 0;
        for (const auto& e : neighbors_) local += spin(v(e));
        const double x = beta_ * (coupling_ * local + field_);
        const double lw[2] = {-x, x};
        return Distribution::from_log_weights(lw, 2);
    }

    template <typename View>
    RegionResult context(const View&) const
    {
        return {neighbors_, false};
    }

    const std::vector<Coord>& neighbor_offsets() const noexcept { return neighbors_; }

    /// H restricted to bonds and fields touching `region`.
    double region_energy(const Configuration& c, const std::vector<Site>& region) const
    {
        std::vector<char> in(c.size(), 0);
        for (Site s : region) in[s] = 1;
        double e = 0;
        for (Site s : region) {
            const Coord x = c.window().coord(s);
            const int si = spin(c[s]);
            e -= field_ * si;
            for (const auto& d : neighbors_) {
                const auto nb = c.lookup(x + d);
                if (!nb) throw std::out_of_range("pattern exceeds window");
                // Bonds inside the region are seen from both ends.
                const auto ns = c.resolve(x + d);
                e -= (ns && in[*ns] ? 0.5 : 1.0) * coupling_ * si * spin(*nb);
            }
        }
        return e;
    }

private:
    double beta_;
    double coupling_;
    double field_;
    int dim_;
    std::vector<Coord> neighbors_;
};

} // namespace vnrf

#endif
