#ifndef VNRF_MODELS_IID_HPP
#define VNRF_MODELS_IID_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/models/distribution.hpp"

namespace vnrf
{

/// Independent sites with a common law p; the context is empty.
class IidModel
{
public:
    IidModel(std::vector<double> p, int dim = 1) : dim_(dim), law_(static_cast<int>(p.size()))
    {
        if (p.size() < 2) throw std::invalid_argument("iid: need at least 2 probabilities");
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("iid: dim out of range");
        double s = 0;
        for (std::size_t a = 0; a < p.size(); ++a) {
            if (!(p[a] > 0.0 && p[a] < 1.0))
                throw std::invalid_argument("iid: probabilities must lie strictly between 0 and 1");
            law_[static_cast<int>(a)] = p[a];
            s += p[a];
        }
        if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("iid: probabilities must sum to 1");
    }

    static constexpr const char* name() { return "iid"; }
    int dim() const noexcept { return dim_; }
    Alphabet alphabet() const { return Alphabet(law_.size()); }
    std::optional<int> range() const noexcept { return 0; }
    double q_min() const noexcept { return law_.min(); }
    bool q_min_is_estimate() const noexcept { return false; }
    const Distribution& law() const noexcept { return law_; }

    template <typename View>
    Distribution gamma0(const View&) const
    {
        return law_;
    }

    template <typename View>
    RegionResult context(const View&) const
    {
        return {};
    }

    double region_energy(const Configuration& c, const std::vector<Site>& region) const
    {
        double e = 0;
        for (Site s : region) e -= std::log(law_[c[s]]);
        return e;
    }
    double beta() const noexcept { return 1.0; }

private:
    int dim_;
    Distribution law_;
};

} // namespace vnrf

#endif
