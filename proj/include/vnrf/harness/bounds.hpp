#ifndef VNRF_HARNESS_BOUNDS_HPP
#define VNRF_HARNESS_BOUNDS_HPP

// Over- and underestimation bound shapes with the unknown constant C(d) = 1.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vnrf/estimator/statistics.hpp"

namespace vnrf
{

struct BoundParams
{
    double delta = 0;
    double q_min = 0;
    int alphabet_size = 2;
    int dim = 1;
    double epsilon = 0.5;
};

struct BoundShapes
{
    std::size_t region_size = 0;
    double c_delta = 0;
    double overestimation = 0;
    double underestimation = 0;
    std::optional<std::string> warning;
    static constexpr const char* label = "shape-only (C(d)=1, valid for n >= unknown n0)";
};

/// exp(-|Λ̄|^{1-ε}).
inline double underestimation_shape(std::size_t region, double epsilon)
{
    return std::exp(-std::pow(static_cast<double>(region), 1.0 - epsilon));
}

/// (log|Λ̄|)^{(d+1)/(2d)} exp(-c(δ) sqrt(log|Λ̄|)) + exp(-|Λ̄|^{1-ε}).
inline double overestimation_shape(std::size_t region, double c_delta, int dim, double epsilon)
{
    const double lg = std::log(static_cast<double>(region));
    return std::pow(lg, (dim + 1.0) / (2.0 * dim)) * std::exp(-c_delta * std::sqrt(lg)) +
           underestimation_shape(region, epsilon);
}

inline BoundShapes theorem_bound_shapes(const BoundParams& p, std::size_t region)
{
    if (region < 2) throw std::invalid_argument("bound shapes need |region| >= 2");
    if (!(p.epsilon > 0 && p.epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
    BoundShapes b;
    b.region_size = region;
    b.c_delta = c_of_delta(p.delta, p.dim, p.alphabet_size, p.q_min);
    b.overestimation = overestimation_shape(region, b.c_delta, p.dim, p.epsilon);
    b.underestimation = underestimation_shape(region, p.epsilon);
    if (b.c_delta <= 0) b.warning = "outside consistency regime";
    return b;
}

inline nlohmann::json to_json(const BoundShapes& b)
{
    nlohmann::json j{{"region_size", b.region_size},
                     {"c_delta", b.c_delta},
                     {"overestimation_shape", b.overestimation},
                     {"underestimation_shape", b.underestimation},
                     {"label", BoundShapes::label}};
    if (b.warning) j["warning"] = *b.warning;
    return j;
}

} // namespace vnrf

#endif
