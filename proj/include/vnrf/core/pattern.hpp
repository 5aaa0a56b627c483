#ifndef VNRF_CORE_PATTERN_HPP
#define VNRF_CORE_PATTERN_HPP

/** @file
 * Punctured-ball patterns, their canonical keys, and the security region.
 *
 * Offsets inside a pattern are listed in lexicographic coordinate order with
 * the center removed. Every module goes through ball_offsets() so the order
 * is global.
 */

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/core/lattice.hpp"

namespace vnrf
{

namespace detail
{
inline std::vector<Coord> enumerate_offsets(int dim, int radius, int min_norm)
{
    std::vector<Coord> out;
    Coord off{};
    for (int a = 0; a < dim; ++a) off[a] = -radius;
    for (;;) {
        if (max_norm(off, dim) >= min_norm) out.push_back(off);
        int a = dim - 1;
        while (a >= 0 && off[a] == radius) off[a--] = -radius;
        if (a < 0) break;
        ++off[a];
    }
    return out;
}
} // namespace detail

/// Offsets of V_0^0(radius) in canonical order.
inline std::vector<Coord> ball_offsets(int dim, int radius)
{
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    return detail::enumerate_offsets(dim, radius, 1);
}

/// Offsets of the shell {x : |x| = radius} in canonical order.
inline std::vector<Coord> shell_offsets(int dim, int radius)
{
    if (radius < 1) throw std::invalid_argument("shell radius must be positive");
    return detail::enumerate_offsets(dim, radius, radius);
}

inline std::size_t punctured_ball_size(int dim, int radius)
{
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(2 * radius + 1);
    return s - 1;
}

inline std::size_t shell_size(int dim, int radius)
{
    if (radius == 0) return 1;
    std::size_t outer = 1, inner = 1;
    for (int a = 0; a < dim; ++a) {
        outer *= static_cast<std::size_t>(2 * radius + 1);
        inner *= static_cast<std::size_t>(2 * radius - 1);
    }
    return outer - inner;
}

/// Symbols on V_0^0(radius) in canonical order.
struct Pattern
{
    int dim = 1;
    int radius = 1;
    std::vector<Symbol> values;

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// X_i^radius: the configuration around `center` with the center excluded.
template <typename View>
Pattern extract_pattern(const View& view, int radius)
{
    Pattern p{view.dim(), radius, {}};
    const auto offs = ball_offsets(view.dim(), radius);
    p.values.reserve(offs.size());
    for (const auto& o : offs) p.values.push_back(view(o));
    return p;
}

inline Pattern extract_pattern(const Configuration& config, Site i, int radius)
{
    return extract_pattern(ConfigView(config, i), radius);
}

/// Restriction of a pattern to a smaller radius.
inline Pattern restrict_pattern(const Pattern& p, int radius)
{
    if (radius < 1 || radius > p.radius) throw std::invalid_argument("restriction radius out of range");
    const auto offs = ball_offsets(p.dim, p.radius);
    Pattern out{p.dim, radius, {}};
    for (std::size_t k = 0; k < offs.size(); ++k)
        if (max_norm(offs[k], p.dim) <= radius) out.values.push_back(p.values[k]);
    return out;
}

/// Values of a pattern on its outermost shell, in canonical shell order.
inline std::vector<Symbol> shell_values(const Pattern& p)
{
    const auto offs = ball_offsets(p.dim, p.radius);
    std::vector<Symbol> out;
    for (std::size_t k = 0; k < offs.size(); ++k)
        if (max_norm(offs[k], p.dim) == p.radius) out.push_back(p.values[k]);
    return out;
}

/// Concatenation σ^{ℓ-1} v: a radius-ℓ pattern from a radius-(ℓ-1) pattern and shell values.
inline Pattern extend_pattern(const Pattern& p, const std::vector<Symbol>& shell)
{
    const int r = p.radius + 1;
    if (shell.size() != shell_size(p.dim, r))
        throw std::invalid_argument("shell has " + std::to_string(shell.size()) + " values, expected " +
                                    std::to_string(shell_size(p.dim, r)));
    if (p.values.size() != punctured_ball_size(p.dim, p.radius))
        throw std::invalid_argument("pattern has wrong value count");
    const auto offs = ball_offsets(p.dim, r);
    Pattern out{p.dim, r, {}};
    out.values.reserve(offs.size());
    std::size_t inner = 0, outer = 0;
    for (const auto& o : offs) {
        if (max_norm(o, p.dim) == r)
            out.values.push_back(shell[outer++]);
        else
            out.values.push_back(p.values[inner++]);
    }
    return out;
}

/// Collision-free pattern key; up to 256 bits, limb 0 least significant.
struct PatternKey
{
    std::array<std::uint64_t, 4> limbs{};

    friend bool operator==(const PatternKey&, const PatternKey&) = default;
    friend auto operator<=>(const PatternKey& a, const PatternKey& b)
    {
        for (int k = 3; k >= 0; --k)
            if (a.limbs[k] != b.limbs[k]) return a.limbs[k] <=> b.limbs[k];
        return std::strong_ordering::equal;
    }

    template <typename H>
    friend H AbslHashValue(H h, const PatternKey& k)
    {
        return H::combine(std::move(h), k.limbs[0], k.limbs[1], k.limbs[2], k.limbs[3]);
    }

    std::string to_string() const
    {
        if (!limbs[1] && !limbs[2] && !limbs[3]) return std::to_string(limbs[0]);
        static const char* hex = "0123456789abcdef";
        std::string s = "0x";
        bool lead = true;
        for (int k = 3; k >= 0; --k)
            for (int b = 60; b >= 0; b -= 4) {
                const int nib = static_cast<int>((limbs[k] >> b) & 0xF);
                if (lead && nib == 0) continue;
                lead = false;
                s += hex[nib];
            }
        return s;
    }
};

/// Base-|A| positional encoding, first canonical value most significant.
class KeyCodec
{
public:
    KeyCodec(int dim, int radius, int alphabet_size)
        : dim_(dim), radius_(radius), base_(static_cast<std::uint64_t>(alphabet_size)),
          length_(punctured_ball_size(dim, radius))
    {
        const double bits = static_cast<double>(length_) * std::log2(static_cast<double>(alphabet_size));
        if (bits > 256.0)
            throw std::length_error("pattern key needs " + std::to_string(static_cast<int>(std::ceil(bits))) +
                                    " bits; at most 256 supported");
        narrow_ = bits <= 63.0;
    }

    std::size_t length() const noexcept { return length_; }
    bool narrow() const noexcept { return narrow_; }

    template <typename It>
    PatternKey encode_range(It first, It last) const
    {
        PatternKey k;
        if (narrow_) {
            std::uint64_t v = 0;
            for (; first != last; ++first) v = v * base_ + *first;
            k.limbs[0] = v;
            return k;
        }
        for (; first != last; ++first) {
            unsigned __int128 carry = *first;
            for (auto& limb : k.limbs) {
                const unsigned __int128 t = static_cast<unsigned __int128>(limb) * base_ + carry;
                limb = static_cast<std::uint64_t>(t);
                carry = t >> 64;
            }
        }
        return k;
    }

    PatternKey encode(const Pattern& p) const
    {
        if (p.values.size() != length_) throw std::invalid_argument("pattern length does not match codec");
        return encode_range(p.values.begin(), p.values.end());
    }

    Pattern decode(PatternKey k) const
    {
        Pattern p{dim_, radius_, std::vector<Symbol>(length_, 0)};
        for (std::size_t pos = length_; pos-- > 0;) {
            unsigned __int128 rem = 0;
            for (int l = 3; l >= 0; --l) {
                const unsigned __int128 cur = (rem << 64) | k.limbs[l];
                k.limbs[l] = static_cast<std::uint64_t>(cur / base_);
                rem = cur % base_;
            }
            p.values[pos] = static_cast<Symbol>(rem);
        }
        return p;
    }

private:
    int dim_;
    int radius_;
    std::uint64_t base_;
    std::size_t length_;
    bool narrow_ = true;
};

inline PatternKey pattern_key(const Pattern& p, int alphabet_size)
{
    return KeyCodec(p.dim, p.radius, alphabet_size).encode(p);
}

/// k(n) = (log |Λ|)^{1/(2d)}.
inline double security_scale(std::size_t n_size, int dim)
{
    if (n_size < 2) throw std::invalid_argument("window must have at least 2 sites");
    return std::pow(std::log(static_cast<double>(n_size)), 1.0 / (2.0 * dim));
}

inline int security_margin(std::size_t n_size, int dim)
{
    return static_cast<int>(std::ceil(security_scale(n_size, dim) - 1e-12));
}

struct SecurityRegion
{
    Window window;
    int margin = 0;
    bool periodic = false;
    std::vector<Site> sites;

    std::size_t size() const noexcept { return sites.size(); }
};

/// Sites whose radius-`margin` ball lies in the window; all sites when periodic.
inline SecurityRegion security_region(const Window& w, int margin, bool periodic)
{
    if (margin < 0) throw std::invalid_argument("margin must be non-negative");
    SecurityRegion r{w, margin, periodic, {}};
    if (periodic) {
        r.sites.resize(w.size());
        for (Site s = 0; s < w.size(); ++s) r.sites[s] = s;
        return r;
    }
    if (w.min_extent() <= 2 * margin) throw std::runtime_error("window too small for margin");
    r.sites.reserve(w.size());
    for (Site s = 0; s < w.size(); ++s) {
        const Coord c = w.coord(s);
        bool inside = true;
        for (int a = 0; a < w.dim() && inside; ++a) inside = c[a] >= margin && c[a] < w.extent(a) - margin;
        if (inside) r.sites.push_back(s);
    }
    return r;
}

inline SecurityRegion security_region(const Configuration& config, std::optional<int> margin = std::nullopt)
{
    const int m = margin ? *margin : security_margin(config.size(), config.dim());
    return security_region(config.window(), m, config.boundary().kind == BoundaryKind::periodic);
}

} // namespace vnrf

#endif
