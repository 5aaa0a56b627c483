#ifndef VNRF_MODELS_POLYGON_HPP
#define VNRF_MODELS_POLYGON_HPP

/** @file
 * Two-dimensional polygon-interaction field on {-1,+1} (stored as symbols 0/1).
 *
 * For a site c, the smallest polygon with c in its interior and +1 on its
 * boundary is the 8-connected flood F of -1 sites from c (c itself always
 * included) together with the 8-neighbors of F. Every qualifying polygon
 * contains that set and the set qualifies, so it is the intersection. When
 * the flood reaches the edge of the truncation box, no polygon fits and the
 * full box is returned.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/models/distribution.hpp"

namespace vnrf
{

struct PolygonParams
{
    double beta = 0.1;
    int L = 1;
    /// J[n] couples regions of cardinality n; needs (2L+1)^2 + 1 entries.
    std::vector<double> J;

    void validate() const
    {
        if (!(beta >= 0) || !std::isfinite(beta)) throw std::invalid_argument("polygon: beta must be finite and >= 0");
        if (L < 1 || L > 3) throw std::invalid_argument("polygon: L must be in [1, 3]");
        const std::size_t need = static_cast<std::size_t>((2 * L + 1) * (2 * L + 1)) + 1;
        if (J.size() < need)
            throw std::invalid_argument("polygon: J must have at least " + std::to_string(need) + " entries");
        for (double j : J)
            if (!std::isfinite(j)) throw std::invalid_argument("polygon: J entries must be finite");
    }

    double j_max() const noexcept
    {
        double m = 0;
        for (double j : J) m = std::max(m, std::abs(j));
        return m;
    }
};

/// Membership mask of a flood hull inside the box V_c(box).
class HullMask
{
public:
    static constexpr int kMaxBox = 7;
    static constexpr int kSide = 2 * kMaxBox + 1;

    int box = 0;
    Coord center{};
    bool truncated = false;
    int count = 0;

    bool contains(const Coord& x) const noexcept
    {
        const int dx = x[0] - center[0], dy = x[1] - center[1];
        if (std::abs(dx) > box || std::abs(dy) > box) return false;
        return cells_[idx(dx, dy)] != 0;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const
    {
        for (int dx = -box; dx <= box; ++dx)
            for (int dy = -box; dy <= box; ++dy)
                if (cells_[idx(dx, dy)]) fn(Coord{center[0] + dx, center[1] + dy, 0});
    }

    std::vector<Coord> sites() const
    {
        std::vector<Coord> out;
        out.reserve(static_cast<std::size_t>(count));
        for_each([&](const Coord& c) { out.push_back(c); });
        return out;
    }

    /// Flood hull of `c` inside V_c(box); `get` maps an absolute coordinate to its symbol.
    template <typename Get>
    void build(Get&& get, const Coord& c, int b)
    {
        if (b < 1 || b > kMaxBox) throw std::invalid_argument("polygon: truncation box out of range");
        box = b;
        center = c;
        truncated = false;
        count = 0;
        const int side = 2 * b + 1;
        for (int dx = -b; dx <= b; ++dx) std::fill_n(&cells_[idx(dx, -b)], side, std::uint8_t{0});

        // 1 = flooded (-1 site or the center), 2 = +1 rim.
        std::array<std::int8_t, 2 * kSide * kSide> stack;
        int top = 0;
        cells_[idx(0, 0)] = 1;
        stack[top++] = 0;
        stack[top++] = 0;
        while (top) {
            const int y = stack[--top], x = stack[--top];
            for (int ddx = -1; ddx <= 1; ++ddx)
                for (int ddy = -1; ddy <= 1; ++ddy) {
                    const int nx = x + ddx, ny = y + ddy;
                    if ((ddx == 0 && ddy == 0) || cells_[idx(nx, ny)] == 1) continue;
                    const Symbol s = get(Coord{c[0] + nx, c[1] + ny, 0});
                    if (s == 1) {
                        cells_[idx(nx, ny)] = 2;
                        continue;
                    }
                    if (std::max(std::abs(nx), std::abs(ny)) >= b) {
                        truncated = true;
                        for (int dx = -b; dx <= b; ++dx) std::fill_n(&cells_[idx(dx, -b)], side, std::uint8_t{1});
                        count = side * side;
                        return;
                    }
                    cells_[idx(nx, ny)] = 1;
                    stack[top++] = static_cast<std::int8_t>(nx);
                    stack[top++] = static_cast<std::int8_t>(ny);
                }
        }
        for (int dx = -b; dx <= b; ++dx)
            for (int dy = -b; dy <= b; ++dy) count += cells_[idx(dx, dy)] != 0;
    }

private:
    static int idx(int dx, int dy) noexcept { return (dx + kMaxBox) * kSide + (dy + kMaxBox); }
    std::array<std::uint8_t, kSide * kSide> cells_{};
};

class PolygonModel
{
public:
    explicit PolygonModel(PolygonParams p) : p_(std::move(p))
    {
        p_.validate();
        const int L = p_.L;
        for (int x = -L; x <= L; ++x)
            for (int y = -L; y <= L; ++y) ball_.push_back(Coord{x, y, 0});
    }

    static constexpr const char* name() { return "polygon"; }
    const PolygonParams& params() const noexcept { return p_; }
    int dim() const noexcept { return 2; }
    Alphabet alphabet() const { return Alphabet(2); }
    std::optional<int> range() const noexcept { return 2 * p_.L; }
    double beta() const noexcept { return p_.beta; }
    bool q_min_is_estimate() const noexcept { return false; }

    /// At most |V_0(L)| terms of size <= max|J| enter H_{0}.
    double q_min() const noexcept
    {
        const double n = static_cast<double>(ball_.size());
        return 1.0 / (1.0 + std::exp(2.0 * p_.beta * n * p_.j_max()));
    }

    static int spin(Symbol a) noexcept { return 2 * int(a) - 1; }

    /// Γ_c = V_c(L) ∩ Γ^1_c with the polygon family localized to V_c(L).
    template <typename View>
    RegionResult interaction_region(const View& v, const Coord& c) const
    {
        HullMask m;
        m.build(view_getter(v), c, p_.L);
        return {m.sites(), m.truncated};
    }

    /// K^c = J_{|Γ_c|} Π_{Γ_c} s.
    template <typename View>
    double interaction(const View& v, const Coord& c) const
    {
        HullMask m;
        m.build(view_getter(v), c, p_.L);
        return interaction(v, m);
    }

    template <typename View>
    double gamma0_log_weight(const View& v) const
    {
        return -p_.beta * local_energy(v);
    }

    /// H_{0} = -Σ_{j : 0 ∈ Γ_j} K^j.
    template <typename View>
    double local_energy(const View& v) const
    {
        const auto get = view_getter(v);
        HullMask m;
        double h = 0;
        for (const auto& j : ball_) {
            m.build(get, j, p_.L);
            if (m.contains(Coord{0, 0, 0})) h -= interaction(v, m);
        }
        return h;
    }

    template <typename View>
    Distribution gamma0(const View& v) const
    {
        double lw[2];
        for (Symbol a = 0; a < 2; ++a) lw[a] = gamma0_log_weight(CenterOverride<View>(v, a));
        return Distribution::from_log_weights(lw, 2);
    }

    /// Certified dependency set: the regions Γ_j, j ∈ V_0(L), under both center values.
    template <typename View>
    RegionResult context(const View& v) const
    {
        RegionResult r;
        HullMask m;
        for (Symbol a = 0; a < 2; ++a) {
            const CenterOverride<View> ov(v, a);
            const auto get = view_getter(ov);
            for (const auto& j : ball_) {
                m.build(get, j, p_.L);
                r.truncated = r.truncated || m.truncated;
                m.for_each([&](const Coord& x) {
                    if (x != Coord{0, 0, 0}) r.sites.push_back(x);
                });
            }
        }
        sort_canonical(r.sites);
        return r;
    }

    /// (Γ^1_0 ∩ V_0(2L)) \ {0}, the hull taken inside V_0(2L).
    template <typename View>
    RegionResult closed_form_context(const View& v) const
    {
        HullMask m;
        m.build(view_getter(v), Coord{0, 0, 0}, 2 * p_.L);
        RegionResult r{{}, m.truncated};
        m.for_each([&](const Coord& x) {
            if (x != Coord{0, 0, 0}) r.sites.push_back(x);
        });
        sort_canonical(r.sites);
        return r;
    }

    /// Union of the regions Γ_j containing 0, under ω and under the center flip, minus 0.
    template <typename View>
    RegionResult support_union_context(const View& v) const
    {
        RegionResult r;
        HullMask m;
        const Symbol cur = v(Coord{0, 0, 0});
        for (Symbol a : {cur, static_cast<Symbol>(1 - cur)}) {
            const CenterOverride<View> ov(v, a);
            const auto get = view_getter(ov);
            for (const auto& j : ball_) {
                m.build(get, j, p_.L);
                if (!m.contains(Coord{0, 0, 0})) continue;
                r.truncated = r.truncated || m.truncated;
                m.for_each([&](const Coord& x) {
                    if (x != Coord{0, 0, 0}) r.sites.push_back(x);
                });
            }
        }
        sort_canonical(r.sites);
        return r;
    }

    /// H_Λ = -Σ_{j : Γ_j ∩ Λ ≠ ∅} K^j.
    double region_energy(const Configuration& c, const std::vector<Site>& region) const
    {
        if (c.dim() != 2) throw std::invalid_argument("polygon: dimension must be 2");
        std::vector<char> in(c.size(), 0);
        for (Site s : region) in[s] = 1;
        std::vector<Coord> cand;
        for (Site s : region) {
            const Coord x = c.window().coord(s);
            for (const auto& d : ball_) cand.push_back(x + d);
        }
        // Periodic images of one candidate are the same interaction term.
        for (auto& j : cand)
            if (auto r = c.resolve(j)) j = c.window().coord(*r);
        sort_canonical(cand);
        auto get = [&](const Coord& x) {
            auto s = c.lookup(x);
            if (!s) throw std::out_of_range("pattern exceeds window");
            return *s;
        };
        HullMask m;
        double h = 0;
        for (const auto& j : cand) {
            m.build(get, j, p_.L);
            bool hit = false;
            m.for_each([&](const Coord& x) {
                if (auto r = c.resolve(x); r && in[*r]) hit = true;
            });
            if (!hit) continue;
            double prod = 1;
            m.for_each([&](const Coord& x) { prod *= spin(get(x)); });
            h -= p_.J[static_cast<std::size_t>(m.count)] * prod;
        }
        return h;
    }

private:
    template <typename View>
    static auto view_getter(const View& v)
    {
        return [&v](const Coord& x) { return v(x); };
    }

    template <typename View>
    double interaction(const View& v, const HullMask& m) const
    {
        double prod = 1;
        m.for_each([&](const Coord& x) { prod *= spin(v(x)); });
        return p_.J[static_cast<std::size_t>(m.count)] * prod;
    }

    PolygonParams p_;
    std::vector<Coord> ball_;
};

} // namespace vnrf

#endif
