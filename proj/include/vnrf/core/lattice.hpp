#ifndef VNRF_CORE_LATTICE_HPP
#define VNRF_CORE_LATTICE_HPP

/** @file
 * Lattice geometry: windows of Z^d, symbol configurations with a boundary
 * mode, and read-only views centered at a site.
 */

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vnrf
{

inline constexpr int kMaxDim = 3;

/// Lattice coordinate or offset; axes at or beyond the window dimension are 0.
using Coord = std::array<int, kMaxDim>;
using Symbol = std::uint8_t;
/// Row-major linear index of a site inside a Window.
using Site = std::size_t;

inline int max_norm(const Coord& c, int dim) noexcept
{
    int m = 0;
    for (int a = 0; a < dim; ++a) m = std::max(m, std::abs(c[a]));
    return m;
}

inline Coord operator+(Coord a, const Coord& b) noexcept
{
    for (int k = 0; k < kMaxDim; ++k) a[k] += b[k];
    return a;
}

inline Coord operator-(Coord a, const Coord& b) noexcept
{
    for (int k = 0; k < kMaxDim; ++k) a[k] -= b[k];
    return a;
}

/// Finite alphabet {0, ..., size-1}.
class Alphabet
{
public:
    static constexpr int kMaxSize = 32;

    Alphabet() = default;
    explicit Alphabet(int size) : size_(size)
    {
        if (size < 2 || size > kMaxSize)
            throw std::invalid_argument("alphabet size must be in [2, " + std::to_string(kMaxSize) + "]");
    }

    int size() const noexcept { return size_; }
    bool contains(int s) const noexcept { return s >= 0 && s < size_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    int size_ = 2;
};

/// Rectangular window of Z^d with row-major site indexing (last axis fastest).
class Window
{
public:
    Window() = default;

    explicit Window(std::vector<int> extents)
    {
        if (extents.empty() || static_cast<int>(extents.size()) > kMaxDim)
            throw std::invalid_argument("window dimension must be in [1, " + std::to_string(kMaxDim) + "]");
        dim_ = static_cast<int>(extents.size());
        size_ = 1;
        for (int a = 0; a < dim_; ++a) {
            if (extents[a] < 1) throw std::invalid_argument("window extents must be positive");
            extents_[a] = extents[a];
            size_ *= static_cast<std::size_t>(extents[a]);
        }
        for (int a = dim_; a < kMaxDim; ++a) extents_[a] = 1;
        stride_[kMaxDim - 1] = 1;
        for (int a = kMaxDim - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * static_cast<std::size_t>(extents_[a + 1]);
    }

    int dim() const noexcept { return dim_; }
    int extent(int axis) const noexcept { return extents_[axis]; }
    std::vector<int> extents() const { return {extents_.begin(), extents_.begin() + dim_}; }
    std::size_t size() const noexcept { return size_; }
    int min_extent() const noexcept { return *std::min_element(extents_.begin(), extents_.begin() + dim_); }
    std::size_t stride(int axis) const noexcept { return stride_[axis]; }

    bool contains(const Coord& c) const noexcept
    {
        for (int a = 0; a < kMaxDim; ++a)
            if (c[a] < 0 || c[a] >= extents_[a]) return false;
        return true;
    }

    Coord coord(Site s) const
    {
        if (s >= size_) throw std::out_of_range("site outside window");
        Coord c{};
        for (int a = 0; a < kMaxDim; ++a) {
            c[a] = static_cast<int>(s / stride_[a]);
            s %= stride_[a];
        }
        return c;
    }

    Site site(const Coord& c) const
    {
        if (!contains(c)) throw std::out_of_range("site outside window");
        Site s = 0;
        for (int a = 0; a < kMaxDim; ++a) s += static_cast<std::size_t>(c[a]) * stride_[a];
        return s;
    }

    /// Human readable extents, e.g. "256x256".
    std::string shape() const
    {
        std::string out;
        for (int a = 0; a < dim_; ++a) {
            if (a) out += 'x';
            out += std::to_string(extents_[a]);
        }
        return out;
    }

    friend bool operator==(const Window& l, const Window& r) noexcept
    {
        return l.dim_ == r.dim_ && l.extents_ == r.extents_;
    }

private:
    int dim_ = 1;
    std::array<int, kMaxDim> extents_{1, 1, 1};
    std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
    std::size_t size_ = 1;
};

enum class BoundaryKind { free, periodic, fixed };

struct Boundary
{
    BoundaryKind kind = BoundaryKind::free;
    Symbol fixed_symbol = 0;

    static Boundary free() { return {}; }
    static Boundary periodic() { return {BoundaryKind::periodic, 0}; }
    static Boundary fixed(Symbol s) { return {BoundaryKind::fixed, s}; }

    friend bool operator==(const Boundary&, const Boundary&) = default;
};

inline std::string to_string(const Boundary& b)
{
    switch (b.kind) {
    case BoundaryKind::free: return "free";
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::fixed: return "fixed:" + std::to_string(int(b.fixed_symbol));
    }
    return "free";
}

/// Symbol assignment on a window. Out-of-window lookups are resolved by the
/// boundary mode: periodic wraps, fixed returns the fixed symbol, free fails.
class Configuration
{
public:
    Configuration() = default;

    Configuration(Window window, Alphabet alphabet, Boundary boundary = Boundary::free())
        : window_(std::move(window)), alphabet_(alphabet), boundary_(boundary), symbols_(window_.size(), 0)
    {
        check_boundary();
    }

    Configuration(Window window, Alphabet alphabet, Boundary boundary, std::vector<Symbol> symbols)
        : window_(std::move(window)), alphabet_(alphabet), boundary_(boundary), symbols_(std::move(symbols))
    {
        if (symbols_.size() != window_.size())
            throw std::invalid_argument("symbol count " + std::to_string(symbols_.size()) +
                                        " does not match window size " + std::to_string(window_.size()));
        for (Symbol s : symbols_)
            if (!alphabet_.contains(s))
                throw std::invalid_argument("symbol " + std::to_string(int(s)) + " outside alphabet");
        check_boundary();
    }

    const Window& window() const noexcept { return window_; }
    Alphabet alphabet() const noexcept { return alphabet_; }
    Boundary boundary() const noexcept { return boundary_; }
    void set_boundary(Boundary b)
    {
        boundary_ = b;
        check_boundary();
    }
    int dim() const noexcept { return window_.dim(); }
    std::size_t size() const noexcept { return symbols_.size(); }

    Symbol operator[](Site s) const noexcept { return symbols_[s]; }
    Symbol at(Site s) const
    {
        if (s >= symbols_.size()) throw std::out_of_range("site outside window");
        return symbols_[s];
    }
    Symbol at(const Coord& c) const { return symbols_[window_.site(c)]; }

    void set(Site s, Symbol v)
    {
        if (s >= symbols_.size()) throw std::out_of_range("site outside window");
        if (!alphabet_.contains(v)) throw std::invalid_argument("symbol outside alphabet");
        symbols_[s] = v;
    }
    /// Unchecked write for inner loops.
    void assign(Site s, Symbol v) noexcept { symbols_[s] = v; }

    std::span<const Symbol> symbols() const noexcept { return symbols_; }

    /// Symbol at an arbitrary lattice coordinate, or nullopt outside a free window.
    std::optional<Symbol> lookup(Coord c) const noexcept
    {
        if (window_.contains(c)) return symbols_[site_unchecked(c)];
        switch (boundary_.kind) {
        case BoundaryKind::periodic:
            for (int a = 0; a < window_.dim(); ++a) {
                const int e = window_.extent(a);
                c[a] %= e;
                if (c[a] < 0) c[a] += e;
            }
            return symbols_[site_unchecked(c)];
        case BoundaryKind::fixed: return boundary_.fixed_symbol;
        case BoundaryKind::free: break;
        }
        return std::nullopt;
    }

    /// Window site behind a lattice coordinate: itself, its periodic image, or nullopt.
    std::optional<Site> resolve(Coord c) const noexcept
    {
        if (window_.contains(c)) return site_unchecked(c);
        if (boundary_.kind != BoundaryKind::periodic) return std::nullopt;
        for (int a = 0; a < window_.dim(); ++a) {
            const int e = window_.extent(a);
            c[a] %= e;
            if (c[a] < 0) c[a] += e;
        }
        return site_unchecked(c);
    }

    friend bool operator==(const Configuration& l, const Configuration& r)
    {
        return l.window_ == r.window_ && l.alphabet_ == r.alphabet_ && l.boundary_ == r.boundary_ &&
               l.symbols_ == r.symbols_;
    }

private:
    Site site_unchecked(const Coord& c) const noexcept
    {
        Site s = 0;
        for (int a = 0; a < kMaxDim; ++a) s += static_cast<std::size_t>(c[a]) * window_.stride(a);
        return s;
    }

    void check_boundary() const
    {
        if (boundary_.kind == BoundaryKind::fixed && !alphabet_.contains(boundary_.fixed_symbol))
            throw std::invalid_argument("fixed boundary symbol outside alphabet");
    }

    Window window_;
    Alphabet alphabet_;
    Boundary boundary_;
    std::vector<Symbol> symbols_;
};

/// Read-only view of a configuration seen from a center site; offsets are
/// relative to the center.
class ConfigView
{
public:
    ConfigView(const Configuration& config, const Coord& center) : config_(&config), center_(center)
    {
        if (!config.window().contains(center)) throw std::out_of_range("site outside window");
    }
    ConfigView(const Configuration& config, Site site) : ConfigView(config, config.window().coord(site)) {}

    int dim() const noexcept { return config_->dim(); }
    int alphabet_size() const noexcept { return config_->alphabet().size(); }
    /// Largest scan length that can visit new sites along an axis.
    int reach() const noexcept { return config_->window().min_extent(); }

    Symbol operator()(const Coord& offset) const
    {
        if (auto s = config_->lookup(center_ + offset)) return *s;
        throw std::out_of_range("pattern exceeds window");
    }

    bool available(const Coord& offset) const noexcept { return config_->lookup(center_ + offset).has_value(); }

    const Coord& center() const noexcept { return center_; }
    const Configuration& config() const noexcept { return *config_; }

private:
    const Configuration* config_;
    Coord center_;
};

/// Dense local field on the ball V_0(radius); used by exhaustive oracles.
class PatchView
{
public:
    PatchView(int dim, int radius, int alphabet_size)
        : dim_(dim), radius_(radius), side_(2 * radius + 1), alphabet_size_(alphabet_size)
    {
        std::size_t n = 1;
        for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(side_);
        values_.assign(n, 0);
    }

    template <typename View>
    static PatchView copy_of(const View& v, int radius)
    {
        PatchView p(v.dim(), radius, v.alphabet_size());
        for (std::size_t k = 0; k < p.values_.size(); ++k) p.values_[k] = v(p.offset_of(k));
        return p;
    }

    int dim() const noexcept { return dim_; }
    int radius() const noexcept { return radius_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    int reach() const noexcept { return radius_; }
    std::size_t cell_count() const noexcept { return values_.size(); }

    Symbol operator()(const Coord& offset) const
    {
        if (max_norm(offset, dim_) > radius_) throw std::out_of_range("offset outside patch");
        return values_[index_of(offset)];
    }
    bool available(const Coord& offset) const noexcept { return max_norm(offset, dim_) <= radius_; }

    void set(const Coord& offset, Symbol s) { values_.at(index_of(offset)) = s; }
    Symbol& cell(std::size_t k) { return values_[k]; }

    std::size_t index_of(const Coord& offset) const noexcept
    {
        std::size_t k = 0;
        for (int a = 0; a < dim_; ++a) k = k * side_ + static_cast<std::size_t>(offset[a] + radius_);
        return k;
    }

    Coord offset_of(std::size_t k) const noexcept
    {
        Coord c{};
        for (int a = dim_ - 1; a >= 0; --a) {
            c[a] = static_cast<int>(k % side_) - radius_;
            k /= side_;
        }
        return c;
    }

private:
    int dim_;
    int radius_;
    int side_;
    int alphabet_size_;
    std::vector<Symbol> values_;
};

/// View with the center symbol replaced.
template <typename View>
class CenterOverride
{
public:
    CenterOverride(const View& base, Symbol center) : base_(&base), center_(center) {}

    int dim() const noexcept { return base_->dim(); }
    int alphabet_size() const noexcept { return base_->alphabet_size(); }
    int reach() const noexcept { return base_->reach(); }
    Symbol operator()(const Coord& offset) const
    {
        for (int a = 0; a < kMaxDim; ++a)
            if (offset[a] != 0) return (*base_)(offset);
        return center_;
    }
    bool available(const Coord& offset) const noexcept { return base_->available(offset); }

private:
    const View* base_;
    Symbol center_;
};

namespace detail
{
inline void collect_ball(const Window& w, const Boundary& b, const Coord& center, int radius,
                         bool keep_center, bool shell_only, std::vector<Site>& out)
{
    const int d = w.dim();
    Coord off{};
    for (int a = 0; a < d; ++a) off[a] = -radius;
    for (;;) {
        const int norm = max_norm(off, d);
        const bool skip = (!keep_center && norm == 0) || (shell_only && norm != radius);
        if (!skip) {
            Coord c = center + off;
            bool inside = w.contains(c);
            if (!inside && b.kind == BoundaryKind::periodic) {
                for (int a = 0; a < d; ++a) {
                    c[a] %= w.extent(a);
                    if (c[a] < 0) c[a] += w.extent(a);
                }
                inside = true;
            }
            if (inside) out.push_back(w.site(c));
        }
        int a = d - 1;
        while (a >= 0 && off[a] == radius) off[a--] = -radius;
        if (a < 0) break;
        ++off[a];
    }
}
} // namespace detail

/// Max-norm ball V_i(radius) in canonical (lexicographic offset) order.
/// Free and fixed windows truncate; periodic windows wrap.
inline std::vector<Site> ball(const Window& w, const Boundary& b, Site i, int radius)
{
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    std::vector<Site> out;
    detail::collect_ball(w, b, w.coord(i), radius, true, false, out);
    return out;
}

/// V_i(radius) without its center.
inline std::vector<Site> punctured_ball(const Window& w, const Boundary& b, Site i, int radius)
{
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    std::vector<Site> out;
    detail::collect_ball(w, b, w.coord(i), radius, false, false, out);
    return out;
}

/// Sites at max-norm distance exactly `radius`.
inline std::vector<Site> shell(const Window& w, const Boundary& b, Site i, int radius)
{
    if (radius < 0) throw std::invalid_argument("radius must be non-negative");
    std::vector<Site> out;
    detail::collect_ball(w, b, w.coord(i), radius, radius == 0, radius > 0, out);
    return out;
}

} // namespace vnrf

#endif
