#ifndef VNRF_ESTIMATOR_COUNT_TABLE_HPP
#define VNRF_ESTIMATOR_COUNT_TABLE_HPP

/** @file
 * Occurrence counts N(η) and N(η, a) of radius-ℓ patterns over a security
 * region. Sites are hashed in contiguous shards and merged in shard order;
 * patterns are then sorted by key so the table layout is deterministic.
 */

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "vnrf/core/parallel.hpp"
#include "vnrf/core/pattern.hpp"

namespace vnrf
{

/// Computes pattern keys at a fixed radius for sites of one configuration.
class PatternKeyer
{
public:
    PatternKeyer(const Configuration& c, int radius, bool wrap)
        : config_(&c), codec_(c.dim(), radius, c.alphabet().size()), offsets_(ball_offsets(c.dim(), radius)),
          wrap_(wrap)
    {
        const Window& w = c.window();
        for (const auto& o : offsets_) {
            std::ptrdiff_t d = 0;
            for (int a = 0; a < kMaxDim; ++a) d += static_cast<std::ptrdiff_t>(o[a]) * static_cast<std::ptrdiff_t>(w.stride(a));
            deltas_.push_back(d);
        }
        buf_.resize(offsets_.size());
    }

    const KeyCodec& codec() const noexcept { return codec_; }

    /// Key of X_s; the caller guarantees the ball fits unless wrapping.
    PatternKey operator()(Site s)
    {
        const auto sym = config_->symbols();
        if (!wrap_) {
            if (codec_.narrow()) {
                std::uint64_t v = 0;
                const std::uint64_t base = static_cast<std::uint64_t>(config_->alphabet().size());
                for (auto d : deltas_) v = v * base + sym[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s) + d)];
                PatternKey k;
                k.limbs[0] = v;
                return k;
            }
            for (std::size_t k = 0; k < deltas_.size(); ++k)
                buf_[k] = sym[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(s) + deltas_[k])];
        } else {
            const Coord c = config_->window().coord(s);
            for (std::size_t k = 0; k < offsets_.size(); ++k) buf_[k] = *config_->lookup(c + offsets_[k]);
        }
        return codec_.encode_range(buf_.begin(), buf_.end());
    }

private:
    const Configuration* config_;
    KeyCodec codec_;
    std::vector<Coord> offsets_;
    std::vector<std::ptrdiff_t> deltas_;
    std::vector<Symbol> buf_;
    bool wrap_;
};

class CountTable
{
public:
    CountTable() = default;

    int radius() const noexcept { return radius_; }
    int dim() const noexcept { return dim_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t region_size() const noexcept { return region_size_; }
    std::size_t pattern_count() const noexcept { return keys_.size(); }
    const std::vector<PatternKey>& keys() const noexcept { return keys_; }

    std::optional<std::uint32_t> find(const PatternKey& k) const
    {
        auto it = index_.find(k);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::uint64_t total(std::uint32_t idx) const noexcept { return counts_[row(idx)]; }
    std::uint64_t joint(std::uint32_t idx, int a) const noexcept { return counts_[row(idx) + 1 + a]; }

    /// N(η); 0 for unseen patterns.
    std::uint64_t count(const Pattern& p) const
    {
        auto i = find(codec().encode(p));
        return i ? total(*i) : 0;
    }
    std::uint64_t count(const Pattern& p, int a) const
    {
        auto i = find(codec().encode(p));
        return i ? joint(*i, a) : 0;
    }

    /// p̂(a | η) = N(η,a)/N(η), or 0 when η was not observed.
    double conditional(std::uint32_t idx, int a) const noexcept
    {
        const auto n = total(idx);
        return n ? static_cast<double>(joint(idx, a)) / static_cast<double>(n) : 0.0;
    }

    double empirical_conditional(const Pattern& p, int a) const
    {
        auto i = find(codec().encode(p));
        return i ? conditional(*i, a) : 0.0;
    }

    KeyCodec codec() const { return KeyCodec(dim_, radius_, alphabet_size_); }

    /// Builds the table. Also returns the pattern index of every region site when `site_index` is given.
    static CountTable build(const Configuration& c, const SecurityRegion& region, int radius,
                            std::vector<std::uint32_t>* site_index = nullptr, unsigned threads = 0)
    {
        if (radius < 1) throw std::invalid_argument("count radius must be >= 1");
        if (!region.periodic && radius > region.margin)
            throw std::invalid_argument("radius " + std::to_string(radius) + " exceeds region margin " +
                                        std::to_string(region.margin));
        if (region.periodic && 2 * radius + 1 > c.window().min_extent())
            throw std::invalid_argument("pattern wider than the periodic window");

        CountTable t;
        t.radius_ = radius;
        t.dim_ = c.dim();
        t.alphabet_size_ = c.alphabet().size();
        t.region_size_ = region.size();
        const std::size_t stride = static_cast<std::size_t>(t.alphabet_size_) + 1;

        const std::size_t n = region.size();
        // threads == 0 picks a shard count from the budget; small inputs stay sequential.
        const std::size_t chunks =
            threads ? std::max<std::size_t>(1, std::min<std::size_t>(threads, n))
                    : (n < 65536 ? 1 : std::max<std::size_t>(1, std::min<std::size_t>(thread_budget(), n / 32768)));

        struct Shard
        {
            absl::flat_hash_map<PatternKey, std::uint32_t> index;
            std::vector<PatternKey> keys;
            std::vector<std::uint64_t> counts;
            std::vector<std::uint32_t> local; // per-site local pattern index
        };
        std::vector<Shard> shards(chunks);
        parallel_chunks(n, chunks, [&](std::size_t ch, std::size_t lo, std::size_t hi) {
            Shard& sh = shards[ch];
            PatternKeyer keyer(c, radius, region.periodic);
            if (site_index) sh.local.reserve(hi - lo);
            for (std::size_t k = lo; k < hi; ++k) {
                const Site s = region.sites[k];
                const PatternKey key = keyer(s);
                auto [it, fresh] = sh.index.try_emplace(key, static_cast<std::uint32_t>(sh.keys.size()));
                if (fresh) {
                    sh.keys.push_back(key);
                    sh.counts.resize(sh.counts.size() + stride, 0);
                }
                const std::size_t r = it->second * stride;
                ++sh.counts[r];
                ++sh.counts[r + 1 + c[s]];
                if (site_index) sh.local.push_back(it->second);
            }
        });

        // Merge, then order patterns by key.
        absl::flat_hash_map<PatternKey, std::uint32_t> merged;
        std::vector<PatternKey> keys;
        std::vector<std::uint64_t> counts;
        std::vector<std::vector<std::uint32_t>> remap(chunks);
        for (std::size_t ch = 0; ch < chunks; ++ch) {
            const Shard& sh = shards[ch];
            remap[ch].resize(sh.keys.size());
            for (std::size_t p = 0; p < sh.keys.size(); ++p) {
                auto [it, fresh] = merged.try_emplace(sh.keys[p], static_cast<std::uint32_t>(keys.size()));
                if (fresh) {
                    keys.push_back(sh.keys[p]);
                    counts.resize(counts.size() + stride, 0);
                }
                remap[ch][p] = it->second;
                for (std::size_t a = 0; a < stride; ++a) counts[it->second * stride + a] += sh.counts[p * stride + a];
            }
        }
        std::vector<std::uint32_t> order(keys.size());
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](auto x, auto y) { return keys[x] < keys[y]; });
        std::vector<std::uint32_t> rank(keys.size());
        for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;

        t.keys_.resize(keys.size());
        t.counts_.resize(counts.size());
        t.index_.reserve(keys.size());
        for (std::uint32_t r = 0; r < order.size(); ++r) {
            t.keys_[r] = keys[order[r]];
            std::copy_n(&counts[order[r] * stride], stride, &t.counts_[r * stride]);
            t.index_.emplace(t.keys_[r], r);
        }
        if (site_index) {
            site_index->clear();
            site_index->reserve(n);
            for (std::size_t ch = 0; ch < chunks; ++ch)
                for (auto local : shards[ch].local) site_index->push_back(rank[remap[ch][local]]);
        }
        return t;
    }

private:
    std::size_t row(std::uint32_t idx) const noexcept
    {
        return static_cast<std::size_t>(idx) * (static_cast<std::size_t>(alphabet_size_) + 1);
    }

    int radius_ = 1;
    int dim_ = 1;
    int alphabet_size_ = 2;
    std::size_t region_size_ = 0;
    std::vector<PatternKey> keys_;
    std::vector<std::uint64_t> counts_;
    absl::flat_hash_map<PatternKey, std::uint32_t> index_;
};

inline CountTable count_patterns(const Configuration& c, const SecurityRegion& region, int radius)
{
    return CountTable::build(c, region, radius);
}

} // namespace vnrf

#endif
