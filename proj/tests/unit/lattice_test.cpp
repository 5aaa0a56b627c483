#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "vnrf/core/grid_io.hpp"
#include "vnrf/core/pattern.hpp"
#include "vnrf/core/random.hpp"

using namespace vnrf;

namespace
{
Configuration line(std::vector<Symbol> v, Boundary b = Boundary::free())
{
    const int n = static_cast<int>(v.size());
    return Configuration(Window({n}), Alphabet(2), b, std::move(v));
}
} // namespace

TEST(Ball, LineRadiusOne)
{
    const Window w({10});
    EXPECT_EQ(ball(w, Boundary::free(), 5, 1), (std::vector<Site>{4, 5, 6}));
    EXPECT_EQ(shell(w, Boundary::free(), 5, 1), (std::vector<Site>{4, 6}));
    EXPECT_EQ(punctured_ball(w, Boundary::free(), 5, 1), (std::vector<Site>{4, 6}));
}

TEST(Ball, SquareRadiusOne)
{
    const Window w({7, 7});
    const Site i = w.site({3, 3, 0});
    EXPECT_EQ(ball(w, Boundary::free(), i, 1).size(), 9u);
    EXPECT_EQ(punctured_ball(w, Boundary::free(), i, 1).size(), 8u);
    EXPECT_EQ(punctured_ball_size(2, 1), 8u);
}

TEST(Ball, ShellSizes)
{
    EXPECT_EQ(shell_size(2, 2), 16u);
    EXPECT_EQ(shell_size(1, 3), 2u);
    for (int l = 1; l <= 4; ++l) {
        const int outer = (2 * l + 1) * (2 * l + 1), inner = (2 * l - 1) * (2 * l - 1);
        EXPECT_EQ(shell_size(2, l), static_cast<std::size_t>(outer - inner));
        EXPECT_EQ(shell_offsets(2, l).size(), shell_size(2, l));
    }
}

TEST(Ball, FreeTruncatesPeriodicWraps)
{
    const Window w({5});
    EXPECT_EQ(ball(w, Boundary::free(), 0, 1), (std::vector<Site>{0, 1}));
    EXPECT_EQ(ball(w, Boundary::periodic(), 0, 1), (std::vector<Site>{4, 0, 1}));
}

TEST(Window, CoordRoundTrip)
{
    const Window w({4, 6});
    for (Site s = 0; s < w.size(); ++s) EXPECT_EQ(w.site(w.coord(s)), s);
    EXPECT_EQ(w.coord(7), (Coord{1, 1, 0}));
    EXPECT_THROW(w.site({4, 0, 0}), std::out_of_range);
    EXPECT_EQ(w.shape(), "4x6");
}

TEST(Configuration, RejectsOutOfAlphabetSymbols)
{
    EXPECT_THROW(Configuration(Window({3}), Alphabet(2), Boundary::free(), {0, 2, 1}), std::invalid_argument);
    EXPECT_THROW(Alphabet(1), std::invalid_argument);
    EXPECT_THROW(Alphabet(33), std::invalid_argument);
}

TEST(Configuration, LookupHonorsBoundary)
{
    auto c = line({0, 1, 1, 0, 1});
    EXPECT_FALSE(c.lookup({-1, 0, 0}).has_value());
    c.set_boundary(Boundary::periodic());
    EXPECT_EQ(*c.lookup({-1, 0, 0}), 1);
    c.set_boundary(Boundary::fixed(0));
    EXPECT_EQ(*c.lookup({7, 0, 0}), 0);
}

TEST(Pattern, HandExamples)
{
    const auto c = line({0, 1, 1, 0, 1});
    EXPECT_EQ(extract_pattern(c, 1, 1).values, (std::vector<Symbol>{0, 1}));
    EXPECT_EQ(extract_pattern(c, 3, 1).values, (std::vector<Symbol>{1, 1}));
    EXPECT_THROW(extract_pattern(c, 0, 1), std::out_of_range);
}

TEST(Pattern, ConstantConfigurationGivesConstantPattern)
{
    const Configuration c(Window({9, 9}), Alphabet(3), Boundary::free(), std::vector<Symbol>(81, 2));
    for (int l = 1; l <= 4; ++l) {
        const auto p = extract_pattern(c, c.window().site({4, 4, 0}), l);
        EXPECT_EQ(p.values, std::vector<Symbol>(punctured_ball_size(2, l), 2));
    }
}

TEST(Pattern, KeysAreBaseAlphabetWithFirstValueMostSignificant)
{
    EXPECT_EQ(pattern_key(Pattern{1, 1, {0, 1}}, 2).limbs[0], 1u);
    EXPECT_EQ(pattern_key(Pattern{1, 1, {1, 0}}, 2).limbs[0], 2u);
    EXPECT_EQ(pattern_key(Pattern{1, 1, {2, 1}}, 3).limbs[0], 7u);
}

TEST(Pattern, KeyRoundTrip)
{
    Rng rng = make_rng(11);
    struct Case { int dim, radius, A; };
    // The last two exceed 64 bits and exercise the wide path.
    for (const Case& k : {Case{1, 3, 2}, Case{2, 2, 5}, Case{2, 3, 4}, Case{2, 5, 3}}) {
        const KeyCodec codec(k.dim, k.radius, k.A);
        for (int t = 0; t < 1000; ++t) {
            Pattern p{k.dim, k.radius, std::vector<Symbol>(punctured_ball_size(k.dim, k.radius))};
            for (auto& v : p.values) v = static_cast<Symbol>(uniform_index(rng, k.A));
            EXPECT_EQ(codec.decode(codec.encode(p)), p);
        }
    }
}

TEST(Pattern, KeyOverflowThrows)
{
    EXPECT_THROW(KeyCodec(2, 8, 32), std::length_error);
}

TEST(Pattern, ExtendAndRestrict)
{
    const Pattern p{1, 1, {0, 1}};
    const Pattern q = extend_pattern(p, {1, 0});
    EXPECT_EQ(q.radius, 2);
    EXPECT_EQ(q.values, (std::vector<Symbol>{1, 0, 1, 0}));
    EXPECT_EQ(restrict_pattern(q, 1), p);
    EXPECT_THROW(extend_pattern(p, {1}), std::invalid_argument);
}

TEST(Pattern, ExtensionsEnumerateAllChildren)
{
    const Pattern p{2, 1, std::vector<Symbol>(8, 1)};
    std::set<std::vector<Symbol>> seen;
    const std::size_t m = shell_size(2, 2);
    for (std::size_t x = 0; x < (std::size_t{1} << m); ++x) {
        std::vector<Symbol> v(m);
        for (std::size_t k = 0; k < m; ++k) v[k] = static_cast<Symbol>(x >> k & 1);
        const Pattern q = extend_pattern(p, v);
        EXPECT_EQ(restrict_pattern(q, 1), p);
        EXPECT_EQ(shell_values(q), v);
        seen.insert(q.values);
    }
    EXPECT_EQ(seen.size(), std::size_t{1} << m);
}

TEST(SecurityRegion, Margins)
{
    EXPECT_NEAR(security_scale(256 * 256, 2), 1.825, 1e-3);
    EXPECT_EQ(security_margin(256 * 256, 2), 2);
    EXPECT_NEAR(security_scale(100000, 1), 3.393, 1e-3);
    EXPECT_EQ(security_margin(100000, 1), 4);
}

TEST(SecurityRegion, InteriorAndPeriodic)
{
    const Window w({8, 6});
    const auto r = security_region(w, 2, false);
    EXPECT_EQ(r.size(), 4u * 2u);
    for (Site s : r.sites) {
        const Coord c = w.coord(s);
        EXPECT_TRUE(c[0] >= 2 && c[0] <= 5 && c[1] >= 2 && c[1] <= 3);
    }
    EXPECT_EQ(security_region(w, 2, true).size(), w.size());
    EXPECT_THROW(security_region(w, 3, false), std::runtime_error);
}

TEST(SecurityRegion, ExtractionNeverLeavesTheWindow)
{
    Rng rng = make_rng(3);
    std::vector<Symbol> v(11 * 13);
    for (auto& x : v) x = static_cast<Symbol>(uniform_index(rng, 2));
    const Configuration c(Window({11, 13}), Alphabet(2), Boundary::free(), v);
    const auto r = security_region(c.window(), 3, false);
    for (Site s : r.sites)
        for (int l = 1; l <= 3; ++l) EXPECT_NO_THROW(extract_pattern(c, s, l));
}

TEST(GridIo, RoundTripAndHeader)
{
    const Configuration c(Window({2, 3}), Alphabet(3), Boundary::periodic(), {0, 1, 2, 2, 1, 0});
    std::ostringstream os;
    write_grid(os, c);
    EXPECT_EQ(os.str(), "VNRF1\nd=2 dims=2x3 alphabet=3 boundary=periodic\n0 1 2\n2 1 0\n");
    std::istringstream is(os.str());
    EXPECT_EQ(read_grid(is), c);
}

TEST(GridIo, RejectsMalformedInput)
{
    for (const char* bad : {"VNRF2\nd=1 dims=3 alphabet=2 boundary=free\n0 1 0\n",
                            "VNRF1\nd=1 dims=3 alphabet=2 boundary=free\n0 1\n",
                            "VNRF1\nd=1 dims=3 alphabet=2 boundary=free\n0 1 5\n",
                            "VNRF1\nd=1 dims=3 alphabet=2 boundary=fixed\n0 1 0\n"}) {
        std::istringstream is(bad);
        EXPECT_ANY_THROW(read_grid(is)) << bad;
    }
}
