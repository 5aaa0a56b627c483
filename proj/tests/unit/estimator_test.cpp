#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vnrf/core/random.hpp"
#include "vnrf/estimator/estimator.hpp"
#include "vnrf/oracle/loglik_forms.hpp"
#include "vnrf/sampler/heat_bath.hpp"

using namespace vnrf;

namespace
{
Configuration line(std::vector<Symbol> v)
{
    const int n = static_cast<int>(v.size());
    return Configuration(Window({n}), Alphabet(2), Boundary::free(), std::move(v));
}

Configuration random_config(const Window& w, int A, std::uint64_t seed, Boundary b = Boundary::free())
{
    Rng rng = make_rng(seed);
    Configuration c(w, Alphabet(A), b);
    for (Site s = 0; s < c.size(); ++s) c.assign(s, static_cast<Symbol>(uniform_index(rng, A)));
    return c;
}
} // namespace

TEST(CountTable, HandExample)
{
    const auto c = line({0, 1, 1, 0, 1});
    const auto region = security_region(c.window(), 1, false);
    EXPECT_EQ(region.sites, (std::vector<Site>{1, 2, 3}));
    const auto t = count_patterns(c, region, 1);
    EXPECT_EQ(t.pattern_count(), 3u);
    const Pattern p01{1, 1, {0, 1}}, p10{1, 1, {1, 0}}, p11{1, 1, {1, 1}};
    EXPECT_EQ(t.count(p01), 1u);
    EXPECT_EQ(t.count(p01, 1), 1u);
    EXPECT_EQ(t.count(p10), 1u);
    EXPECT_EQ(t.count(p10, 1), 1u);
    EXPECT_EQ(t.count(p11), 1u);
    EXPECT_EQ(t.count(p11, 0), 1u);
    EXPECT_EQ(t.count(Pattern{1, 1, {0, 0}}), 0u);
}

TEST(CountTable, ConstantConfigurationHasOnePattern)
{
    const Configuration c(Window({12, 12}), Alphabet(3), Boundary::free(), std::vector<Symbol>(144, 1));
    const auto region = security_region(c.window(), 3, false);
    for (int l = 1; l <= 3; ++l) {
        const auto t = count_patterns(c, region, l);
        ASSERT_EQ(t.pattern_count(), 1u);
        EXPECT_EQ(t.total(0), region.size());
    }
}

TEST(CountTable, EmpiricalConditional)
{
    // η = (0,0) is seen four times, once with centre 1; η = (1,0) never.
    const auto c = line({0, 0, 0, 0, 0, 1, 0, 1, 1, 1, 1});
    const auto t = count_patterns(c, security_region(c.window(), 1, false), 1);
    const Pattern eta{1, 1, {0, 0}};
    EXPECT_EQ(t.count(eta), 4u);
    EXPECT_DOUBLE_EQ(t.empirical_conditional(eta, 1), 0.25);
    EXPECT_DOUBLE_EQ(t.empirical_conditional(eta, 0) + t.empirical_conditional(eta, 1), 1.0);
    EXPECT_DOUBLE_EQ(t.empirical_conditional(Pattern{1, 1, {1, 0}}, 0), 0.0);
    EXPECT_DOUBLE_EQ(t.empirical_conditional(Pattern{1, 1, {1, 0}}, 1), 0.0);
}

TEST(CountTable, ConservationAndRefinement)
{
    const auto c = random_config(Window({40, 40}), 3, 21);
    const auto region = security_region(c.window(), 3, false);
    std::vector<CountTable> t;
    for (int l = 1; l <= 3; ++l) t.push_back(count_patterns(c, region, l));
    for (const auto& tab : t) {
        std::uint64_t sum = 0;
        for (std::uint32_t k = 0; k < tab.pattern_count(); ++k) {
            std::uint64_t row = 0;
            for (int a = 0; a < 3; ++a) row += tab.joint(k, a);
            EXPECT_EQ(row, tab.total(k));
            sum += tab.total(k);
        }
        EXPECT_EQ(sum, region.size());
    }
    // Children of each coarse pattern add up to its counts.
    for (int l = 2; l <= 3; ++l) {
        const auto& fine = t[l - 1];
        const auto& coarse = t[l - 2];
        std::vector<std::uint64_t> acc(coarse.pattern_count() * 4, 0);
        for (std::uint32_t k = 0; k < fine.pattern_count(); ++k) {
            const auto parent = coarse.find(coarse.codec().encode(restrict_pattern(fine.codec().decode(fine.keys()[k]), l - 1)));
            ASSERT_TRUE(parent.has_value());
            acc[*parent * 4] += fine.total(k);
            for (int a = 0; a < 3; ++a) acc[*parent * 4 + 1 + a] += fine.joint(k, a);
        }
        for (std::uint32_t k = 0; k < coarse.pattern_count(); ++k) {
            EXPECT_EQ(acc[k * 4], coarse.total(k));
            for (int a = 0; a < 3; ++a) EXPECT_EQ(acc[k * 4 + 1 + a], coarse.joint(k, a));
        }
    }
}

TEST(CountTable, ThreadCountDoesNotChangeTheTable)
{
    const auto c = random_config(Window({20000}), 2, 22);
    const auto region = security_region(c.window(), 4, false);
    std::vector<std::uint32_t> i1, i4;
    const auto a = CountTable::build(c, region, 4, &i1, 1);
    const auto b = CountTable::build(c, region, 4, &i4, 4);
    ASSERT_EQ(a.keys(), b.keys());
    EXPECT_EQ(i1, i4);
    for (std::uint32_t k = 0; k < a.pattern_count(); ++k)
        for (int x = 0; x < 2; ++x) EXPECT_EQ(a.joint(k, x), b.joint(k, x));
}

TEST(CountTable, PeriodicWindowCountsEverySite)
{
    const auto c = random_config(Window({9, 7}), 2, 23, Boundary::periodic());
    const auto t = count_patterns(c, security_region(c), 2);
    std::uint64_t sum = 0;
    for (std::uint32_t k = 0; k < t.pattern_count(); ++k) sum += t.total(k);
    EXPECT_EQ(sum, 63u);
    EXPECT_THROW(count_patterns(c, security_region(c), 4), std::invalid_argument);
}

TEST(CountTable, RadiusBeyondMarginIsRejected)
{
    const auto c = random_config(Window({50}), 2, 24);
    EXPECT_THROW(count_patterns(c, security_region(c.window(), 2, false), 3), std::invalid_argument);
}

TEST(Kl, ClosedForms)
{
    const std::vector<double> p{0.3, 0.7}, one{1.0, 0.0}, half{0.5, 0.5};
    EXPECT_DOUBLE_EQ(kl_divergence(p, p).value, 0.0);
    EXPECT_NEAR(kl_divergence(one, half).value, std::log(2.0), 1e-15);
    EXPECT_TRUE(kl_divergence(half, one).infinite);
}

TEST(Kl, Pinsker)
{
    Rng rng = make_rng(25);
    for (int t = 0; t < 10000; ++t) {
        const int A = 2 + static_cast<int>(uniform_index(rng, 4));
        std::vector<double> p(A), q(A);
        double sp = 0, sq = 0;
        for (int a = 0; a < A; ++a) {
            sp += p[a] = uniform01(rng);
            sq += q[a] = uniform01(rng) + 1e-3;
        }
        double l1 = 0;
        for (int a = 0; a < A; ++a) {
            p[a] /= sp;
            q[a] /= sq;
            l1 += std::abs(p[a] - q[a]);
        }
        EXPECT_GE(kl_divergence(p, q).value, 0.5 * l1 * l1 - 1e-12);
    }
}

TEST(Penalty, ClosedForms)
{
    const std::size_t n = 100000;
    const double ln = std::log(static_cast<double>(n));
    const auto one = PenaltyConfig::from_kappa(3.0, 1, 2);
    for (int l = 1; l <= 5; ++l) EXPECT_NEAR(penalty(l, n, one).value, 8 * 3.0 * ln, 1e-9);
    const auto two = PenaltyConfig::from_kappa(3.0, 2, 2);
    EXPECT_NEAR(penalty(1, n, two).value, 512 * 3.0 * ln, 1e-7);
    EXPECT_NEAR(kappa_of_delta(2.0, 2), 50 * std::sqrt(1.5), 1e-12);
    EXPECT_NEAR(PenaltyConfig::from_delta(2.0, 2, 2).kappa, 50 * std::sqrt(1.5), 1e-12);
}

TEST(Penalty, MonotoneAndSaturating)
{
    const auto cfg = PenaltyConfig::from_delta(12.0, 2, 2);
    for (int l = 1; l < 6; ++l) EXPECT_LE(penalty(l, 4096, cfg).log_value, penalty(l + 1, 4096, cfg).log_value);
    EXPECT_LE(penalty(2, 1000, cfg).value, penalty(2, 100000, cfg).value);
    const auto huge = penalty(40, 4096, PenaltyConfig::from_delta(12.0, 2, 32));
    EXPECT_TRUE(huge.saturated);
    EXPECT_TRUE(std::isinf(huge.value));
}

TEST(Penalty, DeltaThreshold)
{
    EXPECT_NEAR(delta_threshold(1, 2, 0.25), 2 * std::log(2.0) * 3 * std::numbers::e, 1e-12);
    EXPECT_NEAR(delta_threshold(1, 2, 0.25), 11.305, 1e-3);
    EXPECT_GT(c_of_delta(auto_delta(1, 2, 0.25), 1, 2, 0.25), 0.0);
    EXPECT_GT(c_of_delta(auto_delta(2, 5, 0.01), 2, 5, 0.01), 0.0);
    EXPECT_LT(c_of_delta(0.5 * delta_threshold(1, 2, 0.25), 1, 2, 0.25), 0.0);
    EXPECT_TRUE(PenaltyConfig::from_delta(5.0, 1, 2, 0.25).warning().has_value());
    EXPECT_FALSE(PenaltyConfig::from_delta(12.0, 1, 2, 0.25).warning().has_value());
}

TEST(MaxRadius, ClosedForms)
{
    EXPECT_EQ(max_radius(100000, 1).value, 3);
    EXPECT_EQ(max_radius(1000000, 2).value, 1);
    EXPECT_EQ(max_radius(10000000, 1).value, 4);
    EXPECT_TRUE(max_radius(2, 1).clamped);
}

TEST(SelectRadius, Definition)
{
    EXPECT_EQ(select_radius({1, 1, 1}, {5, 5, 5}), 1);
    EXPECT_EQ(select_radius({1, 1, 9}, {5, 5, 5}), 4);
    EXPECT_EQ(select_radius({1, 9, 1}, {5, 5, 5}), 3);
    EXPECT_EQ(select_radius({9, 1, 1}, {5, 5, 5}), 2);
    EXPECT_EQ(select_radius({}, {}), 1);
}

TEST(SelectRadius, DefinitionalPropertyOnRandomStatistics)
{
    Rng rng = make_rng(26);
    for (int t = 0; t < 2000; ++t) {
        const int R = 2 + static_cast<int>(uniform_index(rng, 5));
        std::vector<double> lg(R - 1), pen(R - 1, 1.0);
        for (auto& x : lg) x = 2 * uniform01(rng);
        const int l = select_radius(lg, pen);
        for (int k = l + 1; k <= R; ++k) EXPECT_LE(lg[k - 2], pen[k - 2]);
        if (l > 1) EXPECT_GT(lg[l - 2], pen[l - 2]);
    }
}

TEST(LogLikelihood, ZeroWhenFineConditionalsMatch)
{
    // Period-3 pattern: the radius-1 pattern already fixes the centre.
    std::vector<Symbol> v;
    for (int k = 0; k < 400; ++k) v.push_back(static_cast<Symbol>(k % 3 < 2));
    const auto c = line(v);
    const RadiusLadder ladder(c, security_region(c.window(), 3, false), 3, 1);
    for (std::size_t pos = 0; pos < ladder.region().size(); ++pos)
        for (int k = 2; k <= 3; ++k) EXPECT_DOUBLE_EQ(ladder.stat(pos, k), 0.0);
}

TEST(LogLikelihood, ThreeFormsAgree)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SamplerConfig cfg;
        cfg.seed = seed;
        const auto c = sample_field(RenewalModel{}, Window({500}), cfg, Boundary::free());
        const auto region = security_region(c.window(), 3, false);
        const RadiusLadder ladder(c, region, 3, 1);
        for (std::size_t pos = 0; pos < region.size(); pos += 37)
            for (int l = 2; l <= 3; ++l) {
                const double f = ladder.stat(pos, l);
                EXPECT_GE(f, 0.0);
                EXPECT_TRUE(oracle::close_rel(f, oracle::loglik_site_sum(c, region.sites, region.sites[pos], l)));
                EXPECT_TRUE(oracle::close_rel(f, oracle::loglik_mpl_difference(c, region.sites, region.sites[pos], l)));
            }
    }
}

TEST(LogLikelihood, LinearScanAgreesWithLadder)
{
    const auto c = random_config(Window({30, 30}), 2, 27);
    const auto region = security_region(c.window(), 2, false);
    const RadiusLadder ladder(c, region, 2, 1);
    for (std::size_t pos = 0; pos < region.size(); pos += 13) {
        const auto eta = extract_pattern(c, region.sites[pos], 1);
        const auto r = log_likelihood_stat(ladder.table(2), ladder.table(1), eta);
        EXPECT_NEAR(r.value, ladder.stat(pos, 2), 1e-9 * std::max(1.0, r.value));
    }
}

TEST(Estimator, IidSampleSelectsRadiusOne)
{
    SamplerConfig cfg;
    cfg.seed = 28;
    const AnyModel m = IidModel({0.5, 0.5});
    const auto c = sample_field(m, Window({20000}), cfg, Boundary::free());
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_delta(auto_delta(1, 2, 0.5), 1, 2, 0.5);
    const Estimation e(c, opt);
    EXPECT_EQ(e.R_n(), 3);
    std::size_t ones = 0;
    for (int l : e.l_hat()) ones += l == 1;
    EXPECT_EQ(ones, e.sites().size());
}

TEST(Estimator, BatchEqualsPerSite)
{
    SamplerConfig cfg;
    cfg.seed = 29;
    const auto c = sample_field(RenewalModel{}, Window({3000}), cfg, Boundary::free());
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_kappa(0.05, 1, 2);
    const auto all = estimate_all(c, opt);
    for (std::size_t pos = 0; pos < all.sites().size(); pos += 97) {
        const auto one = estimate_radius(c, all.sites()[pos], opt);
        const auto ref = all.at(pos);
        EXPECT_EQ(one.l_hat, ref.l_hat);
        EXPECT_EQ(one.logL, ref.logL);
        EXPECT_EQ(one.c_hat, ref.c_hat);
    }
}

TEST(Estimator, RadiusOverrideRaisesMarginAndIsFlagged)
{
    const auto c = random_config(Window({200}), 2, 30);
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_delta(12.0, 1, 2);
    opt.max_radius = 6;
    const Estimation e(c, opt);
    EXPECT_TRUE(e.outside_theorem_regime());
    EXPECT_EQ(e.margin(), 6);
    EXPECT_EQ(e.base_margin(), 3);
    EXPECT_EQ(e.excluded_sites(), 6u);
    EXPECT_EQ(e.sites().size(), 188u);
}

TEST(Estimator, TrivialRangeInTwoDimensions)
{
    const auto c = random_config(Window({64, 64}), 2, 31);
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_delta(12.0, 2, 2);
    const Estimation e(c, opt);
    EXPECT_EQ(e.R_n(), 1);
    EXPECT_TRUE(e.radius_range_trivial());
    for (int l : e.l_hat()) EXPECT_EQ(l, 1);
}

TEST(Estimator, GammaHatIsTheEmpiricalConditional)
{
    const auto c = random_config(Window({1000}), 3, 32);
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_kappa(1e-6, 1, 3);
    const Estimation e(c, opt);
    const auto est = e.at(100);
    const auto t = count_patterns(c, security_region(c.window(), e.margin(), false), est.l_hat);
    for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(est.gamma_hat[a], t.empirical_conditional(est.c_hat, a));
}
