// Acceptance runner: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "vnrf/core/grid_io.hpp"
#include "vnrf/harness/experiment.hpp"
#include "vnrf/models/compose.hpp"
#include "vnrf/oracle/dobrushin.hpp"
#include "vnrf/oracle/exact_measure.hpp"
#include "vnrf/oracle/identities.hpp"
#include "vnrf/sampler/heat_bath.hpp"
#include "vnrf/sampler/renewal_sampler.hpp"

using namespace vnrf;
namespace fs = std::filesystem;

namespace
{
struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// 1. Heat-bath marginal vs enumeration on the 12-ring.
Outcome sampler_exactness()
{
    const AnyModel m = IsingModel(0.3);
    const Window w({12});
    SamplerConfig cfg;
    cfg.sweeps = 1000;
    cfg.seed = 101;
    HeatBathChain chain(m, sample_field(m, w, cfg), cfg.seed, 1);
    const std::vector<Site> sites{0, 1, 2};
    std::vector<double> freq(8, 0.0);
    const int updates = 1000000;
    for (int t = 0; t < updates; ++t) {
        chain.update_random();
        const auto& c = chain.config();
        freq[4 * c[0] + 2 * c[1] + c[2]] += 1.0 / updates;
    }
    const auto exact = exact_measure(m, w).marginal(sites);
    double tv = 0;
    for (std::size_t k = 0; k < 8; ++k) tv += 0.5 * std::abs(freq[k] - exact[k]);
    return {tv <= 0.01, "TV = " + fmt(tv) + " (limit 0.01)"};
}

// 2. Renewal conditionals vs the closed forms.
Outcome renewal_conditionals()
{
    const RenewalParams p;
    struct Cell { double n = 0, ones = 0; };
    // [left/right case][k-2][l-2]; case 0 is (1,1), case 1 is (1,0).
    Cell cells[2][2][2];
    for (std::uint64_t rep = 0; rep < 4; ++rep) {
        const auto c = renewal_exact_sample(p, 1000000, 202, rep);
        for (Site s = 8; s + 8 < c.size(); ++s) {
            RenewalScan sc;
            try {
                sc = renewal_boundary_scan(ConfigView(c, s));
            } catch (const std::out_of_range&) {
                continue;
            }
            if (sc.left != 1 || sc.k > 3 || sc.l > 3) continue;
            Cell& cell = cells[sc.right == 1 ? 0 : 1][sc.k - 2][sc.l - 2];
            cell.n += 1;
            cell.ones += c[s];
        }
    }
    bool ok = true;
    double worst = 0;
    std::string where;
    for (int cs = 0; cs < 2; ++cs)
        for (int k = 2; k <= 3; ++k)
            for (int l = 2; l <= 3; ++l) {
                const Cell& cell = cells[cs][k - 2][l - 2];
                const double target = cs == 0 ? renewal_final1(p, k, l) : renewal_final2(p, k, l);
                if (cell.n < 100) {
                    ok = false;
                    where += " thin cell";
                    continue;
                }
                const double se = std::sqrt(target * (1 - target) / cell.n);
                const double z = std::abs(cell.ones / cell.n - target) / se;
                if (z > worst) {
                    worst = z;
                    where = std::string(cs == 0 ? "(1,1)" : "(1,0)") + " k=" + std::to_string(k) +
                            " l=" + std::to_string(l);
                }
                ok = ok && z <= 3.0;
            }
    return {ok, "max |z| = " + fmt(worst) + " at " + where + " (limit 3)"};
}

// 3. Three forms of the log-likelihood statistic.
Outcome loglik_identity()
{
    const auto r = check_loglik_forms(50, 500, 2, 303);
    return {r.passed() && r.trials > 0, std::to_string(r.trials) + " sites, max rel dev " + fmt(r.max_deviation) +
                                            (r.witness.empty() ? "" : ", witness " + r.witness)};
}

// 4. i.i.d. sanity.
Outcome iid_sanity()
{
    const AnyModel m = IidModel({0.5, 0.5});
    SamplerConfig cfg;
    cfg.sweeps = 1;
    cfg.seed = 404;
    const auto c = sample_field(m, Window({100000}), cfg, Boundary::free());
    EstimatorOptions opt;
    opt.penalty = PenaltyConfig::from_delta(auto_delta(1, 2, model_q_min(m)), 1, 2, model_q_min(m));
    const Estimation est(c, opt);
    std::size_t ones = 0;
    for (int l : est.l_hat()) ones += l == 1;
    const double f = static_cast<double>(ones) / static_cast<double>(est.l_hat().size());
    return {f >= 0.99, "fraction l_hat = 1: " + fmt(f) + " over " + std::to_string(est.l_hat().size()) +
                           " sites, R_n = " + std::to_string(est.R_n())};
}

// 5. Renewal consistency trend. The configured delta sits below the
// consistency threshold: at the auto delta the penalty exceeds the statistic
// for every n <= 10^6, so the frequencies are all 0 and the trend is vacuous.
struct Trend
{
    std::vector<double> f, se;
    std::string detail;
    bool reachable = true;
};

Trend match_trend(const ExperimentSpec& spec)
{
    const auto rep = run_experiment(spec);
    Trend t;
    for (const auto& s : rep.sizes) {
        auto it = s.match_by_true.find(2);
        const int R = s.tallies.empty() ? 0 : s.tallies.front().R_n;
        if (it == s.match_by_true.end() || it->second.first == 0 || R < 2) {
            t.reachable = false;
            t.detail += " n=" + std::to_string(s.window.size()) + ": no l_true = 2 sites with R_n >= 2";
            continue;
        }
        t.f.push_back(it->second.second.value);
        t.se.push_back(it->second.second.se_replicate);
        t.detail += " n=" + std::to_string(s.window.size()) + ": " + fmt(t.f.back()) + " (se " + fmt(t.se.back()) + ")";
    }
    return t;
}

Outcome renewal_trend()
{
    std::ifstream in(std::string(VNRF_CONFIG_DIR) + "/experiment_renewal.json");
    ExperimentSpec spec = experiment_from_json(nlohmann::json::parse(in));
    const Trend t = match_trend(spec);
    bool ok = t.reachable && !t.f.empty();
    for (std::size_t k = 1; ok && k < t.f.size(); ++k)
        ok = t.f[k] >= t.f[k - 1] - 2.0 * std::sqrt(t.se[k] * t.se[k] + t.se[k - 1] * t.se[k - 1]);
    // A trend that is identically 0 carries no information.
    const bool informative = ok && t.f.back() > 0;
    ExperimentSpec automatic = spec;
    automatic.delta.reset();
    const Trend a = match_trend(automatic);
    return {ok && informative, "delta = " + (spec.delta ? fmt(*spec.delta) : std::string("auto")) + ":" + t.detail +
                                   (ok && !informative ? " [all zero]" : "") + "; auto delta = " +
                                   fmt(auto_delta(1, 2, model_q_min(spec.model))) + ":" + a.detail};
}

// Gibbs law of a region in the nearest-neighbour chain by direct enumeration.
std::vector<double> ising_region_law(double beta, const Configuration& omega, const std::vector<Site>& region)
{
    const std::size_t states = std::size_t{1} << region.size();
    std::vector<double> w(states);
    Configuration x = omega;
    double z = 0;
    for (std::size_t idx = 0; idx < states; ++idx) {
        for (std::size_t k = 0; k < region.size(); ++k) x.assign(region[k], (idx >> (region.size() - 1 - k)) & 1);
        double e = 0;
        for (Site s = 0; s < x.size(); ++s) {
            const Site t = (s + 1) % x.size();
            if (std::find(region.begin(), region.end(), s) != region.end() ||
                std::find(region.begin(), region.end(), t) != region.end())
                e += (2 * x[s] - 1) * (2 * x[t] - 1);
        }
        z += w[idx] = std::exp(beta * e);
    }
    for (auto& v : w) v /= z;
    return w;
}

// 6. Composition vs direct Gibbs, plus consistency ratios.
Outcome composition()
{
    const double beta = 0.3;
    const AnyModel m = IsingModel(beta);
    Rng rng = make_rng(606);
    double worst = 0;
    std::size_t cases = 0;
    for (int t = 0; t < 20; ++t) {
        const auto omega = random_configuration(Window({12}), Alphabet(2), Boundary::periodic(), rng);
        for (const auto& region : {std::vector<Site>{4, 5}, std::vector<Site>{2, 7}, std::vector<Site>{3, 4, 5},
                                   std::vector<Site>{1, 5, 6}}) {
            const auto s = compose_specification(m, omega, region);
            const auto direct = ising_region_law(beta, omega, region);
            for (std::size_t k = 0; k < direct.size(); ++k) worst = std::max(worst, std::abs(s.probs[k] - direct[k]));
            ++cases;
        }
    }
    Configuration ring(Window({12}), Alphabet(2), Boundary::periodic());
    const auto cons = check_consistency(m, ring, {3, 4, 5}, 20, 606);
    return {worst <= 1e-10 && cons.passed(), std::to_string(cases) + " regions, max |rho - gamma| = " + fmt(worst) +
                                                 "; consistency " + std::to_string(cons.trials) + " trials, " +
                                                 std::to_string(cons.failures) + " failures"};
}

// 7. Closed-form context vs certified support union.
Outcome context_identity()
{
    const auto r = check_polygon_context_identity(default_polygon_params(2, 0.05), 100, 707);
    return {r.passed(), std::to_string(r.failures) + "/" + std::to_string(r.trials) + " configurations differ" +
                            (r.witness.empty() ? "" : "; first: " + r.witness)};
}

// 8. Dobrushin regime.
Outcome dobrushin_regime()
{
    const auto ising = dobrushin(IsingModel(0.2));
    const auto poly = dobrushin(PolygonModel(default_polygon_params(1, 0.002)));
    const auto iid = dobrushin(IidModel({0.3, 0.7}));
    const bool ok = ising.r < 1 && ising.exhaustive && poly.r < 1 && poly.exhaustive && iid.r == 0.0;
    return {ok, "ising beta=0.2 r = " + fmt(ising.r) + ", polygon L=1 beta=0.002 r = " + fmt(poly.r) +
                    (poly.exhaustive ? " (exhaustive)" : " (sampled)") + ", iid r = " + fmt(iid.r)};
}

// 9. Concentration of pattern frequencies.
Outcome concentration()
{
    const RenewalParams p;
    const Pattern eta{1, 1, {1, 1}};
    std::vector<double> xs, ys;
    std::string detail;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        double sum = 0, sq = 0;
        std::size_t region = 0;
        const int reps = 100;
        for (int r = 0; r < reps; ++r) {
            const auto c = renewal_exact_sample(p, n, 909, n * 1000 + static_cast<std::size_t>(r));
            const auto reg = security_region(c.window(), security_margin(n, 1), false);
            const auto t = count_patterns(c, reg, 1);
            region = reg.size();
            const double f = static_cast<double>(t.count(eta)) / static_cast<double>(region);
            sum += f;
            sq += f * f;
        }
        const double mean = sum / reps;
        const double sd = std::sqrt((sq - reps * mean * mean) / (reps - 1));
        xs.push_back(std::log(static_cast<double>(region)));
        ys.push_back(std::log(sd));
        detail += " |region|=" + std::to_string(region) + " sd=" + fmt(sd);
    }
    const double mx = (xs[0] + xs[1] + xs[2]) / 3, my = (ys[0] + ys[1] + ys[2]) / 3;
    double num = 0, den = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        num += (xs[k] - mx) * (ys[k] - my);
        den += (xs[k] - mx) * (xs[k] - mx);
    }
    const double slope = num / den;
    return {slope >= -0.6 && slope <= -0.4, "slope = " + fmt(slope) + " (range [-0.6, -0.4]);" + detail};
}

// 10. Determinism of every subcommand.
std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome determinism()
{
    const std::string cli = VNRF_CLI_PATH;
    const std::string cfg = VNRF_CONFIG_DIR;
    const fs::path dir = fs::temp_directory_path() / "vnrf_acceptance_10";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string d = dir.string();
    // Fixed inputs shared by both runs.
    const std::vector<std::string> setup{
        cli + " simulate --model " + cfg + "/markov1.json --size 4000 --sweeps 50 --seed 1 --out " + d + "/in_ising.grid",
        cli + " simulate --model " + cfg + "/markov1.json --size 12 --sweeps 5 --seed 2 --boundary periodic --out " + d +
            "/ring.grid",
    };
    for (const auto& c : setup)
        if (std::system(c.c_str()) != 0) return {false, "setup failed: " + c};
    struct Cmd { std::string name, args; };
    const std::vector<Cmd> cmds{
        {"simulate", "simulate --model " + cfg + "/polygon.json --size 24 --sweeps 5 --seed 7"},
        {"simulate-renewal", "simulate --model " + cfg + "/renewal.json --size 5000 --seed 7"},
        {"estimate", "estimate --in " + d + "/in_ising.grid --model " + cfg + "/markov1.json"},
        {"estimate-delta", "estimate --in " + d + "/in_ising.grid --delta 20"},
        {"experiment", "experiment --config " + cfg + "/experiment_small.json"},
        {"exact-measure", "oracle exact-measure --model " + cfg + "/markov1.json --size 8"},
        {"pattern-probs", "oracle pattern-probs --model " + cfg + "/renewal.json --size 9 --radius 2"},
        {"dobrushin", "oracle dobrushin --model " + cfg + "/polygon_l1.json"},
        {"identities", "oracle identities --seed 3 --trials 5 --samples 5"},
        {"compose", "compose --model " + cfg + "/markov1.json --in " + d + "/ring.grid --region 3,4,5"},
    };
    std::string failed;
    for (const auto& c : cmds) {
        std::string out[2];
        for (int run = 0; run < 2; ++run) {
            const std::string file = d + "/" + c.name + "." + std::to_string(run);
            const std::string line = cli + " " + c.args + " --out " + file;
            if (std::system(line.c_str()) != 0) {
                failed += " " + c.name + "(exit)";
                break;
            }
            out[run] = slurp(file);
        }
        if (out[0].empty() || out[0] != out[1]) failed += " " + c.name;
    }
    fs::remove_all(dir);
    return {failed.empty(), failed.empty() ? std::to_string(cmds.size()) + " commands byte-identical"
                                           : "differing or failing:" + failed};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"sampler exactness", sampler_exactness},
    {"renewal conditionals", renewal_conditionals},
    {"log-likelihood forms", loglik_identity},
    {"i.i.d. estimator sanity", iid_sanity},
    {"renewal consistency trend", renewal_trend},
    {"region composition", composition},
    {"context identity", context_identity},
    {"Dobrushin regime", dobrushin_regime},
    {"concentration scaling", concentration},
    {"determinism", determinism},
};
} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vnrf acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10); default all")->check(CLI::Range(0, 10));
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (std::size_t k = 0; k < kCriteria.size(); ++k) {
        if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = kCriteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu: %s  %s: %s [%.1fs]\n", k + 1, o.pass ? "PASS" : "FAIL", kCriteria[k].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
