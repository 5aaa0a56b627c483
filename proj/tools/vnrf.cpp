// vnrf: simulate, estimate and check variable-neighborhood random fields.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vnrf/core/grid_io.hpp"
#include "vnrf/estimator/estimator.hpp"
#include "vnrf/harness/experiment.hpp"
#include "vnrf/models/compose.hpp"
#include "vnrf/oracle/dobrushin.hpp"
#include "vnrf/oracle/exact_measure.hpp"
#include "vnrf/oracle/identities.hpp"
#include "vnrf/sampler/heat_bath.hpp"

using namespace vnrf;
using nlohmann::json;

namespace
{

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Boundary parse_boundary(const std::string& s)
{
    if (s == "free") return Boundary::free();
    if (s == "periodic") return Boundary::periodic();
    throw UsageError("--boundary must be free or periodic");
}

std::vector<std::size_t> parse_list(const std::string& s)
{
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size()) throw UsageError("bad site list '" + s + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs
{
    std::string model, size, out, boundary = "free", schedule = "raster";
    int sweeps = 1000;
    std::uint64_t seed = 0;
};

void run_simulate(const SimulateArgs& a)
{
    const AnyModel m = load_model(a.model);
    const Window w = parse_size(a.size, model_dim(m));
    SamplerConfig cfg;
    cfg.sweeps = a.sweeps;
    cfg.seed = a.seed;
    cfg.schedule = parse_schedule(a.schedule);
    const Configuration c = sample_field(m, w, cfg, parse_boundary(a.boundary));
    if (a.out.empty() || a.out == "-") write_grid(std::cout, c);
    else save_grid(a.out, c);
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs
{
    std::string in, out, model;
    double delta = 0, kappa = 0;
    int max_radius = 0, margin = 0;
};

void run_estimate(const EstimateArgs& a, bool has_delta, bool has_kappa)
{
    const Configuration c = load_grid(a.in);
    std::optional<AnyModel> model;
    if (!a.model.empty()) {
        model = load_model(a.model);
        if (model_dim(*model) != c.dim() || model_alphabet(*model).size() != c.alphabet().size())
            throw std::invalid_argument("model does not match the grid's dimension or alphabet");
    }
    const int d = c.dim(), A = c.alphabet().size();
    std::optional<double> q;
    if (model) q = model_q_min(*model);
    EstimatorOptions opt;
    if (has_delta) opt.penalty = PenaltyConfig::from_delta(a.delta, d, A, q);
    else if (has_kappa) opt.penalty = PenaltyConfig::from_kappa(a.kappa, d, A, q);
    else if (q) opt.penalty = PenaltyConfig::from_delta(auto_delta(d, A, *q), d, A, q);
    else throw UsageError("estimate needs --delta, --kappa or --model");
    if (a.max_radius > 0) opt.max_radius = a.max_radius;
    if (a.margin > 0) opt.margin = a.margin;

    const Estimation est(c, opt);
    std::ostringstream os;
    os << "# delta=" << format_double(opt.penalty.delta) << " kappa=" << format_double(opt.penalty.kappa)
       << " margin=" << est.margin() << " R_n=" << est.R_n() << " region=" << est.sites().size()
       << " excluded=" << est.excluded_sites() << "\n";
    if (est.outside_theorem_regime()) os << "# outside theorem regime\n";
    if (est.radius_range_trivial()) os << "# radius range trivial\n";
    if (est.penalty_saturated()) os << "# penalty saturated\n";
    if (!model) os << "# consistency guarantees conditional on the supplied delta\n";
    if (auto w = opt.penalty.warning()) os << "# warning: " << *w << "\n";
    os << "site";
    if (model) os << ",l_true";
    os << ",l_hat,R_n";
    for (int k = 2; k <= est.R_n(); ++k) os << ",logL_" << k << ",pen_" << k;
    os << "\n";
    for (std::size_t pos = 0; pos < est.sites().size(); ++pos) {
        const Site s = est.sites()[pos];
        os << s;
        if (model) {
            const auto lt = true_radius(*model, c, s);
            os << ',';
            if (lt) os << *lt;
        }
        os << ',' << est.l_hat()[pos] << ',' << est.R_n();
        for (int k = 2; k <= est.R_n(); ++k)
            os << ',' << format_double(est.ladder().stat(pos, k)) << ',' << format_double(est.penalties()[k - 2]);
        os << "\n";
    }
    emit(a.out, os.str());
}

// --- experiment -------------------------------------------------------------

void run_experiment_cmd(const std::string& config, std::string out, std::optional<std::uint64_t> seed, bool timing)
{
    std::ifstream is(config);
    if (!is) throw std::runtime_error("cannot open experiment config '" + config + "'");
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ModelParseError(std::string("experiment JSON: ") + e.what());
    }
    ExperimentSpec spec = experiment_from_json(j);
    if (seed) spec.seed = *seed;
    if (out.empty() && spec.report_path) out = *spec.report_path;
    const auto t0 = std::chrono::steady_clock::now();
    const ErrorReport rep = run_experiment(spec);
    json r = to_json(rep);
    if (timing)
        r["runtime_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(out, dump(r));
}

// --- oracle -----------------------------------------------------------------

void run_exact_measure(const std::string& model, const std::string& size, const std::string& out)
{
    const AnyModel m = load_model(model);
    const ExactMeasure mu = exact_measure(m, parse_size(size, model_dim(m)));
    json probs = json::array();
    for (double p : mu.probs) probs.push_back(p);
    emit(out, dump({{"model", model_to_json(m)},
                    {"window", mu.window.shape()},
                    {"boundary", to_string(mu.boundary)},
                    {"index_order", "site 0 most significant"},
                    {"states", mu.states()},
                    {"probs", probs}}));
}

void run_pattern_probs(const std::string& model, const std::string& size, int radius, const std::string& out)
{
    const AnyModel m = load_model(model);
    const ExactMeasure mu = exact_measure(m, parse_size(size, model_dim(m)));
    const ExactPatternProbs pp = exact_pattern_probs(mu, radius);
    json rows = json::array();
    for (const auto& [eta, joint] : pp.joint) {
        json cond = json::array();
        for (int a = 0; a < pp.alphabet_size; ++a) cond.push_back(pp.conditional(eta, a));
        rows.push_back({{"eta", eta}, {"p_eta", pp.p_eta(eta)}, {"p_cond", cond}});
    }
    emit(out, dump({{"model", model_to_json(m)}, {"window", mu.window.shape()}, {"radius", radius}, {"patterns", rows}}));
}

void run_dobrushin(const std::string& model, std::size_t samples, std::uint64_t seed, const std::string& out)
{
    const AnyModel m = load_model(model);
    const DobrushinReport r = dobrushin(m, std::size_t{1} << 24, samples, seed);
    json offs = json::array();
    for (std::size_t k = 0; k < r.offsets.size(); ++k) {
        json o = json::array();
        for (int a = 0; a < model_dim(m); ++a) o.push_back(r.offsets[k][a]);
        offs.push_back({{"offset", o}, {"r0j", r.r0j[k]}});
    }
    json j{{"model", model_to_json(m)},   {"range", r.range},           {"r0j", offs},
           {"r", r.r},                    {"beta", r.beta},             {"exhaustive", r.exhaustive},
           {"lower_bound_only", r.lower_bound_only}, {"configurations", r.configurations},
           {"unique_regime", r.unique_regime()}};
    if (r.r_upper) j["r_upper"] = *r.r_upper;
    emit(out, dump(j));
}

void run_identities(std::uint64_t seed, std::size_t trials, std::size_t samples, const std::string& out)
{
    json arr = json::array();
    bool all = true;
    for (const auto& r : identity_checks(seed, trials, samples)) {
        arr.push_back(to_json(r));
        all = all && r.passed();
    }
    emit(out, dump({{"seed", seed}, {"all_passed", all}, {"checks", arr}}));
}

// --- compose ----------------------------------------------------------------

void run_compose(const std::string& model, const std::string& in, const std::string& region, const std::string& order,
                 const std::string& out)
{
    const AnyModel m = load_model(model);
    const Configuration c = load_grid(in);
    const ComposedSpec s = compose_specification(m, c, parse_list(region), order.empty() ? std::vector<Site>{} : parse_list(order));
    json rows = json::array();
    for (std::size_t k = 0; k < s.probs.size(); ++k) rows.push_back({{"values", s.values(k)}, {"prob", s.probs[k]}});
    emit(out, dump({{"model", model_to_json(m)}, {"region", s.region}, {"support", s.support}, {"law", rows}}));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vnrf: variable-neighborhood random fields"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Sample a field and write a VNRF1 grid");
    simulate->add_option("--model", sim.model, "Model JSON file")->required();
    simulate->add_option("--size", sim.size, "Window size, N or AxB")->required();
    simulate->add_option("--sweeps", sim.sweeps, "Heat-bath sweeps (ignored by the exact renewal sampler)")->capture_default_str();
    simulate->add_option("--schedule", sim.schedule, "Site order: raster or random-site")->capture_default_str();
    simulate->add_option("--boundary", sim.boundary, "Boundary written to the grid: free or periodic")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output grid file (default stdout)");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the context radius at every security-region site");
    estimate->add_option("--in", est.in, "Input VNRF1 grid")->required();
    auto* o_delta = estimate->add_option("--delta", est.delta, "Penalty delta");
    auto* o_kappa = estimate->add_option("--kappa", est.kappa, "Penalty kappa");
    o_delta->excludes(o_kappa);
    estimate->add_option("--max-radius", est.max_radius, "Override R_n (marks output outside the theorem regime)");
    estimate->add_option("--margin", est.margin, "Override the security margin");
    estimate->add_option("--model", est.model, "Model JSON: adds l_true and enables the automatic delta");
    estimate->add_option("--out", est.out, "Output CSV (default stdout)");

    std::string exp_config, exp_out;
    std::uint64_t exp_seed = 0;
    bool timing = false;
    auto* experiment = app.add_subcommand("experiment", "Run an over/underestimation frequency study");
    experiment->add_option("--config", exp_config, "Experiment JSON")->required();
    experiment->add_option("--out", exp_out, "Report JSON (default: config output.report, else stdout)");
    auto* o_exp_seed = experiment->add_option("--seed", exp_seed, "Override the config seed");
    experiment->add_flag("--timing", timing, "Add wall-clock runtime to the report");

    auto* oracle = app.add_subcommand("oracle", "Brute-force reference computations");
    oracle->require_subcommand(1);
    std::string or_model, or_size, or_out;
    int or_radius = 1;
    std::uint64_t or_seed = 0;
    std::size_t or_samples = 200000, or_trials = 100, or_loglik = 50;
    auto* exact = oracle->add_subcommand("exact-measure", "Exact law on a tiny window");
    exact->add_option("--model", or_model, "Model JSON file")->required();
    exact->add_option("--size", or_size, "Window size, N or AxB")->required();
    exact->add_option("--out", or_out, "Output JSON (default stdout)");
    auto* pattern = oracle->add_subcommand("pattern-probs", "Exact pattern and conditional probabilities");
    pattern->add_option("--model", or_model, "Model JSON file")->required();
    pattern->add_option("--size", or_size, "Window size, N or AxB")->required();
    pattern->add_option("--radius", or_radius, "Pattern radius")->capture_default_str();
    pattern->add_option("--out", or_out, "Output JSON (default stdout)");
    auto* dob = oracle->add_subcommand("dobrushin", "Dobrushin sensitivities r(0,j), r and beta(l)");
    dob->add_option("--model", or_model, "Model JSON file")->required();
    dob->add_option("--samples", or_samples, "Samples when enumeration is infeasible")->capture_default_str();
    dob->add_option("--seed", or_seed, "RNG seed for sampling")->capture_default_str();
    dob->add_option("--out", or_out, "Output JSON (default stdout)");
    auto* ident = oracle->add_subcommand("identities", "Randomized identity checks");
    ident->add_option("--seed", or_seed, "RNG seed")->capture_default_str();
    ident->add_option("--trials", or_trials, "Polygon context trials")->capture_default_str();
    ident->add_option("--samples", or_loglik, "Samples for the log-likelihood forms")->capture_default_str();
    ident->add_option("--out", or_out, "Output JSON (default stdout)");

    std::string co_model, co_in, co_region, co_order, co_out;
    auto* compose = app.add_subcommand("compose", "Composed region law rho_Lambda and its support");
    compose->add_option("--model", co_model, "Model JSON file")->required();
    compose->add_option("--in", co_in, "Boundary configuration (VNRF1 grid)")->required();
    compose->add_option("--region", co_region, "Comma-separated site indices")->required();
    compose->add_option("--order", co_order, "Site order for the recursion (default ascending)");
    compose->add_option("--out", co_out, "Output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*simulate) run_simulate(sim);
        else if (*estimate) run_estimate(est, o_delta->count() > 0, o_kappa->count() > 0);
        else if (*experiment) {
            std::optional<std::uint64_t> s;
            if (o_exp_seed->count() > 0) s = exp_seed;
            run_experiment_cmd(exp_config, exp_out, s, timing);
        } else if (*exact) run_exact_measure(or_model, or_size, or_out);
        else if (*pattern) run_pattern_probs(or_model, or_size, or_radius, or_out);
        else if (*dob) run_dobrushin(or_model, or_samples, or_seed, or_out);
        else if (*ident) run_identities(or_seed, or_trials, or_loglik, or_out);
        else if (*compose) run_compose(co_model, co_in, co_region, co_order, co_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
