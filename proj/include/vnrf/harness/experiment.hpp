#ifndef VNRF_HARNESS_EXPERIMENT_HPP
#define VNRF_HARNESS_EXPERIMENT_HPP

/** @file
 * Monte-Carlo error-frequency studies: sample, estimate on the security
 * region, and compare l̂ against the true radius site by site.
 *
 * Sites whose true radius exceeds R_n are tallied as unreachable. Sites whose
 * true context leaves the window are dropped and counted as excluded.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnrf/core/parallel.hpp"
#include "vnrf/estimator/estimator.hpp"
#include "vnrf/harness/bounds.hpp"
#include "vnrf/models/model.hpp"
#include "vnrf/sampler/heat_bath.hpp"

namespace vnrf
{

struct ExperimentSpec
{
    nlohmann::json model_json;
    AnyModel model = IidModel({0.5, 0.5});
    std::vector<Window> sizes;
    int replicates = 1;
    SamplerConfig sampler;
    std::optional<double> delta;
    std::optional<double> kappa;
    std::optional<int> max_radius;
    std::optional<int> margin;
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    std::optional<std::string> report_path;

    void validate() const
    {
        if (sizes.empty()) throw std::invalid_argument("experiment: sizes must not be empty");
        for (std::size_t k = 1; k < sizes.size(); ++k)
            if (sizes[k].size() <= sizes[k - 1].size())
                throw std::invalid_argument("experiment: sizes must be strictly increasing");
        for (const auto& w : sizes)
            if (w.dim() != model_dim(model)) throw std::invalid_argument("experiment: size dimension does not match the model");
        if (replicates < 1) throw std::invalid_argument("experiment: replicates must be >= 1");
        if (delta && kappa) throw std::invalid_argument("experiment: give delta or kappa, not both");
        sampler.validate();
    }

    PenaltyConfig penalty() const
    {
        const int d = model_dim(model), A = model_alphabet(model).size();
        const double q = model_q_min(model);
        if (kappa) return PenaltyConfig::from_kappa(*kappa, d, A, q);
        return PenaltyConfig::from_delta(delta ? *delta : auto_delta(d, A, q), d, A, q);
    }
};

/// A window from "N" (a line of N sites, or an N x N square in 2-D) or "AxB".
inline Window parse_size(const nlohmann::json& v, int dim)
{
    if (v.is_number_integer()) {
        const int n = v.get<int>();
        if (n < 1) throw std::invalid_argument("size must be positive");
        if (dim == 1) return Window({n});
        if (dim == 2) return Window({n, n});
        return Window({n, n, n});
    }
    if (!v.is_string()) throw std::invalid_argument("size must be an integer or an AxB string");
    std::vector<int> ext;
    const std::string text = v.get<std::string>();
    if (text.empty() || text.back() == 'x') throw std::invalid_argument("bad size '" + text + "'");
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, 'x')) {
        std::size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size() || e < 1) throw std::invalid_argument("bad size '" + v.get<std::string>() + "'");
        ext.push_back(e);
    }
    if (ext.size() == 1) return parse_size(ext[0], dim);
    if (static_cast<int>(ext.size()) != dim) throw std::invalid_argument("size '" + v.get<std::string>() + "' has the wrong dimension");
    return Window(ext);
}

inline ExperimentSpec experiment_from_json(const nlohmann::json& j)
{
    using detail::wrap;
    if (!j.is_object()) throw ModelParseError("experiment: expected an object");
    if (j.value("schema", 0) != 1) throw ModelParseError("experiment.schema: expected 1");
    ExperimentSpec s;
    if (!j.contains("model")) throw ModelParseError("experiment.model: missing");
    s.model_json = j["model"];
    s.model = model_from_json(s.model_json);
    const int dim = model_dim(s.model);
    wrap("experiment.sizes", [&] {
        for (const auto& v : j.at("sizes")) s.sizes.push_back(parse_size(v, dim));
    });
    wrap("experiment.replicates", [&] { s.replicates = j.value("replicates", 1); });
    if (j.contains("sampler"))
        wrap("experiment.sampler", [&] {
            const auto& sj = j["sampler"];
            s.sampler.sweeps = sj.value("sweeps", s.sampler.sweeps);
            s.sampler.thinning = sj.value("thinning", s.sampler.thinning);
            s.sampler.schedule = parse_schedule(sj.value("schedule", std::string("raster")));
        });
    if (j.contains("penalty"))
        wrap("experiment.penalty", [&] {
            const auto& pj = j["penalty"];
            if (pj.contains("delta")) s.delta = pj["delta"].get<double>();
            if (pj.contains("kappa")) s.kappa = pj["kappa"].get<double>();
        });
    wrap("experiment.max_radius", [&] {
        if (j.contains("max_radius") && !j["max_radius"].is_null()) s.max_radius = j["max_radius"].get<int>();
    });
    wrap("experiment.margin", [&] {
        if (j.contains("margin") && !j["margin"].is_null()) s.margin = j["margin"].get<int>();
    });
    wrap("experiment.epsilon", [&] { s.epsilon = j.value("epsilon", 0.5); });
    wrap("experiment.seed", [&] { s.seed = j.value("seed", std::uint64_t{0}); });
    if (j.contains("output") && j["output"].contains("report"))
        wrap("experiment.output.report", [&] { s.report_path = j["output"]["report"].get<std::string>(); });
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ModelParseError(e.what());
    }
    return s;
}

/// Fully resolved configuration, including the δ/κ actually used.
inline nlohmann::json experiment_to_json(const ExperimentSpec& s)
{
    const PenaltyConfig pen = s.penalty();
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& w : s.sizes) sizes.push_back(w.shape());
    nlohmann::json j{{"schema", 1},
                     {"model", model_to_json(s.model)},
                     {"sizes", sizes},
                     {"replicates", s.replicates},
                     {"sampler",
                      {{"sweeps", s.sampler.sweeps},
                       {"thinning", s.sampler.thinning},
                       {"schedule", to_string(s.sampler.schedule)}}},
                     {"penalty", {{"delta", pen.delta}, {"kappa", pen.kappa}, {"auto", !s.delta && !s.kappa}}},
                     {"max_radius", s.max_radius ? nlohmann::json(*s.max_radius) : nlohmann::json()},
                     {"margin", s.margin ? nlohmann::json(*s.margin) : nlohmann::json()},
                     {"epsilon", s.epsilon},
                     {"seed", s.seed}};
    if (s.report_path) j["output"] = {{"report", *s.report_path}};
    return j;
}

struct ReplicateTally
{
    std::size_t over = 0, under = 0, match = 0, unreachable = 0;
    std::size_t region_size = 0;
    std::size_t excluded_margin = 0;
    std::size_t excluded_context = 0;
    int R_n = 1;
    bool outside_theorem_regime = false;
    /// l_true -> (reachable sites, exact matches)
    std::map<int, std::pair<std::size_t, std::size_t>> by_true;

    std::size_t tallied() const noexcept { return over + under + match + unreachable; }
};

inline ReplicateTally tally_replicate(const ExperimentSpec& spec, const Window& w, std::uint64_t stream)
{
    SamplerConfig sc = spec.sampler;
    sc.seed = spec.seed;
    const Configuration c = sample_field(spec.model, w, sc, Boundary::free(), stream);
    EstimatorOptions opt;
    opt.penalty = spec.penalty();
    opt.max_radius = spec.max_radius;
    opt.margin = spec.margin;
    opt.threads = 1;
    const Estimation est(c, opt);
    ReplicateTally t;
    t.R_n = est.R_n();
    t.region_size = est.sites().size();
    t.excluded_margin = est.excluded_sites();
    t.outside_theorem_regime = est.outside_theorem_regime();
    for (std::size_t pos = 0; pos < est.sites().size(); ++pos) {
        const auto lt = true_radius(spec.model, c, est.sites()[pos]);
        if (!lt) {
            ++t.excluded_context;
            continue;
        }
        const int lh = est.l_hat()[pos];
        if (*lt > t.R_n) {
            ++t.unreachable;
            continue;
        }
        auto& b = t.by_true[*lt];
        ++b.first;
        if (lh > *lt) ++t.over;
        else if (lh < *lt) ++t.under;
        else {
            ++t.match;
            ++b.second;
        }
    }
    return t;
}

struct Fraction
{
    double value = 0;
    double se_binomial = 0;
    double se_replicate = 0;
};

struct SizeReport
{
    Window window;
    std::size_t replicates_ok = 0;
    std::vector<std::string> errors;
    std::vector<ReplicateTally> tallies;
    std::size_t sites = 0;
    Fraction over, under, match, unreachable;
    double any_over_frequency = 0;
    double any_under_frequency = 0;
    std::map<int, std::pair<std::size_t, Fraction>> match_by_true;
    std::optional<BoundShapes> bounds;
};

struct ErrorReport
{
    nlohmann::json config;
    std::vector<SizeReport> sizes;
};

namespace detail
{
/// Pooled fraction with a binomial SE and the SE of the per-replicate means.
inline Fraction pooled(const std::vector<std::pair<std::size_t, std::size_t>>& hits_of)
{
    Fraction f;
    std::size_t h = 0, n = 0;
    std::vector<double> per;
    for (auto [hit, tot] : hits_of) {
        h += hit;
        n += tot;
        if (tot > 0) per.push_back(static_cast<double>(hit) / static_cast<double>(tot));
    }
    if (n == 0) return f;
    f.value = static_cast<double>(h) / static_cast<double>(n);
    f.se_binomial = std::sqrt(f.value * (1 - f.value) / static_cast<double>(n));
    if (per.size() > 1) {
        double m = 0, v = 0;
        for (double x : per) m += x;
        m /= static_cast<double>(per.size());
        for (double x : per) v += (x - m) * (x - m);
        v /= static_cast<double>(per.size() - 1);
        f.se_replicate = std::sqrt(v / static_cast<double>(per.size()));
    }
    return f;
}
} // namespace detail

inline ErrorReport run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    ErrorReport rep;
    rep.config = experiment_to_json(spec);
    const PenaltyConfig pen = spec.penalty();
    const std::size_t R = static_cast<std::size_t>(spec.replicates);

    for (std::size_t si = 0; si < spec.sizes.size(); ++si) {
        const Window& w = spec.sizes[si];
        std::vector<std::optional<ReplicateTally>> out(R);
        std::vector<std::string> err(R);
        parallel_chunks(R, thread_budget(), [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r) {
                try {
                    out[r] = tally_replicate(spec, w, (static_cast<std::uint64_t>(si) << 32) | r);
                } catch (const std::exception& e) {
                    err[r] = "replicate " + std::to_string(r) + ": " + e.what();
                }
            }
        });
        SizeReport s;
        s.window = w;
        for (std::size_t r = 0; r < R; ++r) {
            if (out[r]) s.tallies.push_back(*out[r]);
            else s.errors.push_back(err[r]);
        }
        s.replicates_ok = s.tallies.size();
        if (s.tallies.empty())
            throw std::runtime_error("experiment: every replicate failed at size " + w.shape() + ": " + s.errors.front());

        std::vector<std::pair<std::size_t, std::size_t>> ov, un, ma, ur;
        std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> bt;
        std::size_t any_over = 0, any_under = 0, region_sum = 0;
        for (const auto& t : s.tallies) {
            const std::size_t n = t.tallied();
            s.sites += n;
            region_sum += t.region_size;
            ov.emplace_back(t.over, n);
            un.emplace_back(t.under, n);
            ma.emplace_back(t.match, n);
            ur.emplace_back(t.unreachable, n);
            any_over += t.over > 0;
            any_under += t.under > 0;
            for (const auto& [l, b] : t.by_true) bt[l].emplace_back(b.second, b.first);
        }
        for (auto& [l, v] : bt) {
            std::size_t n = 0;
            for (auto& p : v) n += p.second;
            // Replicates with no such site contribute nothing.
            s.match_by_true[l] = {n, detail::pooled(v)};
        }
        s.over = detail::pooled(ov);
        s.under = detail::pooled(un);
        s.match = detail::pooled(ma);
        s.unreachable = detail::pooled(ur);
        s.any_over_frequency = static_cast<double>(any_over) / static_cast<double>(s.replicates_ok);
        s.any_under_frequency = static_cast<double>(any_under) / static_cast<double>(s.replicates_ok);
        const std::size_t mean_region = region_sum / s.replicates_ok;
        if (mean_region >= 2)
            s.bounds = theorem_bound_shapes(
                {pen.delta, model_q_min(spec.model), pen.alphabet_size, pen.dim, spec.epsilon}, mean_region);
        rep.sizes.push_back(std::move(s));
    }
    return rep;
}

inline nlohmann::json to_json(const Fraction& f)
{
    return {{"value", f.value}, {"se_binomial", f.se_binomial}, {"se_replicate", f.se_replicate}};
}

inline nlohmann::json to_json(const ErrorReport& rep)
{
    nlohmann::json sizes = nlohmann::json::array();
    for (const auto& s : rep.sizes) {
        std::size_t em = 0, ec = 0, region = 0;
        bool outside = false;
        for (const auto& t : s.tallies) {
            em += t.excluded_margin;
            ec += t.excluded_context;
            region += t.region_size;
            outside = outside || t.outside_theorem_regime;
        }
        nlohmann::json by = nlohmann::json::object();
        for (const auto& [l, v] : s.match_by_true)
            by[std::to_string(l)] = {{"sites", v.first}, {"match", to_json(v.second)}};
        nlohmann::json j{{"size", s.window.shape()},
                         {"window_sites", s.window.size()},
                         {"replicates_ok", s.replicates_ok},
                         {"errors", s.errors},
                         {"R_n", s.tallies.front().R_n},
                         {"region_sites", region},
                         {"tallied_sites", s.sites},
                         {"excluded_margin", em},
                         {"excluded_context", ec},
                         {"over", to_json(s.over)},
                         {"under", to_json(s.under)},
                         {"match", to_json(s.match)},
                         {"unreachable", to_json(s.unreachable)},
                         {"any_over_frequency", s.any_over_frequency},
                         {"any_under_frequency", s.any_under_frequency},
                         {"match_by_true_radius", by}};
        if (outside) j["regime"] = "outside theorem regime";
        if (s.bounds) j["bounds"] = to_json(*s.bounds);
        sizes.push_back(std::move(j));
    }
    return {{"config", rep.config}, {"sizes", sizes}};
}

} // namespace vnrf

#endif
