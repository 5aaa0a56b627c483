#ifndef VNRF_MODELS_MODEL_HPP
#define VNRF_MODELS_MODEL_HPP

// Closed set of built-in specifications plus their JSON description.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vnrf/models/iid.hpp"
#include "vnrf/models/ising.hpp"
#include "vnrf/models/polygon.hpp"
#include "vnrf/models/renewal.hpp"

namespace vnrf
{

using AnyModel = std::variant<IidModel, IsingModel, RenewalModel, PolygonModel>;

template <typename Fn>
decltype(auto) visit_model(const AnyModel& m, Fn&& fn)
{
    return std::visit(std::forward<Fn>(fn), m);
}

inline std::string model_name(const AnyModel& m)
{
    return visit_model(m, [](const auto& x) { return std::string(x.name()); });
}
inline int model_dim(const AnyModel& m)
{
    return visit_model(m, [](const auto& x) { return x.dim(); });
}
inline Alphabet model_alphabet(const AnyModel& m)
{
    return visit_model(m, [](const auto& x) { return x.alphabet(); });
}
inline double model_q_min(const AnyModel& m)
{
    return visit_model(m, [](const auto& x) { return x.q_min(); });
}
inline std::optional<int> model_range(const AnyModel& m)
{
    return visit_model(m, [](const auto& x) { return x.range(); });
}

template <typename View>
Distribution model_gamma0(const AnyModel& m, const View& v)
{
    return visit_model(m, [&](const auto& x) { return x.gamma0(v); });
}

template <typename View>
RegionResult model_context(const AnyModel& m, const View& v)
{
    return visit_model(m, [&](const auto& x) { return x.context(v); });
}

/// True context radius l_i, or nullopt when the context leaves the window.
inline std::optional<int> true_radius(const AnyModel& m, const Configuration& c, Site i)
{
    try {
        return model_context(m, ConfigView(c, i)).radius(c.dim());
    } catch (const std::out_of_range&) {
        return std::nullopt;
    }
}

class ModelParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{
using json = nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object()) throw ModelParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ModelParseError(path + "." + key + ": missing required field");
    return *it;
}

inline double number(const json& obj, const std::string& key, const std::string& path,
                     std::optional<double> fallback = std::nullopt)
{
    if (fallback && (!obj.is_object() || !obj.contains(key))) return *fallback;
    const json& v = require(obj, key, path);
    if (!v.is_number()) throw ModelParseError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline int integer(const json& obj, const std::string& key, const std::string& path,
                   std::optional<int> fallback = std::nullopt)
{
    if (fallback && (!obj.is_object() || !obj.contains(key))) return *fallback;
    const json& v = require(obj, key, path);
    if (!v.is_number_integer()) throw ModelParseError(path + "." + key + ": expected an integer");
    return v.get<int>();
}

inline std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path)
{
    const json& v = require(obj, key, path);
    if (!v.is_array()) throw ModelParseError(path + "." + key + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!v[k].is_number())
            throw ModelParseError(path + "." + key + "[" + std::to_string(k) + "]: expected a number");
        out.push_back(v[k].get<double>());
    }
    return out;
}

template <typename Fn>
auto wrap(const std::string& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        throw ModelParseError(path + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ModelParseError(path + ": " + e.what());
    }
}
} // namespace detail

inline AnyModel model_from_json(const nlohmann::json& j)
{
    using detail::integer;
    using detail::number;
    const std::string root = "model";
    if (!j.is_object()) throw ModelParseError(root + ": expected a JSON object");
    if (j.contains("schema") && (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1))
        throw ModelParseError(root + ".schema: unsupported schema version (expected 1)");
    const auto& kind = detail::require(j, "model", root);
    if (!kind.is_string()) throw ModelParseError(root + ".model: expected a string");
    const std::string name = kind.get<std::string>();
    const nlohmann::json empty = nlohmann::json::object();
    const nlohmann::json& p = j.contains("params") ? j["params"] : empty;
    const std::string path = root + ".params";
    if (!p.is_object()) throw ModelParseError(path + ": expected an object");

    if (name == "iid")
        return detail::wrap(path, [&] {
            return AnyModel(IidModel(detail::numbers(p, "p", path), integer(p, "dim", path, 1)));
        });
    if (name == "markov1")
        return detail::wrap(path, [&] {
            return AnyModel(IsingModel(number(p, "beta", path), number(p, "J", path, 1.0),
                                       number(p, "h", path, 0.0), integer(p, "dim", path, 1)));
        });
    if (name == "renewal")
        return detail::wrap(path, [&] {
            RenewalParams rp;
            rp.rho1 = number(p, "rho1", path, rp.rho1);
            rp.rho2 = number(p, "rho2", path, rp.rho2);
            rp.c1 = number(p, "c1", path, rp.c1);
            rp.c2 = number(p, "c2", path, rp.c2);
            return AnyModel(RenewalModel(rp));
        });
    if (name == "polygon")
        return detail::wrap(path, [&] {
            PolygonParams pp;
            pp.beta = number(p, "beta", path);
            pp.L = integer(p, "L", path);
            pp.J = detail::numbers(p, "J", path);
            return AnyModel(PolygonModel(pp));
        });
    throw ModelParseError(root + ".model: unknown model '" + name + "' (expected iid, markov1, renewal or polygon)");
}

inline nlohmann::json model_to_json(const AnyModel& m)
{
    nlohmann::json j;
    j["schema"] = 1;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            j["model"] = x.name();
            if constexpr (std::is_same_v<T, IidModel>) {
                j["params"] = {{"p", x.law().to_vector()}, {"dim", x.dim()}};
            } else if constexpr (std::is_same_v<T, IsingModel>) {
                j["params"] = {{"beta", x.beta()}, {"J", x.coupling()}, {"h", x.field()}, {"dim", x.dim()}};
            } else if constexpr (std::is_same_v<T, RenewalModel>) {
                const auto& p = x.params();
                j["params"] = {{"rho1", p.rho1}, {"rho2", p.rho2}, {"c1", p.c1}, {"c2", p.c2}};
            } else {
                const auto& p = x.params();
                j["params"] = {{"beta", p.beta}, {"L", p.L}, {"J", p.J}};
            }
        },
        m);
    return j;
}

inline AnyModel parse_model(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Translate the byte offset into a line number for the diagnostic.
        std::size_t line = 1;
        for (std::size_t k = 0; k < std::min(text.size(), e.byte); ++k) line += text[k] == '\n';
        throw ModelParseError("model JSON line " + std::to_string(line) + ": " + e.what());
    }
    return model_from_json(j);
}

inline AnyModel load_model(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_model(ss.str());
}

} // namespace vnrf

#endif
