#pragma once

// Run configuration: a JSON document naming a target (catalog entry or
// inline chart), sampling plan, tolerances, checks and output settings.
// Unknown keys are rejected. See docs/config.md for the schema.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "austere/austerity.hpp"
#include "austere/catalog.hpp"
#include "austere/expression.hpp"

namespace austere {

using json = nlohmann::json;

struct ChartTarget {
    int n = 0;
    int k = 0;
    std::vector<std::pair<std::string, std::string>> components;  // (re, im) per homogeneous coordinate
    bool normalize = true;
    std::vector<double> lo, hi;
    std::string label = "chart";
};

inline const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"lagrangian", "austerity", "detS_crosscheck", "lemma2", "classify"};
    return names;
}

struct RunConfig {
    std::optional<std::string> catalog;
    std::optional<double> radius;  // small_circle only
    std::optional<ChartTarget> chart;
    std::optional<Expected> expected;
    std::optional<SurfaceBranch> expected_branch;
    SamplingPlan plan;
    std::optional<double> tol_austere, tol_lagrangian, tol_embedding;
    std::set<std::string> checks;  // empty selects every check that applies
    std::string output_path;
    std::string format = "json";

    [[nodiscard]] bool wants(const std::string& check) const { return checks.empty() || checks.count(check) > 0; }

    [[nodiscard]] Tolerances tolerances() const {
        Tolerances t = Tolerances::defaults(plan.analytic);
        if (tol_austere) t.austere = *tol_austere;
        if (tol_lagrangian) t.lagrangian = *tol_lagrangian;
        if (tol_embedding) t.embedding = *tol_embedding;
        return t;
    }
};

namespace detail {

inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) : text_(text) {}

    [[noreturn]] void error(const std::string& field, const std::string& what) const {
        std::string where = "config";
        const auto key = field.substr(field.find_last_of('.') + 1);
        const auto bare = key.substr(0, key.find('['));
        const auto at = text_.find('"' + bare + '"');
        if (!bare.empty() && at != std::string::npos) where += ", line " + std::to_string(line_col(text_, at).first);
        fail(Errc::config, where + ", field '" + field + "': " + what);
    }

    void only(const json& obj, const std::string& field, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) error(field, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
                error(field.empty() ? key : field + "." + key, "unknown key");
        }
    }

    double number(const json& v, const std::string& field) const {
        if (!v.is_number()) error(field, "expected a number");
        return v.get<double>();
    }
    int integer(const json& v, const std::string& field) const {
        if (!v.is_number_integer()) error(field, "expected an integer");
        return v.get<int>();
    }
    bool boolean(const json& v, const std::string& field) const {
        if (!v.is_boolean()) error(field, "expected true or false");
        return v.get<bool>();
    }
    std::string string(const json& v, const std::string& field) const {
        if (!v.is_string()) error(field, "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> numbers(const json& v, const std::string& field) const {
        if (!v.is_array()) error(field, "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
        return out;
    }

private:
    const std::string& text_;
};

inline Expected parse_expected(const ConfigReader& r, const std::string& s) {
    for (auto e : {Expected::austere, Expected::not_austere, Expected::geodesic, Expected::totally_geodesic,
                   Expected::holomorphic})
        if (s == to_string(e)) return e;
    r.error("expected", "unknown expectation '" + s + "'");
}

inline SurfaceBranch parse_branch(const ConfigReader& r, const std::string& s) {
    for (auto b : {SurfaceBranch::holomorphic, SurfaceBranch::totally_geodesic, SurfaceBranch::not_austere})
        if (s == to_string(b)) return b;
    r.error("expected_branch", "unknown branch '" + s + "'");
}

inline ChartTarget parse_chart(const ConfigReader& r, const json& c) {
    r.only(c, "target.chart", {"n", "k", "components", "normalize", "domain", "label"});
    ChartTarget t;
    if (!c.contains("n") || !c.contains("k")) r.error("target.chart", "n and k are required");
    t.n = r.integer(c["n"], "target.chart.n");
    t.k = r.integer(c["k"], "target.chart.k");
    if (t.n < 1) r.error("target.chart.n", "must be >= 1");
    if (t.k < 1 || t.k > 2 * t.n) r.error("target.chart.k", "must satisfy 1 <= k <= 2n");
    if (!c.contains("components") || !c["components"].is_array())
        r.error("target.chart.components", "expected an array of {re, im} objects");
    const json& comps = c["components"];
    if (comps.size() != static_cast<std::size_t>(t.n + 1))
        r.error("target.chart.components", "need n + 1 = " + std::to_string(t.n + 1) + " components");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string f = "target.chart.components[" + std::to_string(i) + "]";
        r.only(comps[i], f, {"re", "im"});
        const std::string re = comps[i].contains("re") ? r.string(comps[i]["re"], f + ".re") : "0";
        const std::string im = comps[i].contains("im") ? r.string(comps[i]["im"], f + ".im") : "0";
        t.components.emplace_back(re, im);
    }
    if (c.contains("normalize")) t.normalize = r.boolean(c["normalize"], "target.chart.normalize");
    if (c.contains("label")) t.label = r.string(c["label"], "target.chart.label");
    t.lo.assign(static_cast<std::size_t>(t.k), -1.0);
    t.hi.assign(static_cast<std::size_t>(t.k), 1.0);
    if (c.contains("domain")) {
        const json& d = c["domain"];
        r.only(d, "target.chart.domain", {"lo", "hi"});
        if (d.contains("lo")) t.lo = r.numbers(d["lo"], "target.chart.domain.lo");
        if (d.contains("hi")) t.hi = r.numbers(d["hi"], "target.chart.domain.hi");
        if (t.lo.size() != static_cast<std::size_t>(t.k) || t.hi.size() != static_cast<std::size_t>(t.k))
            r.error("target.chart.domain", "lo and hi need k entries");
        for (int a = 0; a < t.k; ++a)
            if (!(t.lo[static_cast<std::size_t>(a)] < t.hi[static_cast<std::size_t>(a)]))
                r.error("target.chart.domain", "lo must be below hi");
    }
    return t;
}

}  // namespace detail

/// Parses and validates a configuration document. Throws Error(Errc::config)
/// with the offending field and, where it can be located, its line.
inline RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        fail(Errc::config, "config, line " + std::to_string(line) + ", column " + std::to_string(col) +
                               ": malformed JSON");
    }
    const detail::ConfigReader r(text);
    r.only(doc, "", {"target", "n", "k", "expected", "expected_branch", "sampling", "tolerances", "checks", "output",
                     "allow_ambiguous"});
    RunConfig cfg;

    if (!doc.contains("target")) r.error("target", "a target is required");
    const json& target = doc["target"];
    r.only(target, "target", {"catalog", "radius", "chart"});
    if (target.contains("catalog") == target.contains("chart"))
        r.error("target", "give exactly one of 'catalog' or 'chart'");
    if (target.contains("catalog")) {
        cfg.catalog = r.string(target["catalog"], "target.catalog");
        const auto& names = catalog_names();
        if (std::find(names.begin(), names.end(), *cfg.catalog) == names.end())
            r.error("target.catalog", "unknown catalog entry '" + *cfg.catalog + "'");
        if (target.contains("radius")) {
            if (*cfg.catalog != "small_circle") r.error("target.radius", "only small_circle takes a radius");
            cfg.radius = r.number(target["radius"], "target.radius");
            if (*cfg.radius == 0.0 || std::abs(*cfg.radius) >= kPi / 2)
                r.error("target.radius", "must lie in (-pi/2, pi/2) without 0");
        }
    } else {
        if (target.contains("radius")) r.error("target.radius", "only small_circle takes a radius");
        cfg.chart = detail::parse_chart(r, target["chart"]);
    }

    const SubmanifoldSpec probe = [&] {
        if (cfg.catalog) return catalog_entry(*cfg.catalog).spec;
        SubmanifoldSpec s;
        s.n = cfg.chart->n;
        s.k = cfg.chart->k;
        return s;
    }();
    if (doc.contains("n") && r.integer(doc["n"], "n") != probe.n) r.error("n", "does not match the target");
    if (doc.contains("k") && r.integer(doc["k"], "k") != probe.k) r.error("k", "does not match the target");

    if (doc.contains("expected")) cfg.expected = detail::parse_expected(r, r.string(doc["expected"], "expected"));
    if (doc.contains("expected_branch"))
        cfg.expected_branch = detail::parse_branch(r, r.string(doc["expected_branch"], "expected_branch"));
    if (doc.contains("allow_ambiguous")) cfg.plan.allow_ambiguous = r.boolean(doc["allow_ambiguous"], "allow_ambiguous");

    if (doc.contains("sampling")) {
        const json& s = doc["sampling"];
        r.only(s, "sampling", {"grid", "normals", "random_normals", "taus", "seed", "step", "richardson", "analytic",
                               "threads"});
        if (s.contains("grid")) {
            const json& g = s["grid"];
            if (g.is_number_integer()) {
                cfg.plan.grid.assign(static_cast<std::size_t>(probe.k), g.get<int>());
            } else if (g.is_array()) {
                for (std::size_t i = 0; i < g.size(); ++i)
                    cfg.plan.grid.push_back(r.integer(g[i], "sampling.grid[" + std::to_string(i) + "]"));
                if (cfg.plan.grid.size() != static_cast<std::size_t>(probe.k))
                    r.error("sampling.grid", "need one count per parameter");
            } else {
                r.error("sampling.grid", "expected an integer or an array of integers");
            }
            for (int c : cfg.plan.grid)
                if (c < 2) r.error("sampling.grid", "grid counts must be >= 2");
        }
        if (s.contains("normals")) {
            cfg.plan.normals = r.integer(s["normals"], "sampling.normals");
            if (cfg.plan.normals < 1) r.error("sampling.normals", "must be >= 1");
        }
        if (s.contains("random_normals")) {
            cfg.plan.random_normals = r.integer(s["random_normals"], "sampling.random_normals");
            if (cfg.plan.random_normals < 0) r.error("sampling.random_normals", "must be >= 0");
        }
        if (s.contains("taus")) {
            cfg.plan.taus = r.numbers(s["taus"], "sampling.taus");
            if (cfg.plan.taus.empty()) r.error("sampling.taus", "need at least one value");
            for (double t : cfg.plan.taus)
                if (!(t >= 0.0 && t < 1.0)) r.error("sampling.taus", "values must lie in [0, 1)");
        }
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) r.error("sampling.seed", "expected a non-negative integer");
            cfg.plan.seed = s["seed"].get<std::uint64_t>();
        }
        if (s.contains("step")) {
            cfg.plan.fd.step = r.number(s["step"], "sampling.step");
            if (!(cfg.plan.fd.step > 0.0 && cfg.plan.fd.step < 0.1)) r.error("sampling.step", "must lie in (0, 0.1)");
        }
        if (s.contains("richardson")) cfg.plan.fd.richardson = r.boolean(s["richardson"], "sampling.richardson");
        if (s.contains("analytic")) cfg.plan.analytic = r.boolean(s["analytic"], "sampling.analytic");
        if (s.contains("threads")) {
            cfg.plan.threads = r.integer(s["threads"], "sampling.threads");
            if (cfg.plan.threads < 1) r.error("sampling.threads", "must be >= 1");
        }
    }
    if (cfg.plan.analytic && cfg.chart) r.error("sampling.analytic", "inline charts have no closed-form jet");

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        r.only(t, "tolerances", {"austere", "lagrangian", "embedding"});
        auto positive = [&](const char* key) -> std::optional<double> {
            if (!t.contains(key)) return std::nullopt;
            const double v = r.number(t[key], std::string("tolerances.") + key);
            if (!(v > 0.0)) r.error(std::string("tolerances.") + key, "must be positive");
            return v;
        };
        cfg.tol_austere = positive("austere");
        cfg.tol_lagrangian = positive("lagrangian");
        cfg.tol_embedding = positive("embedding");
    }

    if (doc.contains("checks")) {
        const json& c = doc["checks"];
        if (!c.is_array() || c.empty()) r.error("checks", "expected a non-empty array of check names");
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string name = r.string(c[i], "checks[" + std::to_string(i) + "]");
            const auto& all = check_names();
            if (std::find(all.begin(), all.end(), name) == all.end())
                r.error("checks[" + std::to_string(i) + "]", "unknown check '" + name + "'");
            cfg.checks.insert(name);
        }
        if (cfg.checks.count("classify") && probe.k != 2) r.error("checks", "classify needs a surface (k = 2)");
    }
    if (cfg.expected_branch && probe.k != 2) r.error("expected_branch", "branches are defined for surfaces only");

    if (doc.contains("output")) {
        const json& o = doc["output"];
        r.only(o, "output", {"path", "format"});
        if (o.contains("path")) cfg.output_path = r.string(o["path"], "output.path");
        if (o.contains("format")) {
            cfg.format = r.string(o["format"], "output.format");
            if (cfg.format != "json" && cfg.format != "csv") r.error("output.format", "must be json or csv");
        }
    }
    return cfg;
}

/// Submanifold described by the configuration's target.
inline SubmanifoldSpec resolve_target(const RunConfig& cfg) {
    if (cfg.catalog) {
        if (cfg.radius) return geodesic_and_circle(*cfg.radius).second.spec;
        return catalog_entry(*cfg.catalog).spec;
    }
    const ChartTarget& c = *cfg.chart;
    std::vector<std::pair<Expression, Expression>> comps;
    for (const auto& [re, im] : c.components) comps.emplace_back(Expression::parse(re, c.k), Expression::parse(im, c.k));
    SubmanifoldSpec spec;
    spec.n = c.n;
    spec.k = c.k;
    spec.label = c.label;
    spec.domain = {Eigen::Map<const RVec>(c.lo.data(), c.k), Eigen::Map<const RVec>(c.hi.data(), c.k)};
    spec.chart = [comps, normalize = c.normalize](const XRVec& u) {
        XCVec f(static_cast<Eigen::Index>(comps.size()));
        for (std::size_t i = 0; i < comps.size(); ++i)
            f(static_cast<Eigen::Index>(i)) = XCplx(comps[i].first(u), comps[i].second(u));
        if (normalize) {
            const ext nf = f.norm();
            require(nf > 1e-14L, Errc::zero_vector, "chart vanishes");
            f /= nf;
        }
        return f;
    };
    return spec;
}

/// Normalized echo of the configuration with defaults filled in.
inline json config_echo(const RunConfig& cfg) {
    json j;
    if (cfg.catalog) {
        j["target"]["catalog"] = *cfg.catalog;
        if (cfg.radius) j["target"]["radius"] = *cfg.radius;
    } else {
        const ChartTarget& c = *cfg.chart;
        json comps = json::array();
        for (const auto& [re, im] : c.components) comps.push_back({{"re", re}, {"im", im}});
        j["target"]["chart"] = {{"n", c.n},           {"k", c.k},
                                {"components", comps}, {"normalize", c.normalize},
                                {"domain", {{"lo", c.lo}, {"hi", c.hi}}}, {"label", c.label}};
    }
    j["expected"] = cfg.expected ? json(to_string(*cfg.expected)) : json(nullptr);
    j["expected_branch"] = cfg.expected_branch ? json(to_string(*cfg.expected_branch)) : json(nullptr);
    j["allow_ambiguous"] = cfg.plan.allow_ambiguous;
    j["sampling"] = {{"grid", cfg.plan.grid},
                     {"normals", cfg.plan.normals},
                     {"random_normals", cfg.plan.random_normals},
                     {"taus", cfg.plan.taus},
                     {"seed", cfg.plan.seed},
                     {"step", cfg.plan.fd.step},
                     {"richardson", cfg.plan.fd.richardson},
                     {"analytic", cfg.plan.analytic},
                     {"threads", cfg.plan.threads}};
    const Tolerances t = cfg.tolerances();
    j["tolerances"] = {{"austere", t.austere}, {"lagrangian", t.lagrangian}, {"embedding", t.embedding}};
    j["checks"] = cfg.checks.empty() ? json(check_names()) : json(cfg.checks);
    j["output"] = {{"path", cfg.output_path}, {"format", cfg.format}};
    return j;
}

}  // namespace austere
