#pragma once

// Executes a run configuration and assembles the report document.

#include <string>
#include <vector>

#include "austere/config.hpp"
#include "austere/report.hpp"

namespace austere {

enum class ExitCode : int { pass = 0, violation = 1, error = 2, inconclusive = 3 };

struct CheckOutcome {
    std::string name;
    std::string status;  // pass, fail, inconclusive, skipped
    nlohmann::json value;
    nlohmann::json tolerance;
    std::string detail;
};

struct RunOutcome {
    AusterityReport report;
    std::optional<SurfaceBranch> branch;
    std::vector<CheckOutcome> checks;
    std::string status;  // PASS, PROP1_VIOLATION, VIOLATION, INCONCLUSIVE
    ExitCode exit_code = ExitCode::pass;
    nlohmann::json document;
};

/// Fills the defaults that depend on the target so the echo is complete.
inline RunConfig completed(RunConfig cfg, const SubmanifoldSpec& spec) {
    if (cfg.plan.grid.empty()) cfg.plan.grid.assign(static_cast<std::size_t>(spec.k), default_grid(spec.k));
    return cfg;
}

inline RunOutcome run(const RunConfig& input) {
    const SubmanifoldSpec spec = resolve_target(input);
    const RunConfig cfg = completed(input, spec);
    const Tolerances tols = cfg.tolerances();
    CheckSet checks;
    checks.lagrangian = cfg.wants("lagrangian");
    checks.austerity = cfg.wants("austerity") || cfg.wants("classify");
    checks.det_s = cfg.wants("detS_crosscheck");
    checks.lemma2 = cfg.wants("lemma2");

    RunOutcome out;
    out.report = is_austere(spec, cfg.plan, tols, checks);
    const AusterityReport& rep = out.report;
    bool lagrangian_failed = false, violation = false, inconclusive = false;
    auto add = [&](CheckOutcome c) {
        lagrangian_failed = lagrangian_failed || (c.name == "lagrangian" && c.status == "fail");
        violation = violation || c.status == "fail";
        inconclusive = inconclusive || c.status == "inconclusive";
        out.checks.push_back(std::move(c));
    };

    if (checks.lagrangian) {
        const bool ok = rep.lagrangian_ok();
        add({"lagrangian", ok ? "pass" : "fail",
             {{"normal_bundle", rep.max_lagrangian_defect}, {"embedding", rep.max_embedding_defect}},
             {{"normal_bundle", tols.lagrangian}, {"embedding", tols.embedding}},
             ok ? "" : "Lagrangian defect above tolerance; the normal bundle is always Lagrangian, so this is a bug"});
    }
    if (cfg.wants("austerity")) {
        CheckOutcome c{"austerity", "pass", rep.max_residual, tols.austere, to_string(rep.verdict)};
        if (rep.verdict == Verdict::inconclusive) {
            c.status = "inconclusive";
        } else if (cfg.expected && expected_verdict(*cfg.expected) != rep.verdict) {
            c.status = "fail";
            c.detail += std::string(", expected ") + to_string(*cfg.expected);
        }
        add(std::move(c));
    }
    if (checks.det_s) {
        const bool ok = rep.max_det_s_error <= tols.det_s;
        add({"detS_crosscheck", ok ? "pass" : "fail", rep.max_det_s_error, tols.det_s, ""});
    }
    if (checks.lemma2) {
        if (spec.n >= 2)
            add({"lemma2", rep.max_lemma2_error <= tols.lemma2 ? "pass" : "fail", rep.max_lemma2_error, tols.lemma2, ""});
        else
            add({"lemma2", "skipped", nullptr, tols.lemma2, "needs n >= 2"});
    }
    if (cfg.wants("classify")) {
        if (spec.k == 2) {
            out.branch = classify_report(rep);
            CheckOutcome c{"classify", "pass", to_string(*out.branch), nullptr, ""};
            if (*out.branch == SurfaceBranch::inconclusive) {
                c.status = "inconclusive";
            } else if (cfg.expected_branch && *cfg.expected_branch != *out.branch) {
                c.status = "fail";
                c.detail = std::string("expected ") + to_string(*cfg.expected_branch);
            }
            add(std::move(c));
        } else {
            add({"classify", "skipped", nullptr, nullptr, "needs k = 2"});
        }
    }

    if (lagrangian_failed) {
        out.status = "PROP1_VIOLATION";
        out.exit_code = ExitCode::violation;
    } else if (violation) {
        out.status = "VIOLATION";
        out.exit_code = ExitCode::violation;
    } else if (inconclusive) {
        out.status = "INCONCLUSIVE";
        out.exit_code = ExitCode::inconclusive;
    } else {
        out.status = "PASS";
    }

    nlohmann::json check_list = nlohmann::json::array();
    for (const auto& c : out.checks)
        check_list.push_back({{"name", c.name}, {"status", c.status}, {"value", c.value}, {"tolerance", c.tolerance},
                              {"detail", c.detail}});
    const nlohmann::json records = records_json(rep);
    out.document = {{"schema_version", kReportSchema},
                    {"tool", {{"name", "austere-kit"}, {"version", kToolVersion}}},
                    {"config", config_echo(cfg)},
                    {"seed", cfg.plan.seed},
                    {"summary", summary_json(rep)},
                    {"classification", out.branch ? nlohmann::json(to_string(*out.branch)) : nlohmann::json(nullptr)},
                    {"checks", check_list},
                    {"points", records["points"]},
                    {"samples", records["samples"]},
                    {"status", out.status},
                    {"exit_code", static_cast<int>(out.exit_code)}};
    return out;
}

}  // namespace austere
