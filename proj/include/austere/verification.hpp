#pragma once

// Acceptance suite shared by `austere-kit verify-all` and the acceptance
// test binary. Each criterion carries its tolerance and time budget; the
// JSON document omits wall-clock so repeated runs are byte-identical.

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "austere/austerity.hpp"
#include "austere/catalog.hpp"
#include "austere/report.hpp"
#include "austere/slag_check.hpp"
#include "austere/stenzel_metric.hpp"

namespace austere {

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double time_budget = 0.0;  // seconds
    double seconds = 0.0;
    nlohmann::json details;

    [[nodiscard]] bool within_time() const { return seconds <= time_budget; }
};

namespace acceptance {

inline constexpr double kLagrangianFd = 1e-6;
inline constexpr double kLagrangianAnalytic = 1e-9;
inline constexpr double kStenzelCross = 1e-10;
inline constexpr double kDetRelative = 1e-8;
inline constexpr double kDetSpecialization = 1e-10;
inline constexpr double kImDet = 1e-10;
inline constexpr double kClippedFrame = 1e-8;
inline constexpr double kResidual = 1e-6;
inline constexpr double kFrozenRelative = 0.10;
inline constexpr double kSlopeTarget = 2.0;
inline constexpr double kSlopeWindow = 0.2;
inline constexpr double kZeroFormExact = 1e-9;
inline constexpr int kMinSamples = 25;
inline constexpr int kMinNormals = 8;
inline constexpr int kDetInstances = 500;
inline constexpr int kSpecializationInstances = 100;
inline constexpr int kImDetInstances = 500;
inline constexpr int kClippedFrames = 100;

inline SamplingPlan suite_plan(bool analytic) {
    SamplingPlan p;
    p.normals = kMinNormals;
    p.taus = {0.1, 0.5, 0.9};
    p.analytic = analytic;
    return p;
}

template <class F>
CriterionResult timed(std::string id, std::string title, double budget, F&& body) {
    CriterionResult r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.time_budget = budget;
    const auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline RMat special_orthogonal(int m, std::mt19937_64& rng) {
    if (m == 0) return RMat(0, 0);
    RMat Q = random_orthogonal(m, rng);
    if (Q.determinant() < 0.0) Q.col(0) *= -1.0;
    return Q;
}

/// Rotates the tangent vectors by O and the free normals e_{k+1..2n-1} by P.
inline AdaptedFrame rotated(const AdaptedFrame& f, const RMat& O, const RMat& P) {
    AdaptedFrame out = f;
    for (int a = 0; a < f.k; ++a) {
        CVec v = CVec::Zero(f.z.size());
        for (int b = 0; b < f.k; ++b) v += O(b, a) * f.e[static_cast<std::size_t>(b + 1)];
        out.e[static_cast<std::size_t>(a + 1)] = v;
    }
    const int m = 2 * f.n - 1 - f.k;
    for (int a = 0; a < m; ++a) {
        CVec v = CVec::Zero(f.z.size());
        for (int b = 0; b < m; ++b) v += P(b, a) * f.e[static_cast<std::size_t>(f.k + 1 + b)];
        out.e[static_cast<std::size_t>(f.k + 1 + a)] = v;
    }
    return out;
}

inline CriterionResult lagrangian_suite() {
    return timed("lagrangian_suite", "normal bundle is Lagrangian on every catalog sample", 60.0, [](CriterionResult& r) {
        double worst_fd = 0.0, worst_an = 0.0;
        bool ok = true;
        for (const auto& name : default_suite()) {
            const CatalogEntry e = catalog_entry(name);
            const AusterityReport fd = is_austere(e.spec, suite_plan(false), Tolerances::defaults(false));
            const double d_fd = std::max(fd.max_lagrangian_defect, fd.max_embedding_defect);
            double d_an = 0.0;
            if (e.spec.exact_jet) {
                const AusterityReport an = is_austere(e.spec, suite_plan(true), Tolerances::defaults(true));
                d_an = std::max(an.max_lagrangian_defect, an.max_embedding_defect);
            }
            const auto per_point = fd.points.empty() ? 0 : fd.samples.size() / fd.points.size();
            const bool sizes = static_cast<int>(fd.points.size()) >= kMinSamples &&
                               (static_cast<int>(per_point) >= kMinNormals || 2 * e.spec.n - e.spec.k == 1);
            ok = ok && sizes && d_fd <= kLagrangianFd && d_an <= kLagrangianAnalytic;
            worst_fd = std::max(worst_fd, d_fd);
            worst_an = std::max(worst_an, d_an);
            r.details[name] = {{"points", fd.points.size()},
                               {"normals_per_point", per_point},
                               {"finite_difference", d_fd},
                               {"analytic", d_an}};
        }
        r.passed = ok;
        r.measured = worst_fd;
        r.tolerance = kLagrangianFd;
        r.details["max_finite_difference"] = worst_fd;
        r.details["max_analytic"] = worst_an;
        r.details["analytic_tolerance"] = kLagrangianAnalytic;
    });
}

inline CriterionResult stenzel_cross_route() {
    return timed("stenzel_cross_route", "general Stenzel form matches the closed form at the standard point", 1.0,
                 [](CriterionResult& r) {
                     double worst = 0.0;
                     for (int n = 1; n <= 4; ++n)
                         for (int i = 0; i <= 9; ++i) {
                             const double tau = 0.1 * i;
                             const StenzelForm general = stenzel_form_general(standard_affine_point(tau, n));
                             const StenzelForm closed = stenzel_form_standard(tau, n);
                             worst = std::max(worst, max_abs(CMat(general.G - closed.G)));
                         }
                     r.measured = worst;
                     r.tolerance = kStenzelCross;
                     r.passed = worst <= kStenzelCross;
                 });
}

inline CriterionResult determinant_cross_route(std::uint64_t seed) {
    return timed("det_cross_route", "det S by elimination matches the closed form", 5.0, [seed](CriterionResult& r) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < kDetInstances; ++i) {
            const int n = 1 + static_cast<int>(unit(rng) * 5);
            const int kmax = std::min(4, 2 * n - 1);
            const int k = 1 + static_cast<int>(unit(rng) * kmax);
            double theta = unit(rng) * kPi / 2;
            const double tau = 0.05 + 0.9 * unit(rng);
            const AdaptedFrame aligned = random_aligned_frame(n, k, theta, rng);
            const RMat H = random_symmetric(k, rng);
            const RMat O = special_orthogonal(k, rng);
            const RMat P = special_orthogonal(2 * n - 1 - k, rng);
            const AdaptedFrame f = rotated(aligned, O, P);
            const RMat Hr = O.transpose() * H * O;
            const cplx direct = det_S_direct(build_S(Hr, frame_r(f), f, tau));
            const cplx closed = det_S_closed(H, theta, tau, n, k);
            worst = std::max(worst, std::abs(direct - closed) / std::abs(direct));
        }
        double worst_special = 0.0;
        for (int i = 0; i < kSpecializationInstances; ++i) {
            const int n = 2 + static_cast<int>(unit(rng) * 4);
            const int k = 1 + static_cast<int>(unit(rng) * std::min(4, 2 * n - 2));
            double theta = kPi / 2;
            const double tau = 0.05 + 0.9 * unit(rng);
            const AdaptedFrame f = random_aligned_frame(n, k, theta, rng);
            const RMat H = random_symmetric(k, rng);
            const cplx holo = det_S_holomorphic(H, tau, n, k);
            const cplx closed = det_S_closed(H, theta, tau, n, k);
            const cplx direct = det_S_direct(build_S(H, frame_r(f), f, tau));
            worst_special = std::max({worst_special, std::abs(holo - closed) / std::abs(holo),
                                      std::abs(holo - direct) / std::abs(holo)});
        }
        r.measured = worst;
        r.tolerance = kDetRelative;
        r.passed = worst <= kDetRelative && worst_special <= kDetSpecialization;
        r.details = {{"instances", kDetInstances},
                     {"specialization_instances", kSpecializationInstances},
                     {"specialization_error", worst_special},
                     {"specialization_tolerance", kDetSpecialization}};
    });
}

inline CriterionResult imdet_identity(std::uint64_t seed) {
    return timed("imdet_identity", "odd symmetric-polynomial expansion of Im det(I - i tau H)", 2.0,
                 [seed](CriterionResult& r) {
                     std::mt19937_64 rng(seed + 1);
                     std::uniform_real_distribution<double> unit(0.0, 1.0);
                     double worst = 0.0;
                     for (int i = 0; i < kImDetInstances; ++i) {
                         const int k = 1 + static_cast<int>(unit(rng) * 6);
                         const RMat H = random_symmetric(k, rng);
                         const double tau = unit(rng);
                         const double direct = det_or_one(shifted_identity(H, tau)).imag();
                         worst = std::max(worst, std::abs(im_det_expansion(H, tau) - direct));
                     }
                     r.measured = worst;
                     r.tolerance = kImDet;
                     r.passed = worst <= kImDet;
                     r.details = {{"instances", kImDetInstances}};
                 });
}

inline CriterionResult clipped_frame_identity(std::uint64_t seed) {
    return timed("clipped_frame", "clipped frame determinant equals (-2i)^{n-1} cos(theta)", 2.0,
                 [seed](CriterionResult& r) {
                     std::mt19937_64 rng(seed + 2);
                     std::uniform_real_distribution<double> unit(0.0, 1.0);
                     double worst = 0.0;
                     for (int n = 2; n <= 4; ++n) {
                         double worst_n = 0.0;
                         for (int i = 0; i < kClippedFrames; ++i) {
                             const int k = 1 + static_cast<int>(unit(rng) * (2 * n - 1));
                             double theta = unit(rng) * kPi / 2;
                             const AdaptedFrame f = random_aligned_frame(n, k, theta, rng);
                             worst_n = std::max(worst_n, lemma2_check(f, theta));
                         }
                         r.details["n" + std::to_string(n)] = worst_n;
                         worst = std::max(worst, worst_n);
                     }
                     r.measured = worst;
                     r.tolerance = kClippedFrame;
                     r.passed = worst <= kClippedFrame;
                 });
}

inline CriterionResult catalog_verdicts() {
    return timed("verdicts", "catalog verdicts and frozen residuals", 120.0, [](CriterionResult& r) {
        bool ok = true;
        double worst_austere = 0.0;
        for (const auto& name : default_suite()) {
            const CatalogEntry e = catalog_entry(name);
            const AusterityReport rep = is_austere(e.spec, suite_plan(false), Tolerances::defaults(false));
            const Verdict want = expected_verdict(e.expected);
            bool entry_ok = rep.verdict == want;
            nlohmann::json d = {{"verdict", to_string(rep.verdict)},
                                {"expected", to_string(want)},
                                {"max_residual", rep.max_residual},
                                {"max_trace", rep.max_trace}};
            if (want == Verdict::austere_within_tol) {
                entry_ok = entry_ok && rep.max_residual <= kResidual && rep.max_trace <= kResidual;
                worst_austere = std::max({worst_austere, rep.max_residual, rep.max_trace});
            } else if (e.frozen_trace) {
                const double rel = std::abs(rep.max_trace - *e.frozen_trace) / *e.frozen_trace;
                entry_ok = entry_ok && rel <= kFrozenRelative;
                d["frozen_trace"] = *e.frozen_trace;
                d["frozen_relative_error"] = rel;
            }
            d["passed"] = entry_ok;
            r.details[name] = d;
            ok = ok && entry_ok;
        }
        r.passed = ok;
        r.measured = worst_austere;
        r.tolerance = kResidual;
    });
}

inline CriterionResult surface_classifier() {
    return timed("classifier", "surface classification of the catalog", 60.0, [](CriterionResult& r) {
        bool ok = true;
        int inconclusive = 0;
        for (const auto& name : default_suite()) {
            const CatalogEntry e = catalog_entry(name);
            if (e.spec.k != 2 || !e.expected_branch) continue;
            const Classification c = surface_classify(e.spec, suite_plan(false), Tolerances::defaults(false));
            inconclusive += c.branch == SurfaceBranch::inconclusive ? 1 : 0;
            ok = ok && c.branch == *e.expected_branch;
            r.details[name] = {{"branch", to_string(c.branch)}, {"expected", to_string(*e.expected_branch)}};
        }
        r.details["inconclusive"] = inconclusive;
        r.passed = ok && inconclusive == 0;
        r.measured = inconclusive;
        r.tolerance = 0;
    });
}

/// Max over grid points and normal-basis directions of the entrywise
/// difference between finite-difference and closed-form II.
inline double second_form_error(const CatalogEntry& e, double step, int grid) {
    const std::vector<RVec> points =
        parameter_grid(e.spec.domain, std::vector<int>(static_cast<std::size_t>(e.spec.k), grid));
    double worst = 0.0;
    for (const RVec& u : points) {
        const Jet j = jet(e.spec, u, {step, false});
        for (const CVec& nu : normal_basis(tangent_basis(j))) {
            const RMat fd = second_fundamental(j, nu).H;
            worst = std::max(worst, max_abs(RMat(fd - e.analytic_II(u, nu))));
        }
    }
    return worst;
}

inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    double mx = 0, my = 0;
    const auto m = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        mx += std::log(h[i]) / m;
        my += std::log(err[i]) / m;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        sxy += (std::log(h[i]) - mx) * (std::log(err[i]) - my);
        sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    }
    return sxy / sxx;
}

inline CriterionResult finite_difference_order() {
    return timed("fd_order", "second fundamental form error decays like step^2", 30.0, [](CriterionResult& r) {
        const std::vector<double> steps{1e-2, 1e-3, 1e-4};
        bool ok = true;
        double worst_gap = 0.0;
        for (const std::string name : {"small_circle", "torus"}) {
            const CatalogEntry e = catalog_entry(name);
            std::vector<double> err;
            for (double h : steps) err.push_back(second_form_error(e, h, 5));
            const double slope = loglog_slope(steps, err);
            worst_gap = std::max(worst_gap, std::abs(slope - kSlopeTarget));
            ok = ok && std::abs(slope - kSlopeTarget) <= kSlopeWindow;
            r.details[name] = {{"steps", steps}, {"errors", err}, {"slope", slope}};
        }
        // Vanishing II has no truncation error to fit; require exactness instead.
        for (const std::string name : {"linear_cp1_cp2", "rp2", "great_circle"}) {
            const CatalogEntry e = catalog_entry(name);
            const double err = second_form_error(e, FiniteDifference{}.step, 5);
            ok = ok && err <= kZeroFormExact;
            r.details[name] = {{"error", err}, {"tolerance", kZeroFormExact}};
        }
        r.passed = ok;
        r.measured = worst_gap;
        r.tolerance = kSlopeWindow;
    });
}

inline nlohmann::json criterion_json(const CriterionResult& c, bool timing) {
    nlohmann::json j = {{"id", c.id},           {"title", c.title},         {"passed", c.passed},
                        {"measured", c.measured}, {"tolerance", c.tolerance}, {"details", c.details}};
    if (timing) j["seconds"] = c.seconds;
    return j;
}

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    nlohmann::json document;

    [[nodiscard]] bool passed() const {
        return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
    }
};

inline SuiteResult run_suite(std::uint64_t seed, bool timing) {
    SuiteResult s;
    s.criteria.push_back(lagrangian_suite());
    s.criteria.push_back(stenzel_cross_route());
    s.criteria.push_back(determinant_cross_route(seed));
    s.criteria.push_back(imdet_identity(seed));
    s.criteria.push_back(clipped_frame_identity(seed));
    s.criteria.push_back(catalog_verdicts());
    s.criteria.push_back(surface_classifier());
    s.criteria.push_back(finite_difference_order());
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : s.criteria) list.push_back(criterion_json(c, timing));
    s.document = {{"schema_version", "austere-kit/verify/1"},
                  {"tool", {{"name", "austere-kit"}, {"version", kToolVersion}}},
                  {"seed", seed},
                  {"criteria", list},
                  {"all_passed", s.passed()}};
    return s;
}

}  // namespace acceptance

/// Full acceptance suite. With `check_determinism` the suite runs twice and
/// a final criterion compares the serialized documents.
inline acceptance::SuiteResult verify_all(std::uint64_t seed, bool check_determinism = true, bool timing = false) {
    acceptance::SuiteResult first = acceptance::run_suite(seed, timing);
    if (!check_determinism) return first;
    CriterionResult det = acceptance::timed("determinism", "repeated runs give byte-identical reports", 240.0,
                                            [&](CriterionResult& r) {
                                                const acceptance::SuiteResult second = acceptance::run_suite(seed, false);
                                                const acceptance::SuiteResult again = timing ? acceptance::run_suite(seed, false) : first;
                                                r.passed = again.document.dump() == second.document.dump();
                                                r.measured = r.passed ? 0.0 : 1.0;
                                                r.tolerance = 0.0;
                                            });
    first.criteria.push_back(det);
    first.document["criteria"].push_back(acceptance::criterion_json(det, timing));
    first.document["all_passed"] = first.passed();
    return first;
}

}  // namespace austere
