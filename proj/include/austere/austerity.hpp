#pragma once

// Sampling driver: evaluates the pointwise kernel over a parameter grid and a
// set of unit normals, and aggregates the result into a verdict.

#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "austere/immersion.hpp"
#include "austere/slag_check.hpp"
#include "austere/stenzel_metric.hpp"

namespace austere {

struct SamplingPlan {
    std::vector<int> grid;  // points per parameter; empty selects default_grid(k)
    int normals = 8;        // deterministic unit normals per point
    int random_normals = 0;
    std::vector<double> taus{0.1, 0.5, 0.9};
    std::uint64_t seed = 1;
    FiniteDifference fd;
    bool analytic = false;  // use the closed-form jet
    int threads = 1;
    bool allow_ambiguous = false;
};

struct Tolerances {
    double austere = 1e-6;
    double lagrangian = 1e-6;
    double embedding = 1e-6;
    double det_s = 1e-8;
    double lemma2 = 1e-8;

    static Tolerances defaults(bool analytic) {
        Tolerances t;
        if (analytic) {
            t.austere = 1e-9;
            t.lagrangian = 1e-9;
            t.embedding = 1e-9;
        }
        return t;
    }
};

struct CheckSet {
    bool lagrangian = true;
    bool austerity = true;
    bool det_s = true;
    bool lemma2 = true;
};

enum class Verdict { austere_within_tol, not_austere, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::austere_within_tol: return "austere_within_tol";
        case Verdict::not_austere: return "not_austere";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct PointRecord {
    RVec u;
    int rank_H = -1, rank_D = -1, rank_E = -1, rank_N = -1;
    bool rank_ambiguous = false;
    double trace_norm = 0.0;  // |sum_m tr(H_{N_m}) N_m| = sup of |R_0| over unit normals
    double ii_norm = 0.0;     // Frobenius norm of II over an orthonormal normal basis
};

struct SampleRecord {
    std::size_t point = 0;
    RVec u;
    RVec nu;  // coefficients in the point's normal basis
    double theta = 0.0;
    bool normal_branch = false;
    RVec residuals;
    RMat aligned_H;  // II in the aligned tangent basis
    double lagrangian_defect = 0.0;
    double embedding_defect = 0.0;
    double det_s_error = 0.0;
    std::vector<double> det_s_phase;  // Im of det S over its prefactor, per tau
    std::optional<double> lemma2_error;
};

struct AusterityReport {
    std::string label;
    int n = 0;
    int k = 0;
    std::vector<PointRecord> points;
    std::vector<SampleRecord> samples;
    Tolerances tolerances;
    Verdict verdict = Verdict::inconclusive;
    double max_residual = 0.0;
    double max_trace = 0.0;
    double max_ii_norm = 0.0;
    double max_lagrangian_defect = 0.0;
    double max_embedding_defect = 0.0;
    double max_det_s_error = 0.0;
    double max_lemma2_error = 0.0;
    int ambiguous_points = 0;

    [[nodiscard]] bool lagrangian_ok() const {
        return max_lagrangian_defect <= tolerances.lagrangian && max_embedding_defect <= tolerances.embedding;
    }
};

inline int default_grid(int k) { return k == 1 ? 25 : (k == 2 ? 5 : 3); }

/// Cell-centred grid over the box, first parameter varying slowest.
inline std::vector<RVec> parameter_grid(const ParameterBox& box, const std::vector<int>& counts) {
    const auto k = box.lo.size();
    require(static_cast<Eigen::Index>(counts.size()) == k, Errc::dimension_mismatch, "one grid count per parameter");
    std::vector<RVec> out;
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    if (k == 0) return {RVec(0)};
    for (;;) {
        RVec u(k);
        for (Eigen::Index a = 0; a < k; ++a) {
            const double t = (idx[static_cast<std::size_t>(a)] + 0.5) / counts[static_cast<std::size_t>(a)];
            u(a) = box.lo(a) + t * (box.hi(a) - box.lo(a));
        }
        out.push_back(u);
        Eigen::Index a = k - 1;
        while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == counts[static_cast<std::size_t>(a)]) idx[static_cast<std::size_t>(a--)] = 0;
        if (a < 0) break;
    }
    return out;
}

/// Deterministic unit vectors in R^m: {+1, -1} for m = 1, equally spaced
/// angles for m = 2, a Fibonacci lattice for m = 3, and coordinate
/// directions followed by a low-discrepancy Gaussian sequence for m >= 4.
inline std::vector<RVec> normal_directions(int m, int count) {
    std::vector<RVec> out;
    if (m <= 0) return out;
    if (m == 1) {
        out.push_back(RVec::Constant(1, 1.0));
        out.push_back(RVec::Constant(1, -1.0));
        return out;
    }
    if (m == 2) {
        for (int j = 0; j < count; ++j) {
            const double a = 2.0 * kPi * j / count;
            RVec v(2);
            v << std::cos(a), std::sin(a);
            out.push_back(v);
        }
        return out;
    }
    if (m == 3) {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            const double z = 1.0 - (2.0 * j + 1.0) / count;
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            RVec v(3);
            v << rho * std::cos(golden * j), rho * std::sin(golden * j), z;
            out.push_back(v);
        }
        return out;
    }
    for (int j = 0; j < std::min(count, 2 * m); ++j) {
        RVec v = RVec::Zero(m);
        v(j / 2) = (j % 2) ? -1.0 : 1.0;
        out.push_back(v);
    }
    // R_d sequence: alpha_i = phi_d^{-(i+1)} with phi_d the root of x^{d+1} = x + 1.
    const int d = 2 * ((m + 1) / 2);
    double phi = 2.0;
    for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (d + 1));
    for (int j = 0; static_cast<int>(out.size()) < count; ++j) {
        RVec v(m);
        for (int i = 0; i < m; i += 2) {
            const double a1 = std::fmod(0.5 + (j + 1) * std::pow(phi, -(i + 1)), 1.0);
            const double a2 = std::fmod(0.5 + (j + 1) * std::pow(phi, -(i + 2)), 1.0);
            const double rad = std::sqrt(-2.0 * std::log(std::max(a1, 1e-300)));
            v(i) = rad * std::cos(2.0 * kPi * a2);
            if (i + 1 < m) v(i + 1) = rad * std::sin(2.0 * kPi * a2);
        }
        out.push_back(v / v.norm());
    }
    return out;
}

inline std::vector<RVec> random_normal_directions(int m, int count, std::mt19937_64& rng) {
    std::vector<RVec> out;
    if (m <= 0) return out;
    std::normal_distribution<double> g(0.0, 1.0);
    while (static_cast<int>(out.size()) < count) {
        RVec v(m);
        for (int i = 0; i < m; ++i) v(i) = g(rng);
        if (v.norm() > 1e-12) out.push_back(v / v.norm());
    }
    return out;
}

namespace detail {

/// Unit normal fields near u0 obtained by projecting the normal basis at u0
/// onto the normal space at u and orthonormalizing.
inline std::vector<CVec> normal_field(const SubmanifoldSpec& spec, const RVec& u, const std::vector<CVec>& seed,
                                      const FiniteDifference& fd, bool analytic) {
    const TangentBasis tb = tangent_basis(jet_for(spec, u, fd, analytic));
    std::vector<CVec> accepted{tb.z.vec(), I * tb.z.vec()};
    accepted.insert(accepted.end(), tb.orthonormal.begin(), tb.orthonormal.end());
    std::vector<CVec> out;
    for (const auto& s : seed) {
        CVec v = orthogonalize(s, accepted);
        v /= v.norm();
        accepted.push_back(v);
        out.push_back(v);
    }
    return out;
}

/// Affine image of (u, c) -> Phi-hat(f(u)U, sum_m c_m N_m(u) U).
inline CVec embedded_point(const SubmanifoldSpec& spec, const RVec& u, const RVec& c, const std::vector<CVec>& seed,
                           const StandardizingUnitary& U, const FiniteDifference& fd, bool analytic) {
    const Jet j = jet_for(spec, u, fd, analytic);
    const std::vector<CVec> field = normal_field(spec, u, seed, fd, analytic);
    CVec xi = CVec::Zero(j.z.size());
    for (std::size_t m = 0; m < field.size(); ++m) xi += c(static_cast<Eigen::Index>(m)) * field[m];
    const AffinePoint p = affine_chart(phi_hat(U.apply(j.z), U.apply(xi)));
    return concat(p.Z, p.W);
}

}  // namespace detail

/// Lagrangian defect of the embedded normal bundle computed from the map
/// itself: Richardson-extrapolated central differences of
/// (u, c) -> affine Phi-hat at (u0, t nu), t = artanh(tau), paired with the
/// general-point Stenzel form and normalized by the metric lengths.
inline double embedding_defect(const SubmanifoldSpec& spec, const RVec& u0, const std::vector<CVec>& normals,
                               const RVec& coeffs, double tau, const FiniteDifference& fd, bool analytic,
                               double step = 2e-3) {
    const int k = spec.k;
    const auto m = static_cast<int>(normals.size());
    const Jet j0 = jet_for(spec, u0, fd, analytic);
    const UnitHopfPoint z0(j0.z, tol::frame);
    const CVec nu = combine(normals, coeffs);
    const StandardizingUnitary U = standardize(z0, nu);
    const double t = std::atanh(tau);
    const RVec c0 = t * coeffs / coeffs.norm();

    auto eval = [&](const RVec& u, const RVec& c) { return detail::embedded_point(spec, u, c, normals, U, fd, analytic); };
    const CVec base = eval(u0, c0);
    const StenzelForm g = stenzel_form_general(AffinePoint{base.head(spec.n), base.tail(spec.n)});

    // d/dx of eval along coordinate i of the stacked (u, c).
    auto derivative = [&](int i) {
        auto central = [&](double h) {
            RVec up = u0, um = u0, cp = c0, cm = c0;
            if (i < k) {
                up(i) += h;
                um(i) -= h;
            } else {
                cp(i - k) += h;
                cm(i - k) -= h;
            }
            return CVec((eval(up, cp) - eval(um, cm)) / (2.0 * h));
        };
        return CVec((4.0 * central(step / 2) - central(step)) / 3.0);
    };
    std::vector<CVec> tangents;
    for (int i = 0; i < k + m; ++i) tangents.push_back(derivative(i));
    double worst = 0.0;
    for (std::size_t a = 0; a < tangents.size(); ++a)
        for (std::size_t b = a + 1; b < tangents.size(); ++b) {
            const double la = std::sqrt(metric_pair(g, tangents[a], tangents[a]));
            const double lb = std::sqrt(metric_pair(g, tangents[b], tangents[b]));
            worst = std::max(worst, std::abs(kahler_pair(g, tangents[a], tangents[b])) / (la * lb));
        }
    return worst;
}

namespace detail {

struct PointResult {
    PointRecord point;
    std::vector<SampleRecord> samples;
};

inline PointResult evaluate_point(const SubmanifoldSpec& spec, const RVec& u, std::size_t index,
                                  const std::vector<RVec>& directions, const SamplingPlan& plan,
                                  const CheckSet& checks) {
    PointResult res;
    res.point.u = u;
    const Jet j = jet_for(spec, u, plan.fd, plan.analytic);
    try {
        const TangentSplit split = tangent_split(j);
        res.point.rank_H = split.rank_H;
        res.point.rank_D = split.rank_D;
        res.point.rank_E = split.rank_E;
        res.point.rank_N = split.rank_N;
    } catch (const Error& e) {
        if (e.code() != Errc::rank_ambiguous) throw;
        res.point.rank_ambiguous = true;
    }
    if (spec.k >= 2 * spec.n) return res;

    const TangentBasis tb = tangent_basis(j);
    const std::vector<CVec> normals = normal_basis(tb);
    CVec trace_vec = CVec::Zero(tb.z.dim());
    double ii2 = 0.0;
    for (const auto& nm : normals) {
        const SecondFundamentalData d = second_fundamental(j, nm);
        trace_vec += d.H.trace() * nm;
        ii2 += d.H.squaredNorm();
    }
    res.point.trace_norm = trace_vec.norm();
    res.point.ii_norm = std::sqrt(ii2);

    for (const RVec& coeffs : directions) {
        SampleRecord rec;
        rec.point = index;
        rec.u = u;
        rec.nu = coeffs;
        const CVec nu = combine(normals, coeffs);
        const SecondFundamentalData data = second_fundamental(j, nu);
        const AdaptedFrame std_frame = standardized(data.frame);
        const AlignedData al = align(data.H, std_frame);
        rec.theta = al.theta;
        rec.normal_branch = al.normal_branch;
        rec.aligned_H = al.H;
        if (checks.austerity) rec.residuals = austere_residuals(al.H, al.theta);
        for (double tau : plan.taus) {
            const NormalBundleTangentBasis S = build_S(data, std_frame, tau);
            if (checks.lagrangian) {
                rec.lagrangian_defect =
                    std::max(rec.lagrangian_defect, lagrangian_defect(S, stenzel_form_standard(tau, spec.n)));
                rec.embedding_defect = std::max(
                    rec.embedding_defect, embedding_defect(spec, u, normals, coeffs, tau, plan.fd, plan.analytic));
            }
            if (checks.det_s && tau > 0.0) {
                const cplx direct = det_S_direct(S);
                const cplx closed = det_S_closed(al.H, al.theta, tau, spec.n, spec.k);
                rec.det_s_error = std::max(rec.det_s_error, std::abs(direct - closed) / std::abs(direct));
                rec.det_s_phase.push_back(phase_normalized(direct, tau, spec.n, spec.k).imag());
            }
        }
        if (checks.lemma2 && spec.n >= 2 && spec.k >= 1) rec.lemma2_error = lemma2_check(al.frame, al.theta);
        res.samples.push_back(std::move(rec));
    }
    return res;
}

}  // namespace detail

inline AusterityReport is_austere(const SubmanifoldSpec& spec, const SamplingPlan& plan, const Tolerances& tols,
                                  const CheckSet& checks = {}) {
    require(spec.k >= 1 && spec.k <= 2 * spec.n, Errc::bad_dimension, "need 1 <= k <= 2n");
    require(static_cast<bool>(spec.chart), Errc::config, "submanifold has no chart");
    for (double tau : plan.taus)
        require(tau >= 0.0 && tau < 1.0, Errc::tau_out_of_range, "tau must lie in [0, 1)");
    std::vector<int> counts = plan.grid;
    if (counts.empty()) counts.assign(static_cast<std::size_t>(spec.k), default_grid(spec.k));
    if (counts.size() == 1 && spec.k > 1) counts.assign(static_cast<std::size_t>(spec.k), counts.front());
    const std::vector<RVec> grid = parameter_grid(spec.domain, counts);

    const int m = 2 * spec.n - spec.k;
    std::vector<RVec> directions = normal_directions(m, plan.normals);
    std::mt19937_64 rng(plan.seed);
    for (auto& v : random_normal_directions(m, plan.random_normals, rng)) directions.push_back(std::move(v));

    std::vector<detail::PointResult> results(grid.size());
    std::vector<std::exception_ptr> errors(grid.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < grid.size(); i += stride) {
            try {
                results[i] = detail::evaluate_point(spec, grid[i], i, directions, plan, checks);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const auto threads = static_cast<std::size_t>(std::max(1, plan.threads));
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    AusterityReport rep;
    rep.label = spec.label;
    rep.n = spec.n;
    rep.k = spec.k;
    rep.tolerances = tols;
    for (auto& r : results) {
        rep.ambiguous_points += r.point.rank_ambiguous ? 1 : 0;
        rep.max_trace = std::max(rep.max_trace, r.point.trace_norm);
        rep.max_ii_norm = std::max(rep.max_ii_norm, r.point.ii_norm);
        rep.points.push_back(std::move(r.point));
        for (auto& s : r.samples) {
            if (s.residuals.size() > 0) rep.max_residual = std::max(rep.max_residual, s.residuals.cwiseAbs().maxCoeff());
            rep.max_lagrangian_defect = std::max(rep.max_lagrangian_defect, s.lagrangian_defect);
            rep.max_embedding_defect = std::max(rep.max_embedding_defect, s.embedding_defect);
            rep.max_det_s_error = std::max(rep.max_det_s_error, s.det_s_error);
            if (s.lemma2_error) rep.max_lemma2_error = std::max(rep.max_lemma2_error, *s.lemma2_error);
            rep.samples.push_back(std::move(s));
        }
    }
    if (rep.ambiguous_points > 0 && !plan.allow_ambiguous)
        rep.verdict = Verdict::inconclusive;
    else
        rep.verdict = rep.max_residual <= tols.austere ? Verdict::austere_within_tol : Verdict::not_austere;
    return rep;
}

enum class SurfaceBranch { holomorphic, totally_geodesic, not_austere, inconclusive };

inline const char* to_string(SurfaceBranch b) {
    switch (b) {
        case SurfaceBranch::holomorphic: return "holomorphic";
        case SurfaceBranch::totally_geodesic: return "totally_geodesic";
        case SurfaceBranch::not_austere: return "not_austere";
        case SurfaceBranch::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Classification {
    SurfaceBranch branch = SurfaceBranch::inconclusive;
    AusterityReport report;
};

inline SurfaceBranch classify_report(const AusterityReport& rep) {
    require(rep.k == 2, Errc::wrong_dimension, "classification is defined for surfaces only");
    if (rep.ambiguous_points > 0) return SurfaceBranch::inconclusive;
    bool all_holomorphic = true;
    bool all_totally_real = true;
    for (const auto& p : rep.points) {
        all_holomorphic = all_holomorphic && p.rank_H == 2;
        all_totally_real = all_totally_real && p.rank_H == 0;
    }
    if (all_holomorphic) return SurfaceBranch::holomorphic;
    if (rep.verdict == Verdict::not_austere) return SurfaceBranch::not_austere;
    if (all_totally_real && rep.max_ii_norm <= rep.tolerances.austere) return SurfaceBranch::totally_geodesic;
    return SurfaceBranch::inconclusive;
}

inline Classification surface_classify(const SubmanifoldSpec& spec, const SamplingPlan& plan, const Tolerances& tols) {
    require(spec.k == 2, Errc::wrong_dimension, "classification is defined for surfaces only");
    Classification c;
    c.report = is_austere(spec, plan, tols);
    c.branch = classify_report(c.report);
    return c;
}

}  // namespace austere
