#pragma once

// Example submanifolds with known verdicts. Charts are evaluated in
// extended precision; each entry also carries a closed-form jet.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "austere/austerity.hpp"
#include "austere/immersion.hpp"

namespace austere {

enum class Expected { austere, not_austere, geodesic, totally_geodesic, holomorphic };

inline const char* to_string(Expected e) {
    switch (e) {
        case Expected::austere: return "austere";
        case Expected::not_austere: return "not_austere";
        case Expected::geodesic: return "geodesic";
        case Expected::totally_geodesic: return "totally_geodesic";
        case Expected::holomorphic: return "holomorphic";
    }
    return "?";
}

inline Verdict expected_verdict(Expected e) {
    return e == Expected::not_austere ? Verdict::not_austere : Verdict::austere_within_tol;
}

/// Closed-form second fundamental form in the Gram-Schmidt basis of the
/// horizontal partials at u, for the unit normal nu.
using SecondFormFn = std::function<RMat(const RVec& u, const CVec& nu)>;

struct CatalogEntry {
    SubmanifoldSpec spec;
    Expected expected = Expected::austere;
    std::optional<SurfaceBranch> expected_branch;  // surfaces only
    SecondFormFn analytic_II;
    std::optional<double> frozen_trace;  // regression value of sup |R_0|
    std::string provenance;
};

namespace detail {

/// Jet of f = F / |F| from the jet of an unnormalized lift F.
inline Jet normalized_jet(const XCVec& F, const std::vector<XCVec>& dF, const std::vector<std::vector<XCVec>>& ddF) {
    const std::size_t k = dF.size();
    const ext rho = ext(1) / F.norm();
    auto re = [](const XCVec& a, const XCVec& b) { return a.dot(b).real(); };
    std::vector<ext> p(k);
    for (std::size_t a = 0; a < k; ++a) p[a] = re(F, dF[a]);
    const ext r3 = rho * rho * rho;
    const ext r5 = r3 * rho * rho;
    std::vector<ext> drho(k);
    for (std::size_t a = 0; a < k; ++a) drho[a] = -r3 * p[a];
    Jet out;
    out.z = (F * rho).cast<cplx>();
    out.d2.assign(k, std::vector<CVec>(k));
    for (std::size_t a = 0; a < k; ++a) out.d1.push_back((dF[a] * rho + F * drho[a]).cast<cplx>());
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            const ext ddrho = 3 * r5 * p[a] * p[b] - r3 * (re(dF[b], dF[a]) + re(F, ddF[a][b]));
            const XCVec v = ddF[a][b] * rho + dF[a] * drho[b] + dF[b] * drho[a] + F * ddrho;
            out.d2[a][b] = v.cast<cplx>();
        }
    return out;
}

inline ParameterBox unit_box(int k) { return {RVec::Constant(k, -1.0), RVec::Constant(k, 1.0)}; }

inline SecondFormFn zero_II(int k) {
    return [k](const RVec&, const CVec&) { return RMat(RMat::Zero(k, k)); };
}

}  // namespace detail

/// CP^m inside CP^n as the span of the first m+1 coordinates, m = k_complex.
/// Parameters are (Re w_1, Im w_1, ..., Re w_m, Im w_m) in the chart (1, w, 0).
inline CatalogEntry linear_subspace(int k_complex, int n) {
    require(k_complex >= 1 && k_complex <= n, Errc::bad_dimension, "need 1 <= k_complex <= n");
    const int k = 2 * k_complex;
    auto lift = [k_complex, n](const XRVec& u) {
        XCVec F = XCVec::Zero(n + 1);
        F(0) = 1;
        for (int j = 0; j < k_complex; ++j) F(j + 1) = XCplx(u(2 * j), u(2 * j + 1));
        return F;
    };
    CatalogEntry e;
    e.spec.k = k;
    e.spec.n = n;
    e.spec.label = "linear_cp" + std::to_string(k_complex) + "_cp" + std::to_string(n);
    e.spec.domain = detail::unit_box(k);
    e.spec.chart = [lift](const XRVec& u) { XCVec F = lift(u); return XCVec(F / F.norm()); };
    e.spec.exact_jet = [lift, k, k_complex, n](const RVec& u) {
        const XRVec x = u.cast<ext>();
        std::vector<XCVec> dF(static_cast<std::size_t>(k), XCVec::Zero(n + 1));
        for (int j = 0; j < k_complex; ++j) {
            dF[static_cast<std::size_t>(2 * j)](j + 1) = 1;
            dF[static_cast<std::size_t>(2 * j + 1)](j + 1) = XCplx(0, 1);
        }
        std::vector<std::vector<XCVec>> ddF(static_cast<std::size_t>(k),
                                            std::vector<XCVec>(static_cast<std::size_t>(k), XCVec::Zero(n + 1)));
        return detail::normalized_jet(lift(x), dF, ddF);
    };
    e.expected = Expected::totally_geodesic;
    if (k == 2) e.expected_branch = SurfaceBranch::holomorphic;
    e.analytic_II = detail::zero_II(k);
    e.provenance = "complex linear subspace; complex submanifolds are austere";
    return e;
}

/// Real points (1, u_1, u_2) / |.| of CP^2.
inline CatalogEntry real_projective_plane() {
    auto lift = [](const XRVec& u) {
        XCVec F(3);
        F << XCplx(1), XCplx(u(0)), XCplx(u(1));
        return F;
    };
    CatalogEntry e;
    e.spec.k = 2;
    e.spec.n = 2;
    e.spec.label = "rp2";
    e.spec.domain = detail::unit_box(2);
    e.spec.chart = [lift](const XRVec& u) { XCVec F = lift(u); return XCVec(F / F.norm()); };
    e.spec.exact_jet = [lift](const RVec& u) {
        std::vector<XCVec> dF(2, XCVec::Zero(3));
        dF[0](1) = 1;
        dF[1](2) = 1;
        std::vector<std::vector<XCVec>> ddF(2, std::vector<XCVec>(2, XCVec::Zero(3)));
        return detail::normalized_jet(lift(u.cast<ext>()), dF, ddF);
    };
    e.expected = Expected::totally_geodesic;
    e.expected_branch = SurfaceBranch::totally_geodesic;
    e.analytic_II = detail::zero_II(2);
    e.provenance = "totally real, totally geodesic surface";
    return e;
}

/// (1, w, w^2) / |.| with w = u_1 + i u_2.
inline CatalogEntry holomorphic_conic() {
    auto lift = [](const XRVec& u) {
        const XCplx w(u(0), u(1));
        XCVec F(3);
        F << XCplx(1), w, w * w;
        return F;
    };
    CatalogEntry e;
    e.spec.k = 2;
    e.spec.n = 2;
    e.spec.label = "conic";
    e.spec.domain = detail::unit_box(2);
    e.spec.chart = [lift](const XRVec& u) { XCVec F = lift(u); return XCVec(F / F.norm()); };
    e.spec.exact_jet = [lift](const RVec& u) {
        const XCplx w(u(0), u(1));
        const XCplx iu(0, 1);
        std::vector<XCVec> dF(2, XCVec::Zero(3));
        dF[0] << XCplx(0), XCplx(1), ext(2) * w;
        dF[1] << XCplx(0), iu, ext(2) * iu * w;
        std::vector<std::vector<XCVec>> ddF(2, std::vector<XCVec>(2, XCVec::Zero(3)));
        ddF[0][0](2) = 2;
        ddF[0][1](2) = ext(2) * iu;
        ddF[1][0](2) = ext(2) * iu;
        ddF[1][1](2) = -2;
        return detail::normalized_jet(lift(u.cast<ext>()), dF, ddF);
    };
    e.expected = Expected::holomorphic;
    e.expected_branch = SurfaceBranch::holomorphic;
    e.provenance = "holomorphic curve of degree two";
    return e;
}

namespace detail {

/// (cos a cos u, cos a sin u, sin a), a latitude circle of RP^2 in CP^2.
inline CatalogEntry circle(double a, const std::string& label) {
    const ext ca = std::cos(static_cast<ext>(a));
    const ext sa = std::sin(static_cast<ext>(a));
    auto at = [ca, sa](ext u, int order) {
        XCVec f(3);
        const ext c = std::cos(u), s = std::sin(u);
        switch (order) {
            case 0: f << XCplx(ca * c), XCplx(ca * s), XCplx(sa); break;
            case 1: f << XCplx(-ca * s), XCplx(ca * c), XCplx(0); break;
            default: f << XCplx(-ca * c), XCplx(-ca * s), XCplx(0); break;
        }
        return f;
    };
    CatalogEntry e;
    e.spec.k = 1;
    e.spec.n = 2;
    e.spec.label = label;
    e.spec.domain = unit_box(1);
    e.spec.chart = [at](const XRVec& u) { return at(u(0), 0); };
    e.spec.exact_jet = [at](const RVec& u) {
        const ext x = u(0);
        return Jet{at(x, 0).cast<cplx>(), {at(x, 1).cast<cplx>()}, {{at(x, 2).cast<cplx>()}}};
    };
    // Geodesic curvature tan(a) toward the pole, inside the totally geodesic RP^2.
    e.analytic_II = [a](const RVec& u, const CVec& nu) {
        CVec toward_pole(3);
        toward_pole << -std::sin(a) * std::cos(u(0)), -std::sin(a) * std::sin(u(0)), std::cos(a);
        return RMat(RMat::Constant(1, 1, std::tan(a) * real_inner(toward_pole, nu)));
    };
    return e;
}

}  // namespace detail

/// Great circle (a = 0) and latitude circle at height `radius_param`.
inline std::pair<CatalogEntry, CatalogEntry> geodesic_and_circle(double radius_param) {
    require(radius_param != 0.0 && std::abs(radius_param) < kPi / 2, Errc::bad_dimension,
            "circle parameter must lie in (-pi/2, pi/2) without 0");
    CatalogEntry great = detail::circle(0.0, "great_circle");
    great.expected = Expected::geodesic;
    great.provenance = "geodesic; a curve is austere exactly when it is a geodesic";
    CatalogEntry small = detail::circle(radius_param, "small_circle");
    small.expected = Expected::not_austere;
    small.provenance = "non-geodesic circle; nonzero mean curvature";
    if (radius_param == 0.3) small.frozen_trace = 0.30933624960962325;
    return {great, small};
}

inline constexpr double kTorusRadius1 = 0.5;
inline constexpr double kTorusRadius2 = 0.6;

/// (r_0, r_1 e^{i u_1}, r_2 e^{i u_2}) with r_0^2 + r_1^2 + r_2^2 = 1: a
/// Lagrangian torus that is not minimal unless all radii agree.
inline CatalogEntry nonminimal_torus(double r1 = kTorusRadius1, double r2 = kTorusRadius2) {
    require(r1 > 0.0 && r2 > 0.0 && r1 * r1 + r2 * r2 < 1.0, Errc::bad_dimension,
            "torus radii must be positive with r1^2 + r2^2 < 1");
    require(std::abs(r1 - r2) > 1e-3, Errc::bad_dimension, "equal radii are excluded from the negative controls");
    const ext R1 = r1, R2 = r2;
    const ext R0 = std::sqrt(ext(1) - R1 * R1 - R2 * R2);
    auto lift = [R0, R1, R2](const XRVec& u) {
        XCVec f(3);
        f << XCplx(R0), std::polar(R1, u(0)), std::polar(R2, u(1));
        return f;
    };
    CatalogEntry e;
    e.spec.k = 2;
    e.spec.n = 2;
    e.spec.label = "torus";
    e.spec.domain = detail::unit_box(2);
    e.spec.chart = lift;
    e.spec.exact_jet = [lift](const RVec& u) {
        const XCVec f = lift(u.cast<ext>());
        const XCplx iu(0, 1);
        XCVec d1 = XCVec::Zero(3), d2 = XCVec::Zero(3);
        d1(1) = iu * f(1);
        d2(2) = iu * f(2);
        XCVec d11 = XCVec::Zero(3), d22 = XCVec::Zero(3);
        d11(1) = -f(1);
        d22(2) = -f(2);
        const CVec zero = CVec::Zero(3);
        return Jet{f.cast<cplx>(), {d1.cast<cplx>(), d2.cast<cplx>()},
                   {{d11.cast<cplx>(), zero}, {zero, d22.cast<cplx>()}}};
    };
    const JetFn exact = e.spec.exact_jet;
    e.analytic_II = [exact](const RVec& u, const CVec& nu) { return second_fundamental(exact(u), nu).H; };
    e.expected = Expected::not_austere;
    e.expected_branch = SurfaceBranch::not_austere;
    if (r1 == kTorusRadius1 && r2 == kTorusRadius2) e.frozen_trace = 0.5847053462046864;
    e.provenance = "product of circles with unequal radii; not minimal";
    return e;
}

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names{"linear_cp1_cp2", "linear_cp1_cp1", "linear_cp2_cp3", "rp2",
                                                "conic",          "great_circle",   "small_circle",   "torus"};
    return names;
}

/// Entries checked by the full verification suite.
inline const std::vector<std::string>& default_suite() {
    static const std::vector<std::string> names{"linear_cp1_cp2", "conic", "rp2",
                                                "great_circle",   "small_circle", "torus"};
    return names;
}

inline constexpr double kSmallCircleRadius = 0.3;

inline CatalogEntry catalog_entry(const std::string& name) {
    if (name == "linear_cp1_cp2") return linear_subspace(1, 2);
    if (name == "linear_cp1_cp1") return linear_subspace(1, 1);
    if (name == "linear_cp2_cp3") return linear_subspace(2, 3);
    if (name == "rp2") return real_projective_plane();
    if (name == "conic") return holomorphic_conic();
    if (name == "great_circle") return geodesic_and_circle(kSmallCircleRadius).first;
    if (name == "small_circle") return geodesic_and_circle(kSmallCircleRadius).second;
    if (name == "torus") return nonminimal_torus();
    fail(Errc::unknown_entry, "no catalog entry named '" + name + "'");
}

}  // namespace austere
