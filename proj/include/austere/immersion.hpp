#pragma once

// Submanifolds of CP^n given by a parametric lift into S^{2n+1}, and the
// pointwise geometry extracted from a 2-jet of that lift: tangent frame,
// the splitting TM + NM = (H + D) + (E + N), second fundamental form in a
// normal direction, and the Kahler angle.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "austere/cpn_core.hpp"

namespace austere {

/// Chart evaluated in extended precision; must return unit vectors.
using ChartFn = std::function<XCVec(const XRVec&)>;

/// Value, first and second partials of the lift at a parameter point.
struct Jet {
    CVec z;
    std::vector<CVec> d1;               // d1[a] = d chart / du_a
    std::vector<std::vector<CVec>> d2;  // d2[a][b], symmetric
};

using JetFn = std::function<Jet(const RVec&)>;

struct ParameterBox {
    RVec lo;
    RVec hi;

    [[nodiscard]] bool contains(const RVec& u, double margin = 0.0) const {
        for (Eigen::Index a = 0; a < u.size(); ++a)
            if (u(a) - margin < lo(a) || u(a) + margin > hi(a)) return false;
        return true;
    }
};

struct SubmanifoldSpec {
    int k = 0;  // real dimension of M
    int n = 0;  // complex dimension of the ambient CP^n
    ChartFn chart;
    ParameterBox domain;
    std::string label;
    JetFn exact_jet;  // optional closed-form jet, used as an oracle
};

struct FiniteDifference {
    double step = 1e-4;
    bool richardson = false;
};

namespace detail {

inline XCVec eval_chart(const SubmanifoldSpec& spec, const RVec& u) {
    XRVec x = u.cast<ext>();
    XCVec f = spec.chart(x);
    require(f.size() == spec.n + 1, Errc::dimension_mismatch, "chart returned a vector of the wrong size");
    return f;
}

struct RawJet {
    XCVec z;
    std::vector<XCVec> d1;
    std::vector<std::vector<XCVec>> d2;
};

inline RawJet central_jet(const SubmanifoldSpec& spec, const RVec& u, ext h) {
    const int k = spec.k;
    auto at = [&](int a, ext sa, int b, ext sb) {
        XRVec x = u.cast<ext>();
        if (a >= 0) x(a) += sa * h;
        if (b >= 0) x(b) += sb * h;
        return XCVec(spec.chart(x));
    };
    RawJet out;
    out.z = at(-1, 0, -1, 0);
    out.d1.resize(static_cast<std::size_t>(k));
    out.d2.assign(static_cast<std::size_t>(k), std::vector<XCVec>(static_cast<std::size_t>(k)));
    std::vector<XCVec> plus(static_cast<std::size_t>(k)), minus(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
        plus[static_cast<std::size_t>(a)] = at(a, 1, -1, 0);
        minus[static_cast<std::size_t>(a)] = at(a, -1, -1, 0);
        out.d1[static_cast<std::size_t>(a)] = (plus[static_cast<std::size_t>(a)] - minus[static_cast<std::size_t>(a)]) / (2 * h);
        out.d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] =
            (plus[static_cast<std::size_t>(a)] - ext(2) * out.z + minus[static_cast<std::size_t>(a)]) / (h * h);
    }
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            XCVec mixed = (at(a, 1, b, 1) - at(a, 1, b, -1) - at(a, -1, b, 1) + at(a, -1, b, -1)) / (4 * h * h);
            out.d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = mixed;
            out.d2[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = mixed;
        }
    return out;
}

inline CVec narrow(const XCVec& v) { return v.cast<cplx>(); }

}  // namespace detail

/// Second-order central differences of the lift at u. With `richardson`
/// the step-h and step-h/2 estimates are combined to fourth order.
inline Jet jet(const SubmanifoldSpec& spec, const RVec& u, const FiniteDifference& fd = {}) {
    require(fd.step > 0.0, Errc::out_of_domain, "finite-difference step must be positive");
    require(u.size() == spec.k, Errc::dimension_mismatch, "parameter point has the wrong dimension");
    require(spec.domain.contains(u, fd.step), Errc::out_of_domain,
            "parameter point and its step neighbourhood leave the domain box");
    const ext h = fd.step;
    detail::RawJet raw = detail::central_jet(spec, u, h);
    if (fd.richardson) {
        const detail::RawJet half = detail::central_jet(spec, u, h / 2);
        for (std::size_t a = 0; a < raw.d1.size(); ++a) {
            raw.d1[a] = (ext(4) * half.d1[a] - raw.d1[a]) / ext(3);
            for (std::size_t b = 0; b < raw.d1.size(); ++b)
                raw.d2[a][b] = (ext(4) * half.d2[a][b] - raw.d2[a][b]) / ext(3);
        }
    }
    const ext nz = raw.z.norm();
    require(std::abs(static_cast<double>(nz) - 1.0) <= 1e-10, Errc::not_unit,
            "chart value is not a unit vector (lift must land in S^{2n+1})");
    Jet out;
    out.z = detail::narrow(raw.z / nz);
    for (const auto& v : raw.d1) out.d1.push_back(detail::narrow(v));
    out.d2.resize(raw.d2.size());
    for (std::size_t a = 0; a < raw.d2.size(); ++a)
        for (const auto& v : raw.d2[a]) out.d2[a].push_back(detail::narrow(v));
    return out;
}

/// Jet from the closed-form provider when present, otherwise by finite differences.
inline Jet jet_for(const SubmanifoldSpec& spec, const RVec& u, const FiniteDifference& fd, bool analytic) {
    if (analytic) {
        require(static_cast<bool>(spec.exact_jet), Errc::config, "no closed-form jet for " + spec.label);
        return spec.exact_jet(u);
    }
    return jet(spec, u, fd);
}

/// Horizontal tangent vectors X_a, their Gram-Schmidt orthonormalization
/// e_alpha, and the triangular coordinates X_a = sum_alpha e_alpha L(alpha, a).
struct TangentBasis {
    UnitHopfPoint z;
    std::vector<CVec> horizontal;
    std::vector<CVec> orthonormal;
    RMat coords;
};

inline TangentBasis tangent_basis(const Jet& j) {
    UnitHopfPoint z(j.z, tol::frame);
    const auto k = static_cast<Eigen::Index>(j.d1.size());
    TangentBasis tb{z, {}, {}, RMat::Zero(k, k)};
    std::vector<CVec> accepted{z.vec(), I * z.vec()};
    for (Eigen::Index a = 0; a < k; ++a) {
        CVec x = horizontal_project(z, j.d1[static_cast<std::size_t>(a)]);
        tb.horizontal.push_back(x);
        CVec v = detail::orthogonalize(x, accepted);
        const double pivot = v.norm();
        require(pivot >= 1e-10 * std::max(1.0, x.norm()), Errc::immersion_failure,
                "horizontal partial derivatives are linearly dependent");
        v /= pivot;
        accepted.push_back(v);
        tb.orthonormal.push_back(v);
    }
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index al = 0; al < k; ++al)
            tb.coords(al, a) = real_inner(tb.orthonormal[static_cast<std::size_t>(al)], tb.horizontal[static_cast<std::size_t>(a)]);
    return tb;
}

/// Orthonormal basis of the horizontal normal space (2n - k vectors).
inline std::vector<CVec> normal_basis(const TangentBasis& tb) {
    const int n = tb.z.n();
    const auto k = static_cast<int>(tb.orthonormal.size());
    RMat existing(2 * (n + 1), k + 2);
    existing.col(0) = realify(tb.z.vec());
    existing.col(1) = realify(I * tb.z.vec());
    for (int a = 0; a < k; ++a) existing.col(a + 2) = realify(tb.orthonormal[static_cast<std::size_t>(a)]);
    const RMat comp = complete_real(existing, 2 * (n + 1), 2 * n - k);
    std::vector<CVec> out;
    for (Eigen::Index c = 0; c < comp.cols(); ++c) out.push_back(complexify(comp.col(c)));
    return out;
}

inline CVec combine(const std::vector<CVec>& normals, const RVec& coeffs) {
    require(static_cast<Eigen::Index>(normals.size()) == coeffs.size(), Errc::dimension_mismatch,
            "normal coefficient vector has the wrong length");
    require(!normals.empty(), Errc::dimension_mismatch, "normal space is zero-dimensional");
    CVec v = CVec::Zero(normals.front().size());
    for (std::size_t m = 0; m < normals.size(); ++m) v += coeffs(static_cast<Eigen::Index>(m)) * normals[m];
    const double nv = v.norm();
    require(nv > 1e-14, Errc::zero_vector, "normal coefficients vanish");
    return v / nv;
}

struct SecondFundamentalData {
    RMat H;        // k x k, in the tangent vectors of `frame`
    RVec r;        // r_1..r_{2n-1}: components of i e_{2n} along e_1..e_{2n-1}
    double theta;  // angle between J nu and T_pM
    AdaptedFrame frame;

    [[nodiscard]] double cos_theta() const { return std::min(1.0, r.head(frame.k).norm()); }
    /// atan2 of the normal and tangential parts of J nu; acos loses half the
    /// digits near theta = 0.
    [[nodiscard]] double angle() const {
        return std::atan2(r.tail(r.size() - frame.k).norm(), r.head(frame.k).norm());
    }
    [[nodiscard]] double vertical_component() const { return real_inner(I * frame.distinguished(), frame.e[0]); }
};

/// Second fundamental form of M in the normal direction nu (a horizontal
/// vector at the jet's base point).
///
/// Uses the horizontal-lift identity: for a lift g with horizontal first
/// derivatives at u, h_ab = <d_a d_b g, nu>. A general lift f differs from
/// such a g by a phase e^{i psi} with d psi = -c, c_a = <d_a f, i f>, which
/// contributes -c_a <i d_b f, nu> - c_b <i d_a f, nu>. The result is
/// independent of the phase gauge of the chart.
inline SecondFundamentalData second_fundamental(const Jet& j, const CVec& nu) {
    const TangentBasis tb = tangent_basis(j);
    const auto& z = tb.z;
    const int k = static_cast<int>(tb.orthonormal.size());
    require(nu.size() == z.dim(), Errc::dimension_mismatch, "normal has the wrong size");
    require(std::abs(nu.norm() - 1.0) <= 1e-6, Errc::not_unit, "normal must be a unit vector");
    require(verticality(z, nu) <= 1e-6, Errc::not_normal, "normal is not horizontal");
    for (const auto& e : tb.orthonormal)
        require(std::abs(real_inner(e, nu)) <= 1e-6, Errc::not_normal, "normal is not orthogonal to T_pM");

    std::vector<CVec> accepted{z.vec(), I * z.vec()};
    accepted.insert(accepted.end(), tb.orthonormal.begin(), tb.orthonormal.end());
    CVec clean = detail::orthogonalize(nu, accepted);
    clean /= clean.norm();

    SecondFundamentalData out;
    out.frame = complete_adapted_frame(z, tb.horizontal, clean);
    const CVec& nv = out.frame.distinguished();

    RMat coords(k, k);
    for (int a = 0; a < k; ++a)
        for (int al = 0; al < k; ++al)
            coords(al, a) = real_inner(out.frame.tangent(al + 1), tb.horizontal[static_cast<std::size_t>(a)]);

    RVec c(k);
    for (int a = 0; a < k; ++a) c(a) = real_inner(j.d1[static_cast<std::size_t>(a)], I * z.vec());
    RMat hc(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            hc(a, b) = real_inner(j.d2[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)], nv) -
                       c(a) * real_inner(I * j.d1[static_cast<std::size_t>(b)], nv) -
                       c(b) * real_inner(I * j.d1[static_cast<std::size_t>(a)], nv);
    if (k > 0) {
        const RMat inv = coords.inverse();
        out.H = symmetrize(inv.transpose() * hc * inv);
    } else {
        out.H = RMat(0, 0);
    }

    const int n = out.frame.n;
    out.r = RVec(2 * n - 1);
    const CVec inu = I * nv;
    for (int i = 1; i <= 2 * n - 1; ++i) out.r(i - 1) = real_inner(inu, out.frame.e[static_cast<std::size_t>(i)]);
    out.theta = out.angle();
    return out;
}

inline SecondFundamentalData second_fundamental(const SubmanifoldSpec& spec, const RVec& u, const CVec& nu,
                                                const FiniteDifference& fd = {}) {
    return second_fundamental(jet(spec, u, fd), nu);
}

/// Adapted frame at u whose distinguished normal is nu (given directly).
inline AdaptedFrame tangent_frame(const Jet& j, const CVec& nu) { return second_fundamental(j, nu).frame; }

/// Adapted frame at u whose distinguished normal is selected by coefficients
/// in the deterministic normal basis.
inline AdaptedFrame tangent_frame(const SubmanifoldSpec& spec, const RVec& u, const RVec& nu_coeffs,
                                  const FiniteDifference& fd = {}) {
    const Jet j = jet(spec, u, fd);
    const TangentBasis tb = tangent_basis(j);
    return tangent_frame(j, combine(normal_basis(tb), nu_coeffs));
}

inline double kahler_angle(const Jet& j, const CVec& nu) { return second_fundamental(j, nu).theta; }

inline double kahler_angle(const SubmanifoldSpec& spec, const RVec& u, const CVec& nu,
                           const FiniteDifference& fd = {}) {
    return second_fundamental(spec, u, nu, fd).theta;
}

/// Orthogonal splitting TM = H + D, NM = E + N at a point. H is the largest
/// J-invariant subspace of TM, E the normal part of J(D), N its normal
/// complement.
struct TangentSplit {
    int rank_H = 0;
    int rank_D = 0;
    int rank_E = 0;
    int rank_N = 0;
    std::vector<CVec> H, D, E, N;
    RVec singular_values;  // of (tangential projection) o J on TM
};

struct SplitThresholds {
    double invariant = 1e-6;  // sigma > 1 - invariant counts as J-invariant
    double ambiguous = 1e-4;  // sigma in [1 - ambiguous, 1 - invariant] is RankAmbiguous
};

inline TangentSplit tangent_split(const Jet& j, const SplitThresholds& th = {}) {
    const TangentBasis tb = tangent_basis(j);
    const int k = static_cast<int>(tb.orthonormal.size());
    const int n = tb.z.n();
    TangentSplit out;
    out.singular_values = RVec(k);
    RMat jt(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            jt(a, b) = real_inner(tb.orthonormal[static_cast<std::size_t>(a)], I * tb.orthonormal[static_cast<std::size_t>(b)]);
    RMat right = RMat::Identity(k, k);
    if (k > 0) {
        Eigen::JacobiSVD<RMat> svd(jt, Eigen::ComputeFullV);
        out.singular_values = svd.singularValues();
        right = svd.matrixV();
    }
    for (int c = 0; c < k; ++c) {
        const double s = out.singular_values(c);
        require(!(s >= 1.0 - th.ambiguous && s <= 1.0 - th.invariant), Errc::rank_ambiguous,
                "tangent space is nearly but not exactly J-invariant in some direction");
        CVec v = CVec::Zero(tb.z.dim());
        for (int b = 0; b < k; ++b) v += right(b, c) * tb.orthonormal[static_cast<std::size_t>(b)];
        (s > 1.0 - th.invariant ? out.H : out.D).push_back(v);
    }
    out.rank_H = static_cast<int>(out.H.size());
    out.rank_D = static_cast<int>(out.D.size());

    // E: normal parts of J d for d in D, orthonormalized.
    std::vector<CVec> accepted{tb.z.vec(), I * tb.z.vec()};
    accepted.insert(accepted.end(), tb.orthonormal.begin(), tb.orthonormal.end());
    for (const auto& d : out.D) {
        CVec v = detail::orthogonalize(I * d, accepted);
        const double nv = v.norm();
        require(nv > th.invariant, Errc::rank_ambiguous, "J(D) has a vanishing normal component");
        v /= nv;
        accepted.push_back(v);
        out.E.push_back(v);
    }
    out.rank_E = static_cast<int>(out.E.size());
    out.rank_N = 2 * n - k - out.rank_E;
    if (out.rank_N > 0) {
        RMat existing(2 * (n + 1), static_cast<Eigen::Index>(accepted.size()));
        for (std::size_t c = 0; c < accepted.size(); ++c) existing.col(static_cast<Eigen::Index>(c)) = realify(accepted[c]);
        const RMat comp = complete_real(existing, 2 * (n + 1), out.rank_N);
        for (Eigen::Index c = 0; c < comp.cols(); ++c) out.N.push_back(complexify(comp.col(c)));
    }
    return out;
}

inline TangentSplit tangent_split(const SubmanifoldSpec& spec, const RVec& u, const FiniteDifference& fd = {},
                                  const SplitThresholds& th = {}) {
    return tangent_split(jet(spec, u, fd), th);
}

}  // namespace austere
