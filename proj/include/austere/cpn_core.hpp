#pragma once

// Linear-algebra substrate for CP^n: unit representatives on S^{2n+1},
// horizontality with respect to the Hopf fibration, adapted frames and the
// unitary that moves a point-and-normal pair to standard position.
//
// Vectors are stored as Eigen column vectors but read as row vectors: a
// unitary U acts on the right, v -> vU, which is U^T v in storage.

#include <string>
#include <vector>

#include "austere/linalg.hpp"

namespace austere {

namespace tol {
inline constexpr double unit = 1e-12;          // |z| = 1 for normalized points
inline constexpr double frame = 1e-10;         // constructed frames
inline constexpr double user = 1e-8;           // user-supplied data
inline constexpr double horizontal_guard = 1e-8;
}  // namespace tol

class UnitHopfPoint {
public:
    /// Accepts an already-normalized vector; throws NotUnit otherwise.
    explicit UnitHopfPoint(CVec z, double tolerance = tol::frame) : z_(std::move(z)) {
        require(std::abs(z_.norm() - 1.0) <= tolerance, Errc::not_unit,
                "point is not on the unit sphere");
    }

    [[nodiscard]] const CVec& vec() const noexcept { return z_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return z_.size(); }
    /// Complex dimension n of the projective space.
    [[nodiscard]] int n() const noexcept { return static_cast<int>(z_.size()) - 1; }

private:
    CVec z_;
};

inline UnitHopfPoint normalize(const CVec& zeta) {
    const double nz = zeta.norm();
    require(nz >= 1e-14, Errc::zero_vector, "cannot normalize a vector of norm < 1e-14");
    return UnitHopfPoint(zeta / nz, tol::unit);
}

/// Removes the components along z and iz: v - <v,z> z - <v,iz> iz, which is
/// v - (z^H v) z.
inline CVec horizontal_project(const UnitHopfPoint& z, const CVec& v) {
    require(v.size() == z.dim(), Errc::dimension_mismatch, "vector/point size mismatch");
    return v - z.vec().dot(v) * z.vec();
}

/// |<v,z>| + |<v,iz>| packed as the modulus of z^H v.
inline double verticality(const UnitHopfPoint& z, const CVec& v) { return std::abs(z.vec().dot(v)); }

struct StandardizingUnitary {
    CMat U;

    /// Row-vector action v -> vU.
    [[nodiscard]] CVec apply(const CVec& v) const { return U.transpose() * v; }

    [[nodiscard]] double unitarity_error() const {
        return max_abs(CMat(U * U.adjoint() - CMat::Identity(U.rows(), U.cols())));
    }
};

/// Unitary U with zU = E_0 and hU = i E_n. Column 0 is conj(z), column n is
/// i conj(h); the remaining columns come from the pivoted completion, which
/// returns the identity when (z, h) is already standard.
inline StandardizingUnitary standardize(const UnitHopfPoint& z, const CVec& h) {
    const auto dim = z.dim();
    const int n = z.n();
    require(h.size() == dim, Errc::dimension_mismatch, "normal/point size mismatch");
    require(n >= 1, Errc::bad_dimension, "need n >= 1");
    require(std::abs(h.norm() - 1.0) <= tol::frame, Errc::not_unit, "h must be a unit vector");
    require(verticality(z, h) <= tol::horizontal_guard, Errc::not_horizontal,
            "h is not horizontal at z");
    CMat fixed(dim, 2);
    fixed.col(0) = z.vec().conjugate();
    fixed.col(1) = I * h.conjugate();
    const CMat rest = complete_hermitian(fixed, dim, n - 1);
    StandardizingUnitary out{CMat(dim, dim)};
    out.U.col(0) = fixed.col(0);
    for (int c = 0; c < n - 1; ++c) out.U.col(1 + c) = rest.col(c);
    out.U.col(n) = fixed.col(1);
    return out;
}

/// Orthonormal frame (z, e_0, ..., e_{2n}) along the lift of M with
/// e_0 = iz, e_1..e_k tangent and e_{k+1}..e_{2n} normal; e_{2n} is the
/// distinguished normal direction.
struct AdaptedFrame {
    CVec z;
    std::vector<CVec> e;  // size 2n+1, e[0] = iz
    int n = 0;
    int k = 0;

    [[nodiscard]] const CVec& tangent(int alpha) const { return e[static_cast<std::size_t>(alpha)]; }
    [[nodiscard]] const CVec& distinguished() const { return e[static_cast<std::size_t>(2 * n)]; }

    /// Rows realify(z), realify(e_0), ..., realify(e_{2n}).
    [[nodiscard]] RMat stacked() const {
        const auto m = 2 * n + 2;
        RMat out(m, m);
        out.row(0) = realify(z).transpose();
        for (int a = 0; a <= 2 * n; ++a) out.row(a + 1) = realify(e[static_cast<std::size_t>(a)]).transpose();
        return out;
    }

    [[nodiscard]] double orthogonality_error() const {
        const RMat m = stacked();
        return max_abs(RMat(m.transpose() * m - RMat::Identity(m.rows(), m.cols())));
    }

    [[nodiscard]] double orientation() const { return stacked().determinant(); }

    /// The same frame after the isometry v -> vU.
    [[nodiscard]] AdaptedFrame transformed(const StandardizingUnitary& u) const {
        AdaptedFrame out{u.apply(z), {}, n, k};
        out.e.reserve(e.size());
        for (const auto& v : e) out.e.push_back(u.apply(v));
        return out;
    }
};

namespace detail {

/// Real Gram-Schmidt of `v` against `accepted`, two passes.
inline CVec orthogonalize(CVec v, const std::vector<CVec>& accepted) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& a : accepted) v -= real_inner(a, v) * a;
    return v;
}

}  // namespace detail

/// Builds an oriented adapted frame. Tangent vectors are Gram-Schmidt
/// orthonormalized in the given order; the normal complement
/// e_{k+1}..e_{2n-1} is filled by the deterministic completion. If the
/// stacked matrix has determinant -1 the last completion vector (or e_k when
/// there is none) changes sign.
inline AdaptedFrame complete_adapted_frame(const UnitHopfPoint& z, const std::vector<CVec>& tangent_basis,
                                           const CVec& distinguished_normal) {
    const int n = z.n();
    const int k = static_cast<int>(tangent_basis.size());
    require(n >= 1, Errc::bad_dimension, "need n >= 1");
    require(k < 2 * n, Errc::bad_dimension, "a distinguished normal needs k < 2n");
    require(std::abs(distinguished_normal.norm() - 1.0) <= tol::user, Errc::not_unit,
            "distinguished normal must be a unit vector");
    require(verticality(z, distinguished_normal) <= tol::user, Errc::not_horizontal,
            "distinguished normal is not horizontal");

    const CVec iz = I * z.vec();
    const CVec nu = distinguished_normal / distinguished_normal.norm();
    std::vector<CVec> accepted{z.vec(), iz, nu};
    std::vector<CVec> tangents;
    for (const auto& t : tangent_basis) {
        require(t.size() == z.dim(), Errc::dimension_mismatch, "tangent vector size mismatch");
        require(verticality(z, t) <= tol::user * std::max(1.0, t.norm()), Errc::not_horizontal,
                "tangent vector is not horizontal");
        require(std::abs(real_inner(t, nu)) <= tol::user * std::max(1.0, t.norm()), Errc::not_normal,
                "distinguished normal is not orthogonal to the tangent space");
        CVec v = detail::orthogonalize(t, accepted);
        const double pivot = v.norm();
        require(pivot >= 1e-10 * std::max(1.0, t.norm()), Errc::degenerate_basis,
                "tangent vectors are linearly dependent");
        v /= pivot;
        accepted.push_back(v);
        tangents.push_back(v);
    }

    const int extra = 2 * n - 1 - k;
    RMat existing(2 * (n + 1), static_cast<Eigen::Index>(accepted.size()));
    for (std::size_t c = 0; c < accepted.size(); ++c) existing.col(static_cast<Eigen::Index>(c)) = realify(accepted[c]);
    const RMat completion = complete_real(existing, 2 * (n + 1), extra);

    AdaptedFrame frame;
    frame.z = z.vec();
    frame.n = n;
    frame.k = k;
    frame.e.push_back(iz);
    for (const auto& t : tangents) frame.e.push_back(t);
    for (int c = 0; c < extra; ++c) frame.e.push_back(complexify(completion.col(c)));
    frame.e.push_back(nu);

    if (frame.orientation() < 0.0) {
        if (extra > 0)
            frame.e[static_cast<std::size_t>(2 * n - 1)] *= -1.0;
        else
            frame.e[static_cast<std::size_t>(k)] *= -1.0;
    }
    return frame;
}

/// Moves the frame so that z = E_0 and e_{2n} = i E_n.
inline AdaptedFrame standardized(const AdaptedFrame& frame) {
    const auto u = standardize(UnitHopfPoint(frame.z, tol::user), frame.distinguished());
    return frame.transformed(u);
}

inline double standard_position_error(const AdaptedFrame& frame) {
    const auto dim = frame.z.size();
    const double dz = (frame.z - basis(dim, 0)).norm();
    const double dn = (frame.distinguished() - I * basis(dim, frame.n)).norm();
    return std::max(dz, dn);
}

}  // namespace austere
