#pragma once

// The Stein-manifold side. T CP^n is embedded in CP^n x CP^n minus the
// quadric sum z_j w_j = 0; in affine coordinates (Z; W) the Stenzel Kahler
// form has the hermitian coefficient matrix G built from Lee's exhaustion
// A / |B|^2 with potential f, f' = N^{-1/2}.

#include <optional>
#include <utility>

#include "austere/linalg.hpp"

namespace austere {

/// Pair of homogeneous representatives (z; w) in C^{n+1} x C^{n+1}.
struct HomogeneousPair {
    CVec z;
    CVec w;
};

struct AffinePoint {
    CVec Z;
    CVec W;

    [[nodiscard]] int n() const noexcept { return static_cast<int>(Z.size()); }
    /// 1 + Z.W with the bilinear dot product.
    [[nodiscard]] cplx quadric() const { return 1.0 + (Z.transpose() * W)(0, 0); }
};

struct ExhaustionData {
    double A;
    cplx B;
    double N;
};

struct StenzelForm {
    CMat G;
    std::optional<double> tau;  // set when built at the standard point

    [[nodiscard]] int n() const noexcept { return static_cast<int>(G.rows() / 2); }
    [[nodiscard]] double hermiticity_error() const { return max_abs(CMat(G - G.adjoint())); }
    [[nodiscard]] double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (G + G.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

/// sinh(mu)/mu with its series below mu = 1e-8.
inline double sinhc(double mu) { return mu < 1e-8 ? 1.0 + mu * mu / 6.0 : std::sinh(mu) / mu; }

/// (zeta, xi) with xi . conj(zeta) = 0 maps to
/// (cosh mu zeta + i sinhc(mu) xi; cosh mu conj(zeta) + i sinhc(mu) conj(xi)),
/// mu = |xi| / |zeta|.
inline HomogeneousPair phi_hat(const CVec& zeta, const CVec& xi) {
    require(zeta.size() == xi.size(), Errc::dimension_mismatch, "zeta and xi differ in size");
    const double nz = zeta.norm();
    require(nz > 1e-14, Errc::not_in_b, "zeta must be nonzero");
    const cplx orth = (xi.transpose() * zeta.conjugate())(0, 0);
    require(std::abs(orth) <= 1e-10 * std::max(1.0, nz * xi.norm()), Errc::not_in_b,
            "xi . conj(zeta) must vanish");
    const double mu = xi.norm() / nz;
    const double c = std::cosh(mu);
    const cplx s = I * sinhc(mu);
    return {c * zeta + s * xi, c * zeta.conjugate() + s * xi.conjugate()};
}

inline AffinePoint affine_chart(const HomogeneousPair& p) {
    require(p.z.size() == p.w.size() && p.z.size() >= 2, Errc::dimension_mismatch, "bad homogeneous pair");
    require(std::abs(p.z(0)) > 1e-12 && std::abs(p.w(0)) > 1e-12, Errc::chart_singular,
            "z_0 or w_0 vanishes; point outside the affine chart");
    const auto n = p.z.size() - 1;
    return {p.z.tail(n) / p.z(0), p.w.tail(n) / p.w(0)};
}

inline ExhaustionData exhaustion(const AffinePoint& p) {
    const cplx B = p.quadric();
    require(std::abs(B) > 1e-12, Errc::not_in_b, "point lies on the quadric 1 + Z.W = 0");
    const double A = (1.0 + p.Z.squaredNorm()) * (1.0 + p.W.squaredNorm());
    return {A, B, A / std::norm(B)};
}

/// Hermitian matrix of i dd-bar f at an arbitrary affine point.
inline StenzelForm stenzel_form_general(const AffinePoint& p) {
    const int n = p.n();
    require(p.W.size() == n, Errc::dimension_mismatch, "Z and W differ in size");
    const ExhaustionData ex = exhaustion(p);
    const double z2 = p.Z.squaredNorm();
    const double w2 = p.W.squaredNorm();
    const double b2 = std::norm(ex.B);
    const double fp = 1.0 / std::sqrt(ex.N);
    const double fpp = -0.5 * std::pow(ex.N, -1.5);

    // d dbar A, rows indexed by (dZ, dW), columns by (dZbar, dWbar).
    CMat ddA = CMat::Zero(2 * n, 2 * n);
    ddA.topLeftCorner(n, n).diagonal().setConstant(1.0 + w2);
    ddA.bottomRightCorner(n, n).diagonal().setConstant(1.0 + z2);
    ddA.topRightCorner(n, n) = p.Z.conjugate() * p.W.transpose();
    ddA.bottomLeftCorner(n, n) = p.W.conjugate() * p.Z.transpose();

    CVec dA(2 * n), dbA(2 * n), dB(2 * n);
    dA << (1.0 + w2) * p.Z.conjugate(), (1.0 + z2) * p.W.conjugate();
    dbA << (1.0 + w2) * p.Z, (1.0 + z2) * p.W;
    dB << p.W, p.Z;
    const CVec left = dA - (ex.A / ex.B) * dB;
    const CVec right = dbA - (ex.A / std::conj(ex.B)) * dB.conjugate();
    const double coeff = fpp / (b2 * fp) + 1.0 / ex.A;

    CMat G = ddA - (1.0 / ex.A) * dA * dbA.transpose() + coeff * left * right.transpose();
    G *= fp / b2;
    return {G, std::nullopt};
}

/// Closed form of G at Z = -tau E_n, W = tau E_n.
inline StenzelForm stenzel_form_standard(double tau, int n) {
    require(tau >= 0.0 && tau < 1.0 - 1e-8, Errc::tau_out_of_range, "tau must lie in [0, 1 - 1e-8)");
    require(n >= 1, Errc::bad_dimension, "need n >= 1");
    const double t2 = tau * tau;
    const double q = 2.0 * t2 / ((1.0 - t2) * (1.0 - t2));
    CMat G = CMat::Identity(2 * n, 2 * n) * (1.0 + t2);
    const Eigen::Index last = n - 1;
    G(last, last) += q - t2;
    G(n + last, n + last) += q - t2;
    G(last, n + last) -= q;
    G(n + last, last) -= q;
    G /= (1.0 - t2 * t2);
    return {G, tau};
}

/// The affine image of the standard point (E_0, i t E_n), tau = tanh t.
inline AffinePoint standard_affine_point(double tau, int n) {
    AffinePoint p{CVec::Zero(n), CVec::Zero(n)};
    p.Z(n - 1) = -tau;
    p.W(n - 1) = tau;
    return p;
}

namespace detail {

// G(i, j) multiplies dX_i ^ dXbar_j, so the hermitian pairing is
// v^T G conj(w) = conj(conj(v)^T conj(G) w). Both agree with conj(v) G w^T
// when G is real, as it is at the standard point.
inline cplx hermitian_pair(const StenzelForm& g, const CVec& v, const CVec& w) {
    require(v.size() == g.G.rows() && w.size() == g.G.rows(), Errc::dimension_mismatch,
            "tangent vectors must have length 2n");
    return (v.conjugate().transpose() * g.G.conjugate() * w)(0, 0);
}

}  // namespace detail

/// g(v, w) = 2 Re(conj(v) G w^T).
inline double metric_pair(const StenzelForm& g, const CVec& v, const CVec& w) {
    return 2.0 * detail::hermitian_pair(g, v, w).real();
}

/// Omega(v, w) = -2 Im(conj(v) G w^T).
inline double kahler_pair(const StenzelForm& g, const CVec& v, const CVec& w) {
    return -2.0 * detail::hermitian_pair(g, v, w).imag();
}

}  // namespace austere
