#pragma once

// Pointwise kernel of the austerity test: the tangent matrix S of the
// embedded normal bundle at the standard point, its Lagrangian defect for
// the Stenzel form, det S by elimination and in closed form, the odd
// symmetric-polynomial residuals, and the clipped-frame determinant identity.

#include <random>
#include <vector>

#include "austere/cpn_core.hpp"
#include "austere/immersion.hpp"
#include "austere/stenzel_metric.hpp"

namespace austere {

/// Rows are the coefficient vectors (dZ; dW) of the embedded normal bundle
/// against the coframe (omega^alpha, psi~^mu_{2n}, dt).
struct NormalBundleTangentBasis {
    CMat S;
    double tau = 0.0;
    int n = 0;
    int k = 0;
    AdaptedFrame frame;
};

/// Tangent matrix at the standard point. `frame` must satisfy z = E_0 and
/// e_{2n} = i E_n; H is expressed in its tangent vectors and r holds
/// r_i = <i e_{2n}, e_i> for i = 1..2n-1.
inline NormalBundleTangentBasis build_S(const RMat& H, const RVec& r, const AdaptedFrame& frame, double tau) {
    const int n = frame.n;
    const int k = frame.k;
    require(standard_position_error(frame) <= 1e-8, Errc::not_standard_position,
            "frame must have z = E_0 and e_{2n} = i E_n");
    require(H.rows() == k && H.cols() == k, Errc::dimension_mismatch, "H must be k x k");
    require(r.size() == 2 * n - 1, Errc::dimension_mismatch, "r must have 2n - 1 entries");
    require(std::abs(tau) < 1.0, Errc::tau_out_of_range, "|tau| must be < 1");

    const double t2 = tau * tau;
    const CVec En = basis(n, n - 1);
    auto top = [&](int a) { return trim(frame.e[static_cast<std::size_t>(a)]); };
    auto bot = [&](int a) { return trim(frame.e[static_cast<std::size_t>(a)].conjugate()); };

    NormalBundleTangentBasis out{CMat::Zero(2 * n, 2 * n), tau, n, k, frame};
    for (int a = 1; a <= k; ++a) {
        CVec first = top(a) - t2 * r(a - 1) * En;
        CVec second = bot(a) - t2 * r(a - 1) * En;
        for (int b = 1; b <= k; ++b) {
            first -= I * tau * H(a - 1, b - 1) * top(b);
            second -= I * tau * H(a - 1, b - 1) * bot(b);
        }
        out.S.row(a - 1) = concat(first, second).transpose();
    }
    for (int m = k + 1; m <= 2 * n - 1; ++m)
        out.S.row(m - 1) = (I * tau * concat(top(m), bot(m))).transpose();
    out.S.row(2 * n - 1) = concat((t2 - 1.0) * En, (1.0 - t2) * En).transpose();
    return out;
}

inline NormalBundleTangentBasis build_S(const SecondFundamentalData& data, const AdaptedFrame& standard_frame,
                                        double tau) {
    return build_S(data.H, data.r, standard_frame, tau);
}

/// Components of i e_{2n} along e_1..e_{2n-1}.
inline RVec frame_r(const AdaptedFrame& frame) {
    RVec r(2 * frame.n - 1);
    const CVec inu = I * frame.distinguished();
    for (int i = 1; i <= 2 * frame.n - 1; ++i) r(i - 1) = real_inner(inu, frame.e[static_cast<std::size_t>(i)]);
    return r;
}

/// max |Omega(row_i, row_j)| for the Stenzel form built at the same tau.
inline double lagrangian_defect(const NormalBundleTangentBasis& s, const StenzelForm& g) {
    require(g.G.rows() == s.S.cols(), Errc::dimension_mismatch, "Stenzel form and S differ in size");
    if (g.tau) require(std::abs(*g.tau - s.tau) <= 1e-14, Errc::dimension_mismatch, "G built at a different tau");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < s.S.rows(); ++i)
        for (Eigen::Index j = i + 1; j < s.S.rows(); ++j)
            worst = std::max(worst, std::abs(kahler_pair(g, s.S.row(i).transpose(), s.S.row(j).transpose())));
    return worst;
}

inline cplx det_S_direct(const NormalBundleTangentBasis& s) { return s.S.fullPivLu().determinant(); }

inline cplx ipow(int e) {
    static constexpr cplx cycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return cycle[((e % 4) + 4) % 4];
}

/// (-2)^n i^{n-k} tau^{2n-k-1} (1 - tau^2): the factor common to both
/// determinant formulas.
inline cplx det_S_prefactor(double tau, int n, int k) {
    return std::pow(-2.0, n) * ipow(n - k) * std::pow(tau, 2 * n - k - 1) * (1.0 - tau * tau);
}

inline CMat shifted_identity(const RMat& H, double tau) {
    return CMat::Identity(H.rows(), H.cols()) - I * tau * H.cast<cplx>();
}

inline RMat clipped(const RMat& H) {
    if (H.rows() <= 1) return RMat(0, 0);
    return H.bottomRightCorner(H.rows() - 1, H.cols() - 1);
}

/// det S when J nu has no tangential part (r = 0).
inline cplx det_S_holomorphic(const RMat& H, double tau, int n, int k) {
    require(H.rows() == k && H.cols() == k, Errc::dimension_mismatch, "H must be k x k");
    return det_S_prefactor(tau, n, k) * det_or_one(shifted_identity(H, tau));
}

/// Closed form of det S for H in a basis whose first vector is the unit
/// tangential projection of J nu:
///   (-2)^n i^{n-k} tau^{2n-k-1} (1-tau^2) [det(I - i tau H) + tau^2 cos^2(theta) det(I - i tau H_clipped)].
inline cplx det_S_closed(const RMat& H, double theta, double tau, int n, int k) {
    require(H.rows() == k && H.cols() == k, Errc::dimension_mismatch, "H must be k x k");
    require(k <= 2 * n - 1, Errc::dimension_mismatch, "need k <= 2n - 1");
    const double c = std::cos(theta);
    cplx bracket = det_or_one(shifted_identity(H, tau));
    if (k >= 1) bracket += tau * tau * c * c * det_or_one(shifted_identity(clipped(H), tau));
    return det_S_prefactor(tau, n, k) * bracket;
}

/// det S divided by its prefactor: the bracket whose imaginary part must
/// vanish for all tau.
inline cplx phase_normalized(cplx det_s, double tau, int n, int k) { return det_s / det_S_prefactor(tau, n, k); }

/// e_1..e_k of the eigenvalues of the symmetrized H.
inline RVec elem_sym_polys(const RMat& H) {
    const auto k = H.rows();
    require(H.cols() == k, Errc::dimension_mismatch, "H must be square");
    RVec e = RVec::Zero(k + 1);
    e(0) = 1.0;
    if (k == 0) return RVec(0);
    Eigen::SelfAdjointEigenSolver<RMat> es(symmetrize(H), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double lambda = es.eigenvalues()(i);
        for (Eigen::Index d = i + 1; d >= 1; --d) e(d) += lambda * e(d - 1);
    }
    return e.tail(k);
}

/// Degree-d elementary symmetric polynomial; zero when d < 1 or d > size.
inline double elem_sym(const RVec& polys, int d) {
    if (d < 1 || d > polys.size()) return 0.0;
    return polys(d - 1);
}

/// sum_j (-1)^j tau^{2j-1} e_{2j-1}(H).
inline double im_det_expansion(const RMat& H, double tau) {
    const RVec e = elem_sym_polys(H);
    const auto k = static_cast<int>(H.rows());
    double sum = 0.0;
    for (int j = 1; j <= (k + 1) / 2; ++j) sum += ((j % 2) ? -1.0 : 1.0) * std::pow(tau, 2 * j - 1) * elem_sym(e, 2 * j - 1);
    return sum;
}

/// R_j = e_{2j+1}(H) - cos^2(theta) e_{2j-1}(H_clipped), j = 0..floor(k/2).
/// H must be in the aligned basis; for theta = pi/2 any basis will do.
inline RVec austere_residuals(const RMat& H, double theta) {
    require(H.rows() == H.cols(), Errc::dimension_mismatch, "H must be square");
    const auto k = static_cast<int>(H.rows());
    const RVec e = elem_sym_polys(H);
    const RVec ec = elem_sym_polys(clipped(H));
    const double c2 = std::cos(theta) * std::cos(theta);
    RVec R(k / 2 + 1);
    for (int j = 0; j <= k / 2; ++j) R(j) = elem_sym(e, 2 * j + 1) - c2 * elem_sym(ec, 2 * j - 1);
    return R;
}

inline std::vector<double> default_tau_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 19; ++i) g.push_back(0.05 * i);
    return g;
}

/// max over tau of |Im det(I - i tau H)| for H anticommuting with an
/// orthogonal complex structure J.
inline double check_holomorphic_identity(const RMat& H, const RMat& J,
                                         const std::vector<double>& taus = default_tau_grid()) {
    const auto k = H.rows();
    require(J.rows() == k && J.cols() == k && H.cols() == k, Errc::dimension_mismatch, "H and J must be k x k");
    const RMat id = RMat::Identity(k, k);
    require(max_abs(RMat(J * J + id)) <= 1e-8, Errc::not_complex_structure, "J^2 != -I");
    require(max_abs(RMat(J.transpose() * J - id)) <= 1e-8, Errc::not_complex_structure, "J is not orthogonal");
    require(max_abs(RMat(H * J + J * H)) <= 1e-8, Errc::not_complex_structure, "HJ != -JH");
    double worst = 0.0;
    for (double tau : taus) worst = std::max(worst, std::abs(det_or_one(shifted_identity(H, tau)).imag()));
    return worst;
}

/// Frame in standard position whose first tangent vector is the unit
/// tangential projection of i e_{2n} and whose e_{2n-1} is the unit normal
/// projection, so that i e_{2n} = cos(theta) e_1 + sin(theta) e_{2n-1}.
struct AlignedData {
    AdaptedFrame frame;
    RMat H;  // in the aligned tangent basis
    double theta = 0.0;
    bool normal_branch = false;  // J nu has no usable tangential component
};

inline constexpr double kAlignmentCrossover = 1e-8;

inline AlignedData align(const RMat& H, const AdaptedFrame& standard_frame) {
    const int n = standard_frame.n;
    const int k = standard_frame.k;
    require(standard_position_error(standard_frame) <= 1e-8, Errc::not_standard_position,
            "alignment expects a standardized frame");
    const AdaptedFrame& f = standard_frame;
    const CVec inu = I * f.distinguished();
    RVec rt(k);
    for (int a = 1; a <= k; ++a) rt(a - 1) = real_inner(inu, f.e[static_cast<std::size_t>(a)]);
    const double cos_t = std::min(1.0, rt.norm());
    CVec normal_part = inu;
    for (int al = 1; al <= k; ++al) normal_part -= rt(al - 1) * f.e[static_cast<std::size_t>(al)];

    AlignedData out;
    out.theta = std::atan2(normal_part.norm(), rt.norm());
    out.normal_branch = cos_t <= kAlignmentCrossover;
    // Rotate even on the normal branch: the residuals no longer depend on the
    // direction of e_1 there, and the frame then satisfies the alignment
    // identity exactly.
    RMat O = RMat::Identity(k, k);
    if (k > 0 && rt.norm() > 0.0) {
        RMat first(k, 1);
        first.col(0) = rt / rt.norm();
        O.col(0) = first.col(0);
        if (k > 1) O.rightCols(k - 1) = complete_real(first, k, k - 1);
        if (k > 1 && O.determinant() < 0.0) O.col(k - 1) *= -1.0;
    }
    out.H = symmetrize(O.transpose() * H * O);

    AdaptedFrame a{f.z, {f.e[0]}, n, k};
    for (int al = 0; al < k; ++al) {
        CVec v = CVec::Zero(f.z.size());
        for (int b = 0; b < k; ++b) v += O(b, al) * f.e[static_cast<std::size_t>(b + 1)];
        a.e.push_back(v);
    }
    const int mu_count = 2 * n - 1 - k;
    if (mu_count > 0) {
        const double sn = normal_part.norm();
        std::vector<CVec> fixed{f.z, f.e[0]};
        for (int al = 1; al <= k; ++al) fixed.push_back(a.e[static_cast<std::size_t>(al)]);
        CVec last;
        if (sn > 1e-12) {
            last = normal_part / sn;
        } else {
            last = f.e[static_cast<std::size_t>(2 * n - 1)];
            last = detail::orthogonalize(last, fixed);
            last /= last.norm();
        }
        fixed.push_back(last);
        fixed.push_back(f.distinguished());
        RMat existing(2 * (n + 1), static_cast<Eigen::Index>(fixed.size()));
        for (std::size_t c = 0; c < fixed.size(); ++c) existing.col(static_cast<Eigen::Index>(c)) = realify(fixed[c]);
        const RMat comp = complete_real(existing, 2 * (n + 1), mu_count - 1);
        for (Eigen::Index c = 0; c < comp.cols(); ++c) a.e.push_back(complexify(comp.col(c)));
        a.e.push_back(last);
    } else {
        require(normal_part.norm() <= 1e-6, Errc::frame_alignment,
                "hypersurface normal must satisfy J nu tangent");
    }
    a.e.push_back(f.distinguished());

    if (a.orientation() < 0.0) {
        if (mu_count >= 2) {
            a.e[static_cast<std::size_t>(k + 1)] *= -1.0;
        } else if (k >= 2) {
            a.e[static_cast<std::size_t>(k)] *= -1.0;
            out.H.row(k - 1) *= -1.0;
            out.H.col(k - 1) *= -1.0;
        } else {
            fail(Errc::frame_alignment, "cannot orient the aligned frame");
        }
    }
    out.frame = std::move(a);
    return out;
}

/// |det V_clipped - (-2i)^{n-1} cos(theta)| for a standardized, aligned frame.
inline double lemma2_check(const AdaptedFrame& frame, double theta) {
    const int n = frame.n;
    const int k = frame.k;
    require(n >= 2, Errc::bad_dimension, "clipped-frame identity needs n >= 2");
    require(standard_position_error(frame) <= 1e-8, Errc::not_standard_position, "frame must be standardized");
    require(k >= 1, Errc::frame_alignment, "needs at least one tangent vector");
    const CVec inu = I * frame.distinguished();
    const CVec expect = std::cos(theta) * frame.e[1] + std::sin(theta) * frame.e[static_cast<std::size_t>(2 * n - 1)];
    require((inu - expect).norm() <= 1e-8, Errc::frame_alignment,
            "frame does not satisfy i e_{2n} = cos(theta) e_1 + sin(theta) e_{2n-1}");
    CMat V(2 * n - 2, 2 * n - 2);
    int row = 0;
    for (int i = 2; i <= 2 * n - 1; ++i) {
        const CVec& v = frame.e[static_cast<std::size_t>(i)];
        V.row(row++) = concat(clip(v), clip(CVec(v.conjugate()))).transpose();
    }
    const cplx expected = std::pow(cplx(0.0, -2.0), n - 1) * std::cos(theta);
    return std::abs(det_or_one(V) - expected);
}

inline RMat random_symmetric(int k, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    RMat A(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A(i, j) = g(rng);
    return symmetrize(A);
}

inline RMat random_orthogonal(int m, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    RMat A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = g(rng);
    Eigen::HouseholderQR<RMat> qr(A);
    RMat Q = qr.householderQ();
    return Q;
}

/// Random oriented frame in standard and aligned position. For a
/// hypersurface (k = 2n - 1) theta is forced to 0.
inline AdaptedFrame random_aligned_frame(int n, int k, double& theta, std::mt19937_64& rng) {
    require(n >= 1 && k >= 1 && k <= 2 * n - 1, Errc::bad_dimension, "need 1 <= k <= 2n - 1");
    if (k == 2 * n - 1) theta = 0.0;
    const auto dim = n + 1;
    const CVec En = basis(dim, n);
    std::vector<CVec> free;
    for (int j = 1; j < n; ++j) {
        free.push_back(basis(dim, j));
        free.push_back(I * basis(dim, j));
    }
    const auto m = static_cast<int>(free.size());
    if (m > 0) {
        const RMat Q = random_orthogonal(m, rng);
        std::vector<CVec> mixed;
        for (int i = 0; i < m; ++i) {
            CVec v = CVec::Zero(dim);
            for (int j = 0; j < m; ++j) v += Q(i, j) * free[static_cast<std::size_t>(j)];
            mixed.push_back(v);
        }
        free = std::move(mixed);
    }
    AdaptedFrame f{basis(dim, 0), {I * basis(dim, 0)}, n, k};
    if (k == 2 * n - 1) {
        f.e.push_back(-En);
        for (const auto& v : free) f.e.push_back(v);
    } else {
        const CVec& p = free.front();
        f.e.push_back(-std::cos(theta) * En + std::sin(theta) * p);
        for (std::size_t i = 1; i < free.size(); ++i) f.e.push_back(free[i]);
        f.e.push_back(-std::sin(theta) * En - std::cos(theta) * p);
    }
    f.e.push_back(I * En);
    if (f.orientation() < 0.0) {
        require(2 * n - 1 > 2, Errc::frame_alignment, "cannot orient");
        f.e[2] *= -1.0;  // e_2 is a free vector whenever one exists
    }
    return f;
}

}  // namespace austere
