#pragma once

#include <Eigen/Dense>

#include <algorithm>

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "austere/errors.hpp"

namespace austere {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Extended precision is used only where charts are sampled for finite
// differences, so that roundoff stays below the O(step^2) truncation error.
using ext = long double;
using XCplx = std::complex<ext>;
using XCVec = Eigen::Matrix<XCplx, Eigen::Dynamic, 1>;
using XRVec = Eigen::Matrix<ext, Eigen::Dynamic, 1>;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Real Euclidean pairing on C^N viewed as R^{2N}: Re(sum conj(a_j) b_j).
inline double real_inner(const CVec& a, const CVec& b) { return a.dot(b).real(); }

/// v -> (Re v; Im v).
inline RVec realify(const CVec& v) {
    RVec out(2 * v.size());
    out.head(v.size()) = v.real();
    out.tail(v.size()) = v.imag();
    return out;
}

inline CVec complexify(const RVec& v) {
    const auto n = v.size() / 2;
    CVec out(n);
    for (Eigen::Index j = 0; j < n; ++j) out(j) = cplx(v(j), v(n + j));
    return out;
}

/// Elementary basis vector E_j of C^N.
inline CVec basis(Eigen::Index dim, Eigen::Index j) {
    CVec e = CVec::Zero(dim);
    e(j) = 1.0;
    return e;
}

/// Drop the first coordinate.
inline CVec trim(const CVec& v) { return v.tail(v.size() - 1); }

/// Drop the first and last coordinates.
inline CVec clip(const CVec& v) { return v.segment(1, v.size() - 2); }

inline CVec concat(const CVec& a, const CVec& b) {
    CVec out(a.size() + b.size());
    out << a, b;
    return out;
}

/// Determinant with the empty-matrix convention det(0x0) = 1.
inline cplx det_or_one(const CMat& m) {
    if (m.rows() == 0) return 1.0;
    return m.partialPivLu().determinant();
}

inline double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
inline double max_abs(const RMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline RMat symmetrize(const RMat& m) { return 0.5 * (m + m.transpose()); }

/// Deterministic orthonormal completion in R^dim. Candidates are the
/// elementary basis vectors; at each step the candidate with the largest
/// residual (lowest index on ties) is orthogonalized against everything
/// accepted so far, with one reorthogonalization pass. The returned columns
/// are sorted by the index of the candidate they came from.
inline RMat complete_real(const RMat& existing, Eigen::Index dim, Eigen::Index count) {
    std::vector<RVec> accepted;
    for (Eigen::Index c = 0; c < existing.cols(); ++c) accepted.push_back(existing.col(c));
    std::vector<std::pair<Eigen::Index, RVec>> picked;
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    auto residual = [&](RVec v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& a : accepted) v -= a.dot(v) * a;
        return v;
    };
    for (Eigen::Index step = 0; step < count; ++step) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        RVec best_vec;
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            RVec v = residual(RVec::Unit(dim, j));
            const double nv = v.norm();
            if (nv > best_norm + 1e-12) {
                best = j;
                best_norm = nv;
                best_vec = std::move(v);
            }
        }
        require(best >= 0 && best_norm > 1e-8, Errc::degenerate_basis,
                "orthonormal completion ran out of independent directions");
        used[static_cast<std::size_t>(best)] = true;
        best_vec /= best_norm;
        accepted.push_back(best_vec);
        picked.emplace_back(best, best_vec);
    }
    std::sort(picked.begin(), picked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    RMat out(dim, count);
    for (Eigen::Index c = 0; c < count; ++c) out.col(c) = picked[static_cast<std::size_t>(c)].second;
    return out;
}

/// Hermitian counterpart of complete_real in C^dim.
inline CMat complete_hermitian(const CMat& existing, Eigen::Index dim, Eigen::Index count) {
    std::vector<CVec> accepted;
    for (Eigen::Index c = 0; c < existing.cols(); ++c) accepted.push_back(existing.col(c));
    std::vector<std::pair<Eigen::Index, CVec>> picked;
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    auto residual = [&](CVec v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& a : accepted) v -= a.dot(v) * a;
        return v;
    };
    for (Eigen::Index step = 0; step < count; ++step) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        CVec best_vec;
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            CVec v = residual(basis(dim, j));
            const double nv = v.norm();
            if (nv > best_norm + 1e-12) {
                best = j;
                best_norm = nv;
                best_vec = std::move(v);
            }
        }
        require(best >= 0 && best_norm > 1e-8, Errc::degenerate_basis,
                "unitary completion ran out of independent directions");
        used[static_cast<std::size_t>(best)] = true;
        best_vec /= best_norm;
        accepted.push_back(best_vec);
        picked.emplace_back(best, best_vec);
    }
    std::sort(picked.begin(), picked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    CMat out(dim, count);
    for (Eigen::Index c = 0; c < count; ++c) out.col(c) = picked[static_cast<std::size_t>(c)].second;
    return out;
}

}  // namespace austere
