#include <random>

#include <gtest/gtest.h>

#include "austere/stenzel_metric.hpp"

using namespace austere;

namespace {

CVec random_vector(int dim, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

AffinePoint random_point(int n, std::mt19937_64& rng) {
    for (;;) {
        AffinePoint p{random_vector(n, rng, 0.7), random_vector(n, rng, 0.7)};
        if (std::abs(p.quadric()) > 0.05) return p;
    }
}

CMat G_at(const CVec& X, int n) { return stenzel_form_general({X.head(n), X.tail(n)}).G; }

}  // namespace

TEST(PhiHat, StandardPoint) {
    const int n = 3;
    const auto p = phi_hat(basis(n + 1, 0), I * basis(n + 1, n));
    CVec z = CVec::Zero(n + 1), w = CVec::Zero(n + 1);
    z(0) = w(0) = std::cosh(1.0);
    z(n) = -std::sinh(1.0);
    w(n) = std::sinh(1.0);
    EXPECT_LT((p.z - z).norm(), 1e-14);
    EXPECT_LT((p.w - w).norm(), 1e-14);
    const AffinePoint a = affine_chart(p);
    EXPECT_LT((a.Z - standard_affine_point(std::tanh(1.0), n).Z).norm(), 1e-15);
    EXPECT_LT((a.W - standard_affine_point(std::tanh(1.0), n).W).norm(), 1e-15);
}

TEST(PhiHat, ZeroSectionAndScaling) {
    std::mt19937_64 rng(2);
    const CVec zeta = random_vector(3, rng);
    const auto p = phi_hat(zeta, CVec::Zero(3));
    EXPECT_LT((p.z - zeta).norm(), 1e-15);
    EXPECT_LT((p.w - zeta.conjugate()).norm(), 1e-15);

    CVec xi = random_vector(3, rng);
    xi -= (zeta.dot(xi) / zeta.squaredNorm()) * zeta;  // xi . conj(zeta) = 0
    const cplx lambda = 2.0 * std::exp(I * kPi / 3.0);
    const auto a = phi_hat(zeta, xi);
    const auto b = phi_hat(lambda * zeta, lambda * xi);
    EXPECT_LT((b.z - lambda * a.z).norm(), 1e-12);
    EXPECT_LT((b.w - std::conj(lambda) * a.w).norm(), 1e-12);
}

TEST(PhiHat, RejectsNonOrthogonal) {
    try {
        phi_hat(basis(2, 0), basis(2, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_in_b);
    }
}

TEST(PhiHat, LandsOffTheQuadric) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ratio(0.0, 5.0);
    for (int trial = 0; trial < 500; ++trial) {
        const CVec zeta = random_vector(3, rng);
        CVec xi = random_vector(3, rng);
        xi -= (zeta.dot(xi) / zeta.squaredNorm()) * zeta;
        xi *= ratio(rng) * zeta.norm() / xi.norm();
        const auto p = phi_hat(zeta, xi);
        if (std::abs(p.z(0)) < 1e-6 || std::abs(p.w(0)) < 1e-6) continue;
        EXPECT_GT(std::abs(affine_chart(p).quadric()), 0.0);
        // The quadric in homogeneous form is z.w = |zeta|^2 (cosh^2 - sinh^2 terms), never zero.
        EXPECT_GT(std::abs((p.z.transpose() * p.w)(0, 0)), 1e-12);
    }
}

TEST(PhiHat, ZeroSectionIsTotallyReal) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const AffinePoint a = affine_chart(phi_hat(random_vector(4, rng), CVec::Zero(4)));
        EXPECT_LT((a.W - a.Z.conjugate()).norm(), 1e-12);
    }
}

TEST(AffineChart, Examples) {
    CVec one = CVec::Zero(3);
    one(0) = 1.0;
    const AffinePoint a = affine_chart({one, one});
    EXPECT_LT(a.Z.norm() + a.W.norm(), 1e-15);
    CVec z(2), w(2);
    z << 0, 1;
    w << 1, 0;
    try {
        affine_chart({z, w});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::chart_singular);
    }
}

TEST(Exhaustion, Examples) {
    const auto origin = exhaustion({CVec::Zero(2), CVec::Zero(2)});
    EXPECT_DOUBLE_EQ(origin.A, 1.0);
    EXPECT_LT(std::abs(origin.B - 1.0), 1e-15);
    EXPECT_DOUBLE_EQ(origin.N, 1.0);

    const double tau = 0.5;
    const auto s = exhaustion(standard_affine_point(tau, 3));
    EXPECT_NEAR(s.A, std::pow(1 + tau * tau, 2), 1e-15);
    EXPECT_NEAR(s.B.real(), 1 - tau * tau, 1e-15);
    EXPECT_NEAR(s.N, std::pow((1 + tau * tau) / (1 - tau * tau), 2), 1e-14);

    CVec Z(2), W(2);
    Z << 1, 0;
    W << 0, 1;
    const auto e = exhaustion({Z, W});
    EXPECT_DOUBLE_EQ(e.A, 4.0);
    EXPECT_LT(std::abs(e.B - 1.0), 1e-15);
    EXPECT_DOUBLE_EQ(e.N, 4.0);
}

TEST(Exhaustion, CauchySchwarzBound) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto e = exhaustion(random_point(2, rng));
        EXPECT_GE(e.N, 1.0 - 1e-10);
        EXPECT_NEAR(e.N, e.A / std::norm(e.B), 1e-12 * e.N);
    }
}

TEST(StenzelForm, OriginIsIdentity) {
    for (int n = 1; n <= 3; ++n) {
        const StenzelForm g = stenzel_form_general({CVec::Zero(n), CVec::Zero(n)});
        EXPECT_LT(max_abs(CMat(g.G - CMat::Identity(2 * n, 2 * n))), 1e-15);
        EXPECT_LT(max_abs(CMat(stenzel_form_standard(0.0, n).G - CMat::Identity(2 * n, 2 * n))), 1e-15);
    }
}

TEST(StenzelForm, StandardEntriesAtHalf) {
    // q = 2 tau^2 / (1 - tau^2)^2 = 8/9 at tau = 1/2.
    const StenzelForm g = stenzel_form_standard(0.5, 2);
    const double q = 8.0 / 9.0;
    EXPECT_NEAR(g.G(0, 0).real(), 4.0 / 3.0, 1e-14);
    EXPECT_NEAR(g.G(2, 2).real(), 4.0 / 3.0, 1e-14);
    EXPECT_NEAR(g.G(1, 1).real(), (1.25 + q - 0.25) / 0.9375, 1e-14);
    EXPECT_NEAR(g.G(1, 1).real(), 2.0148148148148148, 1e-12);
    EXPECT_NEAR(g.G(1, 3).real(), -0.94814814814814814, 1e-12);
    EXPECT_NEAR(g.G(3, 1).real(), -0.94814814814814814, 1e-12);
    EXPECT_NEAR(g.G(0, 1).real(), 0.0, 1e-15);
}

TEST(StenzelForm, CrossRoute) {
    for (int n = 1; n <= 4; ++n)
        for (int i = 0; i <= 9; ++i) {
            const double tau = 0.1 * i;
            const CMat diff = stenzel_form_general(standard_affine_point(tau, n)).G - stenzel_form_standard(tau, n).G;
            EXPECT_LE(max_abs(diff), 1e-10) << "n=" << n << " tau=" << tau;
        }
}

TEST(StenzelForm, HermitianPositiveDefinite) {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 3; ++n)
        for (int trial = 0; trial < 1000; ++trial) {
            const StenzelForm g = stenzel_form_general(random_point(n, rng));
            ASSERT_LE(g.hermiticity_error(), 1e-10 * std::max(1.0, max_abs(g.G)));
            ASSERT_GT(g.min_eigenvalue(), 0.0);
        }
}

TEST(StenzelForm, NearBoundaryStillDefinite) {
    const StenzelForm g = stenzel_form_standard(0.99, 2);
    EXPECT_GT(g.min_eigenvalue(), 0.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(g.G);
    EXPECT_GT(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff(),
              stenzel_form_standard(0.5, 2).G.real().norm());
    EXPECT_THROW(stenzel_form_standard(1.0, 2), Error);
    EXPECT_THROW(stenzel_form_standard(-0.1, 2), Error);
}

// The form i sum G_ij dX_i ^ dXbar_j is closed iff d_k G_ij = d_i G_kj
// (holomorphic Wirtinger derivatives). The swapped condition d_k G_ij = d_j G_ik
// does not hold and serves as a control.
TEST(StenzelForm, KahlerFormIsClosed) {
    std::mt19937_64 rng(31);
    const double h = 1e-5;
    for (int n = 1; n <= 2; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            const AffinePoint p = random_point(n, rng);
            const CVec X = concat(p.Z, p.W);
            const int N = 2 * n;
            std::vector<CMat> d(static_cast<std::size_t>(N));
            for (int k = 0; k < N; ++k) {
                CVec a = X, b = X, c = X, e = X;
                a(k) += h;
                b(k) -= h;
                c(k) += I * h;
                e(k) -= I * h;
                d[static_cast<std::size_t>(k)] =
                    0.5 * ((G_at(a, n) - G_at(b, n)) / (2 * h) - I * (G_at(c, n) - G_at(e, n)) / (2 * h));
            }
            double residual = 0.0, control = 0.0, scale = 0.0;
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    for (int k = 0; k < N; ++k) {
                        const cplx dk = d[static_cast<std::size_t>(k)](i, j);
                        residual = std::max(residual, std::abs(dk - d[static_cast<std::size_t>(i)](k, j)));
                        control = std::max(control, std::abs(dk - d[static_cast<std::size_t>(j)](i, k)));
                        scale = std::max(scale, std::abs(dk));
                    }
            EXPECT_LE(residual, 1e-7 * scale) << "n=" << n;
            EXPECT_GT(control, 1e-3 * scale) << "n=" << n;
        }
}

TEST(Pairings, Examples) {
    const StenzelForm id{CMat::Identity(4, 4), std::nullopt};
    const CVec e = basis(4, 0);
    EXPECT_DOUBLE_EQ(metric_pair(id, e, e), 2.0);
    EXPECT_DOUBLE_EQ(metric_pair(id, e, basis(4, 1)), 0.0);
    EXPECT_DOUBLE_EQ(kahler_pair(id, e, e), 0.0);
    EXPECT_THROW(metric_pair(id, basis(3, 0), e), Error);

    // At the standard point: horizontal (z; conj z) and vertical (z; -conj z).
    const int n = 2;
    const StenzelForm g = stenzel_form_standard(0.5, n);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const CVec z = random_vector(n, rng), y = random_vector(n, rng);
        const CVec hz = concat(z, z.conjugate()), vz = concat(z, -z.conjugate());
        const CVec hy = concat(y, y.conjugate()), vy = concat(y, -y.conjugate());
        EXPECT_NEAR(metric_pair(g, vz, hz), 0.0, 1e-12);
        EXPECT_NEAR(kahler_pair(g, vz, vy), 0.0, 1e-12);
        EXPECT_NEAR(kahler_pair(g, hz, hy), 0.0, 1e-12);
        EXPECT_NEAR(kahler_pair(g, hz, vy), -kahler_pair(g, vy, hz), 1e-12);
    }
}
