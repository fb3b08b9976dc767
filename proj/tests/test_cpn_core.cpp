#include <random>

#include <gtest/gtest.h>

#include "austere/cpn_core.hpp"

using namespace austere;

namespace {

CVec vec(std::initializer_list<cplx> xs) {
    CVec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (cplx x : xs) v(i++) = x;
    return v;
}

CVec random_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

}  // namespace

TEST(Normalize, Examples) {
    EXPECT_LT((normalize(vec({2, 0, 0})).vec() - vec({1, 0, 0})).norm(), 1e-15);
    EXPECT_LT((normalize(vec({0, I, 0})).vec() - vec({0, I, 0})).norm(), 1e-15);
    const double s = 1.0 / std::sqrt(2.0);
    EXPECT_LT((normalize(vec({1, 1, 0})).vec() - vec({s, s, 0})).norm(), 1e-15);
}

TEST(Normalize, RejectsZero) {
    try {
        normalize(vec({1e-15, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::zero_vector);
    }
}

TEST(UnitHopfPoint, RejectsNonUnit) { EXPECT_THROW(UnitHopfPoint(vec({1.1, 0})), Error); }

TEST(HorizontalProject, Examples) {
    const UnitHopfPoint z1(vec({1, 0}));
    EXPECT_LT(horizontal_project(z1, vec({I, 0})).norm(), 1e-15);
    EXPECT_LT((horizontal_project(z1, vec({0, 1})) - vec({0, 1})).norm(), 1e-15);
    const UnitHopfPoint z2(vec({1, 0, 0}));
    EXPECT_LT((horizontal_project(z2, vec({cplx(3, 1), 2, 0})) - vec({0, 2, 0})).norm(), 1e-15);
}

TEST(HorizontalProject, IdempotentAndSelfAdjoint) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const UnitHopfPoint z = normalize(random_vector(4, rng));
        const CVec v = random_vector(4, rng), w = random_vector(4, rng);
        const CVec pv = horizontal_project(z, v);
        EXPECT_LT((horizontal_project(z, pv) - pv).norm(), 1e-12);
        EXPECT_NEAR(real_inner(pv, w), real_inner(v, horizontal_project(z, w)), 1e-12);
        EXPECT_LT(verticality(z, pv), 1e-12);
    }
}

TEST(Standardize, IdentityOnStandardInput) {
    for (int n = 1; n <= 4; ++n) {
        const auto u = standardize(UnitHopfPoint(basis(n + 1, 0)), I * basis(n + 1, n));
        EXPECT_LT(max_abs(CMat(u.U - CMat::Identity(n + 1, n + 1))), 1e-15) << "n=" << n;
    }
}

TEST(Standardize, SwapsCoordinates) {
    const auto u = standardize(UnitHopfPoint(basis(3, 0)), I * basis(3, 1));
    CMat swap = CMat::Zero(3, 3);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = 1.0;
    EXPECT_LT(max_abs(CMat(u.U - swap)), 1e-15);
    EXPECT_LT((u.apply(basis(3, 0)) - basis(3, 0)).norm(), 1e-15);
    EXPECT_LT((u.apply(I * basis(3, 1)) - I * basis(3, 2)).norm(), 1e-15);
}

TEST(Standardize, RandomPairs) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 4; ++n) {
        double worst = 0.0, unitary = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const UnitHopfPoint z = normalize(random_vector(n + 1, rng));
            CVec h = horizontal_project(z, random_vector(n + 1, rng));
            h /= h.norm();
            const auto u = standardize(z, h);
            worst = std::max({worst, (u.apply(z.vec()) - basis(n + 1, 0)).norm(),
                              (u.apply(h) - I * basis(n + 1, n)).norm()});
            unitary = std::max(unitary, u.unitarity_error());
        }
        EXPECT_LE(worst, 1e-10) << "n=" << n;
        EXPECT_LE(unitary, 1e-12) << "n=" << n;
    }
}

TEST(Standardize, Guards) {
    const UnitHopfPoint z(basis(3, 0));
    try {
        standardize(z, basis(3, 0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_horizontal);
    }
    try {
        standardize(z, 2.0 * basis(3, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_unit);
    }
}

TEST(AdaptedFrame, SmallestCase) {
    // n = 1, k = 0: (z, e_0, e_1, e_2) with e_2 the distinguished normal.
    const AdaptedFrame f = complete_adapted_frame(UnitHopfPoint(basis(2, 0)), {}, I * basis(2, 1));
    EXPECT_EQ(f.e.size(), 3u);
    EXPECT_LT((f.e[0] - I * basis(2, 0)).norm(), 1e-15);
    EXPECT_LT((f.distinguished() - I * basis(2, 1)).norm(), 1e-15);
    EXPECT_LE(f.orthogonality_error(), 1e-10);
    EXPECT_GT(f.orientation(), 0.0);
}

TEST(AdaptedFrame, OneTangent) {
    const AdaptedFrame f =
        complete_adapted_frame(UnitHopfPoint(basis(3, 0)), {basis(3, 1)}, I * basis(3, 2));
    EXPECT_LT((f.tangent(1) - basis(3, 1)).norm(), 1e-15);
    EXPECT_LT((f.e[4] - I * basis(3, 2)).norm(), 1e-15);
    EXPECT_LE(f.orthogonality_error(), 1e-10);
    for (int a = 2; a <= 3; ++a) EXPECT_LT(std::abs(real_inner(f.e[static_cast<std::size_t>(a)], f.e[1])), 1e-15);
}

TEST(AdaptedFrame, RandomFramesAreOrientedAndOrthonormal) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < 2 * n; ++k) {
            const UnitHopfPoint z = normalize(random_vector(n + 1, rng));
            std::vector<CVec> tangents;
            for (int a = 0; a < k; ++a) tangents.push_back(horizontal_project(z, random_vector(n + 1, rng)));
            std::vector<CVec> accepted{z.vec(), I * z.vec()};
            CVec nu = horizontal_project(z, random_vector(n + 1, rng));
            for (const auto& t : tangents) accepted.push_back(t);
            // make nu normal to the tangents
            std::vector<CVec> ortho{z.vec(), I * z.vec()};
            for (const auto& t : tangents) {
                CVec v = detail::orthogonalize(t, ortho);
                ortho.push_back(v / v.norm());
            }
            nu = detail::orthogonalize(nu, ortho);
            nu /= nu.norm();
            const AdaptedFrame f = complete_adapted_frame(z, tangents, nu);
            EXPECT_LE(f.orthogonality_error(), 1e-10) << n << ',' << k;
            EXPECT_NEAR(f.orientation(), 1.0, 1e-10) << n << ',' << k;
            const AdaptedFrame s = standardized(f);
            EXPECT_LE(standard_position_error(s), 1e-10);
            EXPECT_LE(s.orthogonality_error(), 1e-10);
        }
}

TEST(AdaptedFrame, DegenerateTangents) {
    const UnitHopfPoint z(basis(3, 0));
    try {
        complete_adapted_frame(z, {basis(3, 1), 2.0 * basis(3, 1)}, I * basis(3, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::degenerate_basis);
    }
}
