#include <random>

#include <gtest/gtest.h>

#include "austere/catalog.hpp"
#include "austere/immersion.hpp"

using namespace austere;

namespace {

SubmanifoldSpec planar_circle() {
    SubmanifoldSpec s;
    s.k = 1;
    s.n = 1;
    s.label = "planar_circle";
    s.domain = {RVec::Constant(1, -1.0), RVec::Constant(1, 1.0)};
    s.chart = [](const XRVec& u) {
        XCVec f(2);
        f << XCplx(std::cos(u(0))), XCplx(std::sin(u(0)));
        return f;
    };
    return s;
}

/// The same lift multiplied by e^{i phi(u)}.
SubmanifoldSpec regauged(SubmanifoldSpec s, bool varying) {
    auto chart = s.chart;
    s.chart = [chart, varying](const XRVec& u) {
        ext phase = 0.7L;
        if (varying)
            for (Eigen::Index a = 0; a < u.size(); ++a) phase += (0.3L + a) * u(a) * u(a);
        return XCVec(chart(u) * std::polar(ext(1), phase));
    };
    s.exact_jet = {};
    return s;
}

RVec point(std::initializer_list<double> xs) {
    RVec u(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) u(i++) = x;
    return u;
}

}  // namespace

TEST(Jet, CircleDerivatives) {
    const Jet j = jet(planar_circle(), point({0.0}), {1e-4, false});
    CVec d1(2), d2(2);
    d1 << 0, 1;
    d2 << -1, 0;
    EXPECT_LT((j.d1[0] - d1).norm(), 1e-7);
    EXPECT_LT((j.d2[0][0] - d2).norm(), 1e-7);
}

TEST(Jet, LinearLineMatchesClosedForm) {
    const CatalogEntry e = linear_subspace(1, 2);
    for (const RVec& u : {point({0.1, -0.3}), point({-0.7, 0.4}), point({0.5, 0.5})}) {
        const Jet fd = jet(e.spec, u);
        const Jet ex = e.spec.exact_jet(u);
        EXPECT_LT((fd.z - ex.z).norm(), 1e-15);
        for (int a = 0; a < 2; ++a) {
            EXPECT_LT((fd.d1[a] - ex.d1[a]).norm(), 1e-7);
            for (int b = 0; b < 2; ++b) EXPECT_LT((fd.d2[a][b] - ex.d2[a][b]).norm(), 1e-7);
        }
    }
}

TEST(Jet, ExactJetsAgreeWithDifferences) {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_entry(name);
        if (!e.spec.exact_jet) continue;
        const RVec u = RVec::Constant(e.spec.k, 0.23);
        const Jet fd = jet(e.spec, u, {1e-4, true});
        const Jet ex = e.spec.exact_jet(u);
        for (int a = 0; a < e.spec.k; ++a) {
            EXPECT_LT((fd.d1[a] - ex.d1[a]).norm(), 1e-10) << name;
            for (int b = 0; b < e.spec.k; ++b) EXPECT_LT((fd.d2[a][b] - ex.d2[a][b]).norm(), 1e-9) << name;
        }
    }
}

TEST(Jet, Guards) {
    const SubmanifoldSpec s = planar_circle();
    try {
        jet(s, point({0.99995}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::out_of_domain);
    }
    SubmanifoldSpec bad = s;
    bad.chart = [](const XRVec& u) {
        XCVec f(2);
        f << XCplx(2 * std::cos(u(0))), XCplx(2 * std::sin(u(0)));
        return f;
    };
    try {
        jet(bad, point({0.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::not_unit);
    }
}

TEST(TangentBasis, ConstantChartIsNotAnImmersion) {
    SubmanifoldSpec s = planar_circle();
    s.chart = [](const XRVec&) {
        XCVec f(2);
        f << XCplx(1), XCplx(0);
        return f;
    };
    try {
        tangent_basis(jet(s, point({0.0})));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::immersion_failure);
    }
}

TEST(TangentFrame, GeodesicFirstVectorIsVelocity) {
    const CatalogEntry e = geodesic_and_circle(0.3).first;
    const RVec u = point({0.4});
    const Jet j = jet(e.spec, u);
    const TangentBasis tb = tangent_basis(j);
    const AdaptedFrame f = tangent_frame(e.spec, u, RVec::Constant(3, 1.0));
    CVec v = horizontal_project(tb.z, j.d1[0]);
    EXPECT_LT((f.tangent(1) - v / v.norm()).norm(), 1e-12);
    EXPECT_LE(f.orthogonality_error(), 1e-10);
    EXPECT_GT(f.orientation(), 0.0);
}

TEST(TangentFrame, RealPlaneAtBasePoint) {
    // At (1,0,0) the real plane has tangents E_1, E_2; a normal i E_2 gives
    // J nu = -E_2 tangent, so theta = 0.
    const CatalogEntry e = real_projective_plane();
    const Jet j = jet(e.spec, point({0.0, 0.0}));
    const SecondFundamentalData d = second_fundamental(j, I * basis(3, 2));
    EXPECT_LT((d.frame.tangent(1) - basis(3, 1)).norm(), 1e-10);
    EXPECT_LT((d.frame.tangent(2) - basis(3, 2)).norm(), 1e-10);
    EXPECT_LT(d.H.norm(), 1e-9);
    EXPECT_NEAR(d.theta, 0.0, 1e-8);
    EXPECT_NEAR(std::abs(d.r(1)), 1.0, 1e-10);
}

TEST(SecondFundamental, TotallyGeodesicExamples) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    for (const std::string name : {"linear_cp1_cp2", "rp2"}) {
        const CatalogEntry e = catalog_entry(name);
        for (const RVec& u : {point({0.1, 0.2}), point({-0.6, 0.3})}) {
            const Jet j = jet(e.spec, u);
            const auto normals = normal_basis(tangent_basis(j));
            RVec c(2);
            c << g(rng), g(rng);
            const SecondFundamentalData d = second_fundamental(j, combine(normals, c));
            EXPECT_LT(max_abs(d.H), 1e-8) << name;
            if (name == "rp2") EXPECT_NEAR(d.theta, 0.0, 1e-8);
            if (name == "linear_cp1_cp2") EXPECT_NEAR(d.theta, kPi / 2, 1e-8);
        }
    }
}

TEST(SecondFundamental, ConicIsMinimal) {
    const CatalogEntry e = holomorphic_conic();
    const RVec u = point({0.0, 0.0});
    const Jet j = jet(e.spec, u);
    for (const CVec& nu : normal_basis(tangent_basis(j))) {
        const SecondFundamentalData d = second_fundamental(j, nu);
        EXPECT_LT(std::abs(d.H.trace()), 1e-6);
    }
    // Hand computation at w = 0: H = [[2,0],[0,-2]] for nu = E_2, [[0,2],[2,0]] for nu = i E_2.
    const SecondFundamentalData real = second_fundamental(j, basis(3, 2));
    const SecondFundamentalData imag = second_fundamental(j, I * basis(3, 2));
    RMat a(2, 2), b(2, 2);
    a << 2, 0, 0, -2;
    b << 0, 2, 2, 0;
    EXPECT_LT(max_abs(RMat(real.H - a)), 1e-7);
    EXPECT_LT(max_abs(RMat(imag.H - b)), 1e-7);
}

TEST(SecondFundamental, NormalGuards) {
    const CatalogEntry e = real_projective_plane();
    const Jet j = jet(e.spec, point({0.0, 0.0}));
    try {
        second_fundamental(j, basis(3, 1));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.code(), Errc::not_normal);
    }
    EXPECT_THROW(second_fundamental(j, 2.0 * I * basis(3, 1)), Error);
}

TEST(SecondFundamental, Invariants) {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_entry(name);
        if (e.spec.k >= 2 * e.spec.n) continue;
        const RVec u = RVec::Constant(e.spec.k, -0.31);
        const Jet j = jet(e.spec, u);
        for (const CVec& nu : normal_basis(tangent_basis(j))) {
            const SecondFundamentalData d = second_fundamental(j, nu);
            EXPECT_LT(max_abs(RMat(d.H - d.H.transpose())), 1e-8);
            EXPECT_NEAR(std::cos(d.theta), d.r.head(e.spec.k).norm(), 1e-8);
            const double vertical = d.vertical_component();
            EXPECT_NEAR(d.r.squaredNorm() + vertical * vertical, 1.0, 1e-8) << name;
            EXPECT_LE(d.frame.orthogonality_error(), 1e-10);
        }
    }
}

TEST(SecondFundamental, AnalyticFormsMatch) {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_entry(name);
        if (!e.analytic_II) continue;
        const RVec u = RVec::Constant(e.spec.k, 0.37);
        const Jet j = jet(e.spec, u);
        for (const CVec& nu : normal_basis(tangent_basis(j)))
            EXPECT_LT(max_abs(RMat(second_fundamental(j, nu).H - e.analytic_II(u, nu))), 1e-6) << name;
    }
}

TEST(SecondFundamental, GaugeInvariance) {
    for (const std::string name : {"small_circle", "torus", "conic"}) {
        const CatalogEntry e = catalog_entry(name);
        for (bool varying : {false, true}) {
            const SubmanifoldSpec g = regauged(e.spec, varying);
            const RVec u = RVec::Constant(e.spec.k, 0.2);
            FiniteDifference fd;
            fd.step = 1e-3;
            fd.richardson = true;
            const Jet j0 = jet(e.spec, u, fd);
            const Jet j1 = jet(g, u, fd);
            const auto normals = normal_basis(tangent_basis(j0));
            for (const CVec& nu0 : normals) {
                // transport the normal to the other representative
                const cplx phase = j0.z.dot(j1.z);
                const CVec nu1 = nu0 * (phase / std::abs(phase));
                const SecondFundamentalData a = second_fundamental(j0, nu0);
                const SecondFundamentalData b = second_fundamental(j1, nu1);
                EXPECT_LT(max_abs(RMat(a.H - b.H)), 1e-8) << name << " varying=" << varying;
                EXPECT_NEAR(a.theta, b.theta, 1e-8);
            }
        }
    }
}

TEST(SecondFundamental, FrameCovariance) {
    // Reordering the parameters changes the tangent basis by an orthogonal
    // map; eigenvalues and theta must not move.
    const CatalogEntry e = nonminimal_torus();
    SubmanifoldSpec swapped = e.spec;
    swapped.chart = [chart = e.spec.chart](const XRVec& u) {
        XRVec v(2);
        v << u(1), u(0);
        return chart(v);
    };
    const Jet j0 = jet(e.spec, point({0.3, -0.2}));
    const Jet j1 = jet(swapped, point({-0.2, 0.3}));
    for (const CVec& nu : normal_basis(tangent_basis(j0))) {
        const SecondFundamentalData a = second_fundamental(j0, nu);
        const SecondFundamentalData b = second_fundamental(j1, nu);
        Eigen::SelfAdjointEigenSolver<RMat> ea(a.H), eb(b.H);
        EXPECT_LT((ea.eigenvalues() - eb.eigenvalues()).norm(), 1e-8);
        EXPECT_NEAR(a.theta, b.theta, 1e-8);
        // O maps the second basis to the first
        RMat O(2, 2);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) O(x, y) = real_inner(b.frame.tangent(x + 1), a.frame.tangent(y + 1));
        EXPECT_LT(max_abs(RMat(O.transpose() * b.H * O - a.H)), 1e-8);
    }
}

TEST(KahlerAngle, Branches) {
    // Normal in the N part of a complex line: J nu is normal.
    const CatalogEntry line = linear_subspace(1, 2);
    EXPECT_NEAR(kahler_angle(line.spec, point({0.2, 0.1}), normalize(basis(3, 2)).vec()), kPi / 2, 1e-8);
    // Real points: J nu tangent for every normal.
    const CatalogEntry rp2 = real_projective_plane();
    const Jet j = jet(rp2.spec, point({0.3, -0.4}));
    for (const CVec& nu : normal_basis(tangent_basis(j))) EXPECT_NEAR(kahler_angle(j, nu), 0.0, 1e-8);
    // Hypersurface: the unique normal has theta = 0.
    SubmanifoldSpec hyper;
    hyper.k = 3;
    hyper.n = 2;
    hyper.domain = {RVec::Constant(3, -1.0), RVec::Constant(3, 1.0)};
    hyper.chart = [](const XRVec& u) {
        XCVec f(3);
        f << XCplx(1), XCplx(u(0), u(1)), XCplx(u(2), ext(0.2) * u(0) * u(2));
        return XCVec(f / f.norm());
    };
    const Jet jh = jet(hyper, point({0.1, 0.2, -0.3}));
    const auto normals = normal_basis(tangent_basis(jh));
    ASSERT_EQ(normals.size(), 1u);
    EXPECT_NEAR(kahler_angle(jh, normals[0]), 0.0, 1e-8);
}

TEST(TangentSplit, Examples) {
    const TangentSplit holo = tangent_split(holomorphic_conic().spec, point({0.2, 0.3}));
    EXPECT_EQ(holo.rank_H, 2);
    EXPECT_EQ(holo.rank_D, 0);
    const TangentSplit real = tangent_split(real_projective_plane().spec, point({0.2, 0.3}));
    EXPECT_EQ(real.rank_H, 0);
    EXPECT_EQ(real.rank_D, 2);
    EXPECT_EQ(real.rank_E, 2);
    EXPECT_EQ(real.rank_N, 0);
    const TangentSplit curve = tangent_split(geodesic_and_circle(0.3).second.spec, point({0.2}));
    EXPECT_EQ(curve.rank_H, 0);
    EXPECT_EQ(curve.rank_D, 1);
    EXPECT_EQ(curve.rank_E, 1);
    EXPECT_EQ(curve.rank_N, 2);
}

TEST(TangentSplit, RankIdentitiesAndOrthogonality) {
    for (const auto& name : catalog_names()) {
        const CatalogEntry e = catalog_entry(name);
        const TangentSplit s = tangent_split(e.spec, RVec::Constant(e.spec.k, 0.1));
        EXPECT_EQ(s.rank_H + s.rank_D, e.spec.k);
        EXPECT_EQ(s.rank_D, s.rank_E);
        EXPECT_EQ(s.rank_H + s.rank_D + s.rank_E + s.rank_N, 2 * e.spec.n);
        std::vector<CVec> all;
        for (const auto* part : {&s.H, &s.D, &s.E, &s.N}) all.insert(all.end(), part->begin(), part->end());
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = a + 1; b < all.size(); ++b) EXPECT_LT(std::abs(real_inner(all[a], all[b])), 1e-8);
    }
}

TEST(TangentSplit, NearlyComplexSurfaceIsAmbiguous) {
    // (1, w, eps conj(w)^2): 1 - sigma is about 8 eps^2 |w|^2, inside the ambiguous band.
    SubmanifoldSpec s;
    s.k = 2;
    s.n = 2;
    s.domain = {RVec::Constant(2, -1.0), RVec::Constant(2, 1.0)};
    s.chart = [](const XRVec& u) {
        const XCplx w(u(0), u(1));
        XCVec f(3);
        f << XCplx(1), w, ext(0.004) * std::conj(w) * std::conj(w);
        return XCVec(f / f.norm());
    };
    try {
        tangent_split(s, point({0.5, 0.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::rank_ambiguous);
    }
}
