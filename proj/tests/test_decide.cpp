#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "dgstab/decide.hpp"

using namespace dgstab;

namespace {

Matrix M2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix I(int n) { return Matrix::Identity(n, n); }

Matrix diag(std::initializer_list<double> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

Query make_query(Matrix A, Region r, MatrixClass c, BinaryOp op = {}) {
    Query q{std::move(A), std::move(r), std::move(c)};
    q.op = op;
    return q;
}

Query dstab(const Matrix& A) { return make_query(A, Region::right_half_plane(), MatrixClass::pos_diag(A.rows())); }

const Matrix kStableNotD = M2(-1, 2, -4, 3);

// Analytic 2x2 D-stability criterion.
bool oracle_2x2(const Matrix& A) {
    const double det = A.determinant();
    return det > 0 && A(0, 0) >= 0 && A(1, 1) >= 0 && A(0, 0) + A(1, 1) > 0 &&
           check_region_stability(A, Region::right_half_plane());
}

bool grid_2x2(const Matrix& A) {
    for (int k = 0; k < 10000; ++k) {
        const double d = std::pow(10.0, -6.0 + 12.0 * k / 9999.0);
        if (!check_region_stability(diag({d, 1}) * A, Region::right_half_plane())) return false;
    }
    return true;
}

}  // namespace

TEST(CheckRegionStability, Examples) {
    EXPECT_TRUE(check_region_stability(I(2), Region::right_half_plane()));
    EXPECT_FALSE(check_region_stability(M2(0, 1, -1, 0), Region::nonzero_real_part()));
    EXPECT_TRUE(check_region_stability(diag({0.5, -0.5}), Region::unit_disk()));
}

TEST(Decide, CertifiesIdentity) {
    const Verdict v = decide(dstab(I(2)));
    ASSERT_EQ(v.status, Status::Certified);
    ASSERT_TRUE(v.certificate.has_value());
    EXPECT_EQ(v.certificate->kind, CertificateKind::DiagonalLyapunov);
    const Matrix& D = v.certificate->witness;
    EXPECT_LE(max_abs(D / D(0, 0) - I(2)), 1e-9);
    EXPECT_TRUE(verify_certificate(*v.certificate, I(2)));
}

TEST(Decide, RefutesStableButNotDStable) {
    const Query q = dstab(kStableNotD);
    ASSERT_TRUE(check_region_stability(kStableNotD, Region::right_half_plane()));
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Refuted);
    ASSERT_TRUE(v.witness && v.offending);
    EXPECT_TRUE(witness_refutes(q, *v.witness));
    EXPECT_GT(v.margin, q.tol);
    EXPECT_EQ(classify_point(q.region, *v.offending), PointClass::Exterior);
    const Matrix DA = *v.witness * kStableNotD;
    EXPECT_TRUE(DA.trace() < 0 || DA.determinant() < 0);
    EXPECT_TRUE(witness_refutes(q, diag({4, 1})));
}

TEST(Decide, ExhaustiveVertexCertificate) {
    const Query q = make_query(diag({0.4, 0.4}), Region::unit_disk(), MatrixClass::vertex_diag(2));
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Certified);
    EXPECT_EQ(v.certificate->kind, CertificateKind::Exhaustive);
    EXPECT_EQ(v.certificate->members_checked, 4u);
    EXPECT_NEAR(v.certificate->min_eig, 0.6, 1e-12);
    EXPECT_TRUE(verify_certificate(*v.certificate, q.A));
}

TEST(Decide, ExhaustiveRefutation) {
    const Query q = make_query(M2(0.5, 0.9, 0.9, 0.5), Region::unit_disk(), MatrixClass::vertex_diag(2));
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Refuted);
    EXPECT_TRUE(witness_refutes(q, *v.witness));
}

TEST(Decide, UnboundednessPrecheck) {
    for (const OpKind op : {OpKind::Mul, OpKind::Add}) {
        const Query q = make_query(0.1 * I(3), Region::unit_disk(), MatrixClass::pos_diag(3), {op, Side::Left});
        const Verdict v = decide(q);
        ASSERT_EQ(v.status, Status::Refuted) << to_string(op);
        EXPECT_TRUE(witness_refutes(q, *v.witness));
        EXPECT_NE(v.provenance.front().find("precheck"), std::string::npos);
    }
}

TEST(Decide, IdentityCheckRefutes) {
    const Query q = dstab(-I(2));
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Refuted);
    EXPECT_EQ(*v.witness, I(2));
    EXPECT_EQ(v.trials_used, 1);
    EXPECT_NEAR(v.margin, 1.0, 1e-12);
}

TEST(Decide, CertificatesOffFallsBackToSampling) {
    Query q = dstab(I(3));
    q.search_certificates = false;
    q.budget = 500;
    const Verdict v = decide(q);
    EXPECT_EQ(v.status, Status::Unknown);
    EXPECT_EQ(v.trials_used, 500);
}

TEST(Falsify, Examples) {
    Query stable = dstab(I(2));
    stable.budget = 1000;
    const Verdict u = falsify(stable);
    EXPECT_EQ(u.status, Status::Unknown);
    EXPECT_EQ(u.trials_used, 1000);

    Query q = dstab(kStableNotD);
    q.budget = 100000;
    const Verdict r = falsify(q);
    ASSERT_EQ(r.status, Status::Refuted);
    EXPECT_TRUE(witness_refutes(q, *r.witness));

    const Verdict neg = falsify(dstab(-I(2)));
    ASSERT_EQ(neg.status, Status::Refuted);
    EXPECT_EQ(neg.trials_used, 1);
}

TEST(Falsify, WitnessMassUnderSampler) {
    // Fraction of sampled D refuting the stable-but-not-D-stable matrix.
    Rng rng = SeedStream(3).engine();
    int hits = 0;
    for (int t = 0; t < 20000; ++t) {
        const Matrix D = sample(MatrixClass::pos_diag(2), rng);
        hits += !check_region_stability(D * kStableNotD, Region::right_half_plane());
    }
    EXPECT_GT(hits, 20000 / 100);
}

TEST(Falsify, DeterministicAcrossThreadCounts) {
    Query q = make_query(M2(0.1, 1, -1, 0.1), Region::right_half_plane(), MatrixClass::spd(2));
    q.budget = 2000;
    ::setenv("DGSTAB_THREADS", "1", 1);
    const Verdict a = falsify(q);
    ::setenv("DGSTAB_THREADS", "4", 1);
    const Verdict b = falsify(q);
    ::unsetenv("DGSTAB_THREADS");
    ASSERT_EQ(a.status, b.status);
    EXPECT_EQ(a.trials_used, b.trials_used);
    ASSERT_EQ(a.witness.has_value(), b.witness.has_value());
    if (a.witness) EXPECT_EQ(*a.witness, *b.witness);
}

TEST(Decide, DeterministicForSeed) {
    Rng rng = SeedStream(11).engine();
    for (int t = 0; t < 20; ++t) {
        Query q = dstab(gaussian_matrix(rng, 3, 3) + 0.5 * I(3));
        q.budget = 500;
        const Verdict a = decide(q), b = decide(q);
        ASSERT_EQ(a.status, b.status);
        EXPECT_EQ(a.trials_used, b.trials_used);
        EXPECT_EQ(a.provenance, b.provenance);
        if (a.witness) EXPECT_EQ(*a.witness, *b.witness);
        if (a.certificate) EXPECT_EQ(a.certificate->witness, b.certificate->witness);
    }
}

TEST(Stabilize, Examples) {
    const BinaryOp mul{};
    const StabilizeResult a = stabilize(-I(2), Region::right_half_plane(), MatrixClass::diag(2), mul, 2000, 1);
    ASSERT_TRUE(a.found);
    EXPECT_TRUE(check_region_stability(*a.G * -I(2), Region::right_half_plane()));
    EXPECT_TRUE(contains(MatrixClass::diag(2), *a.G));

    const StabilizeResult b = stabilize(diag({1, -1}), Region::right_half_plane(), MatrixClass::diag(2), mul, 2000, 1);
    ASSERT_TRUE(b.found);
    EXPECT_TRUE(check_region_stability(*b.G * diag({1, -1}), Region::right_half_plane()));

    Matrix C(3, 3);
    C << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    const StabilizeResult c = stabilize(C, Region::right_half_plane(), MatrixClass::diag(3), mul, 3000, 1);
    EXPECT_FALSE(c.found);
    EXPECT_FALSE(c.G.has_value());
    EXPECT_GT(c.best_score, 0.0);
}

TEST(Stabilize, CirculantHasNoStabilizerOnAGrid) {
    // DC has characteristic polynomial l^3 - d1 d2 d3: roots on three rays, never all in the right half plane.
    Matrix C(3, 3);
    C << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    for (double d1 : {-2.0, -0.5, 0.5, 2.0})
        for (double d2 : {-3.0, 1.0})
            for (double d3 : {-1.0, 0.25}) {
                EXPECT_FALSE(check_region_stability(diag({d1, d2, d3}) * C, Region::right_half_plane()));
            }
}

TEST(TotalStability, Examples) {
    const TotalReport id = total_stability(dstab(I(3)));
    ASSERT_EQ(id.subsets.size(), 7u);
    EXPECT_EQ(id.overall, Status::Certified);
    for (const auto& s : id.subsets) EXPECT_EQ(s.verdict.status, Status::Certified);
    EXPECT_EQ(id.subsets[0].indices, (std::vector<int>{0}));
    EXPECT_EQ(id.subsets[2].indices, (std::vector<int>{0, 1}));
    EXPECT_EQ(id.subsets[6].indices, (std::vector<int>{0, 1, 2}));

    Matrix A(2, 2);
    A << 3, 1, 0, -1;
    const TotalReport neg = total_stability(dstab(A));
    EXPECT_EQ(neg.overall, Status::Refuted);
    EXPECT_EQ(neg.subsets[1].indices, (std::vector<int>{1}));
    EXPECT_EQ(neg.subsets[1].verdict.status, Status::Refuted);

    const TotalReport b = total_stability(dstab(kStableNotD));
    EXPECT_EQ(b.overall, Status::Refuted);
    EXPECT_EQ(b.subsets[0].verdict.status, Status::Refuted);
    EXPECT_EQ(b.subsets[2].verdict.status, Status::Refuted);
}

TEST(TotalStability, OrderLimit) {
    try {
        (void)total_stability(dstab(I(17)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OrderTooLarge);
    }
}

TEST(InertiaPreserving, Examples) {
    const BinaryOp mul{};
    const Region rhp = Region::right_half_plane();
    const InertiaReport a = inertia_preserving(I(3), MatrixClass::symmetric(3), mul, rhp, 1000, 1);
    EXPECT_TRUE(a.plausible);
    EXPECT_EQ(a.trials, 1000);

    const InertiaReport b = inertia_preserving(-I(3), MatrixClass::symmetric(3), mul, rhp, 1000, 1);
    ASSERT_FALSE(b.plausible);
    ASSERT_TRUE(b.witness.has_value());
    EXPECT_NE(b.of_product, b.of_g);
    EXPECT_EQ(b.of_product.i_plus, b.of_g.i_minus);

    Matrix S(3, 3);
    S << 4, 1, 0, 1, 3, 1, 0, 1, 2;
    EXPECT_TRUE(inertia_preserving(S, MatrixClass::symmetric(3), mul, rhp, 1000, 2).plausible);
}

TEST(Transfer, TransposeOfRefutation) {
    const Query q = dstab(kStableNotD);
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Refuted);
    const Verdict t = transfer_verdict(v, q, Transform::transpose());
    ASSERT_EQ(t.status, Status::Refuted);
    EXPECT_EQ(*t.witness, v.witness->transpose());
    const Query tq = transformed_query(q, Transform::transpose());
    EXPECT_EQ(tq.A, kStableNotD.transpose());
    EXPECT_TRUE(witness_refutes(tq, *t.witness));
    EXPECT_LT((diag({4, 1}) * kStableNotD.transpose()).trace(), 0.0);
}

TEST(Transfer, InverseAndScalarOfCertificate) {
    const Query q = dstab(I(2));
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Certified);
    const Verdict inv = transfer_verdict(v, q, Transform::op_inverse());
    ASSERT_EQ(inv.status, Status::Certified);
    EXPECT_TRUE(verify_certificate(*inv.certificate, I(2)));

    Matrix A(2, 2);
    A << 2, 1, -1, 1;
    const Query qa = dstab(A);
    const Verdict va = decide(qa);
    ASSERT_EQ(va.status, Status::Certified);
    const Verdict twice = transfer_verdict(va, qa, Transform::scalar(2.0));
    ASSERT_EQ(twice.status, Status::Certified);
    EXPECT_TRUE(verify_certificate(*twice.certificate, 2.0 * A));
}

TEST(Transfer, SimilarityAndInapplicable) {
    Matrix A(3, 3);
    A << 2, 1, 0, -1, 3, 1, 0, -2, 1;
    const Query q = dstab(A);
    const Verdict v = decide(q);
    ASSERT_EQ(v.status, Status::Certified);
    Matrix P(3, 3);
    P << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    const Verdict p = transfer_verdict(v, q, Transform::similarity(P));
    ASSERT_EQ(p.status, Status::Certified);
    EXPECT_TRUE(verify_certificate(*p.certificate, P * A * P.transpose()));
    const Verdict d = transfer_verdict(v, q, Transform::similarity(diag({1, 5, 0.2})));
    ASSERT_EQ(d.status, Status::Certified);
    EXPECT_TRUE(verify_certificate(*d.certificate, diag({1, 5, 0.2}) * A * diag({1, 0.2, 5})));

    const Verdict neg = transfer_verdict(v, q, Transform::scalar(-1.0));
    EXPECT_EQ(neg.status, Status::Unknown);
    EXPECT_NE(neg.provenance.front().find("theorem inapplicable"), std::string::npos);

    Matrix S = I(3);
    S(0, 1) = 1;
    EXPECT_THROW((void)transformed_query(q, Transform::similarity(S)), Error);
    const Query sing = dstab(M2(1, 1, 1, 1));
    EXPECT_THROW((void)transformed_query(sing, Transform::op_inverse()), Error);
}

TEST(Properties, TwoByTwoOracleValidatedByGrid) {
    Rng rng = SeedStream(21).engine();
    int checked = 0;
    while (checked < 300) {
        Matrix A(2, 2);
        for (int k = 0; k < 4; ++k) A(k / 2, k % 2) = uniform(rng, -2, 2);
        if (std::abs(A.determinant()) < 1e-3 || std::abs(A(0, 0)) < 1e-3 || std::abs(A(1, 1)) < 1e-3 ||
            std::abs(A.trace()) < 1e-3)
            continue;
        ++checked;
        EXPECT_EQ(oracle_2x2(A), grid_2x2(A)) << A;
    }
}

TEST(Properties, TwoByTwoOracleAgreesWithDecide) {
    Rng rng = SeedStream(22).engine();
    int checked = 0;
    while (checked < 500) {
        Matrix A(2, 2);
        for (int k = 0; k < 4; ++k) A(k / 2, k % 2) = uniform(rng, -2, 2);
        if (std::abs(A.determinant()) < 1e-3 || std::abs(A(0, 0)) < 1e-3 || std::abs(A(1, 1)) < 1e-3 ||
            std::abs(A.trace()) < 1e-3)
            continue;
        ++checked;
        Query q = dstab(A);
        q.seed = static_cast<std::uint64_t>(checked);
        const Verdict v = decide(q);
        if (oracle_2x2(A)) {
            EXPECT_NE(v.status, Status::Refuted) << A;
        } else {
            EXPECT_NE(v.status, Status::Certified) << A;
        }
    }
}

TEST(Properties, RefutedWitnessesReproduce) {
    Rng rng = SeedStream(23).engine();
    int refuted = 0;
    for (int t = 0; t < 10000; ++t) {
        const int n = 2 + t % 3;
        Query q = dstab(gaussian_matrix(rng, n, n));
        q.budget = 8;
        q.seed = static_cast<std::uint64_t>(t);
        const Verdict v = falsify(q);
        if (v.status != Status::Refuted) continue;
        ++refuted;
        ASSERT_TRUE(witness_refutes(q, *v.witness));
        EXPECT_GT(v.margin, q.tol);
    }
    EXPECT_GT(refuted, 1000);
}

TEST(Properties, CertifiedNeverContradictedBySamples) {
    Rng rng = SeedStream(24).engine();
    int certified = 0;
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + t % 4;
        const Matrix A = gaussian_matrix(rng, n, n) + 2.0 * I(n);
        Query q = dstab(A);
        q.budget = 200;
        const Verdict v = decide(q);
        if (v.status != Status::Certified) continue;
        ++certified;
        EXPECT_TRUE(verify_certificate(*v.certificate, A));
        Rng s = SeedStream(1000 + t).engine();
        for (int k = 0; k < 1000; ++k) {
            ASSERT_TRUE(check_region_stability(sample(q.cls, s) * A, q.region));
        }
    }
    EXPECT_GT(certified, 10);
}

TEST(Properties, MonotoneInRegion) {
    Rng rng = SeedStream(25).engine();
    for (int t = 0; t < 100; ++t) {
        Query q = dstab(gaussian_matrix(rng, 3, 3));
        q.budget = 200;
        const Verdict v = falsify(q);
        if (v.status != Status::Refuted) continue;
        Query smaller = q;
        smaller.region = Region::positive_real_ray();
        EXPECT_TRUE(witness_refutes(smaller, *v.witness));
    }
}

TEST(Properties, MonotoneInClass) {
    Rng rng = SeedStream(26).engine();
    const Partition alpha = Partition::from_sizes({2, 1});
    for (int t = 0; t < 20; ++t) {
        const Matrix A = gaussian_matrix(rng, 3, 3) + 2.5 * I(3);
        Query q = dstab(A);
        if (decide(q).status != Status::Certified) continue;
        for (const MatrixClass& sub : {MatrixClass::pos_alpha_scalar(alpha),
                                       MatrixClass::theta_ordered(Permutation({2, 0, 1}))}) {
            Query qs = q;
            qs.cls = sub;
            qs.budget = 500;
            EXPECT_NE(falsify(qs).status, Status::Refuted);
        }
    }
}

TEST(Properties, UnionOverThetaClasses) {
    Rng rng = SeedStream(27).engine();
    for (int t = 0; t < 24; ++t) {
        const int n = 2 + t % 3;
        Matrix A = gaussian_matrix(rng, n, n);
        if (t % 2 == 0) A += 2.0 * I(n);
        Query q = dstab(A);
        q.budget = 3000;
        const bool full = falsify(q).status == Status::Refuted;
        std::vector<int> theta(static_cast<std::size_t>(n));
        std::iota(theta.begin(), theta.end(), 0);
        bool any = false;
        do {
            Query qt = q;
            qt.cls = MatrixClass::theta_ordered(Permutation(theta));
            any = any || falsify(qt).status == Status::Refuted;
        } while (!any && std::next_permutation(theta.begin(), theta.end()));
        EXPECT_EQ(full, any) << A;
    }
}

TEST(Properties, GroupClosureOfCertifiedDStability) {
    Rng rng = SeedStream(28).engine();
    Matrix A(3, 3);
    A << 3, 1, -1, 0, 2, 1, 1, -1, 4;
    const Query q = dstab(A);
    ASSERT_EQ(decide(q).status, Status::Certified);
    for (int t = 0; t < 1000; ++t) {
        const Matrix DA = sample(q.cls, rng) * A;
        Query qd = dstab(DA);
        qd.budget = 50;
        qd.seed = static_cast<std::uint64_t>(t);
        ASSERT_NE(falsify(qd).status, Status::Refuted);
    }
}
