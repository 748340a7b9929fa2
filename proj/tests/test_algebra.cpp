#include <gtest/gtest.h>

#include "dgstab/algebra.hpp"

using namespace dgstab;

namespace {

Matrix M2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

LawOptions quick(int trials = 200) {
    LawOptions o;
    o.trials = trials;
    return o;
}

}  // namespace

TEST(Apply, Examples) {
    const Matrix I = Matrix::Identity(2, 2);
    EXPECT_EQ(apply({OpKind::Add}, I, I), 2.0 * I);
    EXPECT_EQ(apply({OpKind::Mul, Side::Left}, M2(2, 0, 0, 3), M2(1, 1, 0, 1)), M2(2, 2, 0, 3));
    EXPECT_EQ(apply({OpKind::Hadamard}, M2(1, 2, 3, 4), M2(2, 2, 2, 2)), M2(2, 4, 6, 8));
}

TEST(Apply, RightSideMultipliesOnTheRight) {
    EXPECT_EQ(apply({OpKind::Mul, Side::Right}, M2(2, 0, 0, 3), M2(1, 1, 0, 1)), M2(2, 3, 0, 3));
}

TEST(Apply, DimensionMismatch) {
    try {
        (void)apply({OpKind::Add}, Matrix::Identity(2, 2), Matrix::Identity(3, 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Laws, SpectrumCommutation) {
    EXPECT_LE(check_spectrum_commutation(OpKind::Mul, quick()).max_deviation, 1e-7);
    EXPECT_LE(check_spectrum_commutation(OpKind::Add, quick()).max_deviation, 1e-12);
    EXPECT_LE(check_spectrum_commutation(OpKind::Hadamard, quick()).max_deviation, 1e-12);
}

TEST(Laws, SpectrumCommutationWithSingularOperand) {
    LawOptions o = quick();
    o.singular_operands = true;
    EXPECT_LE(check_spectrum_commutation(OpKind::Mul, o).max_deviation, 1e-6);
}

TEST(Laws, Transpose) {
    for (OpKind op : {OpKind::Add, OpKind::Mul, OpKind::Hadamard}) {
        EXPECT_LE(check_transpose_law(op, quick()).max_deviation, 1e-12);
    }
}

TEST(Laws, Scalar) {
    EXPECT_LE(check_scalar_laws(OpKind::Mul, quick()).associative.max_deviation, 1e-12);
    EXPECT_LE(check_scalar_laws(OpKind::Add, quick()).distributive.max_deviation, 1e-12);
    const LawReport add_assoc = check_scalar_laws(OpKind::Add, quick()).associative;
    EXPECT_GT(add_assoc.max_deviation, 1e-3);
    ASSERT_TRUE(add_assoc.worst.has_value());
    EXPECT_FALSE(add_assoc.worst->operands.empty());
}

TEST(Laws, MulDistributivity) {
    EXPECT_LE(check_mul_distributivity(OpKind::Add, quick()).mul_over_op.max_deviation, 1e-12);
    const LawReport had = check_mul_distributivity(OpKind::Hadamard, quick()).mul_over_op;
    EXPECT_GT(had.max_deviation, 1e-3);
    EXPECT_TRUE(had.worst.has_value());
    EXPECT_LE(check_mul_distributivity(OpKind::Mul, quick()).associative.max_deviation, 1e-12);
}

TEST(Laws, TableMatchesExpectations) {
    for (const LawReport& r : law_table(quick(100))) {
        if (law_expected(r.law, r.op)) {
            EXPECT_LE(r.max_deviation, 1e-10) << to_string(r.law) << " " << to_string(r.op);
        } else {
            EXPECT_GT(r.max_deviation, 1e-6) << to_string(r.law) << " " << to_string(r.op);
            EXPECT_TRUE(r.worst.has_value());
        }
    }
}

TEST(Laws, Deterministic) {
    const LawReport a = check_law(Law::OpOverMul, OpKind::Hadamard, quick(50));
    const LawReport b = check_law(Law::OpOverMul, OpKind::Hadamard, quick(50));
    EXPECT_EQ(a.max_deviation, b.max_deviation);
}

TEST(Laws, RejectsBadOptions) {
    LawOptions o;
    o.trials = 0;
    EXPECT_THROW((void)check_law(Law::Transpose, OpKind::Add, o), Error);
}
