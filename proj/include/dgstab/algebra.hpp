#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgstab/linalg.hpp"

namespace dgstab {

enum class OpKind { Add, Mul, Hadamard };
enum class Side { Left, Right };

/// The binary operation of a stability query. Left means G o A, Right A o G.
struct BinaryOp {
    OpKind kind = OpKind::Mul;
    Side side = Side::Left;

    friend bool operator==(const BinaryOp&, const BinaryOp&) = default;
};

[[nodiscard]] std::string to_string(OpKind kind);

/// X o Y for the given kind. Throws DimensionMismatch on unequal shapes.
[[nodiscard]] Matrix combine(OpKind kind, const Matrix& X, const Matrix& Y);

/// G o A (Left) or A o G (Right).
[[nodiscard]] Matrix apply(const BinaryOp& op, const Matrix& G, const Matrix& A);

/// Operation identities checked by the randomized law verifiers.
enum class Law {
    SpectrumCommutation,  ///< sigma(A o B) = sigma(B o A)
    Transpose,            ///< (A o B)^T = B^T o A^T
    ScalarAssociative,    ///< a(A o B) = (aA) o B = A o (aB)
    ScalarDistributive,   ///< a(A o B) = (aA) o (aB)
    AddAssociative,       ///< (A o B) + C = A o (B + C)
    AddDistributive,      ///< (A + B) o C = A o C + B o C
    AddOverOp,            ///< A + (B o C) = (A + B) o (A + C)
    MulAssociative,       ///< A o (BC) = (AB) o C
    OpOverMul,            ///< A o (BC) = (A o B)(A o C)
    MulOverOp,            ///< A (B o C) = (AB) o (AC)
};

[[nodiscard]] std::string to_string(Law law);
[[nodiscard]] const std::vector<Law>& all_laws();

/// Whether the law is an identity for the operation (addition, matrix
/// product and Hadamard product only).
[[nodiscard]] bool law_expected(Law law, OpKind op);

struct LawOptions {
    int trials = 1000;
    int n_min = 2;
    int n_max = 8;
    std::uint64_t seed = 42;
    /// Draws the second operand with rank n-1 (spectrum commutation only).
    bool singular_operands = false;
};

struct LawWitness {
    std::vector<Matrix> operands;
    double alpha = 1.0;
    double deviation = 0.0;
};

/// max_deviation is relative: ||L - R||_F / max(1, ||L||_F, ||R||_F) for
/// matrix identities, matched eigenvalue distance / max(1, rho) for the
/// spectrum law. `worst` holds the operands of the worst trial.
struct LawReport {
    Law law;
    OpKind op;
    double max_deviation = 0.0;
    std::optional<LawWitness> worst;
};

[[nodiscard]] LawReport check_law(Law law, OpKind op, const LawOptions& options = {});

[[nodiscard]] LawReport check_spectrum_commutation(OpKind op, const LawOptions& options = {});
[[nodiscard]] LawReport check_transpose_law(OpKind op, const LawOptions& options = {});

struct ScalarLawReport {
    LawReport associative;
    LawReport distributive;
};
[[nodiscard]] ScalarLawReport check_scalar_laws(OpKind op, const LawOptions& options = {});

struct MulLawReport {
    LawReport mul_over_op;
    LawReport associative;
    LawReport op_over_mul;
};
[[nodiscard]] MulLawReport check_mul_distributivity(OpKind op, const LawOptions& options = {});

/// Every (law, op) cell.
[[nodiscard]] std::vector<LawReport> law_table(const LawOptions& options = {});

}  // namespace dgstab
