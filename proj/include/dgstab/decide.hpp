#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgstab/algebra.hpp"
#include "dgstab/certify.hpp"
#include "dgstab/classes.hpp"
#include "dgstab/linalg.hpp"
#include "dgstab/regions.hpp"

namespace dgstab {

struct Query {
    Matrix A;
    Region region;
    MatrixClass cls;
    BinaryOp op{};
    std::int64_t budget = 10000;
    std::uint64_t seed = 42;
    /// Minimal exterior margin of a refuting eigenvalue.
    double tol = 1e-7;
    bool search_certificates = true;
};

enum class Status { Certified, Refuted, Unknown };

[[nodiscard]] std::string to_string(Status status);

struct Verdict {
    Status status = Status::Unknown;
    std::optional<Certificate> certificate;  ///< Certified
    std::optional<Matrix> witness;           ///< Refuted: G
    std::optional<Complex> offending;        ///< Refuted: exterior eigenvalue of G o A
    double margin = 0.0;                     ///< Refuted: its signed distance
    std::int64_t trials_used = 0;
    std::vector<std::string> provenance;
};

/// Every eigenvalue of A lies in the interior of R.
[[nodiscard]] bool check_region_stability(const Matrix& A, const Region& R);

/// Threads used by falsification: DGSTAB_THREADS if set and positive,
/// otherwise the hardware concurrency.
[[nodiscard]] int default_thread_count();

/// Layered decision: unboundedness precheck, identity element, exhaustive
/// enumeration of finite classes, certificate search, randomized
/// falsification. Deterministic for a fixed seed.
[[nodiscard]] Verdict decide(const Query& q);

/// Randomized search only: Refuted with the lowest-index witness, or Unknown.
[[nodiscard]] Verdict falsify(const Query& q);

/// Checks the witness of a Refuted verdict from scratch: membership and an
/// exterior eigenvalue with margin > q.tol.
[[nodiscard]] bool witness_refutes(const Query& q, const Matrix& G);

struct StabilizeResult {
    bool found = false;
    std::optional<Matrix> G;
    /// Smallest total exterior margin seen (0 when found).
    double best_score = 0.0;
    std::int64_t trials = 0;
};

/// Looks for G0 in the class with sigma(G0 o A) inside the region: random
/// multi-start followed by coordinate descent on the diagonal parameters.
[[nodiscard]] StabilizeResult stabilize(const Matrix& A, const Region& region, const MatrixClass& cls,
                                        const BinaryOp& op, std::int64_t budget, std::uint64_t seed);

struct SubsetVerdict {
    std::vector<int> indices;  ///< 0-based, increasing
    Verdict verdict;
};

struct TotalReport {
    Status overall = Status::Unknown;
    std::vector<SubsetVerdict> subsets;  ///< by increasing bitmask
};

/// decide() on every principal submatrix. Throws OrderTooLarge for n > 16.
[[nodiscard]] TotalReport total_stability(const Query& q);

struct InertiaReport {
    bool plausible = true;
    std::int64_t trials = 0;
    std::optional<Matrix> witness;
    Inertia of_product{};  ///< inertia of G o A
    Inertia of_g{};        ///< inertia of G
};

[[nodiscard]] InertiaReport inertia_preserving(const Matrix& A, const MatrixClass& cls, const BinaryOp& op,
                                               const Region& region, std::int64_t budget, std::uint64_t seed);

struct Transform {
    enum class Kind { Transpose, OpInverse, Scalar, Similarity };
    Kind kind = Kind::Transpose;
    double alpha = 1.0;  ///< Scalar
    Matrix S;            ///< Similarity: permutation or nonsingular diagonal

    static Transform transpose() { return {Kind::Transpose, 1.0, {}}; }
    static Transform op_inverse() { return {Kind::OpInverse, 1.0, {}}; }
    static Transform scalar(double a) { return {Kind::Scalar, a, {}}; }
    static Transform similarity(Matrix s) { return {Kind::Similarity, 1.0, std::move(s)}; }
};

/// The query for the transformed matrix (A^T, the op-inverse of A, alpha A,
/// or S A S^-1). Throws SingularMatrix for the Mul inverse of a singular A.
[[nodiscard]] Query transformed_query(const Query& q, const Transform& t);

/// Carries a verdict for q over to transformed_query(q, t) when the
/// transfer hypotheses hold; the transformed witness or
/// certificate is re-verified. Unknown with provenance "theorem
/// inapplicable" otherwise.
[[nodiscard]] Verdict transfer_verdict(const Verdict& v, const Query& q, const Transform& t);

}  // namespace dgstab
