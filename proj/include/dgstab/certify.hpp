#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgstab/algebra.hpp"
#include "dgstab/classes.hpp"
#include "dgstab/linalg.hpp"
#include "dgstab/regions.hpp"

namespace dgstab {

enum class CertificateKind {
    DiagonalLyapunov,     ///< D A + A^T D > 0, D positive diagonal
    AlphaScalarLyapunov,  ///< D positive alpha-scalar
    BlockLyapunov,        ///< H SPD, block diagonal w.r.t. alpha
    IdentityLyapunov,     ///< A + A^T > 0
    SteinDiagonal,        ///< D - A^T D A > 0, D positive diagonal
    HillCertificate,      ///< sum c_ij (A^T)^i H A^j > 0, H SPD
    InertiaLyapunov,      ///< H A + A^T H > 0, H symmetric nonsingular (verify only)
    Exhaustive,           ///< every member of a finite class was checked
};

[[nodiscard]] std::string to_string(CertificateKind kind);

struct StabilityTriple {
    Region region;
    MatrixClass cls;
    BinaryOp op;
};

struct Certificate {
    CertificateKind kind = CertificateKind::DiagonalLyapunov;
    /// P, D or H; for Exhaustive the member with the smallest interior margin.
    Matrix witness;
    /// Smallest eigenvalue of the certified form; for Exhaustive the smallest
    /// distance of any checked eigenvalue to the region boundary.
    double min_eig = 0.0;
    std::optional<Partition> partition;
    std::optional<HillCoefficients> hill;
    /// Exhaustive only.
    std::optional<StabilityTriple> scope;
    std::size_t members_checked = 0;
};

/// The matrix whose positive definiteness the certificate asserts.
[[nodiscard]] Matrix certified_form(const Certificate& cert, const Matrix& A);

/// Recomputes the certified form from scratch and checks positive
/// definiteness together with the structural class of the witness.
/// Exhaustive certificates re-enumerate their scope. Never throws.
[[nodiscard]] bool verify_certificate(const Certificate& cert, const Matrix& A);

/// The (region, class, op) triples the certificate proves stability for.
[[nodiscard]] std::vector<StabilityTriple> implied_stabilities(const Certificate& cert);

/// Whether some implied triple covers (region, cls, op): same region kind,
/// same operation (either side for Mul and Add), cls a subclass.
[[nodiscard]] bool certificate_covers(const Certificate& cert, const Region& region, const MatrixClass& cls,
                                      const BinaryOp& op);

struct SearchOptions {
    int budget = 5000;  ///< total ascent iterations over all starts
    int starts = 8;
    std::uint64_t seed = 42;
};

struct CertReport {
    std::optional<Certificate> certificate;  ///< set iff Found
    double best_min_eig = -std::numeric_limits<double>::infinity();
    int iterations = 0;

    [[nodiscard]] bool found() const noexcept { return certificate.has_value(); }
};

/// Projected subgradient ascent on lambda_min(DA + A^T D) over positive
/// diagonal D with trace n. A NotFound result is inconclusive.
[[nodiscard]] CertReport find_diagonal_lyapunov(const Matrix& A, const SearchOptions& options = {});

/// Same scheme on lambda_min(D - A^T D A).
[[nodiscard]] CertReport find_stein_diagonal(const Matrix& A, const SearchOptions& options = {});

/// P_class must be PosAlphaScalar (alpha-scalar D), SymAlphaDiag (SPD
/// alpha-blocks), PosDiag or Identity. Throws UnsupportedClass otherwise.
[[nodiscard]] CertReport find_structured_lyapunov(const Matrix& A, const MatrixClass& P_class,
                                                  const SearchOptions& options = {});

/// Solves HA + A^T H = I and wraps H as an InertiaLyapunov certificate.
/// Nullopt when the equation is singular.
[[nodiscard]] std::optional<Certificate> inertia_certificate(const Matrix& A);

}  // namespace dgstab
