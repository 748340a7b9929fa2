#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dgstab/error.hpp"

namespace dgstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Eigenvalues with algebraic multiplicity, in the order the QR iteration
/// delivers them.
using Spectrum = std::vector<Complex>;

/// Throws InvalidMatrix unless `A` is square, non-empty and finite.
void require_valid(const Matrix& A);

[[nodiscard]] bool is_finite(const Matrix& A) noexcept;

/// Coefficients c_ij of the region polynomial
///   f(l) = sum_ij c_ij conj(l)^i l^j
/// and of the matrix form sum_ij c_ij (A^T)^i H A^j.
/// Symmetry c_ij == c_ji is checked exactly at construction.
class HillCoefficients {
public:
    explicit HillCoefficients(Matrix c);

    /// c01 = c10 = 1: the classical Lyapunov form HA + A^T H.
    static HillCoefficients lyapunov();
    /// c00 = 1, c11 = -1: the Stein form H - A^T H A.
    static HillCoefficients stein();

    [[nodiscard]] const Matrix& matrix() const noexcept { return c_; }
    [[nodiscard]] Eigen::Index size() const noexcept { return c_.rows(); }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return c_(i, j); }

    /// f(l); real by symmetry of c and exactly invariant under l -> conj(l).
    [[nodiscard]] double evaluate(Complex lambda) const;

    friend bool operator==(const HillCoefficients& a, const HillCoefficients& b) {
        return a.c_.rows() == b.c_.rows() && a.c_ == b.c_;
    }

private:
    Matrix c_;
};

/// Hessenberg reduction + shifted QR; the total sweep count is capped at
/// 100 n. Throws EigenFailure on non-convergence.
[[nodiscard]] Spectrum eigenvalues(const Matrix& A);

/// Reusable eigensolver for hot loops (falsification). Not thread-safe; keep
/// one per thread.
class SpectrumWorkspace {
public:
    const Spectrum& compute(const Matrix& A);

private:
    Eigen::EigenSolver<Matrix> solver_;
    Spectrum values_;
};

[[nodiscard]] double spectral_radius(const Matrix& A);

/// Smallest eigenvalue of the symmetric matrix S (symmetrized first).
[[nodiscard]] double min_eigenvalue_symmetric(const Matrix& S);

/// Attempted Cholesky on (S + S^T)/2 with pivot threshold tol * max|diag|.
/// Throws NonSymmetric when max|S - S^T| > tol * max|S|.
[[nodiscard]] bool is_positive_definite(const Matrix& S, double tol = 1e-9);

/// A + A^T, without the factor 1/2.
[[nodiscard]] Matrix symmetric_part(const Matrix& A);

[[nodiscard]] double max_abs(const Matrix& A) noexcept;

/// Solves HA + A^T H = W by Kronecker vectorization (dense n^2 x n^2 LU).
/// Intended for n <= 32. Throws SingularOperator when the reciprocal
/// condition estimate of the vectorized operator drops below 1e-12, which
/// happens exactly when some pair of eigenvalues of A sums to zero.
[[nodiscard]] Matrix solve_lyapunov(const Matrix& A, const Matrix& W);

/// Solves H - A^T H A = W; singular when some product l_i l_j equals 1.
[[nodiscard]] Matrix solve_stein(const Matrix& A, const Matrix& W);

/// W = sum_ij c_ij (A^T)^i H A^j, symmetrized. Throws Overflow on non-finite
/// intermediate results.
[[nodiscard]] Matrix hill_form(const HillCoefficients& c, const Matrix& H, const Matrix& A);

/// Restriction of A to rows/columns in `indices` (0-based, strictly
/// increasing). Throws IndexOutOfRange otherwise.
[[nodiscard]] Matrix principal_submatrix(const Matrix& A, std::span<const int> indices);

/// Greedy minimal-weight matching distance between two spectra of equal
/// size: repeatedly pairs the closest remaining eigenvalues and returns the
/// largest paired distance. Heuristic but adequate for small n.
[[nodiscard]] double matched_distance(const Spectrum& a, const Spectrum& b);

}  // namespace dgstab
