#include "dgstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dgstab {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidMatrix: return "InvalidMatrix";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonSymmetric: return "NonSymmetric";
        case ErrorCode::SingularOperator: return "SingularOperator";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::EigenFailure: return "EigenFailure";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::InfiniteClass: return "InfiniteClass";
        case ErrorCode::NotThetaOrdered: return "NotThetaOrdered";
        case ErrorCode::Unrepresentable: return "Unrepresentable";
        case ErrorCode::UnsupportedClass: return "UnsupportedClass";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {

constexpr double kSingularRcond = 1e-12;
constexpr double kRhsSymmetryTol = 1e-10;

void require_symmetric_rhs(const Matrix& W, Eigen::Index n) {
    if (W.rows() != n || W.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "right-hand side must be " + std::to_string(n) + "x" +
                                                      std::to_string(n));
    }
    if (!is_finite(W)) throw Error(ErrorCode::InvalidMatrix, "right-hand side has non-finite entries");
    if (max_abs(W - W.transpose()) > kRhsSymmetryTol * std::max(1.0, max_abs(W))) {
        throw Error(ErrorCode::NonSymmetric, "right-hand side is not symmetric");
    }
}

Matrix solve_vectorized(const Matrix& K, const Matrix& W, Eigen::Index n, const char* what) {
    Eigen::PartialPivLU<Matrix> lu(K);
    const double rcond = lu.rcond();
    if (!(rcond >= kSingularRcond)) {
        throw Error(ErrorCode::SingularOperator,
                    std::string(what) + " operator is singular (rcond " + std::to_string(rcond) + ")");
    }
    const Vector w = Eigen::Map<const Vector>(W.data(), n * n);
    const Vector h = lu.solve(w);
    Matrix H = Eigen::Map<const Matrix>(h.data(), n, n);
    return 0.5 * (H + H.transpose());
}

}  // namespace

bool is_finite(const Matrix& A) noexcept { return A.allFinite(); }

void require_valid(const Matrix& A) {
    if (A.rows() == 0 || A.rows() != A.cols()) {
        throw Error(ErrorCode::InvalidMatrix,
                    "matrix must be square and non-empty, got " + std::to_string(A.rows()) + "x" +
                        std::to_string(A.cols()));
    }
    if (!is_finite(A)) throw Error(ErrorCode::InvalidMatrix, "matrix has non-finite entries");
}

double max_abs(const Matrix& A) noexcept { return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// HillCoefficients

HillCoefficients::HillCoefficients(Matrix c) : c_(std::move(c)) {
    if (c_.rows() == 0 || c_.rows() != c_.cols()) {
        throw Error(ErrorCode::InvalidArgument, "Hill coefficients must form a non-empty square array");
    }
    if (!is_finite(c_)) throw Error(ErrorCode::InvalidArgument, "Hill coefficients must be finite");
    if (c_ != c_.transpose()) throw Error(ErrorCode::NonSymmetric, "Hill coefficients require c_ij == c_ji");
}

HillCoefficients HillCoefficients::lyapunov() {
    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = c(1, 0) = 1.0;
    return HillCoefficients(c);
}

HillCoefficients HillCoefficients::stein() {
    Matrix c = Matrix::Zero(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = -1.0;
    return HillCoefficients(c);
}

double HillCoefficients::evaluate(Complex lambda) const {
    // conj(l)^i l^j = |l|^(2 min(i,j)) * l^(j-i) (or its conjugate); with c
    // symmetric only the real part survives, so pair (i,j) with (j,i).
    const Eigen::Index m = c_.rows();
    const double r2 = std::norm(lambda);
    std::vector<Complex> pow(static_cast<std::size_t>(m));
    std::vector<double> r2pow(static_cast<std::size_t>(m));
    pow[0] = 1.0;
    r2pow[0] = 1.0;
    for (Eigen::Index k = 1; k < m; ++k) {
        pow[k] = pow[k - 1] * lambda;
        r2pow[k] = r2pow[k - 1] * r2;
    }
    double f = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        f += c_(i, i) * r2pow[i];
        for (Eigen::Index j = i + 1; j < m; ++j) {
            if (c_(i, j) == 0.0) continue;
            f += 2.0 * c_(i, j) * r2pow[i] * pow[j - i].real();
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Spectra

const Spectrum& SpectrumWorkspace::compute(const Matrix& A) {
    require_valid(A);
    const Eigen::Index n = A.rows();
    solver_.setMaxIterations(100 * n);
    solver_.compute(A, /*computeEigenvectors=*/false);
    if (solver_.info() != Eigen::Success) {
        throw Error(ErrorCode::EigenFailure, "QR iteration did not converge within " +
                                                 std::to_string(100 * n) + " sweeps");
    }
    const auto& ev = solver_.eigenvalues();
    values_.assign(ev.data(), ev.data() + ev.size());
    return values_;
}

Spectrum eigenvalues(const Matrix& A) {
    SpectrumWorkspace ws;
    return ws.compute(A);
}

double spectral_radius(const Matrix& A) {
    double rho = 0.0;
    for (const Complex& l : eigenvalues(A)) rho = std::max(rho, std::abs(l));
    return rho;
}

double min_eigenvalue_symmetric(const Matrix& S) {
    const Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "symmetric eigensolver failed");
    return es.eigenvalues()(0);
}

bool is_positive_definite(const Matrix& S, double tol) {
    require_valid(S);
    const double scale = max_abs(S);
    if (max_abs(S - S.transpose()) > tol * scale) {
        throw Error(ErrorCode::NonSymmetric, "matrix is not symmetric within tolerance");
    }
    Matrix L = 0.5 * (S + S.transpose());
    const Eigen::Index n = L.rows();
    const double threshold = tol * L.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < n; ++k) {
        double pivot = L(k, k);
        for (Eigen::Index p = 0; p < k; ++p) pivot -= L(k, p) * L(k, p);
        if (!(pivot > threshold)) return false;
        const double root = std::sqrt(pivot);
        L(k, k) = root;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            double s = L(i, k);
            for (Eigen::Index p = 0; p < k; ++p) s -= L(i, p) * L(k, p);
            L(i, k) = s / root;
        }
    }
    return true;
}

Matrix symmetric_part(const Matrix& A) {
    require_valid(A);
    return A + A.transpose();
}

// ---------------------------------------------------------------------------
// Matrix equations

Matrix solve_lyapunov(const Matrix& A, const Matrix& W) {
    require_valid(A);
    const Eigen::Index n = A.rows();
    require_symmetric_rhs(W, n);
    const Eigen::Index N = n * n;
    Matrix K = Matrix::Zero(N, N);
    // Row (i + j n) of vec(HA + A^T H) = W.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index row = i + j * n;
            for (Eigen::Index k = 0; k < n; ++k) {
                K(row, i + k * n) += A(k, j);  // (HA)_ij
                K(row, k + j * n) += A(k, i);  // (A^T H)_ij
            }
        }
    }
    return solve_vectorized(K, W, n, "Lyapunov");
}

Matrix solve_stein(const Matrix& A, const Matrix& W) {
    require_valid(A);
    const Eigen::Index n = A.rows();
    require_symmetric_rhs(W, n);
    const Eigen::Index N = n * n;
    Matrix K = Matrix::Identity(N, N);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::Index row = i + j * n;
            for (Eigen::Index l = 0; l < n; ++l) {
                for (Eigen::Index k = 0; k < n; ++k) {
                    K(row, k + l * n) -= A(k, i) * A(l, j);
                }
            }
        }
    }
    return solve_vectorized(K, W, n, "Stein");
}

Matrix hill_form(const HillCoefficients& c, const Matrix& H, const Matrix& A) {
    require_valid(A);
    const Eigen::Index n = A.rows();
    if (H.rows() != n || H.cols() != n) throw Error(ErrorCode::DimensionMismatch, "H and A differ in order");
    const Eigen::Index m = c.size();
    std::vector<Matrix> powers(static_cast<std::size_t>(m));
    powers[0] = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k < m; ++k) powers[k] = powers[k - 1] * A;

    Matrix W = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        Matrix inner = Matrix::Zero(n, n);
        bool any = false;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (c(i, j) == 0.0) continue;
            inner += c(i, j) * (H * powers[j]);
            any = true;
        }
        if (any) W += powers[i].transpose() * inner;
    }
    if (!is_finite(W)) throw Error(ErrorCode::Overflow, "Hill form overflowed");
    return 0.5 * (W + W.transpose());
}

Matrix principal_submatrix(const Matrix& A, std::span<const int> indices) {
    if (indices.empty()) throw Error(ErrorCode::IndexOutOfRange, "index set must be non-empty");
    const auto n = static_cast<int>(A.rows());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 0 || indices[k] >= n) {
            throw Error(ErrorCode::IndexOutOfRange, "index " + std::to_string(indices[k]) + " outside [0, " +
                                                        std::to_string(n) + ")");
        }
        if (k > 0 && indices[k] <= indices[k - 1]) {
            throw Error(ErrorCode::IndexOutOfRange, "index set must be strictly increasing");
        }
    }
    const auto m = static_cast<Eigen::Index>(indices.size());
    Matrix S(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) S(i, j) = A(indices[i], indices[j]);
    }
    return S;
}

double matched_distance(const Spectrum& a, const Spectrum& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "spectra differ in size");
    const std::size_t n = a.size();
    std::vector<bool> used_a(n, false), used_b(n, false);
    double worst = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (used_b[j]) continue;
                const double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace dgstab
