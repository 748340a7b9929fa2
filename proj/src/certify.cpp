#include "dgstab/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "dgstab/random.hpp"

namespace dgstab {

std::string to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::DiagonalLyapunov: return "diagonal_lyapunov";
        case CertificateKind::AlphaScalarLyapunov: return "alpha_scalar_lyapunov";
        case CertificateKind::BlockLyapunov: return "block_lyapunov";
        case CertificateKind::IdentityLyapunov: return "identity_lyapunov";
        case CertificateKind::SteinDiagonal: return "stein_diagonal";
        case CertificateKind::HillCertificate: return "hill";
        case CertificateKind::InertiaLyapunov: return "inertia_lyapunov";
        case CertificateKind::Exhaustive: return "exhaustive";
    }
    return "?";
}

Matrix certified_form(const Certificate& cert, const Matrix& A) {
    const Matrix& P = cert.witness;
    switch (cert.kind) {
        case CertificateKind::SteinDiagonal: return P - A.transpose() * P * A;
        case CertificateKind::HillCertificate: return hill_form(*cert.hill, P, A);
        case CertificateKind::Exhaustive: return Matrix::Identity(A.rows(), A.cols()) * cert.min_eig;
        default: {
            const Matrix PA = P * A;
            return PA + PA.transpose();
        }
    }
}

namespace {

bool witness_in_class(const Certificate& cert) {
    const Matrix& P = cert.witness;
    const int n = static_cast<int>(P.rows());
    switch (cert.kind) {
        case CertificateKind::DiagonalLyapunov:
        case CertificateKind::SteinDiagonal: return contains(MatrixClass::pos_diag(n), P);
        case CertificateKind::AlphaScalarLyapunov:
            return cert.partition && contains(MatrixClass::pos_alpha_scalar(*cert.partition), P);
        case CertificateKind::BlockLyapunov:
            return cert.partition && contains(MatrixClass::sym_alpha_diag(*cert.partition), P);
        case CertificateKind::IdentityLyapunov: return P == Matrix::Identity(n, n);
        case CertificateKind::HillCertificate: return cert.hill && contains(MatrixClass::spd(n), P);
        case CertificateKind::InertiaLyapunov:
            return contains(MatrixClass::symmetric(n), P) && Eigen::FullPivLU<Matrix>(P).isInvertible();
        case CertificateKind::Exhaustive: return true;
    }
    return false;
}

bool verify_exhaustive(const Certificate& cert, const Matrix& A) {
    if (!cert.scope || cert.scope->cls.order() != A.rows()) return false;
    const StabilityTriple& s = *cert.scope;
    for (const Matrix& G : enumerate(s.cls)) {
        if (!spectrum_in_region(s.region, eigenvalues(apply(s.op, G, A)))) return false;
    }
    return true;
}

bool same_region_shape(const Region& a, const Region& b) {
    if (a.kind() != b.kind()) return false;
    if (a.kind() == RegionKind::Sector) return a.half_angle() == b.half_angle();
    if (a.kind() == RegionKind::Hill) return a.hill_coefficients() == b.hill_coefficients() && a.sense() == b.sense();
    return true;
}

bool op_covers(const BinaryOp& implied, const BinaryOp& query) {
    if (implied.kind != query.kind) return false;
    return query.kind != OpKind::Hadamard || implied.side == query.side;
}

}  // namespace

bool verify_certificate(const Certificate& cert, const Matrix& A) {
    try {
        require_valid(A);
        if (cert.kind == CertificateKind::Exhaustive) return verify_exhaustive(cert, A);
        if (cert.witness.rows() != A.rows() || cert.witness.cols() != A.cols()) return false;
        if (!witness_in_class(cert)) return false;
        return is_positive_definite(certified_form(cert, A));
    } catch (const Error&) {
        return false;
    }
}

std::vector<StabilityTriple> implied_stabilities(const Certificate& cert) {
    const int n = static_cast<int>(cert.witness.rows());
    const BinaryOp mul{OpKind::Mul, Side::Left};
    const BinaryOp add{OpKind::Add, Side::Left};
    const Region rhp = Region::right_half_plane();
    switch (cert.kind) {
        case CertificateKind::DiagonalLyapunov:
            return {{rhp, MatrixClass::pos_diag(n), mul}, {rhp, MatrixClass::pos_diag(n), add}};
        case CertificateKind::AlphaScalarLyapunov:
            return {{rhp, MatrixClass::sym_alpha_diag(*cert.partition), mul},
                    {rhp, MatrixClass::sym_alpha_diag(*cert.partition), add}};
        case CertificateKind::BlockLyapunov:
            return {{rhp, MatrixClass::pos_alpha_scalar(*cert.partition), mul},
                    {rhp, MatrixClass::pos_alpha_scalar(*cert.partition), add}};
        case CertificateKind::IdentityLyapunov:
            return {{rhp, MatrixClass::spd(n), mul}, {rhp, MatrixClass::spd(n), add}};
        case CertificateKind::SteinDiagonal: {
            const Region disk = Region::unit_disk();
            return {{disk, MatrixClass::vertex_diag(n), mul},
                    {disk, MatrixClass::box_diag(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0)), mul}};
        }
        case CertificateKind::Exhaustive:
            if (cert.scope) return {*cert.scope};
            return {};
        case CertificateKind::HillCertificate:
        case CertificateKind::InertiaLyapunov: return {};
    }
    return {};
}

bool certificate_covers(const Certificate& cert, const Region& region, const MatrixClass& cls, const BinaryOp& op) {
    for (const StabilityTriple& t : implied_stabilities(cert)) {
        if (!same_region_shape(t.region, region) || t.cls.order() != cls.order()) continue;
        if (cert.kind == CertificateKind::Exhaustive) {
            if (t.op == op && is_subclass(cls, t.cls)) return true;
            continue;
        }
        if (op_covers(t.op, op) && is_subclass(cls, t.cls)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Search

namespace {

constexpr double kFoundThreshold = 1e-8;
constexpr double kFloor = 1e-6;

struct MinEig {
    double value;
    Vector v;
};

MinEig smallest_eigenpair(const Matrix& W, Rng& rng) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (W + W.transpose()));
    const Vector& ev = es.eigenvalues();
    const double gap = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    Eigen::Index k = 1;
    while (k < ev.size() && ev(k) - ev(0) <= gap) ++k;
    if (k == 1) return {ev(0), es.eigenvectors().col(0)};
    Vector c(k);
    for (Eigen::Index i = 0; i < k; ++i) c(i) = std::normal_distribution<double>(0.0, 1.0)(rng);
    Vector v = es.eigenvectors().leftCols(k) * c;
    return {ev(0), v.normalized()};
}

/// Euclidean projection (weighted by w) onto {x >= floor, sum w x = total}:
/// x_k = max(floor, y_k - tau) with tau found by bisection.
Vector project_simplex(const Vector& y, const Vector& w, double total) {
    auto mass = [&](double tau) { return w.dot((y.array() - tau).max(kFloor).matrix()); };
    double lo = y.minCoeff() - total / w.sum() - 1.0;
    double hi = y.maxCoeff();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) > total ? lo : hi) = mid;
    }
    return (y.array() - 0.5 * (lo + hi)).max(kFloor).matrix();
}

struct DiagonalProblem {
    Vector weights;                                             // block sizes
    std::function<Matrix(const Vector&)> expand;                // params -> witness
    std::function<Matrix(const Matrix&)> form;                  // witness -> certified form (scaled A)
    std::function<Vector(const Vector&)> gradient;              // eigenvector -> d lambda / d params
    std::function<Certificate(const Matrix&)> make;             // witness -> certificate skeleton
};

CertReport ascend(const DiagonalProblem& p, const Matrix& A, const SearchOptions& options) {
    CertReport report;
    const Eigen::Index m = p.weights.size();
    const double total = p.weights.sum();
    const int starts = std::max(1, options.starts);
    const int per_start = std::max(1, options.budget / starts);
    const SeedStream stream(options.seed);

    for (int s = 0; s < starts; ++s) {
        Rng rng = stream.child(static_cast<std::uint64_t>(s)).engine();
        Vector x = Vector::Ones(m);
        if (s > 0) {
            for (Eigen::Index k = 0; k < m; ++k) x(k) = log_uniform(rng, 0.1, 10.0);
        }
        x = project_simplex(x, p.weights, total);

        for (int t = 1; t <= per_start; ++t) {
            ++report.iterations;
            const Matrix P = p.expand(x);
            const MinEig e = smallest_eigenpair(p.form(P), rng);
            report.best_min_eig = std::max(report.best_min_eig, e.value);
            if (e.value > kFoundThreshold) {
                Certificate cert = p.make(P);
                if (verify_certificate(cert, A)) {
                    cert.min_eig = min_eigenvalue_symmetric(certified_form(cert, A));
                    report.certificate = std::move(cert);
                    return report;
                }
            }
            const Vector g = p.gradient(e.v);
            const double gn = g.norm();
            if (!(gn > 0.0) || !std::isfinite(gn)) break;
            x = project_simplex(x + g / (gn * std::sqrt(static_cast<double>(t))), p.weights, total);
        }
    }
    return report;
}

double frobenius_scale(const Matrix& A) {
    const double s = A.norm();
    return s > 0.0 ? s : 1.0;
}

DiagonalProblem lyapunov_problem(const Matrix& As, const Partition& alpha, CertificateKind kind) {
    const int n = alpha.order();
    DiagonalProblem p;
    p.weights = Vector(static_cast<Eigen::Index>(alpha.blocks().size()));
    for (std::size_t b = 0; b < alpha.blocks().size(); ++b) {
        p.weights(static_cast<Eigen::Index>(b)) = static_cast<double>(alpha.blocks()[b].size());
    }
    p.expand = [alpha, n](const Vector& x) {
        Vector d(n);
        for (std::size_t b = 0; b < alpha.blocks().size(); ++b) {
            for (int i : alpha.blocks()[b]) d(i) = x(static_cast<Eigen::Index>(b));
        }
        return Matrix(d.asDiagonal());
    };
    p.form = [As](const Matrix& P) {
        const Matrix PA = P * As;
        return Matrix(PA + PA.transpose());
    };
    p.gradient = [As, alpha](const Vector& v) {
        const Vector Av = As * v;
        Vector g = Vector::Zero(static_cast<Eigen::Index>(alpha.blocks().size()));
        for (std::size_t b = 0; b < alpha.blocks().size(); ++b) {
            for (int i : alpha.blocks()[b]) g(static_cast<Eigen::Index>(b)) += 2.0 * v(i) * Av(i);
        }
        return g;
    };
    p.make = [kind, alpha](const Matrix& P) {
        Certificate c;
        c.kind = kind;
        c.witness = P;
        if (kind == CertificateKind::AlphaScalarLyapunov) c.partition = alpha;
        return c;
    };
    return p;
}

CertReport find_block_lyapunov(const Matrix& A, const Partition& alpha, const SearchOptions& options) {
    CertReport report;
    const int n = alpha.order();
    const Matrix As = A / frobenius_scale(A);
    const int starts = std::max(1, options.starts);
    const int per_start = std::max(1, options.budget / starts);
    const SeedStream stream(options.seed);
    const auto& blocks = alpha.blocks();

    // Projects every block's spectrum jointly onto {mu >= floor, sum mu = n}.
    auto project = [&](const Matrix& H) {
        std::vector<Eigen::SelfAdjointEigenSolver<Matrix>> parts;
        Vector mu(n);
        Eigen::Index at = 0;
        for (const auto& block : blocks) {
            const auto sz = static_cast<Eigen::Index>(block.size());
            const Matrix B = H.block(block.front(), block.front(), sz, sz);
            parts.emplace_back(0.5 * (B + B.transpose()));
            mu.segment(at, sz) = parts.back().eigenvalues();
            at += sz;
        }
        mu = project_simplex(mu, Vector::Ones(n), n);
        Matrix out = Matrix::Zero(n, n);
        at = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto sz = static_cast<Eigen::Index>(blocks[b].size());
            const Matrix& Q = parts[b].eigenvectors();
            out.block(blocks[b].front(), blocks[b].front(), sz, sz) =
                Q * mu.segment(at, sz).asDiagonal() * Q.transpose();
            at += sz;
        }
        return out;
    };

    for (int s = 0; s < starts; ++s) {
        Rng rng = stream.child(static_cast<std::uint64_t>(s)).engine();
        Matrix H = Matrix::Identity(n, n);
        if (s > 0) {
            for (const auto& block : blocks) {
                const auto sz = static_cast<Eigen::Index>(block.size());
                const Matrix B = gaussian_matrix(rng, sz, sz);
                H.block(block.front(), block.front(), sz, sz) = B.transpose() * B + 0.1 * Matrix::Identity(sz, sz);
            }
            H = project(H);
        }
        for (int t = 1; t <= per_start; ++t) {
            ++report.iterations;
            const Matrix HA = H * As;
            const MinEig e = smallest_eigenpair(HA + HA.transpose(), rng);
            report.best_min_eig = std::max(report.best_min_eig, e.value);
            if (e.value > kFoundThreshold) {
                Certificate cert;
                cert.kind = CertificateKind::BlockLyapunov;
                cert.witness = 0.5 * (H + H.transpose());
                cert.partition = alpha;
                if (verify_certificate(cert, A)) {
                    cert.min_eig = min_eigenvalue_symmetric(certified_form(cert, A));
                    report.certificate = std::move(cert);
                    return report;
                }
            }
            const Vector Av = As * e.v;
            Matrix G = Matrix::Zero(n, n);
            for (const auto& block : blocks) {
                for (int i : block) {
                    for (int j : block) G(i, j) = Av(i) * e.v(j) + e.v(i) * Av(j);
                }
            }
            const double gn = G.norm();
            if (!(gn > 0.0) || !std::isfinite(gn)) break;
            H = project(H + G / (gn * std::sqrt(static_cast<double>(t))));
        }
    }
    return report;
}

CertReport identity_check(const Matrix& A) {
    CertReport report;
    report.iterations = 1;
    Certificate cert;
    cert.kind = CertificateKind::IdentityLyapunov;
    cert.witness = Matrix::Identity(A.rows(), A.cols());
    const double scaled = min_eigenvalue_symmetric(symmetric_part(A / frobenius_scale(A)));
    report.best_min_eig = scaled;
    if (scaled > kFoundThreshold && verify_certificate(cert, A)) {
        cert.min_eig = min_eigenvalue_symmetric(symmetric_part(A));
        report.certificate = std::move(cert);
    }
    return report;
}

}  // namespace

CertReport find_diagonal_lyapunov(const Matrix& A, const SearchOptions& options) {
    require_valid(A);
    const Matrix As = A / frobenius_scale(A);
    return ascend(lyapunov_problem(As, Partition::singletons(static_cast<int>(A.rows())),
                                   CertificateKind::DiagonalLyapunov),
                  A, options);
}

CertReport find_stein_diagonal(const Matrix& A, const SearchOptions& options) {
    require_valid(A);
    const int n = static_cast<int>(A.rows());
    DiagonalProblem p;
    p.weights = Vector::Ones(n);
    p.expand = [](const Vector& x) { return Matrix(x.asDiagonal()); };
    p.form = [A](const Matrix& D) { return Matrix(D - A.transpose() * D * A); };
    p.gradient = [A](const Vector& v) {
        const Vector Av = A * v;
        return Vector(v.cwiseAbs2() - Av.cwiseAbs2());
    };
    p.make = [](const Matrix& D) {
        Certificate c;
        c.kind = CertificateKind::SteinDiagonal;
        c.witness = D;
        return c;
    };
    return ascend(p, A, options);
}

CertReport find_structured_lyapunov(const Matrix& A, const MatrixClass& P_class, const SearchOptions& options) {
    require_valid(A);
    if (P_class.order() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "class order differs from A");
    switch (P_class.kind()) {
        case ClassKind::Identity: return identity_check(A);
        case ClassKind::PosDiag: return find_diagonal_lyapunov(A, options);
        case ClassKind::PosAlphaScalar: {
            const Matrix As = A / frobenius_scale(A);
            return ascend(lyapunov_problem(As, *P_class.partition(), CertificateKind::AlphaScalarLyapunov), A,
                          options);
        }
        case ClassKind::SymAlphaDiag: return find_block_lyapunov(A, *P_class.partition(), options);
        default:
            throw Error(ErrorCode::UnsupportedClass, "no certificate parametrization for " + P_class.name());
    }
}

std::optional<Certificate> inertia_certificate(const Matrix& A) {
    require_valid(A);
    try {
        Certificate cert;
        cert.kind = CertificateKind::InertiaLyapunov;
        cert.witness = solve_lyapunov(A, Matrix::Identity(A.rows(), A.cols()));
        cert.min_eig = min_eigenvalue_symmetric(certified_form(cert, A));
        return cert;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::SingularOperator) return std::nullopt;
        throw;
    }
}

}  // namespace dgstab
