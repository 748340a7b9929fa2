#include "dgstab/classes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dgstab {

// ---------------------------------------------------------------------------
// Partition / Permutation

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    int next = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].empty()) throw Error(ErrorCode::InvalidArgument, "partition blocks must be non-empty");
        for (int idx : blocks_[b]) {
            if (idx != next) {
                throw Error(ErrorCode::InvalidArgument,
                            "partition blocks must be contiguous, ordered and cover 0..n-1");
            }
            block_of_.push_back(static_cast<int>(b));
            ++next;
        }
    }
    if (next == 0) throw Error(ErrorCode::InvalidArgument, "partition must cover at least one index");
    order_ = next;
}

Partition Partition::singletons(int n) {
    std::vector<std::vector<int>> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back({i});
    return Partition(std::move(blocks));
}

Partition Partition::from_sizes(const std::vector<int>& sizes) {
    std::vector<std::vector<int>> blocks;
    int next = 0;
    for (int s : sizes) {
        std::vector<int> block(static_cast<std::size_t>(std::max(s, 0)));
        std::iota(block.begin(), block.end(), next);
        next += std::max(s, 0);
        blocks.push_back(std::move(block));
    }
    return Partition(std::move(blocks));
}

bool Partition::refines(const Partition& coarser) const {
    if (coarser.order_ != order_) return false;
    return std::all_of(blocks_.begin(), blocks_.end(), [&](const std::vector<int>& block) {
        const int target = coarser.block_of(block.front());
        return std::all_of(block.begin(), block.end(), [&](int i) { return coarser.block_of(i) == target; });
    });
}

Partition Partition::restrict_to(const std::vector<int>& indices) const {
    std::vector<std::vector<int>> out;
    int last_block = -1;
    for (std::size_t p = 0; p < indices.size(); ++p) {
        const int b = block_of(indices[p]);
        if (b != last_block) {
            out.emplace_back();
            last_block = b;
        }
        out.back().push_back(static_cast<int>(p));
    }
    return Partition(std::move(out));
}

Permutation::Permutation(std::vector<int> theta) : theta_(std::move(theta)) {
    std::vector<bool> seen(theta_.size(), false);
    for (int v : theta_) {
        if (v < 0 || static_cast<std::size_t>(v) >= theta_.size() || seen[static_cast<std::size_t>(v)]) {
            throw Error(ErrorCode::InvalidArgument, "theta must be a bijection on 0..n-1");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
    if (theta_.empty()) throw Error(ErrorCode::InvalidArgument, "empty permutation");
}

Permutation Permutation::identity(int n) {
    std::vector<int> t(static_cast<std::size_t>(n));
    std::iota(t.begin(), t.end(), 0);
    return Permutation(std::move(t));
}

Permutation Permutation::restrict_to(const std::vector<int>& indices) const {
    std::vector<int> pos(theta_.size(), -1);
    for (std::size_t p = 0; p < indices.size(); ++p) pos[static_cast<std::size_t>(indices[p])] = static_cast<int>(p);
    std::vector<int> out;
    for (int v : theta_) {
        if (pos[static_cast<std::size_t>(v)] >= 0) out.push_back(pos[static_cast<std::size_t>(v)]);
    }
    return Permutation(std::move(out));
}

// ---------------------------------------------------------------------------
// MatrixClass construction

MatrixClass::MatrixClass(ClassKind kind, int n) : kind_(kind), n_(n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "class order must be positive");
}

MatrixClass MatrixClass::symmetric(int n) { return MatrixClass(ClassKind::Symmetric, n); }
MatrixClass MatrixClass::spd(int n) { return MatrixClass(ClassKind::SPD, n); }
MatrixClass MatrixClass::diag(int n) { return MatrixClass(ClassKind::Diag, n); }
MatrixClass MatrixClass::pos_diag(int n) { return MatrixClass(ClassKind::PosDiag, n); }
MatrixClass MatrixClass::vertex_diag(int n) { return MatrixClass(ClassKind::VertexDiag, n); }
MatrixClass MatrixClass::identity(int n) { return MatrixClass(ClassKind::Identity, n); }

MatrixClass MatrixClass::sym_alpha_diag(Partition alpha) {
    MatrixClass c(ClassKind::SymAlphaDiag, alpha.order());
    c.partition_ = std::move(alpha);
    return c;
}

MatrixClass MatrixClass::alpha_scalar(Partition alpha) {
    MatrixClass c(ClassKind::AlphaScalar, alpha.order());
    c.partition_ = std::move(alpha);
    return c;
}

MatrixClass MatrixClass::pos_alpha_scalar(Partition alpha) {
    MatrixClass c(ClassKind::PosAlphaScalar, alpha.order());
    c.partition_ = std::move(alpha);
    return c;
}

MatrixClass MatrixClass::sign_diag(std::vector<int> signs) {
    MatrixClass c(ClassKind::SignDiag, static_cast<int>(signs.size()));
    for (int s : signs) {
        if (s < -1 || s > 1) throw Error(ErrorCode::InvalidArgument, "sign pattern entries must be -1, 0 or 1");
    }
    c.signs_ = std::move(signs);
    return c;
}

MatrixClass MatrixClass::theta_ordered(Permutation theta) {
    MatrixClass c(ClassKind::ThetaOrdered, theta.order());
    c.theta_ = std::move(theta);
    return c;
}

MatrixClass MatrixClass::box_diag(Vector lo, Vector hi) {
    MatrixClass c(ClassKind::BoxDiag, static_cast<int>(lo.size()));
    if (hi.size() != lo.size()) throw Error(ErrorCode::DimensionMismatch, "box bounds differ in length");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)) || !(lo(i) < hi(i))) {
            throw Error(ErrorCode::InvalidArgument, "box bounds must be finite with lo < hi");
        }
    }
    c.lo_ = std::move(lo);
    c.hi_ = std::move(hi);
    return c;
}

MatrixClass MatrixClass::rank_k_positive(int n, int k) {
    MatrixClass c(ClassKind::RankKPositive, n);
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "rank bound must be positive");
    c.k_ = k;
    return c;
}

MatrixClass MatrixClass::sum_of_rank_one_positive(int n, int k) {
    MatrixClass c(ClassKind::SumOfRankOnePositive, n);
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "term count must be positive");
    c.k_ = k;
    return c;
}

MatrixClass MatrixClass::parametric_rank_one(Vector x, Vector y, double tau_lo, double tau_hi) {
    MatrixClass c(ClassKind::ParametricRankOne, static_cast<int>(x.size()));
    if (y.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
    if (!std::isfinite(tau_lo) || !std::isfinite(tau_hi) || tau_lo > tau_hi) {
        throw Error(ErrorCode::InvalidArgument, "tau range must be finite with lo <= hi");
    }
    c.x_ = std::move(x);
    c.y_ = std::move(y);
    c.tau_lo_ = tau_lo;
    c.tau_hi_ = tau_hi;
    return c;
}

MatrixClass MatrixClass::explicit_list(std::vector<Matrix> members) {
    if (members.empty()) throw Error(ErrorCode::InvalidArgument, "explicit class needs at least one member");
    MatrixClass c(ClassKind::Explicit, static_cast<int>(members.front().rows()));
    for (const Matrix& m : members) {
        require_valid(m);
        if (m.rows() != c.n_) throw Error(ErrorCode::DimensionMismatch, "explicit members differ in order");
    }
    c.members_ = std::move(members);
    return c;
}

std::string MatrixClass::name() const {
    switch (kind_) {
        case ClassKind::Symmetric: return "symmetric";
        case ClassKind::SPD: return "spd";
        case ClassKind::SymAlphaDiag: return "sym_alpha_diag";
        case ClassKind::Diag: return "diag";
        case ClassKind::PosDiag: return "pos_diag";
        case ClassKind::SignDiag: return "sign_diag";
        case ClassKind::AlphaScalar: return "alpha_scalar";
        case ClassKind::PosAlphaScalar: return "pos_alpha_scalar";
        case ClassKind::ThetaOrdered: return "theta_ordered";
        case ClassKind::BoxDiag: return "box_diag";
        case ClassKind::VertexDiag: return "vertex_diag";
        case ClassKind::RankKPositive: return "rank_k_positive";
        case ClassKind::SumOfRankOnePositive: return "sum_rank_one_positive";
        case ClassKind::ParametricRankOne: return "parametric_rank_one";
        case ClassKind::Identity: return "identity";
        case ClassKind::Explicit: return "explicit";
    }
    return "?";
}

bool MatrixClass::is_finite() const noexcept {
    return kind_ == ClassKind::VertexDiag || kind_ == ClassKind::Identity || kind_ == ClassKind::Explicit;
}

bool MatrixClass::is_bounded() const noexcept {
    return is_finite() || kind_ == ClassKind::BoxDiag || kind_ == ClassKind::ParametricRankOne;
}

bool MatrixClass::is_diagonal() const noexcept {
    switch (kind_) {
        case ClassKind::Diag:
        case ClassKind::PosDiag:
        case ClassKind::SignDiag:
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar:
        case ClassKind::ThetaOrdered:
        case ClassKind::BoxDiag:
        case ClassKind::VertexDiag:
        case ClassKind::Identity: return true;
        default: return false;
    }
}

bool MatrixClass::is_cone() const noexcept { return !is_bounded(); }

namespace {

Vector slice(const Vector& v, const std::vector<int>& indices) {
    Vector out(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t p = 0; p < indices.size(); ++p) out(static_cast<Eigen::Index>(p)) = v(indices[p]);
    return out;
}

}  // namespace

MatrixClass MatrixClass::restrict_to(const std::vector<int>& indices) const {
    const int m = static_cast<int>(indices.size());
    if (m == 0) throw Error(ErrorCode::IndexOutOfRange, "empty index set");
    for (std::size_t p = 0; p < indices.size(); ++p) {
        if (indices[p] < 0 || indices[p] >= n_ || (p > 0 && indices[p] <= indices[p - 1])) {
            throw Error(ErrorCode::IndexOutOfRange, "index set must be strictly increasing within the order");
        }
    }
    switch (kind_) {
        case ClassKind::Symmetric: return symmetric(m);
        case ClassKind::SPD: return spd(m);
        case ClassKind::SymAlphaDiag: return sym_alpha_diag(partition_->restrict_to(indices));
        case ClassKind::Diag: return diag(m);
        case ClassKind::PosDiag: return pos_diag(m);
        case ClassKind::SignDiag: {
            std::vector<int> s;
            for (int i : indices) s.push_back(signs_[static_cast<std::size_t>(i)]);
            return sign_diag(std::move(s));
        }
        case ClassKind::AlphaScalar: return alpha_scalar(partition_->restrict_to(indices));
        case ClassKind::PosAlphaScalar: return pos_alpha_scalar(partition_->restrict_to(indices));
        case ClassKind::ThetaOrdered: return theta_ordered(theta_->restrict_to(indices));
        case ClassKind::BoxDiag: return box_diag(slice(lo_, indices), slice(hi_, indices));
        case ClassKind::VertexDiag: return vertex_diag(m);
        case ClassKind::RankKPositive: return rank_k_positive(m, k_);
        case ClassKind::SumOfRankOnePositive: return sum_of_rank_one_positive(m, k_);
        case ClassKind::ParametricRankOne:
            return parametric_rank_one(slice(x_, indices), slice(y_, indices), tau_lo_, tau_hi_);
        case ClassKind::Identity: return identity(m);
        case ClassKind::Explicit: {
            std::vector<Matrix> sub;
            for (const Matrix& M : members_) sub.push_back(principal_submatrix(M, indices));
            return explicit_list(std::move(sub));
        }
    }
    return *this;
}

bool operator==(const MatrixClass& a, const MatrixClass& b) {
    auto same_vec = [](const Vector& u, const Vector& v) { return u.size() == v.size() && u == v; };
    if (a.kind_ != b.kind_ || a.n_ != b.n_ || a.partition_ != b.partition_ || a.theta_ != b.theta_ ||
        a.signs_ != b.signs_ || a.k_ != b.k_ || a.tau_lo_ != b.tau_lo_ || a.tau_hi_ != b.tau_hi_) {
        return false;
    }
    if (!same_vec(a.lo_, b.lo_) || !same_vec(a.hi_, b.hi_) || !same_vec(a.x_, b.x_) || !same_vec(a.y_, b.y_)) {
        return false;
    }
    if (a.members_.size() != b.members_.size()) return false;
    for (std::size_t i = 0; i < a.members_.size(); ++i) {
        if (a.members_[i] != b.members_[i]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Membership

namespace {

struct Shape {
    double scale;
    double tol;

    [[nodiscard]] bool zero(double v) const { return std::abs(v) <= tol * scale; }
};

bool is_diag(const Matrix& M, const Shape& s) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            if (i != j && !s.zero(M(i, j))) return false;
        }
    }
    return true;
}

bool is_sym(const Matrix& M, const Shape& s) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < M.rows(); ++i) {
            if (!s.zero(M(i, j) - M(j, i))) return false;
        }
    }
    return true;
}

bool positive_diagonal(const Matrix& M, double tol) {
    const double threshold = tol * M.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        if (!(M(i, i) > threshold)) return false;
    }
    return true;
}

bool pd(const Matrix& M, double tol) {
    try {
        return is_positive_definite(M, tol);
    } catch (const Error&) {
        return false;
    }
}

int numerical_rank(const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > 1e-9 * sv(0)) ++r;
    }
    return r;
}

bool alpha_scalar_pattern(const Matrix& M, const Partition& alpha, const Shape& s) {
    for (const auto& block : alpha.blocks()) {
        for (int i : block) {
            if (!s.zero(M(i, i) - M(block.front(), block.front()))) return false;
        }
    }
    return true;
}

}  // namespace

bool contains(const MatrixClass& C, const Matrix& M, double tol) {
    if (M.rows() != C.order() || M.cols() != C.order()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix order " + std::to_string(M.rows()) + " vs class order " +
                                                      std::to_string(C.order()));
    }
    if (!is_finite(M)) return false;
    const Shape s{std::max(1.0, max_abs(M)), tol};
    const int n = C.order();

    switch (C.kind()) {
        case ClassKind::Symmetric: return is_sym(M, s);
        case ClassKind::SPD: return is_sym(M, s) && pd(M, tol);
        case ClassKind::SymAlphaDiag: {
            if (!is_sym(M, s)) return false;
            const Partition& alpha = *C.partition();
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (alpha.block_of(i) != alpha.block_of(j) && !s.zero(M(i, j))) return false;
                }
            }
            return pd(M, tol);
        }
        case ClassKind::Diag: return is_diag(M, s);
        case ClassKind::PosDiag: return is_diag(M, s) && positive_diagonal(M, tol);
        case ClassKind::SignDiag: {
            if (!is_diag(M, s)) return false;
            const double threshold = tol * M.diagonal().cwiseAbs().maxCoeff();
            for (int i = 0; i < n; ++i) {
                const double d = M(i, i);
                switch (C.signs()[static_cast<std::size_t>(i)]) {
                    case 1:
                        if (!(d > threshold)) return false;
                        break;
                    case -1:
                        if (!(d < -threshold)) return false;
                        break;
                    default:
                        if (std::abs(d) > threshold) return false;
                }
            }
            return true;
        }
        case ClassKind::AlphaScalar: return is_diag(M, s) && alpha_scalar_pattern(M, *C.partition(), s);
        case ClassKind::PosAlphaScalar:
            return is_diag(M, s) && positive_diagonal(M, tol) && alpha_scalar_pattern(M, *C.partition(), s);
        case ClassKind::ThetaOrdered: {
            if (!is_diag(M, s) || !positive_diagonal(M, tol)) return false;
            const Permutation& theta = *C.permutation();
            for (int i = 0; i + 1 < n; ++i) {
                if (M(theta[i], theta[i]) < M(theta[i + 1], theta[i + 1]) - tol * s.scale) return false;
            }
            return true;
        }
        case ClassKind::BoxDiag: {
            if (!is_diag(M, s)) return false;
            for (int i = 0; i < n; ++i) {
                if (!(C.lo()(i) < M(i, i) && M(i, i) < C.hi()(i))) return false;
            }
            return true;
        }
        case ClassKind::VertexDiag: {
            if (!is_diag(M, s)) return false;
            for (int i = 0; i < n; ++i) {
                if (std::abs(std::abs(M(i, i)) - 1.0) > tol) return false;
            }
            return true;
        }
        case ClassKind::RankKPositive:
        case ClassKind::SumOfRankOnePositive:
            // Entrywise positivity and rank <= k; for the sum-of-rank-one
            // class this is a necessary condition only.
            return (M.array() > 0.0).all() && numerical_rank(M) <= C.rank_bound();
        case ClassKind::ParametricRankOne: {
            const Matrix xy = C.x() * C.y().transpose();
            const double denom = xy.squaredNorm();
            const double tau = denom > 0.0 ? (M.cwiseProduct(xy)).sum() / denom : 0.0;
            const double slack = tol * std::max(1.0, std::max(std::abs(C.tau_lo()), std::abs(C.tau_hi())));
            if (tau < C.tau_lo() - slack || tau > C.tau_hi() + slack) return false;
            return max_abs(M - tau * xy) <= tol * s.scale;
        }
        case ClassKind::Identity: return max_abs(M - Matrix::Identity(n, n)) <= tol;
        case ClassKind::Explicit:
            return std::any_of(C.members().begin(), C.members().end(),
                               [&](const Matrix& G) { return max_abs(M - G) <= tol * s.scale; });
    }
    return false;
}

// ---------------------------------------------------------------------------
// Sampling and enumeration

namespace {

constexpr double kDiagLo = 1e-3;
constexpr double kDiagHi = 1e3;
constexpr double kSpdShift = 1e-8;

Matrix spd_block(Rng& rng, Eigen::Index m) {
    const Matrix B = gaussian_matrix(rng, m, m);
    return B.transpose() * B + kSpdShift * Matrix::Identity(m, m);
}

Matrix positive_rank_sum(Rng& rng, int n, int k) {
    Matrix M = Matrix::Zero(n, n);
    for (int r = 0; r < k; ++r) {
        Vector u(n), v(n);
        for (int i = 0; i < n; ++i) {
            u(i) = uniform(rng, 0.1, 10.0);
            v(i) = uniform(rng, 0.1, 10.0);
        }
        M += u * v.transpose();
    }
    return M;
}

Matrix draw(const MatrixClass& C, Rng& rng) {
    const int n = C.order();
    switch (C.kind()) {
        case ClassKind::Symmetric: {
            const Matrix B = gaussian_matrix(rng, n, n);
            return 0.5 * (B + B.transpose());
        }
        case ClassKind::SPD: return spd_block(rng, n);
        case ClassKind::SymAlphaDiag: {
            Matrix H = Matrix::Zero(n, n);
            for (const auto& block : C.partition()->blocks()) {
                const auto m = static_cast<Eigen::Index>(block.size());
                H.block(block.front(), block.front(), m, m) = spd_block(rng, m);
            }
            return H;
        }
        case ClassKind::Diag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = random_sign(rng) * log_uniform(rng, kDiagLo, kDiagHi);
            return d.asDiagonal();
        }
        case ClassKind::PosDiag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = log_uniform(rng, kDiagLo, kDiagHi);
            return d.asDiagonal();
        }
        case ClassKind::SignDiag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = C.signs()[static_cast<std::size_t>(i)] * log_uniform(rng, kDiagLo, kDiagHi);
            return d.asDiagonal();
        }
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar: {
            Vector d(n);
            for (const auto& block : C.partition()->blocks()) {
                double v = log_uniform(rng, kDiagLo, kDiagHi);
                if (C.kind() == ClassKind::AlphaScalar) v *= random_sign(rng);
                for (int i : block) d(i) = v;
            }
            return d.asDiagonal();
        }
        case ClassKind::ThetaOrdered: {
            std::vector<double> v(static_cast<std::size_t>(n));
            for (double& x : v) x = log_uniform(rng, kDiagLo, kDiagHi);
            std::sort(v.begin(), v.end(), std::greater<>());
            Vector d(n);
            for (int i = 0; i < n; ++i) d((*C.permutation())[static_cast<std::size_t>(i)]) = v[static_cast<std::size_t>(i)];
            return d.asDiagonal();
        }
        case ClassKind::BoxDiag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) {
                do {
                    d(i) = uniform(rng, C.lo()(i), C.hi()(i));
                } while (!(d(i) > C.lo()(i)));
            }
            return d.asDiagonal();
        }
        case ClassKind::VertexDiag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = random_sign(rng);
            return d.asDiagonal();
        }
        case ClassKind::RankKPositive:
        case ClassKind::SumOfRankOnePositive: return positive_rank_sum(rng, n, C.rank_bound());
        case ClassKind::ParametricRankOne: {
            const double tau = C.tau_lo() == C.tau_hi() ? C.tau_lo() : uniform(rng, C.tau_lo(), C.tau_hi());
            return tau * C.x() * C.y().transpose();
        }
        case ClassKind::Identity: return Matrix::Identity(n, n);
        case ClassKind::Explicit: {
            const auto i = std::uniform_int_distribution<std::size_t>(0, C.members().size() - 1)(rng);
            return C.members()[i];
        }
    }
    return Matrix::Identity(n, n);
}

}  // namespace

Matrix sample(const MatrixClass& C, Rng& rng) {
    // Rejection only bites for nearly singular Gram samples.
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix G = draw(C, rng);
        if (contains(C, G)) return G;
    }
    throw Error(ErrorCode::InvalidArgument, "sampler for " + C.name() + " failed to produce a member");
}

std::vector<Matrix> enumerate(const MatrixClass& C) {
    const int n = C.order();
    switch (C.kind()) {
        case ClassKind::VertexDiag: {
            if (n > 20) throw Error(ErrorCode::OrderTooLarge, "vertex enumeration is limited to n <= 20");
            std::vector<Matrix> out;
            const std::uint32_t count = 1u << n;
            out.reserve(count);
            for (std::uint32_t code = 0; code < count; ++code) {
                Vector d(n);
                for (int i = 0; i < n; ++i) d(i) = ((code >> (n - 1 - i)) & 1u) ? -1.0 : 1.0;
                out.emplace_back(d.asDiagonal());
            }
            return out;
        }
        case ClassKind::Identity: return {Matrix::Identity(n, n)};
        case ClassKind::Explicit: return C.members();
        default: throw Error(ErrorCode::InfiniteClass, C.name() + " has infinitely many members");
    }
}

std::optional<Matrix> identity_element(const MatrixClass& C, OpKind op) {
    const int n = C.order();
    Matrix L;
    switch (op) {
        case OpKind::Add: L = Matrix::Zero(n, n); break;
        case OpKind::Mul: L = Matrix::Identity(n, n); break;
        case OpKind::Hadamard: L = Matrix::Ones(n, n); break;
    }
    if (contains(C, L)) return L;
    return std::nullopt;
}

std::optional<Matrix> op_inverse(OpKind op, const Matrix& G) {
    switch (op) {
        case OpKind::Add: return Matrix(-G);
        case OpKind::Mul: {
            Eigen::FullPivLU<Matrix> lu(G);
            if (!lu.isInvertible()) return std::nullopt;
            return Matrix(lu.inverse());
        }
        case OpKind::Hadamard:
            if ((G.array() == 0.0).any()) return std::nullopt;
            return Matrix(G.cwiseInverse());
    }
    return std::nullopt;
}

ClosureReport closure_probe(const MatrixClass& C, OpKind op, int trials, std::uint64_t seed, double tol) {
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    const SeedStream stream(seed);
    ClosureReport report;
    for (int t = 0; t < trials && (report.closed.holds || report.has_inverses.holds); ++t) {
        Rng rng = stream.child(static_cast<std::uint64_t>(t)).engine();
        const Matrix G1 = sample(C, rng);
        const Matrix G2 = sample(C, rng);
        if (report.closed.holds && !contains(C, combine(op, G1, G2), tol)) {
            report.closed = {false, {G1, G2}};
        }
        if (report.has_inverses.holds) {
            const auto inv = op_inverse(op, G1);
            if (!inv || !contains(C, *inv, tol)) report.has_inverses = {false, {G1}};
        }
    }
    return report;
}

ChainMembership chain_memberships(const Matrix& D, const Partition& alpha, double tol) {
    require_valid(D);
    if (alpha.order() != D.rows()) throw Error(ErrorCode::DimensionMismatch, "partition order differs from D");
    const int n = alpha.order();
    return {contains(MatrixClass::pos_alpha_scalar(alpha), D, tol), contains(MatrixClass::pos_diag(n), D, tol),
            contains(MatrixClass::sym_alpha_diag(alpha), D, tol), contains(MatrixClass::spd(n), D, tol)};
}

ThetaRatios theta_ratios(const Matrix& D, const Permutation& theta) {
    require_valid(D);
    if (theta.order() != D.rows()) throw Error(ErrorCode::DimensionMismatch, "permutation order differs from D");
    if (!contains(MatrixClass::theta_ordered(theta), D)) {
        throw Error(ErrorCode::NotThetaOrdered, "D is not a theta-ordered positive diagonal matrix");
    }
    ThetaRatios r{std::numeric_limits<double>::infinity(), 0.0};
    if (theta.order() == 1) return {1.0, 1.0};
    for (int i = 0; i + 1 < theta.order(); ++i) {
        const double ratio = D(theta[i], theta[i]) / D(theta[i + 1], theta[i + 1]);
        r.d_min = std::min(r.d_min, ratio);
        r.d_max = std::max(r.d_max, ratio);
    }
    return r;
}

// ---------------------------------------------------------------------------

namespace {

bool positive_box(const MatrixClass& C) { return C.kind() == ClassKind::BoxDiag && (C.lo().array() >= 0.0).all(); }

bool all_positive_signs(const MatrixClass& C) {
    return C.kind() == ClassKind::SignDiag &&
           std::all_of(C.signs().begin(), C.signs().end(), [](int s) { return s == 1; });
}

// Members are positive diagonal matrices.
bool inside_pos_diag(const MatrixClass& C) {
    switch (C.kind()) {
        case ClassKind::PosDiag:
        case ClassKind::PosAlphaScalar:
        case ClassKind::ThetaOrdered:
        case ClassKind::Identity: return true;
        default: return positive_box(C) || all_positive_signs(C);
    }
}

}  // namespace

bool is_subclass(const MatrixClass& sub, const MatrixClass& super) {
    if (sub.order() != super.order()) return false;
    if (sub == super) return true;
    if (sub.kind() == ClassKind::Explicit || sub.kind() == ClassKind::Identity) {
        const auto members = enumerate(sub);
        return std::all_of(members.begin(), members.end(), [&](const Matrix& M) { return contains(super, M); });
    }
    switch (super.kind()) {
        case ClassKind::Symmetric:
            return sub.kind() == ClassKind::SPD || sub.kind() == ClassKind::SymAlphaDiag || sub.is_diagonal();
        case ClassKind::SPD: return sub.kind() == ClassKind::SymAlphaDiag || inside_pos_diag(sub);
        case ClassKind::SymAlphaDiag:
            if (sub.kind() == ClassKind::SymAlphaDiag) return sub.partition()->refines(*super.partition());
            return inside_pos_diag(sub);
        case ClassKind::Diag: return sub.is_diagonal();
        case ClassKind::PosDiag: return inside_pos_diag(sub);
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar: {
            const bool scalar_sub = sub.kind() == ClassKind::PosAlphaScalar ||
                                    (super.kind() == ClassKind::AlphaScalar && sub.kind() == ClassKind::AlphaScalar);
            return scalar_sub && super.partition()->refines(*sub.partition());
        }
        case ClassKind::BoxDiag:
            if (sub.kind() == ClassKind::VertexDiag)
                return (super.lo().array() < -1.0).all() && (super.hi().array() > 1.0).all();
            return sub.kind() == ClassKind::BoxDiag && (sub.lo().array() >= super.lo().array()).all() &&
                   (sub.hi().array() <= super.hi().array()).all();
        case ClassKind::RankKPositive:
        case ClassKind::SumOfRankOnePositive:
            return (sub.kind() == ClassKind::RankKPositive || sub.kind() == ClassKind::SumOfRankOnePositive) &&
                   sub.rank_bound() <= super.rank_bound() &&
                   (super.kind() == ClassKind::RankKPositive || sub.kind() == super.kind());
        default: return false;
    }
}

std::vector<double> diagonal_parameters(const MatrixClass& C, const Matrix& G) {
    if (!C.is_diagonal() || C.kind() == ClassKind::Identity) return {};
    if (C.kind() == ClassKind::AlphaScalar || C.kind() == ClassKind::PosAlphaScalar) {
        std::vector<double> p;
        for (const auto& block : C.partition()->blocks()) p.push_back(G(block.front(), block.front()));
        return p;
    }
    std::vector<double> p(static_cast<std::size_t>(C.order()));
    for (int i = 0; i < C.order(); ++i) p[static_cast<std::size_t>(i)] = G(i, i);
    return p;
}

Matrix from_diagonal_parameters(const MatrixClass& C, const std::vector<double>& p) {
    const int n = C.order();
    Vector d(n);
    if (C.kind() == ClassKind::AlphaScalar || C.kind() == ClassKind::PosAlphaScalar) {
        const auto& blocks = C.partition()->blocks();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            for (int i : blocks[b]) d(i) = p.at(b);
        }
    } else {
        for (int i = 0; i < n; ++i) d(i) = p.at(static_cast<std::size_t>(i));
    }
    return d.asDiagonal();
}

}  // namespace dgstab
