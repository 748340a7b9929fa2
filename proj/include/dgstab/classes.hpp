#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgstab/algebra.hpp"
#include "dgstab/linalg.hpp"
#include "dgstab/random.hpp"

namespace dgstab {

/// Ordered, disjoint, contiguous blocks covering {0, ..., n-1}.
class Partition {
public:
    explicit Partition(std::vector<std::vector<int>> blocks);

    /// One block per index.
    static Partition singletons(int n);
    /// Consecutive blocks of the given sizes.
    static Partition from_sizes(const std::vector<int>& sizes);

    [[nodiscard]] const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] int block_of(int index) const { return block_of_.at(static_cast<std::size_t>(index)); }

    /// Every block of *this lies inside a block of `coarser`.
    [[nodiscard]] bool refines(const Partition& coarser) const;

    /// Blocks intersected with `indices` (sorted, 0-based) and relabeled to
    /// positions within `indices`; empty intersections are dropped.
    [[nodiscard]] Partition restrict_to(const std::vector<int>& indices) const;

    friend bool operator==(const Partition& a, const Partition& b) { return a.blocks_ == b.blocks_; }

private:
    std::vector<std::vector<int>> blocks_;
    std::vector<int> block_of_;
    int order_ = 0;
};

/// A bijection on {0, ..., n-1} given as theta[0], ..., theta[n-1].
class Permutation {
public:
    explicit Permutation(std::vector<int> theta);
    static Permutation identity(int n);

    [[nodiscard]] const std::vector<int>& theta() const noexcept { return theta_; }
    [[nodiscard]] int order() const noexcept { return static_cast<int>(theta_.size()); }
    [[nodiscard]] int operator[](std::size_t i) const { return theta_[i]; }

    /// Entries of theta that belong to `indices`, in theta order, relabeled
    /// to positions within `indices`.
    [[nodiscard]] Permutation restrict_to(const std::vector<int>& indices) const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> theta_;
};

enum class ClassKind {
    Symmetric,
    SPD,
    SymAlphaDiag,  ///< symmetric positive definite, block diagonal w.r.t. a partition
    Diag,
    PosDiag,
    SignDiag,  ///< diagonal with a prescribed sign pattern
    AlphaScalar,
    PosAlphaScalar,
    ThetaOrdered,
    BoxDiag,  ///< diagonal with lo_i < d_i < hi_i
    VertexDiag,
    RankKPositive,         ///< entrywise positive, rank <= k
    SumOfRankOnePositive,  ///< sum of k entrywise positive rank-one terms
    ParametricRankOne,     ///< tau x y^T, tau in [tau_lo, tau_hi]
    Identity,
    Explicit,  ///< a finite explicit list
};

/// Descriptor of a matrix class G of fixed order.
class MatrixClass {
public:
    static constexpr double kDefaultTol = 1e-9;

    static MatrixClass symmetric(int n);
    static MatrixClass spd(int n);
    static MatrixClass sym_alpha_diag(Partition alpha);
    static MatrixClass diag(int n);
    static MatrixClass pos_diag(int n);
    /// signs in {-1, 0, +1}.
    static MatrixClass sign_diag(std::vector<int> signs);
    static MatrixClass alpha_scalar(Partition alpha);
    static MatrixClass pos_alpha_scalar(Partition alpha);
    static MatrixClass theta_ordered(Permutation theta);
    static MatrixClass box_diag(Vector lo, Vector hi);
    static MatrixClass vertex_diag(int n);
    static MatrixClass rank_k_positive(int n, int k);
    static MatrixClass sum_of_rank_one_positive(int n, int k);
    static MatrixClass parametric_rank_one(Vector x, Vector y, double tau_lo, double tau_hi);
    static MatrixClass identity(int n);
    static MatrixClass explicit_list(std::vector<Matrix> members);

    [[nodiscard]] ClassKind kind() const noexcept { return kind_; }
    [[nodiscard]] int order() const noexcept { return n_; }
    [[nodiscard]] std::string name() const;

    [[nodiscard]] const std::optional<Partition>& partition() const noexcept { return partition_; }
    [[nodiscard]] const std::optional<Permutation>& permutation() const noexcept { return theta_; }
    [[nodiscard]] const std::vector<int>& signs() const noexcept { return signs_; }
    [[nodiscard]] const Vector& lo() const noexcept { return lo_; }
    [[nodiscard]] const Vector& hi() const noexcept { return hi_; }
    [[nodiscard]] const Vector& x() const noexcept { return x_; }
    [[nodiscard]] const Vector& y() const noexcept { return y_; }
    [[nodiscard]] int rank_bound() const noexcept { return k_; }
    [[nodiscard]] double tau_lo() const noexcept { return tau_lo_; }
    [[nodiscard]] double tau_hi() const noexcept { return tau_hi_; }
    [[nodiscard]] const std::vector<Matrix>& members() const noexcept { return members_; }

    [[nodiscard]] bool is_finite() const noexcept;
    /// Bounded in norm (finite classes, boxes, bounded tau ranges).
    [[nodiscard]] bool is_bounded() const noexcept;
    /// Every member is diagonal.
    [[nodiscard]] bool is_diagonal() const noexcept;
    /// Closed under multiplication by positive scalars.
    [[nodiscard]] bool is_cone() const noexcept;

    /// The same class on the principal index set `indices` (sorted, 0-based):
    /// partitions and permutations are induced, bounds and vectors sliced.
    [[nodiscard]] MatrixClass restrict_to(const std::vector<int>& indices) const;

    friend bool operator==(const MatrixClass& a, const MatrixClass& b);

private:
    MatrixClass(ClassKind kind, int n);

    ClassKind kind_;
    int n_;
    std::optional<Partition> partition_;
    std::optional<Permutation> theta_;
    std::vector<int> signs_;
    Vector lo_, hi_, x_, y_;
    int k_ = 0;
    double tau_lo_ = 0.0, tau_hi_ = 0.0;
    std::vector<Matrix> members_;
};

/// Structural membership with tolerance `tol`: zero patterns and symmetry
/// relative to max(1, max|M|), positivity of diagonal entries relative to
/// max|d| (matching the pivot rule of is_positive_definite), rank by
/// singular values above 1e-9 sigma_max. Throws DimensionMismatch when the
/// order differs.
[[nodiscard]] bool contains(const MatrixClass& C, const Matrix& M, double tol = MatrixClass::kDefaultTol);

/// Draws one member. Diagonal magnitudes are log-uniform on [1e-3, 1e3];
/// SPD members are B^T B + 1e-8 I with Gaussian B; rank-k members are sums
/// of k outer products of vectors with entries uniform on (0.1, 10).
[[nodiscard]] Matrix sample(const MatrixClass& C, Rng& rng);

/// All members of a finite class; VertexDiag in lexicographic sign order
/// (+1 before -1, first index most significant), n <= 20. Throws
/// InfiniteClass for every other kind.
[[nodiscard]] std::vector<Matrix> enumerate(const MatrixClass& C);

/// O, I or E (all ones) for Add, Mul, Hadamard, when it belongs to C.
[[nodiscard]] std::optional<Matrix> identity_element(const MatrixClass& C, OpKind op);

/// Inverse with respect to the operation, if it exists: -G, G^-1, or the
/// entrywise reciprocal.
[[nodiscard]] std::optional<Matrix> op_inverse(OpKind op, const Matrix& G);

struct ProbeOutcome {
    bool holds = true;
    std::vector<Matrix> witness;  ///< offending operands when !holds
};

struct ClosureReport {
    ProbeOutcome closed;
    ProbeOutcome has_inverses;
};

/// Membership of products and inverses is tested with `tol` (exact by
/// default: a relative tolerance would reject products of samples whose
/// entries span twelve orders of magnitude).
[[nodiscard]] ClosureReport closure_probe(const MatrixClass& C, OpKind op, int trials, std::uint64_t seed,
                                          double tol = 0.0);

struct ChainMembership {
    bool pos_alpha_scalar = false;
    bool pos_diag = false;
    bool sym_alpha_diag = false;
    bool spd = false;

    [[nodiscard]] bool monotone() const noexcept {
        return (!pos_alpha_scalar || pos_diag) && (!pos_diag || sym_alpha_diag) && (!sym_alpha_diag || spd);
    }
};

/// Memberships along D+_alpha, D+, H_alpha, H.
[[nodiscard]] ChainMembership chain_memberships(const Matrix& D, const Partition& alpha,
                                                double tol = MatrixClass::kDefaultTol);

struct ThetaRatios {
    double d_min;
    double d_max;
};

/// Min/max of d_theta(i) / d_theta(i+1); (1, 1) for n = 1. Throws
/// NotThetaOrdered unless D is a theta-ordered positive diagonal matrix.
[[nodiscard]] ThetaRatios theta_ratios(const Matrix& D, const Permutation& theta);

/// Conservative inclusion test: true only when every member of `sub` is a
/// member of `super` by construction.
[[nodiscard]] bool is_subclass(const MatrixClass& sub, const MatrixClass& super);

/// Coordinates for local search over diagonal classes (the free diagonal
/// parameters). Empty for non-diagonal classes.
[[nodiscard]] std::vector<double> diagonal_parameters(const MatrixClass& C, const Matrix& G);
[[nodiscard]] Matrix from_diagonal_parameters(const MatrixClass& C, const std::vector<double>& p);

}  // namespace dgstab
