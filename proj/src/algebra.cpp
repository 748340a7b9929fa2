#include "dgstab/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "dgstab/random.hpp"

namespace dgstab {

std::string to_string(OpKind kind) {
    switch (kind) {
        case OpKind::Add: return "add";
        case OpKind::Mul: return "mul";
        case OpKind::Hadamard: return "hadamard";
    }
    return "?";
}

std::string to_string(Law law) {
    switch (law) {
        case Law::SpectrumCommutation: return "spectrum_commutation";
        case Law::Transpose: return "transpose";
        case Law::ScalarAssociative: return "scalar_associative";
        case Law::ScalarDistributive: return "scalar_distributive";
        case Law::AddAssociative: return "add_associative";
        case Law::AddDistributive: return "add_distributive";
        case Law::AddOverOp: return "add_over_op";
        case Law::MulAssociative: return "mul_associative";
        case Law::OpOverMul: return "op_over_mul";
        case Law::MulOverOp: return "mul_over_op";
    }
    return "?";
}

const std::vector<Law>& all_laws() {
    static const std::vector<Law> laws = {
        Law::SpectrumCommutation, Law::Transpose,     Law::ScalarAssociative, Law::ScalarDistributive,
        Law::AddAssociative,      Law::AddDistributive, Law::AddOverOp,       Law::MulAssociative,
        Law::OpOverMul,           Law::MulOverOp,
    };
    return laws;
}

bool law_expected(Law law, OpKind op) {
    switch (law) {
        case Law::SpectrumCommutation:
        case Law::Transpose: return true;
        case Law::ScalarAssociative: return op != OpKind::Add;
        case Law::ScalarDistributive: return op == OpKind::Add;
        case Law::AddAssociative: return op == OpKind::Add;
        case Law::AddDistributive: return op != OpKind::Add;
        case Law::AddOverOp: return false;
        case Law::MulAssociative: return op == OpKind::Mul;
        case Law::OpOverMul: return false;
        case Law::MulOverOp: return op == OpKind::Add;
    }
    return false;
}

Matrix combine(OpKind kind, const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "operands differ in shape");
    }
    switch (kind) {
        case OpKind::Add: return X + Y;
        case OpKind::Mul: return X * Y;
        case OpKind::Hadamard: return X.cwiseProduct(Y);
    }
    return X;
}

Matrix apply(const BinaryOp& op, const Matrix& G, const Matrix& A) {
    return op.side == Side::Left ? combine(op.kind, G, A) : combine(op.kind, A, G);
}

namespace {

double relative_gap(const Matrix& L, const Matrix& R) {
    const double scale = std::max({1.0, L.norm(), R.norm()});
    return (L - R).norm() / scale;
}

Matrix rank_deficient(Rng& rng, Eigen::Index n) {
    return gaussian_matrix(rng, n, n - 1) * gaussian_matrix(rng, n - 1, n);
}

struct Trial {
    double deviation;
    LawWitness witness;
};

Trial run_trial(Law law, OpKind op, Rng& rng, Eigen::Index n, bool singular) {
    const auto o = [op](const Matrix& X, const Matrix& Y) { return combine(op, X, Y); };
    Matrix A = gaussian_matrix(rng, n, n);
    Matrix B = singular ? rank_deficient(rng, n) : gaussian_matrix(rng, n, n);
    Matrix C = gaussian_matrix(rng, n, n);
    const double alpha = uniform(rng, -3.0, 3.0);

    double dev = 0.0;
    switch (law) {
        case Law::SpectrumCommutation: {
            const Spectrum ab = eigenvalues(o(A, B));
            const Spectrum ba = eigenvalues(o(B, A));
            double rho = 0.0;
            for (Complex l : ab) rho = std::max(rho, std::abs(l));
            dev = matched_distance(ab, ba) / std::max(1.0, rho);
            return {dev, {{A, B}, 1.0, dev}};
        }
        case Law::Transpose: dev = relative_gap(o(A, B).transpose(), o(B.transpose(), A.transpose())); break;
        case Law::ScalarAssociative: {
            const Matrix lhs = alpha * o(A, B);
            dev = std::max(relative_gap(lhs, o(alpha * A, B)), relative_gap(lhs, o(A, alpha * B)));
            return {dev, {{A, B}, alpha, dev}};
        }
        case Law::ScalarDistributive:
            dev = relative_gap(alpha * o(A, B), o(alpha * A, alpha * B));
            return {dev, {{A, B}, alpha, dev}};
        case Law::AddAssociative: dev = relative_gap(o(A, B) + C, o(A, B + C)); break;
        case Law::AddDistributive: dev = relative_gap(o(A + B, C), o(A, C) + o(B, C)); break;
        case Law::AddOverOp: dev = relative_gap(A + o(B, C), o(A + B, A + C)); break;
        case Law::MulAssociative: dev = relative_gap(o(A, B * C), o(A * B, C)); break;
        case Law::OpOverMul: dev = relative_gap(o(A, B * C), o(A, B) * o(A, C)); break;
        case Law::MulOverOp: dev = relative_gap(A * o(B, C), o(A * B, A * C)); break;
    }
    return {dev, {{A, B, C}, 1.0, dev}};
}

}  // namespace

LawReport check_law(Law law, OpKind op, const LawOptions& options) {
    if (options.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    if (options.n_min < 1 || options.n_max < options.n_min) {
        throw Error(ErrorCode::InvalidArgument, "invalid order range");
    }
    const SeedStream stream = SeedStream(options.seed).child(static_cast<std::uint64_t>(law) * 16 +
                                                             static_cast<std::uint64_t>(op));
    LawReport report{law, op, 0.0, std::nullopt};
    for (int t = 0; t < options.trials; ++t) {
        Rng rng = stream.child(static_cast<std::uint64_t>(t)).engine();
        const auto n = static_cast<Eigen::Index>(
            std::uniform_int_distribution<int>(std::max(options.n_min, options.singular_operands ? 2 : 1),
                                               options.n_max)(rng));
        Trial trial = run_trial(law, op, rng, n, options.singular_operands);
        if (!report.worst || trial.deviation > report.max_deviation) {
            report.max_deviation = trial.deviation;
            report.worst = std::move(trial.witness);
        }
    }
    return report;
}

LawReport check_spectrum_commutation(OpKind op, const LawOptions& options) {
    return check_law(Law::SpectrumCommutation, op, options);
}

LawReport check_transpose_law(OpKind op, const LawOptions& options) { return check_law(Law::Transpose, op, options); }

ScalarLawReport check_scalar_laws(OpKind op, const LawOptions& options) {
    return {check_law(Law::ScalarAssociative, op, options), check_law(Law::ScalarDistributive, op, options)};
}

MulLawReport check_mul_distributivity(OpKind op, const LawOptions& options) {
    return {check_law(Law::MulOverOp, op, options), check_law(Law::MulAssociative, op, options),
            check_law(Law::OpOverMul, op, options)};
}

std::vector<LawReport> law_table(const LawOptions& options) {
    std::vector<LawReport> table;
    for (Law law : all_laws()) {
        for (OpKind op : {OpKind::Add, OpKind::Mul, OpKind::Hadamard}) table.push_back(check_law(law, op, options));
    }
    return table;
}

}  // namespace dgstab
