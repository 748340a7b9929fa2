#include "dgstab/decide.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "dgstab/random.hpp"

namespace dgstab {

std::string to_string(Status status) {
    switch (status) {
        case Status::Certified: return "certified";
        case Status::Refuted: return "refuted";
        case Status::Unknown: return "unknown";
    }
    return "?";
}

bool check_region_stability(const Matrix& A, const Region& R) { return spectrum_in_region(R, eigenvalues(A)); }

int default_thread_count() {
    if (const char* env = std::getenv("DGSTAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

struct Exit {
    bool exterior = false;
    Complex lambda;
    double score = 0.0;
};

Exit exit_of(const Region& R, const Spectrum& s, double tol) {
    if (s.empty()) return {};
    const WorstPoint w = worst_point(R, s);
    return {classify_point(R, w.lambda) == PointClass::Exterior && w.score > tol, w.lambda, w.score};
}

Exit exit_of(const Region& R, const Matrix& M, double tol) { return exit_of(R, eigenvalues(M), tol); }

void validate(const Query& q) {
    require_valid(q.A);
    if (q.cls.order() != q.A.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "class order differs from the matrix order");
    }
    if (q.budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");
    if (!(q.tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be non-negative");
}

Verdict refuted(const Matrix& G, const Exit& e, std::int64_t trials, std::vector<std::string> provenance) {
    Verdict v;
    v.status = Status::Refuted;
    v.witness = G;
    v.offending = e.lambda;
    v.margin = e.score;
    v.trials_used = trials;
    v.provenance = std::move(provenance);
    return v;
}

bool nonsingular(const Matrix& A) { return Eigen::FullPivLU<Matrix>(A).isInvertible(); }

constexpr std::uint64_t kPrecheckStream = 0;
constexpr std::uint64_t kFalsifyStream = 1;
constexpr std::uint64_t kCertifyStream = 2;

std::optional<Verdict> unboundedness_precheck(const Query& q, std::vector<std::string>& prov) {
    if (!q.region.is_bounded() || q.cls.is_bounded()) return std::nullopt;
    if (!(q.op.kind == OpKind::Add || (q.op.kind == OpKind::Mul && nonsingular(q.A)))) return std::nullopt;
    prov.emplace_back("precheck: bounded region, unbounded class");
    Rng rng = SeedStream(q.seed).child(kPrecheckStream).engine();
    const Matrix G = sample(q.cls, rng);
    for (int k = 0; k <= 60; ++k) {
        const Matrix Gk = std::ldexp(1.0, k) * G;
        if (!contains(q.cls, Gk)) break;
        const Exit e = exit_of(q.region, apply(q.op, Gk, q.A), q.tol);
        if (e.exterior) {
            prov.emplace_back("precheck: scaled sample exits at 2^" + std::to_string(k));
            return refuted(Gk, e, 1, prov);
        }
    }
    prov.emplace_back("precheck: no exit found");
    return std::nullopt;
}

std::optional<Verdict> identity_check(const Query& q, std::vector<std::string>& prov) {
    const auto L = identity_element(q.cls, q.op.kind);
    if (!L) return std::nullopt;
    const Spectrum s = eigenvalues(apply(q.op, *L, q.A));
    const Exit e = exit_of(q.region, s, q.tol);
    if (e.exterior) {
        prov.emplace_back("identity: exterior eigenvalue");
        return refuted(*L, e, 1, prov);
    }
    prov.emplace_back(spectrum_in_region(q.region, s) ? "identity: passed" : "identity: eigenvalue within tol of boundary");
    return std::nullopt;
}

Verdict exhaustive(const Query& q, std::vector<std::string> prov) {
    const std::vector<Matrix> members = enumerate(q.cls);
    bool boundary = false;
    double closest = std::numeric_limits<double>::infinity();
    std::size_t closest_at = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Spectrum s = eigenvalues(apply(q.op, members[i], q.A));
        const Exit e = exit_of(q.region, s, q.tol);
        if (e.exterior) {
            prov.emplace_back("exhaustive: member " + std::to_string(i) + " of " + std::to_string(members.size()));
            return refuted(members[i], e, static_cast<std::int64_t>(i + 1), prov);
        }
        if (!spectrum_in_region(q.region, s)) boundary = true;
        if (-e.score < closest) {
            closest = -e.score;
            closest_at = i;
        }
    }
    Verdict v;
    v.trials_used = static_cast<std::int64_t>(members.size());
    if (boundary) {
        prov.emplace_back("exhaustive: boundary eigenvalue, no refutation with margin");
        v.provenance = std::move(prov);
        return v;
    }
    Certificate cert;
    cert.kind = CertificateKind::Exhaustive;
    cert.witness = members[closest_at];
    cert.min_eig = closest;
    cert.scope = StabilityTriple{q.region, q.cls, q.op};
    cert.members_checked = members.size();
    prov.emplace_back("exhaustive: " + std::to_string(members.size()) + " members inside");
    v.status = Status::Certified;
    v.certificate = std::move(cert);
    v.provenance = std::move(prov);
    return v;
}

struct Candidate {
    CertificateKind kind;
    std::optional<Partition> alpha;
};

std::vector<Candidate> certificate_candidates(const Query& q) {
    const int n = q.cls.order();
    std::vector<Candidate> out;
    if (q.region.kind() == RegionKind::RightHalfPlane && (q.op.kind == OpKind::Mul || q.op.kind == OpKind::Add)) {
        if (is_subclass(q.cls, MatrixClass::pos_diag(n))) out.push_back({CertificateKind::DiagonalLyapunov, {}});
        if (is_subclass(q.cls, MatrixClass::spd(n))) out.push_back({CertificateKind::IdentityLyapunov, {}});
        if (q.cls.kind() == ClassKind::PosAlphaScalar) out.push_back({CertificateKind::BlockLyapunov, q.cls.partition()});
        if (q.cls.kind() == ClassKind::SymAlphaDiag) {
            out.push_back({CertificateKind::AlphaScalarLyapunov, q.cls.partition()});
        }
    }
    if (q.region.kind() == RegionKind::UnitDisk && q.op.kind == OpKind::Mul) {
        if (is_subclass(q.cls, MatrixClass::box_diag(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0))) ||
            is_subclass(q.cls, MatrixClass::vertex_diag(n))) {
            out.push_back({CertificateKind::SteinDiagonal, {}});
        }
    }
    return out;
}

std::optional<Verdict> certificate_search(const Query& q, std::vector<std::string>& prov) {
    const std::vector<Candidate> candidates = certificate_candidates(q);
    if (candidates.empty()) return std::nullopt;
    SearchOptions options;
    options.seed = SeedStream(q.seed).child(kCertifyStream).key();
    const int n = q.cls.order();
    for (const Candidate& c : candidates) {
        CertReport r;
        switch (c.kind) {
            case CertificateKind::IdentityLyapunov:
                r = find_structured_lyapunov(q.A, MatrixClass::identity(n), options);
                break;
            case CertificateKind::DiagonalLyapunov: r = find_diagonal_lyapunov(q.A, options); break;
            case CertificateKind::BlockLyapunov:
                r = find_structured_lyapunov(q.A, MatrixClass::sym_alpha_diag(*c.alpha), options);
                break;
            case CertificateKind::AlphaScalarLyapunov:
                r = find_structured_lyapunov(q.A, MatrixClass::pos_alpha_scalar(*c.alpha), options);
                break;
            case CertificateKind::SteinDiagonal: r = find_stein_diagonal(q.A, options); break;
            default: continue;
        }
        if (r.found() && verify_certificate(*r.certificate, q.A) &&
            certificate_covers(*r.certificate, q.region, q.cls, q.op)) {
            prov.emplace_back("certificate: " + to_string(c.kind) + " found");
            Verdict v;
            v.status = Status::Certified;
            v.certificate = std::move(r.certificate);
            v.provenance = prov;
            return v;
        }
        prov.emplace_back("certificate: " + to_string(c.kind) + " not found");
    }
    return std::nullopt;
}

struct Hit {
    std::int64_t index;
    Matrix G;
    Exit exit;
};

}  // namespace

Verdict falsify(const Query& q) {
    validate(q);
    const SeedStream stream = SeedStream(q.seed).child(kFalsifyStream);
    const int threads = static_cast<int>(std::min<std::int64_t>(default_thread_count(), q.budget));
    std::atomic<std::int64_t> first{q.budget};
    std::vector<std::optional<Hit>> hits(static_cast<std::size_t>(threads));
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&](int t) {
        try {
            SpectrumWorkspace ws;
            for (std::int64_t i = t; i < q.budget; i += threads) {
                if (i >= first.load(std::memory_order_relaxed)) return;
                Rng rng = stream.child(static_cast<std::uint64_t>(i)).engine();
                Matrix G = sample(q.cls, rng);
                Exit e;
                try {
                    e = exit_of(q.region, ws.compute(apply(q.op, G, q.A)), q.tol);
                } catch (const Error& err) {
                    if (err.code() != ErrorCode::EigenFailure) throw;
                    continue;
                }
                if (e.exterior) {
                    hits[static_cast<std::size_t>(t)] = Hit{i, std::move(G), e};
                    std::int64_t cur = first.load();
                    while (i < cur && !first.compare_exchange_weak(cur, i)) {
                    }
                    return;
                }
            }
        } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    const Hit* best = nullptr;
    for (const auto& h : hits) {
        if (h && (!best || h->index < best->index)) best = &*h;
    }
    if (best) {
        return refuted(best->G, best->exit, best->index + 1,
                       {"falsify: witness at trial " + std::to_string(best->index)});
    }
    Verdict v;
    v.trials_used = q.budget;
    v.provenance.emplace_back("falsify: no witness in " + std::to_string(q.budget) + " trials");
    return v;
}

Verdict decide(const Query& q) {
    validate(q);
    std::vector<std::string> prov;
    if (auto v = unboundedness_precheck(q, prov)) return *v;
    if (auto v = identity_check(q, prov)) return *v;
    if (q.cls.is_finite()) return exhaustive(q, prov);
    if (q.search_certificates) {
        if (auto v = certificate_search(q, prov)) return *v;
    }
    Verdict v = falsify(q);
    prov.insert(prov.end(), v.provenance.begin(), v.provenance.end());
    v.provenance = std::move(prov);
    return v;
}

bool witness_refutes(const Query& q, const Matrix& G) {
    try {
        if (!contains(q.cls, G)) return false;
        return exit_of(q.region, apply(q.op, G, q.A), q.tol).exterior;
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Stabilization

namespace {

double exterior_score(const Region& R, const Spectrum& s) {
    constexpr double kPush = 1e-6;
    double total = 0.0;
    for (const Complex& l : s) total += std::max(0.0, R.signed_distance(l) + kPush);
    return total;
}

}  // namespace

StabilizeResult stabilize(const Matrix& A, const Region& region, const MatrixClass& cls, const BinaryOp& op,
                          std::int64_t budget, std::uint64_t seed) {
    require_valid(A);
    if (cls.order() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "class order differs from A");
    if (budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be at least 1");

    StabilizeResult result;
    result.best_score = std::numeric_limits<double>::infinity();
    SpectrumWorkspace ws;
    Matrix best;

    auto evaluate = [&](const Matrix& G) -> bool {
        ++result.trials;
        const Spectrum& s = ws.compute(apply(op, G, A));
        if (spectrum_in_region(region, s)) {
            result.found = true;
            result.G = G;
            result.best_score = 0.0;
            return true;
        }
        const double score = exterior_score(region, s);
        if (score < result.best_score) {
            result.best_score = score;
            best = G;
        }
        return false;
    };

    const SeedStream stream(seed);
    const bool diagonal = !diagonal_parameters(cls, Matrix::Identity(cls.order(), cls.order())).empty();
    const std::int64_t random_phase = diagonal ? std::max<std::int64_t>(1, budget / 2) : budget;
    for (std::int64_t i = 0; i < random_phase; ++i) {
        Rng rng = stream.child(static_cast<std::uint64_t>(i)).engine();
        if (evaluate(sample(cls, rng))) break;
    }

    if (!result.found && diagonal) {
        std::vector<double> p = diagonal_parameters(cls, best);
        double step = 0.1;
        for (double v : p) step = std::max(step, 0.1 * std::abs(v));
        while (!result.found && result.trials < budget && step > 1e-12) {
            bool improved = false;
            for (std::size_t k = 0; k < p.size() && !result.found && result.trials < budget; ++k) {
                for (double candidate : {p[k] * 2.0, p[k] * 0.5, -p[k], p[k] + step, p[k] - step}) {
                    std::vector<double> trial = p;
                    trial[k] = candidate;
                    const Matrix G = from_diagonal_parameters(cls, trial);
                    if (!contains(cls, G)) continue;
                    const double before = result.best_score;
                    if (evaluate(G)) break;
                    if (result.best_score < before) {
                        p = std::move(trial);
                        improved = true;
                    }
                    if (result.trials >= budget) break;
                }
            }
            if (!improved) step *= 0.5;
        }
    }

    if (result.found && !(contains(cls, *result.G) && check_region_stability(apply(op, *result.G, A), region))) {
        result.found = false;
        result.G.reset();
    }
    if (!result.found) result.G.reset();
    return result;
}

// ---------------------------------------------------------------------------
// Total stability and inertia

TotalReport total_stability(const Query& q) {
    validate(q);
    const int n = static_cast<int>(q.A.rows());
    if (n > 16) throw Error(ErrorCode::OrderTooLarge, "total stability is limited to n <= 16");
    TotalReport report;
    bool all_certified = true;
    bool any_refuted = false;
    const SeedStream stream(q.seed);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) idx.push_back(i);
        }
        Query sub{principal_submatrix(q.A, idx), q.region, q.cls.restrict_to(idx), q.op, q.budget,
                  stream.child(mask).key(), q.tol, q.search_certificates};
        Verdict v = decide(sub);
        all_certified = all_certified && v.status == Status::Certified;
        any_refuted = any_refuted || v.status == Status::Refuted;
        report.subsets.push_back({std::move(idx), std::move(v)});
    }
    report.overall = any_refuted ? Status::Refuted : (all_certified ? Status::Certified : Status::Unknown);
    return report;
}

InertiaReport inertia_preserving(const Matrix& A, const MatrixClass& cls, const BinaryOp& op, const Region& region,
                                 std::int64_t budget, std::uint64_t seed) {
    require_valid(A);
    if (cls.order() != A.rows()) throw Error(ErrorCode::DimensionMismatch, "class order differs from A");
    InertiaReport report;
    const SeedStream stream(seed);
    for (std::int64_t i = 0; i < budget; ++i) {
        Rng rng = stream.child(static_cast<std::uint64_t>(i)).engine();
        const Matrix G = sample(cls, rng);
        const Inertia product = inertia_of(region, eigenvalues(apply(op, G, A)));
        const Inertia own = inertia_of(region, eigenvalues(G));
        report.trials = i + 1;
        if (!(product == own)) {
            report.plausible = false;
            report.witness = G;
            report.of_product = product;
            report.of_g = own;
            return report;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Transfer

namespace {

bool is_permutation_matrix(const Matrix& S) {
    if (S.rows() != S.cols()) return false;
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        int row_ones = 0, col_ones = 0;
        for (Eigen::Index j = 0; j < S.cols(); ++j) {
            if (S(i, j) != 0.0 && S(i, j) != 1.0) return false;
            if (S(j, i) != 0.0 && S(j, i) != 1.0) return false;
            row_ones += S(i, j) == 1.0;
            col_ones += S(j, i) == 1.0;
        }
        if (row_ones != 1 || col_ones != 1) return false;
    }
    return true;
}

bool is_nonsingular_diagonal(const Matrix& S) {
    if (S.rows() != S.cols()) return false;
    if (!S.isDiagonal(0.0)) return false;
    return (S.diagonal().array() != 0.0).all() && is_finite(S);
}

bool members_map_into(const MatrixClass& C, const std::function<Matrix(const Matrix&)>& f) {
    const auto m = C.members();
    return std::all_of(m.begin(), m.end(), [&](const Matrix& G) { return contains(C, f(G)); });
}

bool closed_under_transpose(const MatrixClass& C) {
    switch (C.kind()) {
        case ClassKind::ParametricRankOne: return C.x() == C.y();
        case ClassKind::Explicit: return members_map_into(C, [](const Matrix& G) { return Matrix(G.transpose()); });
        default: return true;
    }
}

bool closed_under_negation(const MatrixClass& C) {
    switch (C.kind()) {
        case ClassKind::Symmetric:
        case ClassKind::Diag:
        case ClassKind::AlphaScalar:
        case ClassKind::VertexDiag: return true;
        case ClassKind::SignDiag:
            return std::all_of(C.signs().begin(), C.signs().end(), [](int s) { return s == 0; });
        case ClassKind::BoxDiag: return C.lo() == -C.hi();
        case ClassKind::ParametricRankOne: return C.tau_lo() == -C.tau_hi();
        case ClassKind::Explicit: return members_map_into(C, [](const Matrix& G) { return Matrix(-G); });
        default: return false;
    }
}

bool closed_under_inverse(const MatrixClass& C) {
    switch (C.kind()) {
        case ClassKind::SPD:
        case ClassKind::SymAlphaDiag:
        case ClassKind::Diag:
        case ClassKind::PosDiag:
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar:
        case ClassKind::VertexDiag:
        case ClassKind::Identity: return true;
        case ClassKind::SignDiag:
            return std::none_of(C.signs().begin(), C.signs().end(), [](int s) { return s == 0; });
        case ClassKind::Explicit:
            return members_map_into(C, [](const Matrix& G) {
                const auto inv = op_inverse(OpKind::Mul, G);
                return inv ? *inv : Matrix(Matrix::Constant(G.rows(), G.cols(), NAN));
            });
        default: return false;
    }
}

/// Member whose image under a permutation similarity stays in the class
/// exactly when the class structure is permutation invariant.
std::optional<Matrix> structure_probe(const MatrixClass& C) {
    const int n = C.order();
    switch (C.kind()) {
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = 1.0 + C.partition()->block_of(i);
            return Matrix(d.asDiagonal());
        }
        case ClassKind::SymAlphaDiag: {
            Matrix H = Matrix::Identity(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (C.partition()->block_of(i) == C.partition()->block_of(j)) H(i, j) += 1.0;
                }
            }
            return H;
        }
        case ClassKind::ThetaOrdered: {
            Vector d(n);
            for (int k = 0; k < n; ++k) d((*C.permutation())[static_cast<std::size_t>(k)]) = n - k;
            return Matrix(d.asDiagonal());
        }
        case ClassKind::SignDiag: {
            Vector d(n);
            for (int i = 0; i < n; ++i) d(i) = C.signs()[static_cast<std::size_t>(i)];
            return Matrix(d.asDiagonal());
        }
        default: return std::nullopt;
    }
}

bool closed_under_permutation(const MatrixClass& C, const Matrix& P) {
    auto conj = [&](const Matrix& G) { return Matrix(P * G * P.transpose()); };
    switch (C.kind()) {
        case ClassKind::BoxDiag: return P * C.lo() == C.lo() && P * C.hi() == C.hi();
        case ClassKind::ParametricRankOne: return P * C.x() == C.x() && P * C.y() == C.y();
        case ClassKind::Explicit: return members_map_into(C, conj);
        default: break;
    }
    if (const auto probe = structure_probe(C)) return contains(C, conj(*probe));
    return true;
}

bool closed_under_similarity(const MatrixClass& C, const Matrix& S, OpKind op) {
    if (is_permutation_matrix(S)) return closed_under_permutation(C, S);
    // Diagonal S: Hadamard needs nothing, diagonal classes commute with S.
    return op == OpKind::Hadamard || C.is_diagonal();
}

Verdict inapplicable(std::string why) {
    Verdict v;
    v.provenance = {"theorem inapplicable: " + std::move(why)};
    return v;
}

std::optional<Certificate> transform_certificate(const Certificate& c, const Transform& t, OpKind op) {
    if (c.kind == CertificateKind::HillCertificate || c.kind == CertificateKind::Exhaustive) return std::nullopt;
    Certificate out = c;
    switch (t.kind) {
        case Transform::Kind::Transpose: {
            const auto inv = op_inverse(OpKind::Mul, c.witness);
            if (!inv) return std::nullopt;
            out.witness = 0.5 * (*inv + inv->transpose());
            if (c.kind == CertificateKind::IdentityLyapunov) out.witness = c.witness;
            return out;
        }
        case Transform::Kind::OpInverse:
            if (op != OpKind::Mul || c.kind == CertificateKind::SteinDiagonal) return std::nullopt;
            return out;
        case Transform::Kind::Scalar: return out;
        case Transform::Kind::Similarity: {
            const Matrix Si = t.S.inverse();
            const Matrix P = Si.transpose() * c.witness * Si;
            out.witness = 0.5 * (P + P.transpose());
            if (c.kind == CertificateKind::IdentityLyapunov && out.witness != c.witness) {
                out.kind = CertificateKind::DiagonalLyapunov;
            }
            return out;
        }
    }
    return std::nullopt;
}

std::optional<Matrix> transform_witness(const Matrix& G, const Transform& t, OpKind op) {
    switch (t.kind) {
        case Transform::Kind::Transpose: return Matrix(G.transpose());
        case Transform::Kind::OpInverse: return op_inverse(op, G);
        case Transform::Kind::Scalar: return op == OpKind::Add ? Matrix(t.alpha * G) : G;
        case Transform::Kind::Similarity:
            if (is_permutation_matrix(t.S)) return Matrix(t.S * G * t.S.transpose());
            if (op == OpKind::Hadamard) return G;
            return Matrix(t.S * G * t.S.inverse());
    }
    return std::nullopt;
}

std::optional<std::string> hypotheses_unmet(const Query& q, const Transform& t) {
    const OpKind op = q.op.kind;
    switch (t.kind) {
        case Transform::Kind::Transpose:
            if (!closed_under_transpose(q.cls)) return "class not closed under transpose";
            return std::nullopt;
        case Transform::Kind::OpInverse: {
            if (op == OpKind::Hadamard) return "no spectral mapping for the Hadamard inverse";
            const RegionMap map = op == OpKind::Mul ? RegionMap::Reciprocal : RegionMap::Negate;
            try {
                if (!transform_region(q.region, map).is_invariant) return "region not invariant";
            } catch (const Error&) {
                return "region image unrepresentable";
            }
            if (op == OpKind::Mul ? !closed_under_inverse(q.cls) : !closed_under_negation(q.cls)) {
                return "class not closed under the operation inverse";
            }
            return std::nullopt;
        }
        case Transform::Kind::Scalar:
            if (!(t.alpha > 0.0) || !std::isfinite(t.alpha)) return "scalar must be positive";
            if (!scales_into_itself(q.region, t.alpha) || !scales_into_itself(q.region, 1.0 / t.alpha)) {
                return "region not scale invariant";
            }
            if (op == OpKind::Add && !q.cls.is_cone()) return "class not a cone";
            return std::nullopt;
        case Transform::Kind::Similarity:
            if (!closed_under_similarity(q.cls, t.S, op)) return "class not closed under the similarity";
            return std::nullopt;
    }
    return "unknown transform";
}

}  // namespace

Query transformed_query(const Query& q, const Transform& t) {
    Query out = q;
    switch (t.kind) {
        case Transform::Kind::Transpose: out.A = q.A.transpose(); break;
        case Transform::Kind::OpInverse:
            if (q.op.kind == OpKind::Add) {
                out.A = -q.A;
            } else if (q.op.kind == OpKind::Mul) {
                const auto inv = op_inverse(OpKind::Mul, q.A);
                if (!inv) throw Error(ErrorCode::SingularMatrix, "A is singular");
                out.A = *inv;
            } else {
                const auto inv = op_inverse(OpKind::Hadamard, q.A);
                if (!inv) throw Error(ErrorCode::SingularMatrix, "A has a zero entry");
                out.A = *inv;
            }
            break;
        case Transform::Kind::Scalar: out.A = t.alpha * q.A; break;
        case Transform::Kind::Similarity:
            if (t.S.rows() != q.A.rows() || !(is_permutation_matrix(t.S) || is_nonsingular_diagonal(t.S))) {
                throw Error(ErrorCode::InvalidArgument, "similarity must be a permutation or nonsingular diagonal");
            }
            out.A = t.S * q.A * t.S.inverse();
            break;
    }
    return out;
}

Verdict transfer_verdict(const Verdict& v, const Query& q, const Transform& t) {
    const Query tq = transformed_query(q, t);
    if (v.status == Status::Unknown) {
        Verdict u;
        u.trials_used = v.trials_used;
        u.provenance = {"transfer: unknown stays unknown"};
        return u;
    }
    if (auto why = hypotheses_unmet(q, t)) return inapplicable(*why);

    if (v.status == Status::Refuted) {
        const auto G = v.witness ? transform_witness(*v.witness, t, q.op.kind) : std::nullopt;
        if (!G || !witness_refutes(tq, *G)) {
            Verdict u;
            u.provenance = {"transfer: transformed witness did not reproduce"};
            return u;
        }
        Verdict out = refuted(*G, exit_of(tq.region, apply(tq.op, *G, tq.A), tq.tol), v.trials_used,
                              {"transfer: witness mapped"});
        return out;
    }

    // Certified
    const Certificate& cert = *v.certificate;
    if (cert.kind == CertificateKind::Exhaustive) {
        Verdict out = exhaustive(tq, {"transfer: exhaustive scope re-checked"});
        if (out.status == Status::Certified) return out;
        Verdict u;
        u.provenance = {"transfer: exhaustive re-check failed"};
        return u;
    }
    const auto moved = transform_certificate(cert, t, q.op.kind);
    if (moved && verify_certificate(*moved, tq.A) && certificate_covers(*moved, tq.region, tq.cls, tq.op)) {
        Verdict out;
        out.status = Status::Certified;
        out.certificate = *moved;
        out.certificate->min_eig = min_eigenvalue_symmetric(certified_form(*moved, tq.A));
        out.provenance = {"transfer: certificate mapped"};
        return out;
    }
    Verdict u;
    u.provenance = {"transfer: transformed certificate failed verification"};
    return u;
}

}  // namespace dgstab
