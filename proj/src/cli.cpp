#include "dgstab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dgstab/json_io.hpp"
#include "dgstab/plot.hpp"

namespace dgstab {

namespace {

namespace fs = std::filesystem;

struct QueryArgs {
    std::string matrix;
    std::string query;
    std::string region = "rhp";
    std::string cls = "pos_diag";
    std::string op = "mul";
    std::string side = "left";
    std::int64_t budget = 10000;
    std::uint64_t seed = 42;
    double tol = 1e-7;
    bool no_certificates = false;
};

void add_query_options(CLI::App* sub, QueryArgs& a, bool with_query_file = true) {
    sub->add_option("--matrix", a.matrix, "matrix file (JSON {n, data} or CSV) or inline JSON");
    if (with_query_file) sub->add_option("--query", a.query, "query JSON file");
    sub->add_option("--region", a.region, "region name or JSON")->capture_default_str();
    sub->add_option("--class", a.cls, "class name or JSON")->capture_default_str();
    sub->add_option("--op", a.op, "add, mul or hadamard")->capture_default_str();
    sub->add_option("--side", a.side, "left or right")->capture_default_str();
    sub->add_option("--budget", a.budget, "trial budget")->capture_default_str();
    sub->add_option("--seed", a.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", a.tol, "minimal exterior margin")->capture_default_str();
}

Matrix read_matrix(const std::string& spec) {
    if (spec.empty()) throw Error(ErrorCode::ParseError, "--matrix is required");
    std::error_code ec;
    if (fs::exists(spec, ec)) return load_matrix_file(spec);
    const auto first = spec.find_first_not_of(" \t");
    if (first != std::string::npos && (spec[first] == '[' || spec[first] == '{')) return parse_matrix_text(spec);
    throw Error(ErrorCode::ParseError, "cannot read matrix '" + spec + "'");
}

Query build_query(const QueryArgs& a) {
    if (!a.query.empty()) {
        std::ifstream in(a.query);
        if (!in) throw Error(ErrorCode::ParseError, "cannot read " + a.query);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::exception& e) {
            throw Error(ErrorCode::ParseError, std::string("malformed query file: ") + e.what());
        }
        return query_from_json(j, fs::path(a.query).parent_path());
    }
    const Matrix A = read_matrix(a.matrix);
    require_valid(A);
    Query q{A, region_from_json(parse_spec(a.region)), class_from_json(parse_spec(a.cls), static_cast<int>(A.rows())),
            BinaryOp{op_kind_from_string(a.op), side_from_string(a.side)}};
    if (a.budget < 1) throw Error(ErrorCode::ParseError, "--budget must be at least 1");
    q.budget = a.budget;
    q.seed = a.seed;
    q.tol = a.tol;
    q.search_certificates = !a.no_certificates;
    return q;
}

int exit_for(Status s) {
    switch (s) {
        case Status::Certified: return kExitCertified;
        case Status::Refuted: return kExitRefuted;
        case Status::Unknown: return kExitUnknown;
    }
    return kExitInternal;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

bool is_usage_error(ErrorCode c) {
    switch (c) {
        case ErrorCode::ParseError:
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidMatrix:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonSymmetric:
        case ErrorCode::IndexOutOfRange:
        case ErrorCode::InfiniteClass:
        case ErrorCode::UnsupportedClass:
        case ErrorCode::OrderTooLarge:
        case ErrorCode::SingularMatrix: return true;
        default: return false;
    }
}

Json inertia_json(const Inertia& in) {
    return Json{{"i_plus", in.i_plus}, {"i_zero", in.i_zero}, {"i_minus", in.i_minus}};
}

Json indices_json(const std::vector<int>& idx) {
    Json out = Json::array();
    for (int i : idx) out.push_back(i + 1);
    return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized matrix stability: decide, certify and refute"};
    app.name("dgstab");
    app.require_subcommand(1);

    QueryArgs qa;
    auto* check = app.add_subcommand("check", "decide a stability query");
    add_query_options(check, qa);
    check->add_flag("--no-certificates", qa.no_certificates, "skip certificate search");

    auto* falsify_cmd = app.add_subcommand("falsify", "randomized counterexample search only");
    add_query_options(falsify_cmd, qa);

    auto* stabilize_cmd = app.add_subcommand("stabilize", "search for G0 with sigma(G0 o A) inside the region");
    add_query_options(stabilize_cmd, qa);

    auto* total_cmd = app.add_subcommand("total", "decide every principal submatrix");
    add_query_options(total_cmd, qa);
    total_cmd->add_flag("--no-certificates", qa.no_certificates, "skip certificate search");

    auto* plot_cmd = app.add_subcommand("plot", "SVG eigenvalue cloud of G o A");
    add_query_options(plot_cmd, qa);
    std::string out_path;
    int samples = 200;
    plot_cmd->add_option("--out", out_path, "SVG output path")->required();
    plot_cmd->add_option("--samples", samples, "number of class samples")->capture_default_str();

    std::string cert_kind = "diagonal";
    std::string cert_partition;
    std::string cert_matrix;
    int cert_budget = 5000;
    std::uint64_t cert_seed = 42;
    auto* certify_cmd = app.add_subcommand("certify", "search for a Lyapunov-type certificate");
    certify_cmd->add_option("--matrix", cert_matrix, "matrix file or inline JSON")->required();
    certify_cmd->add_option("--kind", cert_kind, "diagonal, stein, identity, alpha_scalar, block")
        ->check(CLI::IsMember({"diagonal", "stein", "identity", "alpha_scalar", "block"}))
        ->capture_default_str();
    certify_cmd->add_option("--partition", cert_partition, "1-based partition JSON, e.g. [[1,2],[3]]");
    certify_cmd->add_option("--budget", cert_budget, "ascent iterations")->capture_default_str();
    certify_cmd->add_option("--seed", cert_seed, "random seed")->capture_default_str();

    std::string inertia_matrix;
    std::string inertia_region = "rhp";
    std::string inertia_class;
    std::string inertia_op = "mul";
    std::int64_t inertia_budget = 1000;
    std::uint64_t inertia_seed = 42;
    auto* inertia_cmd = app.add_subcommand("inertia", "inertia of A, or sampled inertia preservation over a class");
    inertia_cmd->add_option("--matrix", inertia_matrix, "matrix file or inline JSON")->required();
    inertia_cmd->add_option("--region", inertia_region, "region name or JSON")->capture_default_str();
    inertia_cmd->add_option("--class", inertia_class, "class to test inertia preservation over");
    inertia_cmd->add_option("--op", inertia_op, "add, mul or hadamard")->capture_default_str();
    inertia_cmd->add_option("--budget", inertia_budget, "trials")->capture_default_str();
    inertia_cmd->add_option("--seed", inertia_seed, "random seed")->capture_default_str();

    LawOptions law_options;
    auto* laws_cmd = app.add_subcommand("laws", "randomized operation law table");
    laws_cmd->add_option("--trials", law_options.trials, "trials per cell")->capture_default_str();
    laws_cmd->add_option("--n-min", law_options.n_min, "smallest order")->capture_default_str();
    laws_cmd->add_option("--n-max", law_options.n_max, "largest order")->capture_default_str();
    laws_cmd->add_option("--seed", law_options.seed, "random seed")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (check->parsed()) {
            const Verdict v = decide(build_query(qa));
            emit(out, verdict_to_json(v));
            return exit_for(v.status);
        }
        if (falsify_cmd->parsed()) {
            const Verdict v = falsify(build_query(qa));
            emit(out, verdict_to_json(v));
            return exit_for(v.status);
        }
        if (stabilize_cmd->parsed()) {
            const Query q = build_query(qa);
            const StabilizeResult r = stabilize(q.A, q.region, q.cls, q.op, q.budget, q.seed);
            Json j{{"found", r.found}, {"best_score", r.best_score}, {"trials", r.trials}};
            if (r.G) j["G"] = matrix_to_json(*r.G);
            emit(out, j);
            return r.found ? kExitCertified : kExitUnknown;
        }
        if (total_cmd->parsed()) {
            const TotalReport r = total_stability(build_query(qa));
            Json subsets = Json::array();
            for (const SubsetVerdict& s : r.subsets) {
                subsets.push_back(Json{{"indices", indices_json(s.indices)}, {"verdict", verdict_to_json(s.verdict)}});
            }
            emit(out, Json{{"overall", to_string(r.overall)}, {"subsets", std::move(subsets)}});
            return exit_for(r.overall);
        }
        if (plot_cmd->parsed()) {
            if (samples < 0) throw Error(ErrorCode::ParseError, "--samples must be non-negative");
            const Query q = build_query(qa);
            const std::vector<Complex> pts = eigen_cloud(q, samples);
            std::ofstream file(out_path);
            if (!file) {
                err << "cannot write " << out_path << "\n";
                return kExitInternal;
            }
            file << render_svg(pts, q.region);
            emit(out, Json{{"out", out_path}, {"points", pts.size()}});
            return kExitCertified;
        }
        if (certify_cmd->parsed()) {
            const Matrix A = read_matrix(cert_matrix);
            require_valid(A);
            const int n = static_cast<int>(A.rows());
            SearchOptions options;
            options.budget = cert_budget;
            options.seed = cert_seed;
            auto partition = [&] {
                if (cert_partition.empty()) throw Error(ErrorCode::ParseError, "--partition is required for this kind");
                Partition p = partition_from_json(parse_spec(cert_partition));
                if (p.order() != n) throw Error(ErrorCode::ParseError, "partition order differs from the matrix");
                return p;
            };
            CertReport r;
            if (cert_kind == "diagonal") {
                r = find_diagonal_lyapunov(A, options);
            } else if (cert_kind == "stein") {
                r = find_stein_diagonal(A, options);
            } else if (cert_kind == "identity") {
                r = find_structured_lyapunov(A, MatrixClass::identity(n), options);
            } else if (cert_kind == "alpha_scalar") {
                r = find_structured_lyapunov(A, MatrixClass::pos_alpha_scalar(partition()), options);
            } else {
                r = find_structured_lyapunov(A, MatrixClass::sym_alpha_diag(partition()), options);
            }
            Json j{{"found", r.found()}, {"best_min_eig", r.best_min_eig}, {"iterations", r.iterations}};
            if (r.certificate) j["certificate"] = certificate_to_json(*r.certificate);
            emit(out, j);
            return r.found() ? kExitCertified : kExitUnknown;
        }
        if (inertia_cmd->parsed()) {
            const Matrix A = read_matrix(inertia_matrix);
            require_valid(A);
            const Region R = region_from_json(parse_spec(inertia_region));
            if (inertia_class.empty()) {
                emit(out, inertia_json(inertia_of(R, eigenvalues(A))));
                return kExitCertified;
            }
            const MatrixClass C = class_from_json(parse_spec(inertia_class), static_cast<int>(A.rows()));
            const InertiaReport r =
                inertia_preserving(A, C, BinaryOp{op_kind_from_string(inertia_op)}, R, inertia_budget, inertia_seed);
            Json j{{"plausible", r.plausible}, {"trials", r.trials}};
            if (r.witness) {
                j["witness"] = matrix_to_json(*r.witness);
                j["inertia_product"] = inertia_json(r.of_product);
                j["inertia_g"] = inertia_json(r.of_g);
            }
            emit(out, j);
            return r.plausible ? kExitCertified : kExitRefuted;
        }
        if (laws_cmd->parsed()) {
            Json rows = Json::array();
            for (const LawReport& r : law_table(law_options)) {
                Json row{{"law", to_string(r.law)},
                         {"op", to_string(r.op)},
                         {"expected", law_expected(r.law, r.op) ? "holds" : "fails"},
                         {"max_deviation", r.max_deviation}};
                if (!law_expected(r.law, r.op) && r.worst) {
                    Json ops = Json::array();
                    for (const Matrix& M : r.worst->operands) ops.push_back(matrix_to_json(M));
                    row["witness"] = Json{{"operands", std::move(ops)}, {"alpha", r.worst->alpha}};
                }
                rows.push_back(std::move(row));
            }
            emit(out, rows);
            return kExitCertified;
        }
    } catch (const Error& e) {
        err << "dgstab: " << e.what() << "\n";
        return is_usage_error(e.code()) ? kExitUsage : kExitInternal;
    } catch (const std::exception& e) {
        err << "dgstab: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace dgstab
