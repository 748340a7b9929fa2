#include "dgstab/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dgstab {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number(const Json& j, const char* what) {
    if (!j.is_number()) parse_error(std::string(what) + " must be a number");
    return j.get<double>();
}

Vector vector_from_json(const Json& j, const char* what) {
    if (!j.is_array()) parse_error(std::string(what) + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
    return v;
}

Json vector_to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

std::vector<int> ints_from_json(const Json& j, const char* what) {
    if (!j.is_array()) parse_error(std::string(what) + " must be an array");
    std::vector<int> out;
    for (const Json& e : j) {
        if (!e.is_number_integer()) parse_error(std::string(what) + " must hold integers");
        out.push_back(e.get<int>());
    }
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------

Matrix matrix_from_json(const Json& j) {
    const Json* rows = &j;
    std::optional<int> n;
    if (j.is_object()) {
        if (!j.contains("data")) parse_error("matrix object needs \"data\"");
        rows = &j.at("data");
        if (j.contains("n")) {
            if (!j.at("n").is_number_integer()) parse_error("\"n\" must be an integer");
            n = j.at("n").get<int>();
        }
    }
    if (!rows->is_array() || rows->empty()) parse_error("matrix data must be a non-empty array of rows");
    const auto r = static_cast<Eigen::Index>(rows->size());
    const Json& first = (*rows)[0];
    if (!first.is_array()) parse_error("matrix rows must be arrays");
    const auto c = static_cast<Eigen::Index>(first.size());
    Matrix M(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const Json& row = (*rows)[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) parse_error("ragged matrix rows");
        for (Eigen::Index k = 0; k < c; ++k) M(i, k) = number(row[static_cast<std::size_t>(k)], "matrix entry");
    }
    if (n && (*n != r || *n != c)) parse_error("\"n\" does not match the data shape");
    if (r != c) parse_error("matrix must be square");
    return M;
}

Json matrix_to_json(const Matrix& M) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
        rows.push_back(std::move(row));
    }
    return Json{{"n", M.rows()}, {"data", std::move(rows)}};
}

Matrix parse_matrix_text(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) parse_error("empty matrix input");
    if (t.front() == '{' || t.front() == '[') {
        try {
            return matrix_from_json(Json::parse(t));
        } catch (const Json::exception& e) {
            parse_error(std::string("malformed matrix JSON: ") + e.what());
        }
    }
    std::vector<std::vector<double>> rows;
    std::istringstream in(t);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream cells(line);
        std::vector<double> row;
        std::string cell;
        while (cells >> cell) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                parse_error("bad CSV entry '" + cell + "'");
            }
            if (used != cell.size()) parse_error("bad CSV entry '" + cell + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    Json j = rows;
    return matrix_from_json(j);
}

Matrix load_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) parse_error("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_matrix_text(buf.str());
}

// ---------------------------------------------------------------------------

namespace {

Region region_by_name(const std::string& name, double tol) {
    const std::string s = lower(name);
    if (s == "rhp" || s == "right_half_plane") return Region::right_half_plane(tol);
    if (s == "lhp" || s == "left_half_plane") return Region::left_half_plane(tol);
    if (s == "disk" || s == "unit_disk") return Region::unit_disk(tol);
    if (s == "real" || s == "real_axis") return Region::real_axis(tol);
    if (s == "ray" || s == "positive_ray" || s == "positive_real_ray") return Region::positive_real_ray(tol);
    if (s == "nonzero_real_part") return Region::nonzero_real_part(tol);
    if (s == "punctured_plane") return Region::punctured_plane(tol);
    parse_error("unknown region '" + name + "'");
}

HillSense sense_from_string(const std::string& s) {
    const std::string l = lower(s);
    if (l == "positive") return HillSense::Positive;
    if (l == "nonnegative" || l == "non_negative") return HillSense::NonNegative;
    if (l == "zero") return HillSense::Zero;
    parse_error("unknown hill sense '" + s + "'");
}

std::string sense_name(HillSense s) {
    switch (s) {
        case HillSense::Positive: return "positive";
        case HillSense::NonNegative: return "nonnegative";
        case HillSense::Zero: return "zero";
    }
    return "?";
}

Region region_from_kind(const Json& kind, double tol) {
    if (kind.is_string()) return region_by_name(kind.get<std::string>(), tol);
    if (kind.is_object() && kind.size() == 1) {
        if (kind.contains("sector")) return Region::sector(number(kind.at("sector"), "sector angle"), tol);
        if (kind.contains("hill")) {
            const Json& h = kind.at("hill");
            if (!h.is_object() || !h.contains("c")) parse_error("hill region needs \"c\"");
            const Matrix c = matrix_from_json(h.at("c"));
            const HillSense sense = h.contains("sense") ? sense_from_string(h.at("sense").get<std::string>())
                                                        : HillSense::Positive;
            return Region::hill(HillCoefficients(c), sense, tol);
        }
    }
    parse_error("unrecognized region kind " + kind.dump());
}

}  // namespace

Region region_from_json(const Json& j) {
    try {
        if (j.is_object() && j.contains("kind")) {
            const double tol = j.contains("boundary_tol") ? number(j.at("boundary_tol"), "boundary_tol")
                                                          : Region::kDefaultBoundaryTol;
            return region_from_kind(j.at("kind"), tol);
        }
        return region_from_kind(j, Region::kDefaultBoundaryTol);
    } catch (const Json::exception& e) {
        parse_error(std::string("malformed region: ") + e.what());
    }
}

Json region_to_json(const Region& R) {
    Json kind;
    switch (R.kind()) {
        case RegionKind::RightHalfPlane: kind = "right_half_plane"; break;
        case RegionKind::LeftHalfPlane: kind = "left_half_plane"; break;
        case RegionKind::UnitDisk: kind = "unit_disk"; break;
        case RegionKind::RealAxis: kind = "real_axis"; break;
        case RegionKind::PositiveRealRay: kind = "positive_ray"; break;
        case RegionKind::NonzeroRealPart: kind = "nonzero_real_part"; break;
        case RegionKind::PuncturedPlane: kind = "punctured_plane"; break;
        case RegionKind::Sector: kind = Json{{"sector", R.half_angle()}}; break;
        case RegionKind::Hill:
            kind = Json{{"hill",
                         {{"c", matrix_to_json(R.hill_coefficients()->matrix())["data"]},
                          {"sense", sense_name(R.sense())}}}};
            break;
    }
    return Json{{"kind", kind}, {"boundary_tol", R.boundary_tol()}};
}

// ---------------------------------------------------------------------------

Partition partition_from_json(const Json& j) {
    if (!j.is_array()) parse_error("partition must be an array of blocks");
    std::vector<std::vector<int>> blocks;
    for (const Json& b : j) {
        std::vector<int> block = ints_from_json(b, "partition block");
        for (int& i : block) --i;
        blocks.push_back(std::move(block));
    }
    try {
        return Partition(std::move(blocks));
    } catch (const Error& e) {
        parse_error(e.what());
    }
}

Json partition_to_json(const Partition& p) {
    Json out = Json::array();
    for (const auto& block : p.blocks()) {
        Json b = Json::array();
        for (int i : block) b.push_back(i + 1);
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

void require_order(int n, int got, const std::string& what) {
    if (n > 0 && got != n) {
        parse_error(what + " has order " + std::to_string(got) + ", matrix has " + std::to_string(n));
    }
}

int require_n(int n, const std::string& name) {
    if (n < 1) parse_error("class '" + name + "' needs the matrix order");
    return n;
}

MatrixClass class_by_name(const std::string& raw, int n) {
    const std::string s = lower(raw);
    if (s == "symmetric") return MatrixClass::symmetric(require_n(n, s));
    if (s == "spd") return MatrixClass::spd(require_n(n, s));
    if (s == "diag") return MatrixClass::diag(require_n(n, s));
    if (s == "pos_diag") return MatrixClass::pos_diag(require_n(n, s));
    if (s == "vertex_diag") return MatrixClass::vertex_diag(require_n(n, s));
    if (s == "identity") return MatrixClass::identity(require_n(n, s));
    parse_error("unknown class '" + raw + "' (or it needs parameters)");
}

MatrixClass class_with_args(const std::string& raw, const Json& a, int n) {
    const std::string s = lower(raw);
    MatrixClass c = [&] {
        if (s == "sym_alpha_diag") return MatrixClass::sym_alpha_diag(partition_from_json(a));
        if (s == "alpha_scalar") return MatrixClass::alpha_scalar(partition_from_json(a));
        if (s == "pos_alpha_scalar") return MatrixClass::pos_alpha_scalar(partition_from_json(a));
        if (s == "theta_ordered") {
            std::vector<int> t = ints_from_json(a, "theta");
            for (int& i : t) --i;
            return MatrixClass::theta_ordered(Permutation(std::move(t)));
        }
        if (s == "sign_diag") return MatrixClass::sign_diag(ints_from_json(a, "sign pattern"));
        if (s == "box_diag") {
            if (!a.is_object() || !a.contains("lo") || !a.contains("hi")) parse_error("box_diag needs lo and hi");
            return MatrixClass::box_diag(vector_from_json(a.at("lo"), "lo"), vector_from_json(a.at("hi"), "hi"));
        }
        if (s == "rank_k_positive" || s == "sum_rank_one_positive") {
            if (!a.is_number_integer()) parse_error(s + " needs an integer k");
            const int k = a.get<int>();
            return s == "rank_k_positive" ? MatrixClass::rank_k_positive(require_n(n, s), k)
                                          : MatrixClass::sum_of_rank_one_positive(require_n(n, s), k);
        }
        if (s == "parametric_rank_one") {
            if (!a.is_object() || !a.contains("x") || !a.contains("y") || !a.contains("tau")) {
                parse_error("parametric_rank_one needs x, y and tau");
            }
            const Vector tau = vector_from_json(a.at("tau"), "tau");
            if (tau.size() != 2) parse_error("tau must be [lo, hi]");
            return MatrixClass::parametric_rank_one(vector_from_json(a.at("x"), "x"), vector_from_json(a.at("y"), "y"),
                                                    tau(0), tau(1));
        }
        if (s == "explicit") {
            if (!a.is_array()) parse_error("explicit class needs a list of matrices");
            std::vector<Matrix> members;
            for (const Json& m : a) members.push_back(matrix_from_json(m));
            return MatrixClass::explicit_list(std::move(members));
        }
        if (a.is_null()) return class_by_name(raw, n);
        parse_error("unknown class '" + raw + "'");
    }();
    require_order(n, c.order(), "class " + s);
    return c;
}

MatrixClass class_from_kind(const Json& kind, int n) {
    if (kind.is_string()) return class_by_name(kind.get<std::string>(), n);
    if (kind.is_object() && kind.size() == 1) return class_with_args(kind.begin().key(), kind.begin().value(), n);
    parse_error("unrecognized class " + kind.dump());
}

}  // namespace

MatrixClass class_from_json(const Json& j, int n) {
    try {
        if (j.is_object() && j.contains("kind")) return class_from_kind(j.at("kind"), n);
        return class_from_kind(j, n);
    } catch (const Json::exception& e) {
        parse_error(std::string("malformed class: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError) throw;
        parse_error(e.what());
    }
}

Json class_to_json(const MatrixClass& C) {
    const std::string name = C.name();
    Json arg;
    switch (C.kind()) {
        case ClassKind::SymAlphaDiag:
        case ClassKind::AlphaScalar:
        case ClassKind::PosAlphaScalar: arg = partition_to_json(*C.partition()); break;
        case ClassKind::ThetaOrdered: {
            arg = Json::array();
            for (int t : C.permutation()->theta()) arg.push_back(t + 1);
            break;
        }
        case ClassKind::SignDiag: arg = C.signs(); break;
        case ClassKind::BoxDiag: arg = Json{{"lo", vector_to_json(C.lo())}, {"hi", vector_to_json(C.hi())}}; break;
        case ClassKind::RankKPositive:
        case ClassKind::SumOfRankOnePositive: arg = C.rank_bound(); break;
        case ClassKind::ParametricRankOne:
            arg = Json{{"x", vector_to_json(C.x())}, {"y", vector_to_json(C.y())}, {"tau", {C.tau_lo(), C.tau_hi()}}};
            break;
        case ClassKind::Explicit: {
            arg = Json::array();
            for (const Matrix& M : C.members()) arg.push_back(matrix_to_json(M));
            break;
        }
        default: return Json{{"kind", name}, {"n", C.order()}};
    }
    return Json{{"kind", Json{{name, arg}}}, {"n", C.order()}};
}

// ---------------------------------------------------------------------------

OpKind op_kind_from_string(const std::string& s) {
    const std::string l = lower(s);
    if (l == "add") return OpKind::Add;
    if (l == "mul") return OpKind::Mul;
    if (l == "hadamard") return OpKind::Hadamard;
    parse_error("unknown operation '" + s + "' (add, mul, hadamard)");
}

Side side_from_string(const std::string& s) {
    const std::string l = lower(s);
    if (l == "left") return Side::Left;
    if (l == "right") return Side::Right;
    parse_error("unknown side '" + s + "' (left, right)");
}

Json op_to_json(const BinaryOp& op) {
    return Json{{"kind", to_string(op.kind)}, {"side", op.side == Side::Left ? "left" : "right"}};
}

Json certificate_to_json(const Certificate& c) {
    Json j{{"kind", to_string(c.kind)}, {"witness", matrix_to_json(c.witness)}, {"min_eig", c.min_eig}};
    if (c.partition) j["partition"] = partition_to_json(*c.partition);
    if (c.hill) j["c"] = matrix_to_json(c.hill->matrix())["data"];
    if (c.scope) {
        j["scope"] = Json{{"region", region_to_json(c.scope->region)},
                          {"class", class_to_json(c.scope->cls)},
                          {"op", op_to_json(c.scope->op)}};
        j["members_checked"] = c.members_checked;
    }
    return j;
}

Json verdict_to_json(const Verdict& v) {
    Json j{{"status", to_string(v.status)}, {"trials_used", v.trials_used}, {"provenance", v.provenance}};
    if (v.certificate) j["certificate"] = certificate_to_json(*v.certificate);
    if (v.witness) j["witness"] = matrix_to_json(*v.witness);
    if (v.offending) j["offending_eigenvalue"] = {v.offending->real(), v.offending->imag()};
    if (v.status == Status::Refuted) j["margin"] = v.margin;
    return j;
}

Json parse_spec(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && (t.front() == '{' || t.front() == '[' || t.front() == '"')) {
        try {
            return Json::parse(t);
        } catch (const Json::exception& e) {
            parse_error(std::string("malformed JSON argument: ") + e.what());
        }
    }
    return Json(t);
}

Query query_from_json(const Json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) parse_error("query must be a JSON object");
    for (const char* key : {"matrix", "region", "class"}) {
        if (!j.contains(key)) parse_error(std::string("query needs \"") + key + "\"");
    }
    try {
        const Json& m = j.at("matrix");
        const Matrix A = m.is_string() ? load_matrix_file(base_dir / m.get<std::string>()) : matrix_from_json(m);
        BinaryOp op;
        if (j.contains("op")) {
            const Json& o = j.at("op");
            if (o.is_string()) {
                op.kind = op_kind_from_string(o.get<std::string>());
            } else if (o.is_object()) {
                op.kind = op_kind_from_string(o.at("kind").get<std::string>());
                if (o.contains("side")) op.side = side_from_string(o.at("side").get<std::string>());
            } else {
                parse_error("op must be a string or object");
            }
        }
        if (j.contains("side")) op.side = side_from_string(j.at("side").get<std::string>());
        Query q{A, region_from_json(j.at("region")), class_from_json(j.at("class"), static_cast<int>(A.rows())), op};
        if (j.contains("budget")) q.budget = j.at("budget").get<std::int64_t>();
        if (j.contains("seed")) q.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("tol")) q.tol = number(j.at("tol"), "tol");
        if (j.contains("certificates")) q.search_certificates = j.at("certificates").get<bool>();
        if (q.budget < 1) parse_error("budget must be at least 1");
        return q;
    } catch (const Json::exception& e) {
        parse_error(std::string("malformed query: ") + e.what());
    }
}

}  // namespace dgstab
