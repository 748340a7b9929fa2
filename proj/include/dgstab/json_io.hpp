#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dgstab/algebra.hpp"
#include "dgstab/certify.hpp"
#include "dgstab/classes.hpp"
#include "dgstab/decide.hpp"
#include "dgstab/linalg.hpp"
#include "dgstab/regions.hpp"

namespace dgstab {

using Json = nlohmann::json;

/// {"n": int, "data": [[...], ...]} or a bare array of rows.
[[nodiscard]] Matrix matrix_from_json(const Json& j);
[[nodiscard]] Json matrix_to_json(const Matrix& M);

/// JSON matrix text, or CSV with one row per line.
[[nodiscard]] Matrix parse_matrix_text(const std::string& text);
[[nodiscard]] Matrix load_matrix_file(const std::filesystem::path& path);

/// Accepts a bare name ("rhp", "unit_disk", ...), a {"sector": angle} or
/// {"hill": {...}} object, or {"kind": <either>, "boundary_tol": x}.
[[nodiscard]] Region region_from_json(const Json& j);
[[nodiscard]] Json region_to_json(const Region& R);

/// Same shapes as regions; partitions, permutations and index lists are
/// 1-based. `n` supplies the order for classes that do not carry it.
[[nodiscard]] MatrixClass class_from_json(const Json& j, int n);
[[nodiscard]] Json class_to_json(const MatrixClass& C);

[[nodiscard]] OpKind op_kind_from_string(const std::string& s);
[[nodiscard]] Side side_from_string(const std::string& s);
[[nodiscard]] Json op_to_json(const BinaryOp& op);

[[nodiscard]] Json partition_to_json(const Partition& p);
[[nodiscard]] Partition partition_from_json(const Json& j);

[[nodiscard]] Json certificate_to_json(const Certificate& c);
[[nodiscard]] Json verdict_to_json(const Verdict& v);

/// A query file: "matrix" is inline or a path relative to `base_dir`;
/// budget 10^4, seed 42 and tol 1e-7 apply when absent.
[[nodiscard]] Query query_from_json(const Json& j, const std::filesystem::path& base_dir = {});

/// Parses text that is either JSON or a bare word (treated as a string).
[[nodiscard]] Json parse_spec(const std::string& text);

}  // namespace dgstab
