#pragma once

#include <string>
#include <vector>

#include "dgstab/decide.hpp"

namespace dgstab {

/// Eigenvalues of G o A for `samples` class members drawn from the query's
/// seed stream.
[[nodiscard]] std::vector<Complex> eigen_cloud(const Query& q, int samples);

/// Scatter of the points with the region boundary overlaid. Valid (empty
/// plot) for no points.
[[nodiscard]] std::string render_svg(const std::vector<Complex>& points, const Region& region);

}  // namespace dgstab
