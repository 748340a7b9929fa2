#pragma once

#include <optional>
#include <string>

#include "dgstab/linalg.hpp"

namespace dgstab {

enum class RegionKind {
    RightHalfPlane,
    LeftHalfPlane,
    UnitDisk,
    RealAxis,
    PositiveRealRay,
    NonzeroRealPart,  ///< C minus the imaginary axis
    PuncturedPlane,   ///< C minus the origin
    Sector,           ///< |arg l| < half_angle
    Hill,             ///< sign condition on f(l) = sum c_ij conj(l)^i l^j
};

enum class HillSense { Positive, NonNegative, Zero };

enum class PointClass { Interior, Boundary, Exterior };

/// A conjugate-symmetric stability region, treated as an open set: points
/// within boundary_tol of the boundary are classified Boundary and do not
/// count as stable.
///
/// Lower-dimensional regions (RealAxis, PositiveRealRay) have no interior in
/// C; for them a point within boundary_tol of the set is Interior and the
/// only Boundary points are those near an excluded endpoint (the origin for
/// the ray). NonzeroRealPart and PuncturedPlane have no Exterior at all:
/// their complement is their boundary.
class Region {
public:
    static constexpr double kDefaultBoundaryTol = 1e-9;

    static Region right_half_plane(double tol = kDefaultBoundaryTol);
    static Region left_half_plane(double tol = kDefaultBoundaryTol);
    static Region unit_disk(double tol = kDefaultBoundaryTol);
    static Region real_axis(double tol = kDefaultBoundaryTol);
    static Region positive_real_ray(double tol = kDefaultBoundaryTol);
    static Region nonzero_real_part(double tol = kDefaultBoundaryTol);
    static Region punctured_plane(double tol = kDefaultBoundaryTol);
    /// half_angle in (0, pi].
    static Region sector(double half_angle, double tol = kDefaultBoundaryTol);
    static Region hill(HillCoefficients c, HillSense sense = HillSense::Positive,
                       double tol = kDefaultBoundaryTol);

    [[nodiscard]] RegionKind kind() const noexcept { return kind_; }
    [[nodiscard]] double boundary_tol() const noexcept { return tol_; }
    [[nodiscard]] double half_angle() const noexcept { return half_angle_; }
    [[nodiscard]] const std::optional<HillCoefficients>& hill_coefficients() const noexcept { return hill_; }
    [[nodiscard]] HillSense sense() const noexcept { return sense_; }

    /// Distance-like score: negative inside, positive outside, with
    /// |score| <= boundary_tol meaning Boundary. For Hill regions the score is
    /// -f(l) rather than a Euclidean distance.
    [[nodiscard]] double signed_distance(Complex lambda) const;

    /// True for regions contained in a disk.
    [[nodiscard]] bool is_bounded() const noexcept { return kind_ == RegionKind::UnitDisk; }

    [[nodiscard]] std::string name() const;

    friend bool operator==(const Region& a, const Region& b);

private:
    Region(RegionKind kind, double tol);

    RegionKind kind_;
    double tol_;
    double half_angle_ = 0.0;
    std::optional<HillCoefficients> hill_;
    HillSense sense_ = HillSense::Positive;
};

struct Inertia {
    int i_plus = 0;
    int i_zero = 0;
    int i_minus = 0;

    friend bool operator==(const Inertia&, const Inertia&) = default;
};

[[nodiscard]] PointClass classify_point(const Region& R, Complex lambda);

/// True iff every eigenvalue is Interior.
[[nodiscard]] bool spectrum_in_region(const Region& R, const Spectrum& s);

[[nodiscard]] Inertia inertia_of(const Region& R, const Spectrum& s);

/// Largest signed distance over the spectrum and the eigenvalue attaining it.
struct WorstPoint {
    Complex lambda;
    double score;
};
[[nodiscard]] WorstPoint worst_point(const Region& R, const Spectrum& s);

enum class RegionMap { Negate, Reciprocal };

struct TransformedRegion {
    Region image;
    bool is_invariant;
};

/// Image of R under l -> -l or l -> 1/l (the origin excluded). Throws
/// Unrepresentable when the image is not one of the supported kinds.
[[nodiscard]] TransformedRegion transform_region(const Region& R, RegionMap map);

/// Whether alpha * R is contained in R for every alpha in (lo, hi). Analytic
/// per kind; Hill regions fall back to sampled_scale_invariance.
[[nodiscard]] bool is_scale_invariant(const Region& R, double lo, double hi);

/// Same question for a single factor alpha.
[[nodiscard]] bool scales_into_itself(const Region& R, double alpha);

/// Randomized self-check: draws `points` interior points and factors from
/// (lo, hi) and reports whether every scaled point stays inside.
[[nodiscard]] bool sampled_scale_invariance(const Region& R, double lo, double hi, int points,
                                            std::uint64_t seed);

}  // namespace dgstab
