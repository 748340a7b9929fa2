#include "dgstab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dgstab/random.hpp"

namespace dgstab {

namespace {

void require_tol(double tol) {
    if (!(tol >= 0.0) || !std::isfinite(tol)) {
        throw Error(ErrorCode::InvalidArgument, "boundary_tol must be a finite non-negative number");
    }
}

// Euclidean distance from l to the ray {t e^{i phi}: t >= 0}.
double distance_to_ray(double modulus, double angle_gap) {
    return angle_gap <= std::numbers::pi / 2 ? modulus * std::sin(angle_gap) : modulus;
}

// Membership with zero tolerance; used by the sampling self-check so that
// scaling points toward the boundary does not trip the tolerance band.
bool inside_exact(const Region& R, Complex l) {
    switch (R.kind()) {
        case RegionKind::RealAxis: return l.imag() == 0.0;
        case RegionKind::PositiveRealRay: return l.imag() == 0.0 && l.real() > 0.0;
        case RegionKind::NonzeroRealPart: return l.real() != 0.0;
        case RegionKind::PuncturedPlane: return l != Complex(0.0, 0.0);
        case RegionKind::Hill:
            if (R.sense() == HillSense::Zero) return R.hill_coefficients()->evaluate(l) == 0.0;
            if (R.sense() == HillSense::NonNegative) return R.hill_coefficients()->evaluate(l) >= 0.0;
            return R.hill_coefficients()->evaluate(l) > 0.0;
        default: return R.signed_distance(l) < 0.0;
    }
}

double draw_factor(Rng& rng, double lo, double hi) {
    if (std::isfinite(lo) && std::isfinite(hi)) return uniform(rng, lo, hi);
    if (std::isfinite(lo)) return lo + log_uniform(rng, 1e-6, 1e6);
    if (std::isfinite(hi)) return hi - log_uniform(rng, 1e-6, 1e6);
    return random_sign(rng) * log_uniform(rng, 1e-6, 1e6);
}

}  // namespace

Region::Region(RegionKind kind, double tol) : kind_(kind), tol_(tol) { require_tol(tol); }

Region Region::right_half_plane(double tol) { return Region(RegionKind::RightHalfPlane, tol); }
Region Region::left_half_plane(double tol) { return Region(RegionKind::LeftHalfPlane, tol); }
Region Region::unit_disk(double tol) { return Region(RegionKind::UnitDisk, tol); }
Region Region::real_axis(double tol) { return Region(RegionKind::RealAxis, tol); }
Region Region::positive_real_ray(double tol) { return Region(RegionKind::PositiveRealRay, tol); }
Region Region::nonzero_real_part(double tol) { return Region(RegionKind::NonzeroRealPart, tol); }
Region Region::punctured_plane(double tol) { return Region(RegionKind::PuncturedPlane, tol); }

Region Region::sector(double half_angle, double tol) {
    if (!(half_angle > 0.0 && half_angle <= std::numbers::pi)) {
        throw Error(ErrorCode::InvalidArgument, "sector half-angle must lie in (0, pi]");
    }
    Region r(RegionKind::Sector, tol);
    r.half_angle_ = half_angle;
    return r;
}

Region Region::hill(HillCoefficients c, HillSense sense, double tol) {
    Region r(RegionKind::Hill, tol);
    r.hill_ = std::move(c);
    r.sense_ = sense;
    return r;
}

double Region::signed_distance(Complex l) const {
    switch (kind_) {
        case RegionKind::RightHalfPlane: return -l.real();
        case RegionKind::LeftHalfPlane: return l.real();
        case RegionKind::UnitDisk: return std::abs(l) - 1.0;
        case RegionKind::RealAxis: return std::abs(l.imag());
        case RegionKind::PositiveRealRay: return l.real() > 0.0 ? std::abs(l.imag()) : std::abs(l);
        case RegionKind::NonzeroRealPart: return -std::abs(l.real());
        case RegionKind::PuncturedPlane: return -std::abs(l);
        case RegionKind::Sector: {
            const double phi = std::atan2(std::abs(l.imag()), l.real());
            const double d = distance_to_ray(std::abs(l), std::abs(phi - half_angle_));
            return phi < half_angle_ ? -d : d;
        }
        case RegionKind::Hill: {
            const double f = hill_->evaluate(l);
            return sense_ == HillSense::Zero ? std::abs(f) : -f;
        }
    }
    return 0.0;
}

std::string Region::name() const {
    switch (kind_) {
        case RegionKind::RightHalfPlane: return "right_half_plane";
        case RegionKind::LeftHalfPlane: return "left_half_plane";
        case RegionKind::UnitDisk: return "unit_disk";
        case RegionKind::RealAxis: return "real_axis";
        case RegionKind::PositiveRealRay: return "positive_ray";
        case RegionKind::NonzeroRealPart: return "nonzero_real_part";
        case RegionKind::PuncturedPlane: return "punctured_plane";
        case RegionKind::Sector: {
            std::ostringstream os;
            os << "sector(" << half_angle_ << ")";
            return os.str();
        }
        case RegionKind::Hill: return "hill";
    }
    return "?";
}

bool operator==(const Region& a, const Region& b) {
    return a.kind_ == b.kind_ && a.tol_ == b.tol_ && a.half_angle_ == b.half_angle_ && a.hill_ == b.hill_ &&
           a.sense_ == b.sense_;
}

PointClass classify_point(const Region& R, Complex l) {
    const double tol = R.boundary_tol();
    const double d = R.signed_distance(l);
    switch (R.kind()) {
        case RegionKind::RealAxis: return d <= tol ? PointClass::Interior : PointClass::Exterior;
        case RegionKind::PositiveRealRay:
            if (std::abs(l) <= tol) return PointClass::Boundary;
            return d <= tol ? PointClass::Interior : PointClass::Exterior;
        case RegionKind::NonzeroRealPart:
        case RegionKind::PuncturedPlane: return -d <= tol ? PointClass::Boundary : PointClass::Interior;
        case RegionKind::Hill:
            if (R.sense() == HillSense::Zero) return d <= tol ? PointClass::Interior : PointClass::Exterior;
            break;
        default: break;
    }
    if (std::abs(d) <= tol) return PointClass::Boundary;
    return d < 0.0 ? PointClass::Interior : PointClass::Exterior;
}

bool spectrum_in_region(const Region& R, const Spectrum& s) {
    return std::all_of(s.begin(), s.end(),
                       [&](Complex l) { return classify_point(R, l) == PointClass::Interior; });
}

Inertia inertia_of(const Region& R, const Spectrum& s) {
    Inertia in;
    for (Complex l : s) {
        switch (classify_point(R, l)) {
            case PointClass::Interior: ++in.i_plus; break;
            case PointClass::Boundary: ++in.i_zero; break;
            case PointClass::Exterior: ++in.i_minus; break;
        }
    }
    return in;
}

WorstPoint worst_point(const Region& R, const Spectrum& s) {
    WorstPoint w{Complex(0.0, 0.0), -std::numeric_limits<double>::infinity()};
    for (Complex l : s) {
        const double d = R.signed_distance(l);
        if (d > w.score) w = {l, d};
    }
    return w;
}

// ---------------------------------------------------------------------------

TransformedRegion transform_region(const Region& R, RegionMap map) {
    const double tol = R.boundary_tol();
    auto same = [&] { return TransformedRegion{R, true}; };
    auto unrepresentable = [&](const char* why) -> TransformedRegion {
        throw Error(ErrorCode::Unrepresentable, R.name() + ": " + why);
    };

    if (map == RegionMap::Negate) {
        switch (R.kind()) {
            case RegionKind::RightHalfPlane: return {Region::left_half_plane(tol), false};
            case RegionKind::LeftHalfPlane: return {Region::right_half_plane(tol), false};
            case RegionKind::UnitDisk:
            case RegionKind::RealAxis:
            case RegionKind::NonzeroRealPart:
            case RegionKind::PuncturedPlane: return same();
            case RegionKind::PositiveRealRay: return unrepresentable("image is the negative real ray");
            case RegionKind::Sector:
                if (R.half_angle() == std::numbers::pi / 2) return {Region::left_half_plane(tol), false};
                return unrepresentable("image is a sector around the negative axis");
            case RegionKind::Hill: {
                // f(-l): c_ij picks up (-1)^(i+j).
                Matrix c = R.hill_coefficients()->matrix();
                for (Eigen::Index i = 0; i < c.rows(); ++i) {
                    for (Eigen::Index j = 0; j < c.cols(); ++j) {
                        if ((i + j) % 2 == 1) c(i, j) = -c(i, j);
                    }
                }
                Region image = Region::hill(HillCoefficients(c), R.sense(), tol);
                const bool invariant = image == R;
                return {std::move(image), invariant};
            }
        }
    } else {
        switch (R.kind()) {
            case RegionKind::RightHalfPlane:
            case RegionKind::LeftHalfPlane:
            case RegionKind::RealAxis:
            case RegionKind::PositiveRealRay:
            case RegionKind::NonzeroRealPart:
            case RegionKind::PuncturedPlane:
            case RegionKind::Sector: return same();
            case RegionKind::UnitDisk: return unrepresentable("image is the exterior of the unit disk");
            case RegionKind::Hill: {
                // |l|^(2(m-1)) f(1/l) reverses both coefficient indices.
                const Matrix& c = R.hill_coefficients()->matrix();
                const Eigen::Index m = c.rows();
                Matrix r(m, m);
                for (Eigen::Index i = 0; i < m; ++i) {
                    for (Eigen::Index j = 0; j < m; ++j) r(i, j) = c(m - 1 - i, m - 1 - j);
                }
                Region image = Region::hill(HillCoefficients(r), R.sense(), tol);
                const bool invariant = image == R;
                return {std::move(image), invariant};
            }
        }
    }
    return same();
}

bool is_scale_invariant(const Region& R, double lo, double hi) {
    if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "scale interval requires lo < hi");
    switch (R.kind()) {
        case RegionKind::RightHalfPlane:
        case RegionKind::LeftHalfPlane:
        case RegionKind::PositiveRealRay:
        case RegionKind::Sector: return lo >= 0.0;
        case RegionKind::UnitDisk: return lo >= -1.0 && hi <= 1.0;
        case RegionKind::RealAxis: return true;
        case RegionKind::NonzeroRealPart:
        case RegionKind::PuncturedPlane: return lo >= 0.0 || hi <= 0.0;
        case RegionKind::Hill: return sampled_scale_invariance(R, lo, hi, 1000, 0x5ca1e);
    }
    return false;
}

bool scales_into_itself(const Region& R, double alpha) {
    switch (R.kind()) {
        case RegionKind::RightHalfPlane:
        case RegionKind::LeftHalfPlane:
        case RegionKind::PositiveRealRay:
        case RegionKind::Sector: return alpha > 0.0;
        case RegionKind::UnitDisk: return std::abs(alpha) <= 1.0;
        case RegionKind::RealAxis: return true;
        case RegionKind::NonzeroRealPart:
        case RegionKind::PuncturedPlane: return alpha != 0.0;
        case RegionKind::Hill: {
            Rng rng = SeedStream(0x5ca1e).engine();
            int checked = 0;
            for (int attempt = 0; attempt < 100000 && checked < 1000; ++attempt) {
                const Complex l = std::polar(log_uniform(rng, 1e-3, 1e3), uniform(rng, 0.0, std::numbers::pi));
                if (!inside_exact(R, l)) continue;
                ++checked;
                if (!inside_exact(R, alpha * l)) return false;
            }
            return true;
        }
    }
    return false;
}

bool sampled_scale_invariance(const Region& R, double lo, double hi, int points, std::uint64_t seed) {
    Rng rng = SeedStream(seed).engine();
    int checked = 0;
    for (int attempt = 0; attempt < 100 * points && checked < points; ++attempt) {
        const double radius = log_uniform(rng, 1e-3, 1e3);
        const Complex l = (attempt % 2 == 0) ? Complex(random_sign(rng) * radius, 0.0)
                                             : std::polar(radius, uniform(rng, 0.0, std::numbers::pi));
        if (!inside_exact(R, l)) continue;
        ++checked;
        const double alpha = draw_factor(rng, lo, hi);
        if (!inside_exact(R, alpha * l)) return false;
    }
    return true;
}

}  // namespace dgstab
